#include "expertrank/ranking.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "expertrank/util.hpp"

namespace expertrank {

RankedList RankedList::from_scores(std::string query_id,
                                   const std::map<std::string, double>& scores) {
    RankedList list;
    list.query_id = std::move(query_id);
    list.entries.reserve(scores.size());
    for (const auto& [author, score] : scores) list.entries.push_back({author, score});
    std::stable_sort(list.entries.begin(), list.entries.end(),
                     [](const ScoredAuthor& a, const ScoredAuthor& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.author < b.author;
                     });
    return list;
}

void write_trec_run(const std::string& path, const std::vector<RankedList>& lists,
                    const std::string& tag) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write run file: " + path);
    for (const auto& list : lists) {
        int rank = 1;
        for (const auto& e : list.entries) {
            out << list.query_id << " Q0 " << e.author << ' ' << rank << ' '
                << fmt_double(e.score) << ' ' << tag << '\n';
            ++rank;
        }
    }
}

std::map<std::string, RankedList> read_trec_run(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read run file: " + path);
    std::map<std::string, RankedList> run;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string qid, q0, author, tag;
        int rank;
        double score;
        if (!(ss >> qid >> q0 >> author >> rank >> score >> tag))
            throw std::runtime_error("malformed run line " + std::to_string(line_no) + ": " +
                                     line);
        auto& list = run[qid];
        list.query_id = qid;
        list.entries.push_back({author, score});
    }
    return run;
}

}  // namespace expertrank
