#pragma once

#include <map>
#include <string>
#include <vector>

namespace expertrank {

struct ScoredAuthor {
    std::string author;
    double score = 0.0;
};

/// Ordered result list for one query: score descending, author_id ascending
/// on ties, authors unique.
struct RankedList {
    std::string query_id;
    std::vector<ScoredAuthor> entries;

    static RankedList from_scores(std::string query_id,
                                  const std::map<std::string, double>& scores);
};

/// `query_id Q0 author_id rank score tag`, rank starting at 1.
void write_trec_run(const std::string& path, const std::vector<RankedList>& lists,
                    const std::string& tag);

std::map<std::string, RankedList> read_trec_run(const std::string& path);

}  // namespace expertrank
