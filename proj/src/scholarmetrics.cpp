#include "expertrank/scholarmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace expertrank {

std::vector<CitationRecord> author_citation_records(const std::string& author,
                                                    const Corpus& corpus,
                                                    const CitationGraph& graph) {
    std::vector<CitationRecord> records;
    auto it = corpus.author_index().find(author);
    if (it == corpus.author_index().end()) return records;
    records.reserve(it->second.size());
    for (const auto& pub_id : it->second) {
        const Publication* p = corpus.find(pub_id);
        CitationRecord rec;
        rec.pub_id = pub_id;
        rec.year = p->year;
        rec.n_authors = static_cast<int>(p->authors.size());
        auto node = graph.node_index(pub_id);
        if (node >= 0) {
            const auto& citers = graph.in_links(static_cast<std::size_t>(node));
            rec.n_citations = static_cast<int>(citers.size());
            rec.citing_years.reserve(citers.size());
            for (auto c : citers)
                rec.citing_years.push_back(corpus.find(graph.node_id(c))->year);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

int hirsch(std::vector<double> scores) {
    std::sort(scores.begin(), scores.end(), std::greater<>());
    int h = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] >= static_cast<double>(i + 1)) h = static_cast<int>(i + 1);
    return h;
}

int h_index(const std::vector<int>& citation_counts) {
    return hirsch(std::vector<double>(citation_counts.begin(), citation_counts.end()));
}

int g_index(const std::vector<int>& citation_counts) {
    std::vector<int> sorted = citation_counts;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    long long cum = 0;
    int g = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cum += sorted[i];
        const long long k = static_cast<long long>(i + 1);
        if (cum >= k * k) g = static_cast<int>(k);
    }
    return g;
}

double e_index(const std::vector<int>& citation_counts) {
    const int h = h_index(citation_counts);
    if (h == 0) return 0.0;
    std::vector<int> sorted = citation_counts;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    long long core = 0;
    for (int j = 0; j < h; ++j) core += sorted[j];
    return std::sqrt(static_cast<double>(core - static_cast<long long>(h) * h));
}

std::vector<std::string> h_core(std::vector<std::pair<std::string, int>> papers) {
    std::vector<int> counts;
    counts.reserve(papers.size());
    for (const auto& [id, c] : papers) counts.push_back(c);
    const int h = h_index(counts);
    std::sort(papers.begin(), papers.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> core;
    core.reserve(h);
    for (int j = 0; j < h; ++j) core.push_back(papers[j].first);
    return core;
}

double a_index(long long total_citations, int h) {
    if (h == 0) return 0.0;
    return static_cast<double>(total_citations) / (static_cast<double>(h) * h);
}

int h_index_query(const std::string& author, const std::vector<std::string>& matching_pubs,
                  const Corpus& corpus, const CitationGraph& graph) {
    std::vector<int> counts;
    for (const auto& rec : author_citation_records(author, corpus, graph))
        if (std::binary_search(matching_pubs.begin(), matching_pubs.end(), rec.pub_id))
            counts.push_back(rec.n_citations);
    return h_index(counts);
}

int contemporary_h(const std::string& author, const IndexParams& params, const Corpus& corpus,
                   const CitationGraph& graph) {
    std::vector<double> scores;
    for (const auto& rec : author_citation_records(author, corpus, graph)) {
        const double age = params.now_year - rec.year + 1;
        scores.push_back(params.gamma * std::pow(age, -params.delta) * rec.n_citations);
    }
    return hirsch(std::move(scores));
}

int trend_h(const std::string& author, const IndexParams& params, const Corpus& corpus,
            const CitationGraph& graph) {
    std::vector<double> scores;
    for (const auto& rec : author_citation_records(author, corpus, graph)) {
        double s = 0.0;
        for (int cy : rec.citing_years)
            s += std::pow(static_cast<double>(params.now_year - cy + 1), -params.delta);
        scores.push_back(params.gamma * s);
    }
    return hirsch(std::move(scores));
}

double individual_h(const std::string& author, const Corpus& corpus,
                    const CitationGraph& graph) {
    const auto records = author_citation_records(author, corpus, graph);
    std::vector<std::pair<std::string, int>> papers;
    std::map<std::string, int> authors_of;
    papers.reserve(records.size());
    for (const auto& r : records) {
        papers.emplace_back(r.pub_id, r.n_citations);
        authors_of[r.pub_id] = r.n_authors;
    }
    const auto core = h_core(std::move(papers));
    if (core.empty()) return 0.0;
    double author_sum = 0.0;
    for (const auto& id : core) author_sum += authors_of.at(id);
    const double h = static_cast<double>(core.size());
    return h / (author_sum / h);
}

int institution_h(const std::string& institution, const Corpus& corpus,
                  const CitationGraph& graph) {
    std::vector<int> counts;
    for (const auto& p : corpus.publications()) {
        bool member = false;
        for (const auto& [author, inst] : p.institutions) {
            if (inst == institution) {
                member = true;
                break;
            }
        }
        if (!member) continue;
        auto node = graph.node_index(p.id);
        counts.push_back(node >= 0 ? static_cast<int>(graph.in_degree(node)) : 0);
    }
    return h_index(counts);
}

CitationCountFeatures citation_count_features(const std::string& author,
                                              const std::vector<std::string>& matching_pubs,
                                              const Corpus& corpus, const CitationGraph& graph) {
    CitationCountFeatures out;
    auto records = author_citation_records(author, corpus, graph);
    if (records.empty()) return out;

    long long total_all = 0;
    int first_year = records.front().year, last_year = records.front().year;
    long long total_match = 0;
    int max_match = 0;
    std::size_t n_match = 0;
    for (const auto& rec : records) {
        total_all += rec.n_citations;
        first_year = std::min(first_year, rec.year);
        last_year = std::max(last_year, rec.year);
        if (std::binary_search(matching_pubs.begin(), matching_pubs.end(), rec.pub_id)) {
            total_match += rec.n_citations;
            max_match = std::max(max_match, rec.n_citations);
            ++n_match;
        }
    }
    if (n_match > 0) {
        out.total_matching = static_cast<double>(total_match);
        out.avg_matching = static_cast<double>(total_match) / n_match;
        out.max_matching = max_match;
    }
    const int career_years = last_year - first_year + 1;
    out.citations_per_year = static_cast<double>(total_all) / career_years;

    std::set<std::string> collaborators;
    for (const auto& rec : records)
        for (const auto& a : corpus.find(rec.pub_id)->authors)
            if (a != author) collaborators.insert(a);
    out.n_collaborators = static_cast<double>(collaborators.size());
    return out;
}

std::vector<double> pagerank(const CitationGraph& graph, const PageRankParams& params) {
    const std::size_t n = graph.n_nodes();
    if (n == 0) throw std::invalid_argument("pagerank: empty graph");
    const double d = params.damping;
    std::vector<double> rank(n, 1.0 / n), next(n, 0.0);
    for (int iter = 0; iter < params.max_iter; ++iter) {
        double dangling = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (graph.out_degree(j) == 0) dangling += rank[j];
        for (std::size_t a = 0; a < n; ++a) {
            double inflow = 0.0;
            for (auto j : graph.in_links(a)) inflow += rank[j] / graph.out_degree(j);
            next[a] = (1.0 - d) / n + d * (inflow + dangling / n);
        }
        double l1 = 0.0;
        for (std::size_t a = 0; a < n; ++a) l1 += std::abs(next[a] - rank[a]);
        rank.swap(next);
        if (l1 < params.tol) break;
    }
    return rank;
}

PageRankFeatures pagerank_features(const std::string& author,
                                   const std::vector<std::string>& matching_pubs,
                                   const std::vector<double>& scores, const Corpus& corpus,
                                   const CitationGraph& graph) {
    PageRankFeatures out;
    auto it = corpus.author_index().find(author);
    if (it == corpus.author_index().end()) return out;
    std::size_t n_match = 0;
    for (const auto& pub_id : it->second) {
        if (!std::binary_search(matching_pubs.begin(), matching_pubs.end(), pub_id)) continue;
        auto node = graph.node_index(pub_id);
        if (node < 0) continue;
        out.sum += scores[static_cast<std::size_t>(node)];
        ++n_match;
    }
    if (n_match > 0) out.avg = out.sum / n_match;
    return out;
}

}  // namespace expertrank
