#pragma once

#include <string>
#include <vector>

#include "expertrank/corpus.hpp"

namespace expertrank {

struct IndexParams {
    double gamma = 4.0;
    double delta = 1.0;
    int now_year = 0;  // required input, never wall clock
};

struct PageRankParams {
    double damping = 0.85;
    double tol = 1e-8;  // L1 change threshold
    int max_iter = 100;
};

/// One publication of an author together with its citation evidence.
struct CitationRecord {
    std::string pub_id;
    int year = 0;
    std::vector<int> citing_years;
    int n_citations = 0;
    int n_authors = 1;
};

std::vector<CitationRecord> author_citation_records(const std::string& author,
                                                    const Corpus& corpus,
                                                    const CitationGraph& graph);

/// Largest h such that at least h of the scores are >= h; 0 for empty input.
int hirsch(std::vector<double> scores);
int h_index(const std::vector<int>& citation_counts);

/// Largest g <= n with the top-g citation counts summing to at least g^2.
int g_index(const std::vector<int>& citation_counts);

/// sqrt(sum of h-core citations - h^2); 0 when h = 0.
double e_index(const std::vector<int>& citation_counts);

/// The h papers realizing the h-index, picked by (citations desc, pub_id asc).
std::vector<std::string> h_core(std::vector<std::pair<std::string, int>> papers);

double a_index(long long total_citations, int h);

int h_index_query(const std::string& author, const std::vector<std::string>& matching_pubs,
                  const Corpus& corpus, const CitationGraph& graph);

int contemporary_h(const std::string& author, const IndexParams& params, const Corpus& corpus,
                   const CitationGraph& graph);

int trend_h(const std::string& author, const IndexParams& params, const Corpus& corpus,
            const CitationGraph& graph);

/// h divided by the mean co-author count of the h-core papers. The core is
/// picked by (citations desc, pub_id asc).
double individual_h(const std::string& author, const Corpus& corpus, const CitationGraph& graph);

int institution_h(const std::string& institution, const Corpus& corpus,
                  const CitationGraph& graph);

struct CitationCountFeatures {
    double total_matching = 0;  // citations of the author's query-matching papers
    double avg_matching = 0;
    double max_matching = 0;
    double citations_per_year = 0;  // all papers, over career years
    double n_collaborators = 0;
};

/// `matching_pubs` must be sorted ascending (as produced by matching_pubs()).
CitationCountFeatures citation_count_features(const std::string& author,
                                              const std::vector<std::string>& matching_pubs,
                                              const Corpus& corpus, const CitationGraph& graph);

/// Power iteration with dangling mass redistributed uniformly each step.
/// Returns scores aligned to graph node indices, summing to 1.
std::vector<double> pagerank(const CitationGraph& graph, const PageRankParams& params = {});

struct PageRankFeatures {
    double sum = 0;
    double avg = 0;
};

PageRankFeatures pagerank_features(const std::string& author,
                                   const std::vector<std::string>& matching_pubs,
                                   const std::vector<double>& scores, const Corpus& corpus,
                                   const CitationGraph& graph);

}  // namespace expertrank
