#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "expertrank/ranking.hpp"

namespace expertrank {

/// Binary grades for one query: author -> {0, 1}. Authors absent from the map
/// are non-relevant.
using QueryGrades = std::map<std::string, int>;

double precision_at_k(const RankedList& ranked, const QueryGrades& grades, int k);

/// Mean of P@k over the retrieved relevant positions; 0 when no relevant
/// author is retrieved. Unretrieved relevant authors do not enter the
/// denominator.
double average_precision(const RankedList& ranked, const QueryGrades& grades);

/// DCG_k = sum (2^rel_i - 1) / log2(1 + i), normalized by the ideal ordering
/// of all graded authors. k <= 0 evaluates the full list. 0 when IDCG = 0.
double ndcg(const RankedList& ranked, const QueryGrades& grades, int k = 0);

struct MetricReport {
    std::vector<int> precision_ks;                       // e.g. {5, 10, 15, 20}
    std::vector<std::string> query_ids;                  // ascending
    std::map<std::string, std::vector<double>> p_at_k;   // per query, aligned to precision_ks
    std::map<std::string, double> ap;
    std::map<std::string, double> ndcg_value;
    std::vector<double> mean_p_at_k;
    double mean_ap = 0.0;   // MAP
    double mean_ndcg = 0.0;

    std::string to_tsv() const;
    std::string to_table() const;
};

/// Scores every judged query; queries missing from the run score 0, run
/// queries missing from the judgments are an error.
MetricReport evaluate_run(const std::map<std::string, RankedList>& run,
                          const std::map<std::string, QueryGrades>& judged_queries,
                          const std::vector<int>& ks = {5, 10, 15, 20});

/// Paired two-sided randomization test on per-query metric values. Each
/// permutation swaps each pair with probability 1/2;
/// p = (#{|delta*| >= |delta|} + 1) / (n_perm + 1).
double randomization_test(const std::vector<double>& per_query_a,
                          const std::vector<double>& per_query_b, int n_perm,
                          std::uint64_t seed);

}  // namespace expertrank
