#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "expertrank/featurebank.hpp"
#include "expertrank/ranking.hpp"

namespace expertrank {

/// Column view of a feature matrix: one raw score map per feature plus the
/// per-author support r_e (count of features with raw score > 0).
struct FusionInput {
    std::string query_id;
    std::vector<std::string> authors;                 // ascending
    std::vector<std::vector<double>> feature_scores;  // [feature][author]
    std::vector<int> support;                         // r_e per author, from raw scores

    static FusionInput from_matrix(const FeatureMatrix& matrix);
};

enum class FusionMethod { combsum, combmnz, combanz, borda, reciprocal_rank, condorcet };

const char* fusion_method_name(FusionMethod m);
FusionMethod fusion_method_from_name(const std::string& name);

/// (v - min) / (max - min); all 0.5 when the scores are constant.
/// Throws std::invalid_argument on an empty map.
std::map<std::string, double> minmax_normalize(const std::map<std::string, double>& scores);

RankedList comb_sum(const FusionInput& input);
RankedList comb_mnz(const FusionInput& input);
RankedList comb_anz(const FusionInput& input);
RankedList borda_fuse(const FusionInput& input);
RankedList reciprocal_rank_fuse(const FusionInput& input);

/// Pairwise-majority contest; sorted by wins desc, losses asc, then a
/// seeded-random order for full ties. Emitted scores are positional (n - rank).
RankedList condorcet_fuse(const FusionInput& input, std::uint64_t seed);

RankedList fuse(FusionMethod method, const FeatureMatrix& matrix, std::uint64_t seed);

}  // namespace expertrank
