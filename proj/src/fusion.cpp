#include "expertrank/fusion.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "expertrank/util.hpp"

namespace expertrank {

FusionInput FusionInput::from_matrix(const FeatureMatrix& matrix) {
    FusionInput input;
    input.query_id = matrix.query_id;
    input.authors = matrix.authors;
    const std::size_t n_features = matrix.feature_names.size();
    const std::size_t n_authors = matrix.authors.size();
    input.feature_scores.assign(n_features, std::vector<double>(n_authors, 0.0));
    input.support.assign(n_authors, 0);
    for (std::size_t a = 0; a < n_authors; ++a) {
        for (std::size_t f = 0; f < n_features; ++f) {
            const double v = matrix.rows[a][f];
            input.feature_scores[f][a] = v;
            if (v > 0.0) input.support[a] += 1;
        }
    }
    return input;
}

const char* fusion_method_name(FusionMethod m) {
    switch (m) {
        case FusionMethod::combsum: return "combsum";
        case FusionMethod::combmnz: return "combmnz";
        case FusionMethod::combanz: return "combanz";
        case FusionMethod::borda: return "borda";
        case FusionMethod::reciprocal_rank: return "rr";
        case FusionMethod::condorcet: return "condorcet";
    }
    return "combsum";
}

FusionMethod fusion_method_from_name(const std::string& name) {
    if (name == "combsum") return FusionMethod::combsum;
    if (name == "combmnz") return FusionMethod::combmnz;
    if (name == "combanz") return FusionMethod::combanz;
    if (name == "borda") return FusionMethod::borda;
    if (name == "rr" || name == "reciprocal_rank") return FusionMethod::reciprocal_rank;
    if (name == "condorcet") return FusionMethod::condorcet;
    throw std::invalid_argument("unknown fusion method: " + name);
}

std::map<std::string, double> minmax_normalize(const std::map<std::string, double>& scores) {
    if (scores.empty()) throw std::invalid_argument("minmax_normalize: empty score map");
    double lo = scores.begin()->second, hi = scores.begin()->second;
    for (const auto& [author, v] : scores) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::map<std::string, double> out;
    for (const auto& [author, v] : scores)
        out[author] = (hi == lo) ? 0.5 : (v - lo) / (hi - lo);
    return out;
}

namespace {

// Column-wise min-max over the fusion input, keeping author alignment.
std::vector<std::vector<double>> normalized_columns(const FusionInput& input) {
    auto cols = input.feature_scores;
    for (auto& col : cols) {
        if (col.empty()) continue;
        const auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
        const double lo = *lo_it, hi = *hi_it;
        for (double& v : col) v = (hi == lo) ? 0.5 : (v - lo) / (hi - lo);
    }
    return cols;
}

std::vector<double> comb_sum_scores(const FusionInput& input) {
    std::vector<double> sums(input.authors.size(), 0.0);
    for (const auto& col : normalized_columns(input))
        for (std::size_t a = 0; a < col.size(); ++a) sums[a] += col[a];
    return sums;
}

RankedList to_ranked_list(const FusionInput& input, const std::vector<double>& scores) {
    std::map<std::string, double> m;
    for (std::size_t a = 0; a < input.authors.size(); ++a) m[input.authors[a]] = scores[a];
    return RankedList::from_scores(input.query_id, m);
}

// Competition ("1224") positions: tied raw scores share the best position of
// their block. Positions are 1-based.
std::vector<int> feature_positions(const std::vector<double>& col) {
    const std::size_t n = col.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return col[a] > col[b]; });
    std::vector<int> pos(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && col[order[i]] == col[order[i - 1]])
            pos[order[i]] = pos[order[i - 1]];
        else
            pos[order[i]] = static_cast<int>(i + 1);
    }
    return pos;
}

void require_nonempty(const FusionInput& input, const char* who) {
    if (input.feature_scores.empty())
        throw std::invalid_argument(std::string(who) + ": no features");
}

}  // namespace

RankedList comb_sum(const FusionInput& input) {
    require_nonempty(input, "comb_sum");
    return to_ranked_list(input, comb_sum_scores(input));
}

RankedList comb_mnz(const FusionInput& input) {
    require_nonempty(input, "comb_mnz");
    auto scores = comb_sum_scores(input);
    for (std::size_t a = 0; a < scores.size(); ++a) scores[a] *= input.support[a];
    return to_ranked_list(input, scores);
}

RankedList comb_anz(const FusionInput& input) {
    require_nonempty(input, "comb_anz");
    auto scores = comb_sum_scores(input);
    for (std::size_t a = 0; a < scores.size(); ++a)
        scores[a] = input.support[a] > 0 ? scores[a] / input.support[a] : 0.0;
    return to_ranked_list(input, scores);
}

RankedList borda_fuse(const FusionInput& input) {
    require_nonempty(input, "borda_fuse");
    const int n = static_cast<int>(input.authors.size());
    std::vector<double> votes(input.authors.size(), 0.0);
    for (const auto& col : input.feature_scores) {
        const auto pos = feature_positions(col);
        for (std::size_t a = 0; a < pos.size(); ++a) votes[a] += n - pos[a] + 1;
    }
    return to_ranked_list(input, votes);
}

RankedList reciprocal_rank_fuse(const FusionInput& input) {
    require_nonempty(input, "reciprocal_rank_fuse");
    std::vector<double> scores(input.authors.size(), 0.0);
    for (const auto& col : input.feature_scores) {
        const auto pos = feature_positions(col);
        for (std::size_t a = 0; a < pos.size(); ++a) scores[a] += 1.0 / pos[a];
    }
    return to_ranked_list(input, scores);
}

RankedList condorcet_fuse(const FusionInput& input, std::uint64_t seed) {
    require_nonempty(input, "condorcet_fuse");
    const std::size_t n = input.authors.size();
    std::vector<std::vector<int>> positions;
    positions.reserve(input.feature_scores.size());
    for (const auto& col : input.feature_scores) positions.push_back(feature_positions(col));

    std::vector<int> wins(n, 0), losses(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            int x_better = 0, y_better = 0;
            for (const auto& pos : positions) {
                if (pos[x] < pos[y])
                    ++x_better;
                else if (pos[y] < pos[x])
                    ++y_better;
            }
            if (x_better > y_better) {
                ++wins[x];
                ++losses[y];
            } else if (y_better > x_better) {
                ++wins[y];
                ++losses[x];
            }
        }
    }

    // Seeded shuffle first so that exact (wins, losses) ties come out in a
    // reproducible random order under the stable sort.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    rng_shuffle(rng, order);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (wins[a] != wins[b]) return wins[a] > wins[b];
        return losses[a] < losses[b];
    });

    RankedList list;
    list.query_id = input.query_id;
    list.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        list.entries.push_back({input.authors[order[i]], static_cast<double>(n - i)});
    return list;
}

RankedList fuse(FusionMethod method, const FeatureMatrix& matrix, std::uint64_t seed) {
    if (matrix.authors.empty()) {
        RankedList empty;
        empty.query_id = matrix.query_id;
        return empty;
    }
    const auto input = FusionInput::from_matrix(matrix);
    switch (method) {
        case FusionMethod::combsum: return comb_sum(input);
        case FusionMethod::combmnz: return comb_mnz(input);
        case FusionMethod::combanz: return comb_anz(input);
        case FusionMethod::borda: return borda_fuse(input);
        case FusionMethod::reciprocal_rank: return reciprocal_rank_fuse(input);
        case FusionMethod::condorcet: return condorcet_fuse(input, seed);
    }
    throw std::invalid_argument("fuse: unknown method");
}

}  // namespace expertrank
