#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "expertrank/ltr.hpp"

namespace expertrank {

// Boosting over queries: each round picks the single raw feature with the
// best weight-averaged metric, then shifts weight onto the queries the
// combined model still ranks poorly.
RankingModel train_adarank(const TrainingSet& data, const TrainConfig& cfg, TrainTrace* trace) {
    if (cfg.adarank_iterations < 1)
        throw std::invalid_argument("train_adarank: iterations must be >= 1");
    const auto groups = group_by_query(data);
    if (groups.empty()) throw std::invalid_argument("train_adarank: empty training set");
    bool any_positive = false;
    for (const auto& inst : data.instances) any_positive |= inst.grade > 0;
    if (!any_positive) throw std::invalid_argument("train_adarank: no relevant instances");

    const std::size_t n_features = data.feature_names.size();
    const std::size_t n_queries = groups.size();
    const std::size_t n_rows = data.instances.size();

    // Weak rankers are raw features, so their per-query metric is fixed.
    std::vector<std::vector<double>> feature_metric(n_features,
                                                    std::vector<double>(n_queries, 0.0));
    {
        std::vector<double> scores(n_rows, 0.0);
        for (std::size_t f = 0; f < n_features; ++f) {
            for (std::size_t r = 0; r < n_rows; ++r) scores[r] = data.instances[r].features[f];
            for (std::size_t q = 0; q < n_queries; ++q)
                feature_metric[f][q] = group_metric(cfg.metric, data, groups[q], scores);
        }
    }

    RankingModel model;
    model.kind = RankingModel::Kind::adarank;
    model.fingerprint = data.fingerprint;
    model.feature_names = data.feature_names;

    std::vector<double> query_weight(n_queries, 1.0 / n_queries);
    std::vector<double> combined(n_rows, 0.0);
    for (int t = 0; t < cfg.adarank_iterations; ++t) {
        std::size_t best = 0;
        double best_score = -1.0;
        for (std::size_t f = 0; f < n_features; ++f) {
            double s = 0.0;
            for (std::size_t q = 0; q < n_queries; ++q) s += query_weight[q] * feature_metric[f][q];
            if (s > best_score) {
                best_score = s;
                best = f;
            }
        }

        double plus = 0.0, minus = 0.0;
        for (std::size_t q = 0; q < n_queries; ++q) {
            plus += query_weight[q] * (1.0 + feature_metric[best][q]);
            minus += query_weight[q] * (1.0 - feature_metric[best][q]);
        }
        const double alpha = 0.5 * std::log(std::max(plus, 1e-10) / std::max(minus, 1e-10));

        if (trace) trace->adarank_rounds.push_back({static_cast<int>(best), alpha, best_score,
                                                    query_weight});
        model.adarank_rankers.push_back({static_cast<int>(best), alpha});

        for (std::size_t r = 0; r < n_rows; ++r)
            combined[r] += alpha * data.instances[r].features[best];
        double z = 0.0;
        std::vector<double> next(n_queries, 0.0);
        for (std::size_t q = 0; q < n_queries; ++q) {
            const double m = group_metric(cfg.metric, data, groups[q], combined);
            next[q] = std::exp(-m);
            z += next[q];
        }
        for (std::size_t q = 0; q < n_queries; ++q) query_weight[q] = next[q] / z;
    }
    return model;
}

}  // namespace expertrank
