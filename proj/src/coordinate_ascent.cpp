#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "expertrank/ltr.hpp"
#include "expertrank/util.hpp"

namespace expertrank {

namespace {

// Fixed 25-point search grid per coordinate: zero plus twelve log-spaced
// magnitudes in both signs.
const std::vector<double>& line_search_grid() {
    static const std::vector<double> grid = [] {
        const double mags[] = {0.001, 0.0025, 0.005, 0.01, 0.025, 0.05,
                               0.1,   0.25,   0.5,   1.0,  2.5,   5.0};
        std::vector<double> g{0.0};
        for (double m : mags) {
            g.push_back(m);
            g.push_back(-m);
        }
        std::sort(g.begin(), g.end());
        return g;
    }();
    return grid;
}

}  // namespace

RankingModel train_coordinate_ascent(const TrainingSet& data, const TrainConfig& cfg,
                                     TrainTrace* trace) {
    if (cfg.ca_restarts < 1) throw std::invalid_argument("coordinate_ascent: restarts >= 1");
    if (cfg.ca_iterations < 1) throw std::invalid_argument("coordinate_ascent: iterations >= 1");
    const auto groups = group_by_query(data);
    if (groups.empty()) throw std::invalid_argument("coordinate_ascent: empty training set");

    const std::size_t n_features = data.feature_names.size();
    const std::size_t n_rows = data.instances.size();

    auto objective = [&](const std::vector<double>& scores) {
        double total = 0.0;
        for (const auto& g : groups) total += group_metric(cfg.metric, data, g, scores);
        return total / groups.size();
    };

    std::vector<double> best_weights;
    double best_objective = -1.0;
    for (int restart = 0; restart < cfg.ca_restarts; ++restart) {
        std::vector<double> w(n_features, 1.0 / n_features);
        if (restart > 0) {
            std::mt19937_64 rng(derive_seed(cfg.seed, "ca-restart", restart));
            double sum = 0.0;
            for (auto& v : w) {
                v = rng_unit(rng);
                sum += v;
            }
            if (sum > 0)
                for (auto& v : w) v /= sum;
        }

        std::vector<double> scores(n_rows, 0.0);
        for (std::size_t r = 0; r < n_rows; ++r)
            for (std::size_t f = 0; f < n_features; ++f)
                scores[r] += w[f] * data.instances[r].features[f];
        double obj = objective(scores);
        std::vector<double> accepted{obj};

        for (int sweep = 0; sweep < cfg.ca_iterations; ++sweep) {
            bool changed = false;
            for (std::size_t f = 0; f < n_features; ++f) {
                const double current = w[f];
                double best_v = current, best_o = obj;
                std::vector<double> trial(n_rows);
                for (double v : line_search_grid()) {
                    if (v == current) continue;
                    for (std::size_t r = 0; r < n_rows; ++r)
                        trial[r] = scores[r] + (v - current) * data.instances[r].features[f];
                    const double o = objective(trial);
                    if (o > best_o + 1e-12) {
                        best_o = o;
                        best_v = v;
                    }
                }
                if (best_v != current) {
                    for (std::size_t r = 0; r < n_rows; ++r)
                        scores[r] += (best_v - current) * data.instances[r].features[f];
                    w[f] = best_v;
                    obj = best_o;
                    accepted.push_back(obj);
                    changed = true;
                }
            }
            // Rescaling by a positive constant keeps every ranking intact, so
            // the objective is unchanged by normalization.
            double l1 = 0.0;
            for (double v : w) l1 += std::abs(v);
            if (l1 > 0.0) {
                for (auto& v : w) v /= l1;
                for (std::size_t r = 0; r < n_rows; ++r) {
                    scores[r] = 0.0;
                    for (std::size_t f = 0; f < n_features; ++f)
                        scores[r] += w[f] * data.instances[r].features[f];
                }
                obj = objective(scores);
            }
            if (!changed) break;
        }

        if (trace) trace->ca_objectives.push_back(accepted);
        if (obj > best_objective) {
            best_objective = obj;
            best_weights = w;
        }
    }

    RankingModel model;
    model.kind = RankingModel::Kind::coordinate_ascent;
    model.fingerprint = data.fingerprint;
    model.feature_names = data.feature_names;
    model.weights = std::move(best_weights);
    return model;
}

}  // namespace expertrank
