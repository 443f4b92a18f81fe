#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "expertrank/ltr.hpp"
#include "expertrank/util.hpp"

namespace expertrank {

namespace {

// Greedy least-squares regression tree. A node may split only while it holds
// at least min_split_fraction of the bag's rows.
class TreeBuilder {
public:
    TreeBuilder(const std::vector<const Instance*>& rows, const std::vector<double>& target,
                double alpha)
        : rows_(rows), target_(target), min_rows_(std::max(2.0, alpha * rows.size())) {}

    RegressionTree build() {
        RegressionTree tree;
        std::vector<std::size_t> all(rows_.size());
        std::iota(all.begin(), all.end(), 0);
        grow(tree, all);
        return tree;
    }

private:
    int grow(RegressionTree& tree, const std::vector<std::size_t>& members) {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        double sum = 0.0;
        for (auto m : members) sum += target_[m];
        tree.nodes[id].value = sum / members.size();

        if (static_cast<double>(members.size()) < min_rows_) return id;

        double best_gain = 1e-12;
        int best_feature = -1;
        double best_threshold = 0.0;
        double node_sse = 0.0;
        for (auto m : members) {
            const double d = target_[m] - tree.nodes[id].value;
            node_sse += d * d;
        }
        if (node_sse <= 1e-12) return id;  // pure node

        const std::size_t n_features = rows_.front()->features.size();
        std::vector<std::size_t> order(members);
        for (std::size_t f = 0; f < n_features; ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return rows_[a]->features[f] < rows_[b]->features[f];
            });
            double left_sum = 0.0, left_sq = 0.0;
            double total_sum = 0.0, total_sq = 0.0;
            for (auto m : members) {
                total_sum += target_[m];
                total_sq += target_[m] * target_[m];
            }
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                const double y = target_[order[i]];
                left_sum += y;
                left_sq += y * y;
                const double v = rows_[order[i]]->features[f];
                const double next = rows_[order[i + 1]]->features[f];
                if (v == next) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = static_cast<double>(order.size() - i - 1);
                const double right_sum = total_sum - left_sum;
                const double right_sq = total_sq - left_sq;
                const double sse = (left_sq - left_sum * left_sum / nl) +
                                   (right_sq - right_sum * right_sum / nr);
                const double gain = node_sse - sse;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = v + (next - v) / 2.0;
                }
            }
        }
        if (best_feature < 0) return id;

        std::vector<std::size_t> left, right;
        for (auto m : members)
            (rows_[m]->features[best_feature] <= best_threshold ? left : right).push_back(m);
        if (left.empty() || right.empty()) return id;

        tree.nodes[id].feature = best_feature;
        tree.nodes[id].threshold = best_threshold;
        const int l = grow(tree, left);
        const int r = grow(tree, right);
        tree.nodes[id].left = l;
        tree.nodes[id].right = r;
        return id;
    }

    const std::vector<const Instance*>& rows_;
    const std::vector<double>& target_;
    double min_rows_;
};

double tree_sse(const RegressionTree& tree, const std::vector<const Instance*>& rows,
                const std::vector<double>& target) {
    double sse = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double d = target[i] - tree.predict(rows[i]->features);
        sse += d * d;
    }
    return sse;
}

}  // namespace

// Additive groves: bagged ensembles of a few large trees, each tree repeatedly
// discarded and refit on the residual of the others until the fit settles.
RankingModel train_groves(const TrainingSet& data, const TrainConfig& cfg, TrainTrace* trace) {
    if (cfg.groves_trees < 1) throw std::invalid_argument("train_groves: N must be >= 1");
    if (cfg.groves_bags < 1) throw std::invalid_argument("train_groves: b must be >= 1");
    if (!(cfg.groves_alpha > 0.0 && cfg.groves_alpha <= 1.0))
        throw std::invalid_argument("train_groves: alpha must be in (0, 1]");
    if (data.instances.empty()) throw std::invalid_argument("train_groves: empty training set");

    // coarse-to-fine leaf fractions; trees are enlarged while trees are added
    std::vector<double> alpha_path;
    for (double a = 0.5; a > cfg.groves_alpha; a /= 2.0) alpha_path.push_back(a);
    alpha_path.push_back(cfg.groves_alpha);

    RankingModel model;
    model.kind = RankingModel::Kind::groves;
    model.fingerprint = data.fingerprint;
    model.feature_names = data.feature_names;

    for (int bag = 0; bag < cfg.groves_bags; ++bag) {
        std::mt19937_64 rng(derive_seed(cfg.seed, "groves-bag", bag));
        std::vector<const Instance*> rows;
        rows.reserve(data.instances.size());
        for (std::size_t i = 0; i < data.instances.size(); ++i)
            rows.push_back(&data.instances[rng_below(rng, data.instances.size())]);
        std::vector<double> target(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) target[i] = rows[i]->grade;

        Grove grove;
        std::vector<std::vector<double>> tree_pred;  // per tree, per row
        std::vector<double> rmse_log;

        const std::size_t steps = std::max(alpha_path.size(),
                                           static_cast<std::size_t>(cfg.groves_trees));
        for (std::size_t step = 0; step < steps; ++step) {
            const double alpha = alpha_path[std::min(step, alpha_path.size() - 1)];
            if (grove.trees.size() < static_cast<std::size_t>(cfg.groves_trees)) {
                grove.trees.push_back(RegressionTree{{RegressionTreeNode{}}});
                tree_pred.emplace_back(rows.size(), 0.0);
            }

            // retrain cycle: refit each tree on the residual of the others,
            // keeping the old tree when the refit does not improve the fit
            double prev_rmse = -1.0;
            for (int cycle = 0; cycle < 10; ++cycle) {
                for (std::size_t t = 0; t < grove.trees.size(); ++t) {
                    std::vector<double> residual(rows.size());
                    for (std::size_t i = 0; i < rows.size(); ++i) {
                        double others = 0.0;
                        for (std::size_t s = 0; s < grove.trees.size(); ++s)
                            if (s != t) others += tree_pred[s][i];
                        residual[i] = target[i] - others;
                    }
                    RegressionTree cand = TreeBuilder(rows, residual, alpha).build();
                    if (tree_sse(cand, rows, residual) <=
                        tree_sse(grove.trees[t], rows, residual)) {
                        grove.trees[t] = std::move(cand);
                        for (std::size_t i = 0; i < rows.size(); ++i)
                            tree_pred[t][i] = grove.trees[t].predict(rows[i]->features);
                    }
                }
                double sse = 0.0;
                for (std::size_t i = 0; i < rows.size(); ++i) {
                    double pred = 0.0;
                    for (const auto& tp : tree_pred) pred += tp[i];
                    const double d = target[i] - pred;
                    sse += d * d;
                }
                const double rmse = std::sqrt(sse / rows.size());
                rmse_log.push_back(rmse);
                if (prev_rmse >= 0.0 && prev_rmse - rmse < 1e-6) break;
                prev_rmse = rmse;
            }
        }
        model.groves.push_back(std::move(grove));
        if (trace) trace->groves_rmse.push_back(std::move(rmse_log));
    }
    return model;
}

}  // namespace expertrank
