#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "expertrank/ltr.hpp"

namespace expertrank {

namespace {

struct CruxPair {
    std::size_t pos_row;
    std::size_t neg_row;
};

// Distinct feature values at evenly spaced quantiles; these are the candidate
// thresholds for h(x) = [x > t].
std::vector<double> quantile_thresholds(const TrainingSet& data, std::size_t feature,
                                        int count) {
    std::vector<double> values;
    values.reserve(data.instances.size());
    for (const auto& inst : data.instances) values.push_back(inst.features[feature]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.empty()) return {};
    std::vector<double> out;
    double prev = values.front() - 1.0;
    for (int j = 0; j < count; ++j) {
        std::size_t idx = static_cast<std::size_t>(
            (static_cast<unsigned long long>(j + 1) * values.size()) / (count + 1));
        if (idx >= values.size()) idx = values.size() - 1;
        if (values[idx] != prev) {
            out.push_back(values[idx]);
            prev = values[idx];
        }
    }
    return out;
}

}  // namespace

// Pairwise boosting: maintains a distribution over (relevant, non-relevant)
// pairs within each query and fits one threshold ranker per round.
RankingModel train_rankboost(const TrainingSet& data, const TrainConfig& cfg,
                             TrainTrace* trace) {
    if (cfg.rankboost_iterations < 1)
        throw std::invalid_argument("train_rankboost: iterations must be >= 1");
    if (cfg.rankboost_thresholds < 1)
        throw std::invalid_argument("train_rankboost: threshold count must be >= 1");

    std::vector<CruxPair> pairs;
    for (const auto& group : group_by_query(data)) {
        for (auto i : group.rows) {
            if (data.instances[i].grade <= 0) continue;
            for (auto j : group.rows)
                if (data.instances[j].grade == 0) pairs.push_back({i, j});
        }
    }
    if (pairs.empty())
        throw std::invalid_argument("train_rankboost: no (relevant, non-relevant) pairs");

    const std::size_t n_features = data.feature_names.size();

    // Per candidate ranker, the pair margin h(pos) - h(neg) in {-1, 0, 1}.
    struct Candidate {
        int feature;
        double threshold;
        std::vector<std::int8_t> margin;
    };
    std::vector<Candidate> candidates;
    for (std::size_t f = 0; f < n_features; ++f) {
        for (double t : quantile_thresholds(data, f, cfg.rankboost_thresholds)) {
            Candidate c{static_cast<int>(f), t, {}};
            c.margin.resize(pairs.size());
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const int hp = data.instances[pairs[p].pos_row].features[f] > t ? 1 : 0;
                const int hn = data.instances[pairs[p].neg_row].features[f] > t ? 1 : 0;
                c.margin[p] = static_cast<std::int8_t>(hp - hn);
            }
            candidates.push_back(std::move(c));
        }
    }
    if (candidates.empty())
        throw std::invalid_argument("train_rankboost: no threshold candidates");

    RankingModel model;
    model.kind = RankingModel::Kind::rankboost;
    model.fingerprint = data.fingerprint;
    model.feature_names = data.feature_names;

    std::vector<double> weight(pairs.size(), 1.0 / pairs.size());
    for (int t = 0; t < cfg.rankboost_iterations; ++t) {
        std::size_t best = 0;
        double best_r = -2.0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            double r = 0.0;
            for (std::size_t p = 0; p < pairs.size(); ++p)
                r += weight[p] * candidates[c].margin[p];
            if (r > best_r) {
                best_r = r;
                best = c;
            }
        }
        double epsilon = (1.0 - best_r) / 2.0;
        epsilon = std::min(std::max(epsilon, 1e-10), 1.0 - 1e-10);
        const double alpha = 0.5 * std::log((1.0 - epsilon) / epsilon);

        if (trace)
            trace->rankboost_rounds.push_back({candidates[best].feature,
                                               candidates[best].threshold, alpha, epsilon, 0.0,
                                               weight});
        model.rankboost_rankers.push_back(
            {candidates[best].feature, candidates[best].threshold, alpha});

        double z = 0.0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            weight[p] *= std::exp(-alpha * candidates[best].margin[p]);
            z += weight[p];
        }
        for (auto& w : weight) w /= z;
        if (trace) {
            double sum = 0.0;
            for (double w : weight) sum += w;
            trace->rankboost_rounds.back().weight_sum = sum;
        }
    }
    return model;
}

}  // namespace expertrank
