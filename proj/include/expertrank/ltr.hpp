#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expertrank/eval.hpp"
#include "expertrank/featurebank.hpp"
#include "expertrank/ranking.hpp"

namespace expertrank {

/// Binary relevance labels plus query texts.
/// TSV format: query_id <tab> query_text <tab> author_id <tab> grade.
struct Judgments {
    struct QueryEntry {
        std::string text;
        QueryGrades grades;
    };
    std::map<std::string, QueryEntry> queries;

    static Judgments load_tsv(const std::string& path);
    void save_tsv(const std::string& path) const;

    std::vector<std::string> query_ids() const;
    std::map<std::string, QueryGrades> graded() const;
};

enum class NegativeKind { random_sample, hard_bm25 };

struct Instance {
    std::string query_id;
    std::string author_id;
    std::vector<double> features;
    int grade = 0;
    std::optional<NegativeKind> negative_kind;  // set on sampled negatives only
};

struct TrainingSet {
    std::vector<std::string> feature_names;
    std::uint64_t fingerprint = 0;
    std::vector<Instance> instances;  // grouped by ascending query_id
    std::vector<std::string> warnings;

    std::vector<std::string> query_ids() const;
    TrainingSet subset(const std::vector<std::string>& queries) const;
    FeatureMatrix matrix_for(const std::string& query_id) const;
    QueryGrades grades_for(const std::string& query_id) const;
};

/// Balanced per-query instances: all positives plus equally many sampled
/// negatives from the candidate pool (half uniform-random, half top-BM25).
/// Shortfalls take whatever non-relevant candidates exist and add a warning.
TrainingSet build_training_set(const Judgments& judgments, const FeaturePipeline& pipeline,
                               std::uint64_t seed);

/// Column projection onto a sub-registry; instance order is preserved.
TrainingSet project(const TrainingSet& data, const FeatureRegistry& registry);

/// Partition into k folds of near-equal size; returns (train, test) per fold,
/// each query testing exactly once. Throws when k < 2 or k > #queries.
std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> kfold_split(
    std::vector<std::string> query_ids, int k, std::uint64_t seed);

enum class RankMetric { map, ndcg };

struct TrainConfig {
    int adarank_iterations = 400;
    int rankboost_iterations = 300;
    int rankboost_thresholds = 40;  // threshold candidates per feature
    int ca_restarts = 5;
    int ca_iterations = 100;  // line-search sweeps per restart
    int groves_trees = 5;     // N
    double groves_alpha = 0.2;
    int groves_bags = 20;  // b
    RankMetric metric = RankMetric::map;
    std::uint64_t seed = 1;
};

struct RegressionTreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    double value = 0.0;
    int left = -1;
    int right = -1;
};

struct RegressionTree {
    std::vector<RegressionTreeNode> nodes;
    double predict(const std::vector<double>& x) const;
};

struct Grove {
    std::vector<RegressionTree> trees;
    double predict(const std::vector<double>& x) const;
};

struct RankingModel {
    enum class Kind { adarank, rankboost, coordinate_ascent, groves };

    struct FeatureWeight {
        int feature = 0;
        double alpha = 0.0;
    };
    struct ThresholdRanker {
        int feature = 0;
        double threshold = 0.0;
        double alpha = 0.0;
    };

    Kind kind = Kind::adarank;
    std::uint64_t fingerprint = 0;
    std::vector<std::string> feature_names;

    std::vector<FeatureWeight> adarank_rankers;
    std::vector<ThresholdRanker> rankboost_rankers;
    std::vector<double> weights;  // coordinate ascent
    std::vector<Grove> groves;    // bagged groves

    double score(const std::vector<double>& features) const;

    void save(const std::string& path) const;
    static RankingModel load(const std::string& path);

    static const char* kind_name(Kind k);
    static Kind kind_from_name(const std::string& name);
};

// Per-round snapshots for white-box verification of the boosting loops.
struct AdaRankRound {
    int feature = 0;
    double alpha = 0.0;
    double weighted_metric = 0.0;
    std::vector<double> query_weights;  // distribution before this round's selection
};

struct RankBoostRound {
    int feature = 0;
    double threshold = 0.0;
    double alpha = 0.0;
    double epsilon = 0.0;
    double weight_sum = 0.0;            // after the round's renormalization
    std::vector<double> pair_weights;   // distribution before this round's selection
};

struct TrainTrace {
    std::vector<AdaRankRound> adarank_rounds;
    std::vector<RankBoostRound> rankboost_rounds;
    std::vector<std::vector<double>> ca_objectives;  // accepted objectives, one run per restart
    std::vector<std::vector<double>> groves_rmse;    // RMSE after each retrain sweep, per bag
};

RankingModel train_adarank(const TrainingSet& train, const TrainConfig& cfg,
                           TrainTrace* trace = nullptr);
RankingModel train_rankboost(const TrainingSet& train, const TrainConfig& cfg,
                             TrainTrace* trace = nullptr);
RankingModel train_coordinate_ascent(const TrainingSet& train, const TrainConfig& cfg,
                                     TrainTrace* trace = nullptr);
RankingModel train_groves(const TrainingSet& train, const TrainConfig& cfg,
                          TrainTrace* trace = nullptr);

enum class LtrAlgorithm { adarank, rankboost, coordinate_ascent, groves };

const char* ltr_algorithm_name(LtrAlgorithm a);
LtrAlgorithm ltr_algorithm_from_name(const std::string& name);

RankingModel train(LtrAlgorithm algo, const TrainingSet& train, const TrainConfig& cfg,
                   TrainTrace* trace = nullptr);

/// Scores every matrix row with the model; throws on a registry fingerprint
/// mismatch.
RankedList predict(const RankingModel& model, const FeatureMatrix& matrix);

// Row groups per query and metric evaluation of a score assignment; shared by
// the trainers, grid search, and the white-box tests.
struct QueryGroup {
    std::string query_id;
    std::vector<std::size_t> rows;
};

std::vector<QueryGroup> group_by_query(const TrainingSet& data);

double group_metric(RankMetric metric, const TrainingSet& data, const QueryGroup& group,
                    const std::vector<double>& scores_by_row);

/// Parameter lattice in declared axis order.
struct ParamGrid {
    std::vector<std::pair<std::string, std::vector<double>>> axes;

    static ParamGrid default_grid(LtrAlgorithm algo);
    std::vector<std::vector<double>> points() const;
    bool empty() const;
};

TrainConfig apply_grid_point(LtrAlgorithm algo, const ParamGrid& grid,
                             const std::vector<double>& point, TrainConfig base);

struct GridSearchResult {
    TrainConfig best;
    std::vector<double> best_point;
    double best_score = 0.0;
    std::vector<std::string> warnings;
};

/// Inner k-fold cross-validation on the training queries per lattice point,
/// maximizing mean validation MAP. Ties prefer smaller parameter values, then
/// lattice order.
GridSearchResult grid_search(LtrAlgorithm algo, const ParamGrid& grid, const TrainingSet& data,
                             const std::vector<std::string>& train_queries, int k,
                             const TrainConfig& base, std::uint64_t seed);

}  // namespace expertrank
