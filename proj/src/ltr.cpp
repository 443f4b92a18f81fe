#include "expertrank/ltr.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "expertrank/util.hpp"

namespace expertrank {

Judgments Judgments::load_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read judgments file: " + path);
    Judgments j;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string qid, text, author, grade;
        if (!std::getline(ss, qid, '\t') || !std::getline(ss, text, '\t') ||
            !std::getline(ss, author, '\t') || !std::getline(ss, grade, '\t'))
            throw std::runtime_error("malformed judgments line " + std::to_string(line_no));
        auto& entry = j.queries[qid];
        entry.text = text;
        const int g = std::stoi(grade);
        if (g != 0 && g != 1)
            throw std::runtime_error("judgment grades are binary; line " +
                                     std::to_string(line_no) + " has " + grade);
        entry.grades[author] = g;
    }
    return j;
}

void Judgments::save_tsv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write judgments file: " + path);
    for (const auto& [qid, entry] : queries)
        for (const auto& [author, grade] : entry.grades)
            out << qid << '\t' << entry.text << '\t' << author << '\t' << grade << '\n';
}

std::vector<std::string> Judgments::query_ids() const {
    std::vector<std::string> ids;
    ids.reserve(queries.size());
    for (const auto& [qid, entry] : queries) ids.push_back(qid);
    return ids;
}

std::map<std::string, QueryGrades> Judgments::graded() const {
    std::map<std::string, QueryGrades> out;
    for (const auto& [qid, entry] : queries) out[qid] = entry.grades;
    return out;
}

std::vector<std::string> TrainingSet::query_ids() const {
    std::vector<std::string> ids;
    for (const auto& inst : instances)
        if (ids.empty() || ids.back() != inst.query_id) ids.push_back(inst.query_id);
    return ids;
}

TrainingSet TrainingSet::subset(const std::vector<std::string>& queries) const {
    std::set<std::string> keep(queries.begin(), queries.end());
    TrainingSet out;
    out.feature_names = feature_names;
    out.fingerprint = fingerprint;
    for (const auto& inst : instances)
        if (keep.count(inst.query_id)) out.instances.push_back(inst);
    return out;
}

FeatureMatrix TrainingSet::matrix_for(const std::string& query_id) const {
    FeatureMatrix mat;
    mat.query_id = query_id;
    mat.feature_names = feature_names;
    mat.fingerprint = fingerprint;
    std::vector<const Instance*> rows;
    for (const auto& inst : instances)
        if (inst.query_id == query_id) rows.push_back(&inst);
    std::sort(rows.begin(), rows.end(),
              [](const Instance* a, const Instance* b) { return a->author_id < b->author_id; });
    for (const auto* inst : rows) {
        mat.authors.push_back(inst->author_id);
        mat.rows.push_back(inst->features);
    }
    return mat;
}

QueryGrades TrainingSet::grades_for(const std::string& query_id) const {
    QueryGrades grades;
    for (const auto& inst : instances)
        if (inst.query_id == query_id) grades[inst.author_id] = inst.grade;
    return grades;
}

TrainingSet build_training_set(const Judgments& judgments, const FeaturePipeline& pipeline,
                               std::uint64_t seed) {
    TrainingSet out;
    out.feature_names = pipeline.registry().names();
    out.fingerprint = pipeline.registry().fingerprint();

    for (const auto& [qid, entry] : judgments.queries) {
        Query query = Query::parse(qid, entry.text);
        if (query.terms.empty())
            throw std::invalid_argument("judgment query tokenizes to nothing: " + qid);

        std::vector<std::string> positives;
        for (const auto& [author, grade] : entry.grades)
            if (grade > 0) positives.push_back(author);
        if (positives.empty()) {
            out.warnings.push_back("query " + qid + " has no relevant authors; skipped");
            continue;
        }

        const auto pool = pipeline.candidate_pool(query);
        std::vector<std::string> nonrelevant;
        for (const auto& author : pool) {
            auto it = entry.grades.find(author);
            if (it == entry.grades.end() || it->second == 0) nonrelevant.push_back(author);
        }

        const std::size_t want = positives.size();
        const std::size_t want_random = want / 2;
        const std::size_t want_hard = want - want_random;
        if (nonrelevant.size() < want)
            out.warnings.push_back("query " + qid + ": only " +
                                   std::to_string(nonrelevant.size()) +
                                   " non-relevant candidates for " + std::to_string(want) +
                                   " positives");

        // hard negatives first: highest BM25 over both streams
        std::vector<std::pair<double, std::string>> scored;
        scored.reserve(nonrelevant.size());
        for (const auto& author : nonrelevant) {
            const double s = bm25(query, author, pipeline.title_index(), pipeline.params().bm25) +
                             bm25(query, author, pipeline.abstract_index(), pipeline.params().bm25);
            scored.emplace_back(s, author);
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        std::vector<std::string> hard;
        for (std::size_t i = 0; i < scored.size() && hard.size() < want_hard; ++i)
            hard.push_back(scored[i].second);

        std::vector<std::string> remaining;
        for (std::size_t i = hard.size(); i < scored.size(); ++i)
            remaining.push_back(scored[i].second);
        std::sort(remaining.begin(), remaining.end());
        std::mt19937_64 rng(derive_seed(seed, "negatives:" + qid));
        rng_shuffle(rng, remaining);
        std::vector<std::string> random_neg;
        for (std::size_t i = 0; i < remaining.size() && random_neg.size() < want_random; ++i)
            random_neg.push_back(remaining[i]);

        std::vector<std::string> candidates = positives;
        candidates.insert(candidates.end(), hard.begin(), hard.end());
        candidates.insert(candidates.end(), random_neg.begin(), random_neg.end());
        const FeatureMatrix mat = pipeline.extract(query, candidates);
        std::map<std::string, std::size_t> row_of;
        for (std::size_t r = 0; r < mat.authors.size(); ++r) row_of[mat.authors[r]] = r;

        auto push = [&](const std::string& author, int grade,
                        std::optional<NegativeKind> kind) {
            Instance inst;
            inst.query_id = qid;
            inst.author_id = author;
            inst.features = mat.rows[row_of.at(author)];
            inst.grade = grade;
            inst.negative_kind = kind;
            out.instances.push_back(std::move(inst));
        };
        std::sort(positives.begin(), positives.end());
        for (const auto& a : positives) push(a, 1, std::nullopt);
        for (const auto& a : hard) push(a, 0, NegativeKind::hard_bm25);
        for (const auto& a : random_neg) push(a, 0, NegativeKind::random_sample);
    }
    return out;
}

TrainingSet project(const TrainingSet& data, const FeatureRegistry& registry) {
    std::vector<std::size_t> cols;
    for (const auto& f : registry.features()) {
        auto it = std::find(data.feature_names.begin(), data.feature_names.end(), f.name);
        if (it == data.feature_names.end())
            throw std::invalid_argument("project: feature missing from training set: " + f.name);
        cols.push_back(static_cast<std::size_t>(it - data.feature_names.begin()));
    }
    TrainingSet out;
    out.feature_names = registry.names();
    out.fingerprint = registry.fingerprint();
    out.warnings = data.warnings;
    out.instances.reserve(data.instances.size());
    for (const auto& inst : data.instances) {
        Instance projected = inst;
        projected.features.resize(cols.size());
        for (std::size_t i = 0; i < cols.size(); ++i)
            projected.features[i] = inst.features[cols[i]];
        out.instances.push_back(std::move(projected));
    }
    return out;
}

std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> kfold_split(
    std::vector<std::string> query_ids, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold_split: k must be >= 2");
    std::sort(query_ids.begin(), query_ids.end());
    query_ids.erase(std::unique(query_ids.begin(), query_ids.end()), query_ids.end());
    const std::size_t n = query_ids.size();
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("kfold_split: k exceeds number of queries");

    std::mt19937_64 rng(seed);
    rng_shuffle(rng, query_ids);

    std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> folds;
    const std::size_t base = n / k, extra = n % k;
    std::size_t start = 0;
    for (int f = 0; f < k; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        std::vector<std::string> test(query_ids.begin() + start, query_ids.begin() + start + size);
        std::vector<std::string> train;
        train.insert(train.end(), query_ids.begin(), query_ids.begin() + start);
        train.insert(train.end(), query_ids.begin() + start + size, query_ids.end());
        std::sort(test.begin(), test.end());
        std::sort(train.begin(), train.end());
        folds.emplace_back(std::move(train), std::move(test));
        start += size;
    }
    return folds;
}

double RegressionTree::predict(const std::vector<double>& x) const {
    int node = 0;
    while (nodes[node].feature >= 0)
        node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left
                                                               : nodes[node].right;
    return nodes[node].value;
}

double Grove::predict(const std::vector<double>& x) const {
    double sum = 0.0;
    for (const auto& tree : trees) sum += tree.predict(x);
    return sum;
}

double RankingModel::score(const std::vector<double>& features) const {
    switch (kind) {
        case Kind::adarank: {
            double s = 0.0;
            for (const auto& wr : adarank_rankers) s += wr.alpha * features[wr.feature];
            return s;
        }
        case Kind::rankboost: {
            double s = 0.0;
            for (const auto& wr : rankboost_rankers)
                if (features[wr.feature] > wr.threshold) s += wr.alpha;
            return s;
        }
        case Kind::coordinate_ascent: {
            double s = 0.0;
            for (std::size_t f = 0; f < weights.size(); ++f) s += weights[f] * features[f];
            return s;
        }
        case Kind::groves: {
            double s = 0.0;
            for (const auto& grove : groves) s += grove.predict(features);
            return groves.empty() ? 0.0 : s / groves.size();
        }
    }
    return 0.0;
}

const char* RankingModel::kind_name(Kind k) {
    switch (k) {
        case Kind::adarank: return "adarank";
        case Kind::rankboost: return "rankboost";
        case Kind::coordinate_ascent: return "coordinate_ascent";
        case Kind::groves: return "groves";
    }
    return "adarank";
}

RankingModel::Kind RankingModel::kind_from_name(const std::string& name) {
    if (name == "adarank") return Kind::adarank;
    if (name == "rankboost") return Kind::rankboost;
    if (name == "coordinate_ascent") return Kind::coordinate_ascent;
    if (name == "groves") return Kind::groves;
    throw std::invalid_argument("unknown model kind: " + name);
}

namespace {

std::string dbl(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void RankingModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << "expertrank-model v1\n";
    out << "kind " << kind_name(kind) << '\n';
    out << "fingerprint " << std::hex << fingerprint << std::dec << '\n';
    out << "features " << feature_names.size() << '\n';
    for (const auto& n : feature_names) out << n << '\n';
    switch (kind) {
        case Kind::adarank:
            out << "rounds " << adarank_rankers.size() << '\n';
            for (const auto& r : adarank_rankers)
                out << r.feature << ' ' << dbl(r.alpha) << '\n';
            break;
        case Kind::rankboost:
            out << "rounds " << rankboost_rankers.size() << '\n';
            for (const auto& r : rankboost_rankers)
                out << r.feature << ' ' << dbl(r.threshold) << ' ' << dbl(r.alpha) << '\n';
            break;
        case Kind::coordinate_ascent:
            out << "weights " << weights.size() << '\n';
            for (double w : weights) out << dbl(w) << '\n';
            break;
        case Kind::groves:
            out << "bags " << groves.size() << '\n';
            for (const auto& grove : groves) {
                out << "trees " << grove.trees.size() << '\n';
                for (const auto& tree : grove.trees) {
                    out << "nodes " << tree.nodes.size() << '\n';
                    for (const auto& n : tree.nodes)
                        out << n.feature << ' ' << dbl(n.threshold) << ' ' << dbl(n.value)
                            << ' ' << n.left << ' ' << n.right << '\n';
                }
            }
            break;
    }
}

RankingModel RankingModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read model file: " + path);
    std::string line, word;
    if (!std::getline(in, line) || line != "expertrank-model v1")
        throw std::runtime_error("unsupported model file: " + path);

    RankingModel m;
    std::string kind_str;
    in >> word >> kind_str;
    if (word != "kind") throw std::runtime_error("bad model file (kind): " + path);
    m.kind = kind_from_name(kind_str);
    in >> word >> std::hex >> m.fingerprint >> std::dec;
    if (word != "fingerprint") throw std::runtime_error("bad model file (fingerprint): " + path);
    std::size_t n_features = 0;
    in >> word >> n_features;
    if (word != "features") throw std::runtime_error("bad model file (features): " + path);
    std::getline(in, line);
    for (std::size_t i = 0; i < n_features; ++i) {
        std::getline(in, line);
        m.feature_names.push_back(line);
    }
    switch (m.kind) {
        case Kind::adarank: {
            std::size_t rounds = 0;
            in >> word >> rounds;
            for (std::size_t i = 0; i < rounds; ++i) {
                FeatureWeight r;
                in >> r.feature >> r.alpha;
                m.adarank_rankers.push_back(r);
            }
            break;
        }
        case Kind::rankboost: {
            std::size_t rounds = 0;
            in >> word >> rounds;
            for (std::size_t i = 0; i < rounds; ++i) {
                ThresholdRanker r;
                in >> r.feature >> r.threshold >> r.alpha;
                m.rankboost_rankers.push_back(r);
            }
            break;
        }
        case Kind::coordinate_ascent: {
            std::size_t n = 0;
            in >> word >> n;
            m.weights.resize(n);
            for (std::size_t i = 0; i < n; ++i) in >> m.weights[i];
            break;
        }
        case Kind::groves: {
            std::size_t bags = 0;
            in >> word >> bags;
            for (std::size_t g = 0; g < bags; ++g) {
                std::size_t trees = 0;
                in >> word >> trees;
                Grove grove;
                for (std::size_t t = 0; t < trees; ++t) {
                    std::size_t count = 0;
                    in >> word >> count;
                    RegressionTree tree;
                    tree.nodes.resize(count);
                    for (auto& n : tree.nodes)
                        in >> n.feature >> n.threshold >> n.value >> n.left >> n.right;
                    grove.trees.push_back(std::move(tree));
                }
                m.groves.push_back(std::move(grove));
            }
            break;
        }
    }
    if (!in) throw std::runtime_error("truncated model file: " + path);
    return m;
}

const char* ltr_algorithm_name(LtrAlgorithm a) {
    switch (a) {
        case LtrAlgorithm::adarank: return "adarank";
        case LtrAlgorithm::rankboost: return "rankboost";
        case LtrAlgorithm::coordinate_ascent: return "coordinate_ascent";
        case LtrAlgorithm::groves: return "groves";
    }
    return "adarank";
}

LtrAlgorithm ltr_algorithm_from_name(const std::string& name) {
    if (name == "adarank") return LtrAlgorithm::adarank;
    if (name == "rankboost") return LtrAlgorithm::rankboost;
    if (name == "coordinate_ascent" || name == "ca") return LtrAlgorithm::coordinate_ascent;
    if (name == "groves") return LtrAlgorithm::groves;
    throw std::invalid_argument("unknown algorithm: " + name);
}

RankingModel train(LtrAlgorithm algo, const TrainingSet& data, const TrainConfig& cfg,
                   TrainTrace* trace) {
    switch (algo) {
        case LtrAlgorithm::adarank: return train_adarank(data, cfg, trace);
        case LtrAlgorithm::rankboost: return train_rankboost(data, cfg, trace);
        case LtrAlgorithm::coordinate_ascent: return train_coordinate_ascent(data, cfg, trace);
        case LtrAlgorithm::groves: return train_groves(data, cfg, trace);
    }
    throw std::invalid_argument("train: unknown algorithm");
}

RankedList predict(const RankingModel& model, const FeatureMatrix& matrix) {
    if (model.fingerprint != matrix.fingerprint)
        throw std::invalid_argument("predict: feature registry fingerprint mismatch");
    std::map<std::string, double> scores;
    for (std::size_t r = 0; r < matrix.authors.size(); ++r)
        scores[matrix.authors[r]] = model.score(matrix.rows[r]);
    return RankedList::from_scores(matrix.query_id, scores);
}

std::vector<QueryGroup> group_by_query(const TrainingSet& data) {
    std::vector<QueryGroup> groups;
    for (std::size_t i = 0; i < data.instances.size(); ++i) {
        if (groups.empty() || groups.back().query_id != data.instances[i].query_id)
            groups.push_back({data.instances[i].query_id, {}});
        groups.back().rows.push_back(i);
    }
    return groups;
}

double group_metric(RankMetric metric, const TrainingSet& data, const QueryGroup& group,
                    const std::vector<double>& scores_by_row) {
    std::map<std::string, double> scores;
    QueryGrades grades;
    for (auto row : group.rows) {
        const auto& inst = data.instances[row];
        scores[inst.author_id] = scores_by_row[row];
        grades[inst.author_id] = inst.grade;
    }
    const RankedList list = RankedList::from_scores(group.query_id, scores);
    return metric == RankMetric::map ? average_precision(list, grades) : ndcg(list, grades);
}

ParamGrid ParamGrid::default_grid(LtrAlgorithm algo) {
    ParamGrid grid;
    switch (algo) {
        case LtrAlgorithm::adarank:
            grid.axes = {{"T", {50, 100, 150, 200, 250, 300, 350, 400, 450, 500}}};
            break;
        case LtrAlgorithm::rankboost:
            grid.axes = {{"T", {50, 100, 150, 200, 250, 300, 350, 400, 450, 500}},
                         {"theta", {10, 20, 40}}};
            break;
        case LtrAlgorithm::coordinate_ascent:
            grid.axes = {{"rr", {1, 3, 5}}, {"T", {10, 25, 50, 100}}};
            break;
        case LtrAlgorithm::groves:
            grid.axes = {{"N", {1, 2, 5, 10}},
                         {"alpha", {0.05, 0.1, 0.2, 0.5, 1.0}},
                         {"b", {10, 20, 50}}};
            break;
    }
    return grid;
}

bool ParamGrid::empty() const {
    if (axes.empty()) return true;
    for (const auto& [name, values] : axes)
        if (values.empty()) return true;
    return false;
}

std::vector<std::vector<double>> ParamGrid::points() const {
    std::vector<std::vector<double>> points{{}};
    for (const auto& [name, values] : axes) {
        std::vector<std::vector<double>> expanded;
        for (const auto& p : points) {
            for (double v : values) {
                auto q = p;
                q.push_back(v);
                expanded.push_back(std::move(q));
            }
        }
        points = std::move(expanded);
    }
    return points;
}

TrainConfig apply_grid_point(LtrAlgorithm algo, const ParamGrid& grid,
                             const std::vector<double>& point, TrainConfig base) {
    for (std::size_t i = 0; i < grid.axes.size(); ++i) {
        const std::string& name = grid.axes[i].first;
        const double v = point[i];
        switch (algo) {
            case LtrAlgorithm::adarank:
                if (name == "T") base.adarank_iterations = static_cast<int>(v);
                break;
            case LtrAlgorithm::rankboost:
                if (name == "T") base.rankboost_iterations = static_cast<int>(v);
                if (name == "theta") base.rankboost_thresholds = static_cast<int>(v);
                break;
            case LtrAlgorithm::coordinate_ascent:
                if (name == "rr") base.ca_restarts = static_cast<int>(v);
                if (name == "T") base.ca_iterations = static_cast<int>(v);
                break;
            case LtrAlgorithm::groves:
                if (name == "N") base.groves_trees = static_cast<int>(v);
                if (name == "alpha") base.groves_alpha = v;
                if (name == "b") base.groves_bags = static_cast<int>(v);
                break;
        }
    }
    return base;
}

GridSearchResult grid_search(LtrAlgorithm algo, const ParamGrid& grid, const TrainingSet& data,
                             const std::vector<std::string>& train_queries, int k,
                             const TrainConfig& base, std::uint64_t seed) {
    if (grid.empty()) throw std::invalid_argument("grid_search: empty lattice");
    const auto folds = kfold_split(train_queries, k, derive_seed(seed, "grid-folds"));
    const auto points = grid.points();

    GridSearchResult result;
    bool have_best = false;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        TrainConfig cfg = apply_grid_point(algo, grid, points[pi], base);
        double total = 0.0;
        bool failed = false;
        for (std::size_t fi = 0; fi < folds.size(); ++fi) {
            const auto& [fold_train, fold_test] = folds[fi];
            TrainingSet sub = data.subset(fold_train);
            TrainConfig fold_cfg = cfg;
            fold_cfg.seed = derive_seed(seed, "grid-point", pi * 1000 + fi);
            RankingModel model;
            try {
                model = train(algo, sub, fold_cfg, nullptr);
            } catch (const std::exception& e) {
                result.warnings.push_back("lattice point " + std::to_string(pi) +
                                          " failed: " + e.what());
                failed = true;
                break;
            }
            double fold_sum = 0.0;
            for (const auto& qid : fold_test) {
                const RankedList list = predict(model, data.matrix_for(qid));
                fold_sum += average_precision(list, data.grades_for(qid));
            }
            total += fold_test.empty() ? 0.0 : fold_sum / fold_test.size();
        }
        if (failed) continue;
        const double score = total / folds.size();
        const bool better =
            !have_best || score > result.best_score ||
            (score == result.best_score && points[pi] < result.best_point);
        if (better) {
            have_best = true;
            result.best_score = score;
            result.best_point = points[pi];
            result.best = cfg;
            result.best.seed = base.seed;
        }
    }
    if (!have_best) throw std::runtime_error("grid_search: every lattice point failed");
    return result;
}

}  // namespace expertrank
