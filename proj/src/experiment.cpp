#include "expertrank/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "expertrank/fusion.hpp"
#include "expertrank/util.hpp"

namespace expertrank {

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : value) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> split_numbers(const std::string& value) {
    std::vector<double> out;
    for (const auto& item : split_list(value)) out.push_back(std::stod(item));
    return out;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                throw std::runtime_error("bad config line " + std::to_string(line_no));
            continue;
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key == "corpus") corpus_path = value;
    else if (key == "judgments") judgments_path = value;
    else if (key == "out") out_dir = value;
    else if (key == "model") model_path = value;
    else if (key == "seed") {
        seed = std::stoull(value);
        seed_explicit = true;
    }
    else if (key == "folds") folds = std::stoi(value);
    else if (key == "topn") topn = std::stoi(value);
    else if (key == "n_perm") n_permutations = std::stoi(value);
    else if (key == "ablation") ablation = value == "1" || value == "true";
    else if (key == "method") fusion_methods = split_list(value);
    else if (key == "algo") algorithms = split_list(value);
    else if (key == "metric") train_metric = value == "ndcg" ? RankMetric::ndcg : RankMetric::map;
    else if (key == "features") {
        feature_groups.clear();
        for (const auto& g : split_list(value))
            feature_groups.insert(feature_group_from_name(g));
    } else if (key == "venues") {
        venue_filter.clear();
        for (const auto& v : split_list(value)) venue_filter.insert(venue_type_from_name(v));
    } else if (key == "bm25_k1") feature_params.bm25.k1 = std::stod(value);
    else if (key == "bm25_b") feature_params.bm25.b = std::stod(value);
    else if (key == "bm25_literal_idf")
        feature_params.bm25.idf_from_term_freq = value == "1" || value == "true";
    else if (key == "pagerank_d") feature_params.pagerank.damping = std::stod(value);
    else if (key == "pagerank_tol") feature_params.pagerank.tol = std::stod(value);
    else if (key == "pagerank_max_iter") feature_params.pagerank.max_iter = std::stoi(value);
    else if (key == "gamma") feature_params.scholar.gamma = std::stod(value);
    else if (key == "delta") feature_params.scholar.delta = std::stod(value);
    else if (key == "now_year") feature_params.scholar.now_year = std::stoi(value);
    else if (key.rfind("grid.", 0) == 0) {
        const auto rest = key.substr(5);
        const auto dot = rest.find('.');
        if (dot == std::string::npos)
            throw std::invalid_argument("grid keys look like grid.<algo>.<axis>: " + key);
        grids[rest.substr(0, dot)][rest.substr(dot + 1)] = split_numbers(value);
    } else {
        throw std::invalid_argument("unknown config key: " + key);
    }
}

IngestStats run_ingest(const std::string& corpus_path) {
    IngestStats stats;
    Corpus corpus = load_corpus(corpus_path, &stats.report);
    const CitationGraph graph = build_citation_graph(corpus);
    stats.n_authors = corpus.author_index().size();
    stats.n_publications = corpus.size();
    for (const auto& p : corpus.publications()) {
        if (p.abstract_text) stats.n_with_abstract += 1;
        if (p.venue_type == VenueType::conference) stats.n_conference += 1;
        if (p.venue_type == VenueType::journal) stats.n_journal += 1;
    }
    stats.n_citation_links = graph.n_edges();
    stats.n_dangling = graph.n_dangling_references();
    stats.n_malformed = stats.report.malformed.size();
    stats.n_self_citations_dropped = stats.report.self_citations_dropped;
    return stats;
}

std::string IngestStats::to_table() const {
    std::ostringstream out;
    auto row = [&](const char* label, std::size_t v) {
        out << label;
        const std::size_t pad = 44 - std::string(label).size();
        out << std::string(pad, ' ') << v << '\n';
    };
    row("Total Authors", n_authors);
    row("Total Publications", n_publications);
    row("Total Publications containing Abstract", n_with_abstract);
    row("Total Papers Published in Conferences", n_conference);
    row("Total Papers Published in Journals", n_journal);
    row("Total Number of Citation Links", n_citation_links);
    row("Dangling References (excluded from graph)", n_dangling);
    row("Malformed Input Lines", n_malformed);
    row("Self-citations Dropped", n_self_citations_dropped);
    return out.str();
}

void run_synth(const SynthSpec& spec, const std::string& corpus_out,
               const std::string& judgments_out) {
    const SynthResult result = generate_synthetic(spec);
    const Corpus corpus(result.publications);
    save_corpus(corpus, corpus_out);
    result.judgments.save_tsv(judgments_out);
}

namespace {

Corpus load_config_corpus(const RunConfig& config) {
    Corpus corpus = load_corpus(config.corpus_path);
    if (!config.venue_filter.empty()) corpus = filter_venues(corpus, config.venue_filter);
    return corpus;
}

}  // namespace

RankedList run_query(const RunConfig& config, const std::string& query_text,
                     const std::string& method) {
    const Corpus corpus = load_config_corpus(config);
    FeatureRegistry registry = FeatureRegistry::full();
    if (!config.feature_groups.empty()) registry = registry.filtered(config.feature_groups);
    const FeaturePipeline pipeline(corpus, config.feature_params, registry);
    const Query query = Query::parse("adhoc", query_text);
    if (query.terms.empty()) throw std::invalid_argument("query tokenizes to nothing");
    FeatureMatrix matrix = pipeline.extract_pool(query);
    if (method == "model") {
        if (config.model_path.empty())
            throw std::invalid_argument("model scoring needs a model path");
        const RankingModel model = RankingModel::load(config.model_path);
        matrix = project(matrix, FeatureRegistry::select(model.feature_names));
        return predict(model, matrix);
    }
    return fuse(fusion_method_from_name(method), matrix, derive_seed(config.seed, "query-fuse"));
}

namespace {

struct FeatureSet {
    std::string name;  // empty for the single default set
    FeatureRegistry registry;
};

std::vector<FeatureSet> feature_sets(const RunConfig& config) {
    const auto T = FeatureGroup::textual;
    const auto P = FeatureGroup::profile;
    const auto G = FeatureGroup::graph;
    const FeatureRegistry full = FeatureRegistry::full();
    if (!config.ablation) {
        if (config.feature_groups.empty()) return {{"", full}};
        return {{"", full.filtered(config.feature_groups)}};
    }
    return {
        {"full", full},
        {"text", full.filtered({T})},
        {"profile", full.filtered({P})},
        {"graph", full.filtered({G})},
        {"text_profile", full.filtered({T, P})},
        {"text_graph", full.filtered({T, G})},
        {"profile_graph", full.filtered({P, G})},
    };
}

ParamGrid resolve_grid(const RunConfig& config, LtrAlgorithm algo) {
    ParamGrid grid = ParamGrid::default_grid(algo);
    auto it = config.grids.find(ltr_algorithm_name(algo));
    if (it == config.grids.end()) return grid;
    for (const auto& [axis, values] : it->second) {
        bool found = false;
        for (auto& [name, axis_values] : grid.axes) {
            if (name == axis) {
                axis_values = values;
                found = true;
            }
        }
        if (!found)
            throw std::invalid_argument("unknown grid axis for " +
                                        std::string(ltr_algorithm_name(algo)) + ": " + axis);
    }
    return grid;
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config) {
    if (config.corpus_path.empty() || config.judgments_path.empty())
        throw std::invalid_argument("experiment needs corpus and judgments paths");

    const Corpus corpus = load_config_corpus(config);
    const Judgments judgments = Judgments::load_tsv(config.judgments_path);
    const FeaturePipeline pipeline(corpus, config.feature_params, FeatureRegistry::full());
    const TrainingSet data_full =
        build_training_set(judgments, pipeline, derive_seed(config.seed, "training-set"));

    ExperimentResult result;
    result.warnings = data_full.warnings;

    const auto queries = data_full.query_ids();
    if (config.folds < 2 || static_cast<std::size_t>(config.folds) > queries.size())
        throw std::invalid_argument("folds must be in [2, #queries]");
    const auto outer_folds =
        kfold_split(queries, config.folds, derive_seed(config.seed, "outer-folds"));
    const auto judged = judgments.graded();

    std::map<std::string, std::map<std::string, RankedList>> runs;
    auto add_system = [&](const std::string& name, std::map<std::string, RankedList> run) {
        result.system_names.push_back(name);
        runs.emplace(name, std::move(run));
    };

    // BM25 baseline: the two bm25 columns of the untouched full matrix.
    {
        const auto names = data_full.feature_names;
        const auto bt = std::find(names.begin(), names.end(), "bm25_title") - names.begin();
        const auto ba = std::find(names.begin(), names.end(), "bm25_abstract") - names.begin();
        std::map<std::string, RankedList> run;
        for (const auto& qid : queries) {
            const FeatureMatrix mat = data_full.matrix_for(qid);
            std::map<std::string, double> scores;
            for (std::size_t r = 0; r < mat.authors.size(); ++r)
                scores[mat.authors[r]] = mat.rows[r][bt] + mat.rows[r][ba];
            run[qid] = RankedList::from_scores(qid, scores);
        }
        add_system("bm25", std::move(run));
    }

    for (const auto& set : feature_sets(config)) {
        const bool is_full_set = set.registry.size() == FeatureRegistry::full().size();
        const TrainingSet data = is_full_set ? data_full : project(data_full, set.registry);
        const std::string suffix = set.name.empty() ? "" : "__" + set.name;

        for (const auto& method_name : config.fusion_methods) {
            const FusionMethod method = fusion_method_from_name(method_name);
            std::map<std::string, RankedList> run;
            for (const auto& qid : queries)
                run[qid] = fuse(method, data.matrix_for(qid),
                                derive_seed(config.seed, "fuse:" + method_name + ":" + qid));
            add_system(method_name + suffix, std::move(run));
        }

        for (const auto& algo_name : config.algorithms) {
            const LtrAlgorithm algo = ltr_algorithm_from_name(algo_name);
            const ParamGrid grid = resolve_grid(config, algo);
            std::map<std::string, RankedList> run;
            for (std::size_t fi = 0; fi < outer_folds.size(); ++fi) {
                const auto& [fold_train, fold_test] = outer_folds[fi];
                const int k_inner =
                    std::min<int>(config.folds, static_cast<int>(fold_train.size()));
                if (k_inner < 2)
                    throw std::invalid_argument("not enough training queries for grid search");
                TrainConfig base;
                base.metric = config.train_metric;
                base.seed = derive_seed(config.seed, "train:" + algo_name + suffix, fi);
                const GridSearchResult gs =
                    grid_search(algo, grid, data, fold_train, k_inner, base,
                                derive_seed(config.seed, "grid:" + algo_name + suffix, fi));
                for (const auto& w : gs.warnings) result.warnings.push_back(w);
                const RankingModel model = train(algo, data.subset(fold_train), gs.best);
                for (const auto& qid : fold_test)
                    run[qid] = predict(model, data.matrix_for(qid));
            }
            add_system(algo_name + suffix, std::move(run));
        }
    }

    for (const auto& name : result.system_names)
        result.reports.emplace(name, evaluate_run(runs.at(name), judged));

    // pairwise two-sided randomization tests on per-query AP
    for (const auto& a : result.system_names) {
        for (const auto& b : result.system_names) {
            if (a == b) continue;
            const auto& ra = result.reports.at(a);
            const auto& rb = result.reports.at(b);
            std::vector<double> va, vb;
            for (const auto& qid : ra.query_ids) {
                va.push_back(ra.ap.at(qid));
                vb.push_back(rb.ap.at(qid));
            }
            const std::string tag = a < b ? a + "|" + b : b + "|" + a;
            result.p_values[a][b] = randomization_test(
                va, vb, config.n_permutations, derive_seed(config.seed, "randtest:" + tag));
        }
    }

    if (!config.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(config.out_dir);
        auto emit = [&](const std::string& rel, const std::string& content) {
            const std::string path = config.out_dir + "/" + rel;
            std::ofstream out(path);
            if (!out) throw std::runtime_error("cannot write " + path);
            out << content;
            result.files_written.push_back(path);
        };
        for (const auto& name : result.system_names) {
            std::vector<RankedList> lists;
            for (const auto& [qid, list] : runs.at(name)) lists.push_back(list);
            const std::string run_path = config.out_dir + "/run_" + name + ".trec";
            write_trec_run(run_path, lists, name);
            result.files_written.push_back(run_path);
            emit("report_" + name + ".tsv", result.reports.at(name).to_tsv());
        }
        std::ostringstream summary;
        summary << "system";
        for (int k : result.reports.begin()->second.precision_ks) summary << "\tP@" << k;
        summary << "\tMAP\tNDCG\n";
        for (const auto& name : result.system_names) {
            const auto& rep = result.reports.at(name);
            summary << name;
            for (double v : rep.mean_p_at_k) summary << '\t' << fmt_double(v, 4);
            summary << '\t' << fmt_double(rep.mean_ap, 4) << '\t'
                    << fmt_double(rep.mean_ndcg, 4) << '\n';
        }
        emit("summary.tsv", summary.str());

        std::ostringstream pv;
        pv << "system";
        for (const auto& name : result.system_names) pv << '\t' << name;
        pv << '\n';
        for (const auto& a : result.system_names) {
            pv << a;
            for (const auto& b : result.system_names) {
                if (a == b)
                    pv << "\t-";
                else
                    pv << '\t' << fmt_double(result.p_values.at(a).at(b), 5);
            }
            pv << '\n';
        }
        emit("pvalues.tsv", pv.str());

        std::ostringstream human;
        for (const auto& name : result.system_names) {
            human << "== " << name << " ==\n" << result.reports.at(name).to_table() << '\n';
        }
        for (const auto& w : result.warnings) human << "warning: " << w << '\n';
        emit("report.txt", human.str());
    }
    return result;
}

}  // namespace expertrank
