// Command-line surface over the expertrank library: corpus ingestion, the
// synthetic-corpus generator, ad-hoc queries, batch fusion, model training,
// the cross-validation experiment protocol, and run-file evaluation.
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expertrank/experiment.hpp"
#include "expertrank/fusion.hpp"
#include "expertrank/util.hpp"

using namespace expertrank;

namespace {

struct CommonFlags {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;

    RunConfig build() const {
        RunConfig config;
        if (!config_path.empty()) config = RunConfig::from_file(config_path);
        for (const auto& [key, value] : overrides) config.set(key, value);
        return config;
    }
};

void add_config_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "flat key=value config file");
    auto forward = [&flags](const std::string& key) {
        return [&flags, key](const std::string& value) {
            flags.overrides.emplace_back(key, value);
        };
    };
    cmd->add_option_function<std::string>("--corpus", forward("corpus"), "corpus JSONL path");
    cmd->add_option_function<std::string>("--judgments", forward("judgments"),
                                          "judgments TSV path");
    cmd->add_option_function<std::string>("--out", forward("out"), "output directory");
    cmd->add_option_function<std::string>("--model", forward("model"), "model file path");
    cmd->add_option_function<std::string>("--seed", forward("seed"), "RNG seed (required)");
    cmd->add_option_function<std::string>("--folds", forward("folds"), "cross-validation folds");
    cmd->add_option_function<std::string>("--method", forward("method"),
                                          "fusion method(s), comma separated");
    cmd->add_option_function<std::string>("--algo", forward("algo"),
                                          "learning algorithm(s), comma separated");
    cmd->add_option_function<std::string>("--features", forward("features"),
                                          "feature groups: text,profile,graph");
    cmd->add_option_function<std::string>("--topn", forward("topn"), "results to print");
    cmd->add_option_function<std::string>("--n-perm", forward("n_perm"),
                                          "randomization-test permutations");
    cmd->add_option_function<std::string>("--now-year", forward("now_year"),
                                          "reference year for age-weighted indexes");
    cmd->add_option_function<std::string>("--metric", forward("metric"),
                                          "training metric: map or ndcg");
    cmd->add_option_function<std::string>("--venues", forward("venues"),
                                          "venue types to ingest, e.g. journal,conference");
    cmd->add_flag_callback(
        "--ablation", [&flags] { flags.overrides.emplace_back("ablation", "1"); },
        "run every feature-group combination");
}

int cmd_ingest(const CommonFlags& flags) {
    const RunConfig config = flags.build();
    const IngestStats stats = run_ingest(config.corpus_path);
    std::cout << stats.to_table();
    for (const auto& bad : stats.report.malformed)
        std::cout << "malformed line " << bad.line_number << ": " << bad.reason << '\n';
    for (const auto& w : stats.report.warnings) std::cout << "warning: " << w << '\n';
    return stats.n_malformed == 0 ? 0 : 1;
}

void require_seed(const RunConfig& config) {
    if (!config.seed_explicit)
        throw std::invalid_argument("a seed is required (--seed or config file)");
}

int cmd_query(const CommonFlags& flags, const std::string& text, const std::string& method) {
    const RunConfig config = flags.build();
    require_seed(config);
    const RankedList list = run_query(config, text, method);
    const int topn = config.topn > 0 ? config.topn : 20;
    for (std::size_t i = 0; i < list.entries.size() && i < static_cast<std::size_t>(topn); ++i)
        std::cout << (i + 1) << ". " << list.entries[i].author << ' '
                  << fmt_double(list.entries[i].score) << '\n';
    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        write_trec_run(config.out_dir + "/run_query.trec", {list}, method);
    }
    return 0;
}

int cmd_fuse(const CommonFlags& flags) {
    const RunConfig config = flags.build();
    require_seed(config);
    if (config.fusion_methods.size() != 1)
        throw std::invalid_argument("fuse needs exactly one --method");
    Corpus corpus = load_corpus(config.corpus_path);
    if (!config.venue_filter.empty()) corpus = filter_venues(corpus, config.venue_filter);
    const Judgments judgments = Judgments::load_tsv(config.judgments_path);
    FeatureRegistry registry = FeatureRegistry::full();
    if (!config.feature_groups.empty()) registry = registry.filtered(config.feature_groups);
    const FeaturePipeline pipeline(corpus, config.feature_params, registry);
    const FusionMethod method = fusion_method_from_name(config.fusion_methods.front());

    std::map<std::string, RankedList> run;
    std::vector<RankedList> lists;
    for (const auto& [qid, entry] : judgments.queries) {
        const Query query = Query::parse(qid, entry.text);
        const RankedList list = fuse(method, pipeline.extract_pool(query),
                                     derive_seed(config.seed, "fuse:" + qid));
        run[qid] = list;
        lists.push_back(list);
    }
    const MetricReport report = evaluate_run(run, judgments.graded());
    std::cout << report.to_table();
    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        write_trec_run(config.out_dir + "/run_fuse.trec", lists,
                       config.fusion_methods.front());
        std::ofstream rep(config.out_dir + "/report_fuse.tsv");
        rep << report.to_tsv();
    }
    return 0;
}

int cmd_train(const CommonFlags& flags, bool with_grid_search) {
    const RunConfig config = flags.build();
    if (config.algorithms.size() != 1)
        throw std::invalid_argument("train needs exactly one --algo");
    if (config.model_path.empty()) throw std::invalid_argument("train needs --model out path");
    require_seed(config);
    Corpus corpus = load_corpus(config.corpus_path);
    if (!config.venue_filter.empty()) corpus = filter_venues(corpus, config.venue_filter);
    const Judgments judgments = Judgments::load_tsv(config.judgments_path);
    FeatureRegistry registry = FeatureRegistry::full();
    if (!config.feature_groups.empty()) registry = registry.filtered(config.feature_groups);
    const FeaturePipeline pipeline(corpus, config.feature_params, registry);
    const TrainingSet data =
        build_training_set(judgments, pipeline, derive_seed(config.seed, "training-set"));
    for (const auto& w : data.warnings) std::cout << "warning: " << w << '\n';

    const LtrAlgorithm algo = ltr_algorithm_from_name(config.algorithms.front());
    TrainConfig cfg;
    cfg.metric = config.train_metric;
    cfg.seed = derive_seed(config.seed, "train");
    if (with_grid_search) {
        ParamGrid grid = ParamGrid::default_grid(algo);
        auto it = config.grids.find(config.algorithms.front());
        if (it != config.grids.end())
            for (const auto& [axis, values] : it->second)
                for (auto& [name, axis_values] : grid.axes)
                    if (name == axis) axis_values = values;
        const auto queries = data.query_ids();
        const int k = std::min<int>(config.folds, static_cast<int>(queries.size()));
        const GridSearchResult gs = grid_search(algo, grid, data, queries, k, cfg,
                                                derive_seed(config.seed, "grid"));
        for (const auto& w : gs.warnings) std::cout << "warning: " << w << '\n';
        cfg = gs.best;
        std::cout << "grid search validation MAP " << fmt_double(gs.best_score, 4) << '\n';
    }
    const RankingModel model = train(algo, data, cfg);
    model.save(config.model_path);
    std::cout << "model written to " << config.model_path << '\n';
    return 0;
}

int cmd_experiment(const CommonFlags& flags) {
    const RunConfig config = flags.build();
    require_seed(config);
    const ExperimentResult result = run_experiment(config);
    for (const auto& name : result.system_names) {
        std::cout << "== " << name << " ==\n" << result.reports.at(name).to_table() << '\n';
    }
    for (const auto& w : result.warnings) std::cout << "warning: " << w << '\n';
    for (const auto& f : result.files_written) std::cout << "wrote " << f << '\n';
    return 0;
}

int cmd_evaluate(const CommonFlags& flags, const std::string& run_path) {
    const RunConfig config = flags.build();
    const auto run = read_trec_run(run_path);
    const Judgments judgments = Judgments::load_tsv(config.judgments_path);
    const MetricReport report = evaluate_run(run, judgments.graded());
    std::cout << report.to_table();
    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        std::ofstream rep(config.out_dir + "/report_evaluate.tsv");
        rep << report.to_tsv();
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"expertrank: rank academic authors by query expertise"};
    app.require_subcommand(1);

    CommonFlags flags;

    auto* ingest = app.add_subcommand("ingest", "validate a corpus and print its statistics");
    add_config_flags(ingest, flags);

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted experts");
    SynthSpec spec;
    std::string synth_corpus = "synth_corpus.jsonl";
    std::string synth_judgments = "synth_judgments.tsv";
    synth->add_option("--pubs", spec.n_pubs, "number of publications");
    synth->add_option("--authors", spec.n_authors, "number of authors");
    synth->add_option("--topics", spec.n_topics, "number of topics");
    synth->add_option("--experts", spec.experts_per_topic, "planted experts per topic");
    synth->add_option("--term-boost", spec.term_boost, "topic-term rate boost");
    synth->add_option("--citation-boost", spec.citation_boost, "citation steering boost");
    synth->add_option("--seed", spec.seed, "RNG seed")->required();
    synth->add_option("--out-corpus", synth_corpus, "corpus output path");
    synth->add_option("--out-judgments", synth_judgments, "judgments output path");

    std::string query_text, query_method = "condorcet";
    auto* query = app.add_subcommand("query", "rank experts for one query");
    query->add_option("text", query_text, "query text")->required();
    query->add_option("--use", query_method, "fusion method or 'model'");
    add_config_flags(query, flags);

    auto* fuse_cmd = app.add_subcommand("fuse", "batch fusion over all judged queries");
    add_config_flags(fuse_cmd, flags);

    bool with_grid_search = false;
    auto* train_cmd = app.add_subcommand("train", "train a ranking model");
    train_cmd->add_flag("--grid-search", with_grid_search, "tune parameters first");
    add_config_flags(train_cmd, flags);

    auto* experiment = app.add_subcommand("experiment", "full cross-validation protocol");
    add_config_flags(experiment, flags);

    std::string run_path;
    auto* evaluate = app.add_subcommand("evaluate", "score a TREC run file against judgments");
    evaluate->add_option("run", run_path, "run file")->required();
    add_config_flags(evaluate, flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(flags);
        if (synth->parsed()) {
            run_synth(spec, synth_corpus, synth_judgments);
            std::cout << "wrote " << synth_corpus << " and " << synth_judgments << '\n';
            return 0;
        }
        if (query->parsed()) return cmd_query(flags, query_text, query_method);
        if (fuse_cmd->parsed()) return cmd_fuse(flags);
        if (train_cmd->parsed()) return cmd_train(flags, with_grid_search);
        if (experiment->parsed()) return cmd_experiment(flags);
        if (evaluate->parsed()) return cmd_evaluate(flags, run_path);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
