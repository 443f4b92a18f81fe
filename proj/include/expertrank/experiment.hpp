#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "expertrank/eval.hpp"
#include "expertrank/featurebank.hpp"
#include "expertrank/ltr.hpp"
#include "expertrank/synth.hpp"

namespace expertrank {

struct RunConfig {
    std::string corpus_path;
    std::string judgments_path;
    std::string out_dir;
    std::string model_path;
    FeatureParams feature_params;
    std::set<FeatureGroup> feature_groups;  // empty means all three
    std::set<VenueType> venue_filter;       // empty means ingest every venue type
    std::uint64_t seed = 1;
    bool seed_explicit = false;
    int folds = 4;
    int topn = 20;
    int n_permutations = 10000;
    bool ablation = false;
    std::vector<std::string> fusion_methods;                          // e.g. {"condorcet"}
    std::vector<std::string> algorithms;                              // e.g. {"groves"}
    std::map<std::string, std::map<std::string, std::vector<double>>> grids;  // algo -> axis -> values
    RankMetric train_metric = RankMetric::map;

    /// Flat key=value file; '#' starts a comment. CLI flags override values.
    static RunConfig from_file(const std::string& path);
    void set(const std::string& key, const std::string& value);
};

struct IngestStats {
    std::size_t n_authors = 0;
    std::size_t n_publications = 0;
    std::size_t n_with_abstract = 0;
    std::size_t n_conference = 0;
    std::size_t n_journal = 0;
    std::size_t n_citation_links = 0;
    std::size_t n_dangling = 0;
    std::size_t n_malformed = 0;
    std::size_t n_self_citations_dropped = 0;
    LoadReport report;

    std::string to_table() const;
};

IngestStats run_ingest(const std::string& corpus_path);

void run_synth(const SynthSpec& spec, const std::string& corpus_out,
               const std::string& judgments_out);

/// Ad-hoc query over the full candidate pool; method is a fusion name or
/// "model" (scored by the model at config.model_path).
RankedList run_query(const RunConfig& config, const std::string& query_text,
                     const std::string& method);

struct ExperimentResult {
    std::vector<std::string> system_names;                  // report order
    std::map<std::string, MetricReport> reports;
    std::map<std::string, std::map<std::string, double>> p_values;  // AP-based, pairwise
    std::vector<std::string> warnings;
    std::vector<std::string> files_written;
};

/// The full cross-validation protocol: balanced instance sets, outer k folds,
/// per-fold grid search for each learning algorithm, direct per-query fusion
/// for the unsupervised methods, one run file + report per system, plus the
/// pairwise randomization-test matrix. With `ablation` set, each system runs
/// once per feature-group combination instead.
ExperimentResult run_experiment(const RunConfig& config);

}  // namespace expertrank
