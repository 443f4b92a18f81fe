#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "expertrank/corpus.hpp"
#include "expertrank/scholarmetrics.hpp"
#include "expertrank/textindex.hpp"

namespace expertrank {

enum class FeatureGroup { textual, profile, graph };

const char* feature_group_name(FeatureGroup g);
FeatureGroup feature_group_from_name(const std::string& name);

struct FeatureDescriptor {
    std::string name;
    FeatureGroup group;
};

/// Ordered feature layout. The order is the vector-layout contract: models and
/// matrices carry its fingerprint and refuse to mix layouts.
class FeatureRegistry {
public:
    static FeatureRegistry full();

    /// Subset of the full registry by name, keeping canonical order.
    static FeatureRegistry select(const std::vector<std::string>& names);

    FeatureRegistry filtered(const std::set<FeatureGroup>& groups) const;

    std::size_t size() const { return features_.size(); }
    const std::vector<FeatureDescriptor>& features() const { return features_; }
    std::vector<std::string> names() const;
    std::uint64_t fingerprint() const;

private:
    std::vector<FeatureDescriptor> features_;
};

struct FeatureMatrix {
    std::string query_id;
    std::vector<std::string> feature_names;
    std::uint64_t fingerprint = 0;
    std::vector<std::string> authors;            // ascending
    std::vector<std::vector<double>> rows;       // aligned to authors
};

void save_feature_matrices_tsv(const std::string& path, const std::vector<FeatureMatrix>& mats);
std::vector<FeatureMatrix> load_feature_matrices_tsv(const std::string& path);

/// Column projection onto a sub-registry; used by the ablation harness.
FeatureMatrix project(const FeatureMatrix& matrix, const FeatureRegistry& registry);

struct ProfileFeatures {
    double career_span = 0;
    double conf_per_year = 0;
    double journal_per_year = 0;
    double n_conference = 0;
    double n_conference_matching = 0;
    double n_conference_nonmatching = 0;
    double n_journal = 0;
    double n_journal_matching = 0;
    double n_journal_nonmatching = 0;
};

/// Publication-record features. Rates divide by career span + 1 years so a
/// single-year career divides by 1. `matching_pubs` sorted ascending.
ProfileFeatures profile_features(const std::string& author,
                                 const std::vector<std::string>& matching_pubs,
                                 const Corpus& corpus);

/// Institution on the author's most recent publication carrying one (ties go
/// to the smallest pub id); nullopt when no publication names one.
std::optional<std::string> author_institution(const Corpus& corpus, const std::string& author);

struct FeatureParams {
    Bm25Params bm25;
    IndexParams scholar;     // now_year <= 0 means "use the corpus max year"
    PageRankParams pagerank;
};

/// Owns the indexes, citation graph and PageRank vector for one corpus and
/// assembles feature matrices from them. Immutable after construction.
class FeaturePipeline {
public:
    FeaturePipeline(const Corpus& corpus, FeatureParams params,
                    FeatureRegistry registry = FeatureRegistry::full());
    // the pipeline keeps a pointer to the corpus; temporaries would dangle
    FeaturePipeline(Corpus&&, FeatureParams, FeatureRegistry = FeatureRegistry::full()) = delete;

    const Corpus& corpus() const { return *corpus_; }
    const Index& title_index() const { return title_; }
    const Index& abstract_index() const { return abstract_; }
    const CitationGraph& graph() const { return graph_; }
    const std::vector<double>& pagerank_scores() const { return pagerank_; }
    const FeatureRegistry& registry() const { return registry_; }
    const FeatureParams& params() const { return params_; }

    /// Authors with at least one publication containing a query term in the
    /// title or abstract, ascending.
    std::vector<std::string> candidate_pool(const Query& query) const;

    std::vector<std::string> matching(const Query& query) const {
        return matching_pubs(query, title_, abstract_);
    }

    /// One row per candidate, every registry feature populated; absent
    /// evidence scores 0. Candidates are sorted into ascending order.
    FeatureMatrix extract(const Query& query, std::vector<std::string> candidates) const;

    FeatureMatrix extract_pool(const Query& query) const {
        return extract(query, candidate_pool(query));
    }

private:
    const Corpus* corpus_;
    FeatureParams params_;
    FeatureRegistry registry_;
    Index title_;
    Index abstract_;
    CitationGraph graph_;
    std::vector<double> pagerank_;
    std::map<std::string, int> institution_h_;  // precomputed per institution
    std::vector<std::size_t> projection_;       // registry slot -> full-row slot
};

}  // namespace expertrank
