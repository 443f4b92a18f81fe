#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace expertrank {

enum class VenueType { journal, conference, other };

const char* venue_type_name(VenueType t);
VenueType venue_type_from_name(const std::string& name);

struct Publication {
    std::string id;
    std::string title;
    std::optional<std::string> abstract_text;
    int year = 0;
    std::string venue;
    VenueType venue_type = VenueType::other;
    std::vector<std::string> authors;                    // ordered as published
    std::map<std::string, std::string> institutions;     // author_id -> institution_id
    std::vector<std::string> references;                 // outgoing citations (pub ids)
};

// Per-stream token statistics computed at load time with the shared tokenizer.
// Stream 0 = title, stream 1 = abstract.
struct CorpusStats {
    std::size_t n_docs_total = 0;
    std::size_t n_docs[2] = {0, 0};          // docs with at least one token in the stream
    std::size_t total_tokens[2] = {0, 0};
    double avg_doc_len[2] = {0.0, 0.0};
    std::map<std::string, std::size_t> doc_freq[2];

    bool operator==(const CorpusStats&) const = default;
};

struct LoadReport {
    struct BadLine {
        std::size_t line_number;
        std::string reason;
    };
    std::vector<BadLine> malformed;
    std::size_t self_citations_dropped = 0;
    std::vector<std::string> warnings;
};

class Corpus {
public:
    Corpus() = default;
    explicit Corpus(std::vector<Publication> pubs);

    const std::vector<Publication>& publications() const { return pubs_; }
    const Publication* find(const std::string& pub_id) const;
    bool contains(const std::string& pub_id) const { return find(pub_id) != nullptr; }

    // author_id -> pub ids, values sorted ascending; exact inverse of authorship
    const std::map<std::string, std::vector<std::string>>& author_index() const { return author_index_; }

    const CorpusStats& stats() const { return stats_; }

    std::size_t size() const { return pubs_.size(); }

private:
    std::vector<Publication> pubs_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::map<std::string, std::vector<std::string>> author_index_;
    CorpusStats stats_;
};

// Directed citation graph over publication ids: edge citing -> cited.
// Nodes are every pub in the corpus; references that do not resolve are
// excluded from edges and only counted.
class CitationGraph {
public:
    CitationGraph() = default;
    CitationGraph(std::vector<std::string> node_ids,
                  std::vector<std::vector<std::uint32_t>> in_adjacency,
                  std::vector<std::uint32_t> out_degree,
                  std::size_t n_dangling);

    std::size_t n_nodes() const { return ids_.size(); }
    std::size_t n_edges() const { return n_edges_; }
    std::size_t n_dangling_references() const { return n_dangling_; }

    // -1 when the pub id is not a node
    std::int64_t node_index(const std::string& pub_id) const;
    const std::string& node_id(std::size_t idx) const { return ids_[idx]; }

    const std::vector<std::uint32_t>& in_links(std::size_t idx) const { return in_adj_[idx]; }
    std::uint32_t out_degree(std::size_t idx) const { return out_degree_[idx]; }
    std::size_t in_degree(std::size_t idx) const { return in_adj_[idx].size(); }

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::vector<std::uint32_t>> in_adj_;
    std::vector<std::uint32_t> out_degree_;
    std::size_t n_edges_ = 0;
    std::size_t n_dangling_ = 0;
};

/// Loads a JSONL corpus (one publication object per line). Malformed lines are
/// collected into the report; duplicate pub ids and empty files are fatal
/// (std::runtime_error). Self-citations are dropped with a warning.
Corpus load_corpus(const std::string& path, LoadReport* report = nullptr);

/// Writes the corpus back out in the same JSONL record format.
void save_corpus(const Corpus& corpus, const std::string& path);

CitationGraph build_citation_graph(const Corpus& corpus);

/// Copy of the corpus keeping only the listed venue types.
Corpus filter_venues(const Corpus& corpus, const std::set<VenueType>& keep);

/// All publications listing the author, sorted by pub id. Unknown authors
/// yield an empty list; unknown ids are legal at query time.
std::vector<const Publication*> author_documents(const Corpus& corpus, const std::string& author);

}  // namespace expertrank
