#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "expertrank/corpus.hpp"
#include "expertrank/tokenize.hpp"

namespace expertrank {

enum class Stream { title = 0, abstract = 1 };

struct Query {
    std::string id;
    std::string text;
    std::vector<std::string> terms;  // deduplicated, first-occurrence order

    // Formulas treat Terms(q) as a set, so duplicates collapse here.
    static Query parse(std::string query_id, const std::string& text);
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
    // The scoring formula admits two idf variants; the default derives the
    // idf component from document frequency. Setting this uses the per-(doc,
    // term) frequency inside the log instead.
    bool idf_from_term_freq = false;
};

/// Per-stream inverted index. Postings are (pub_id, term frequency) sorted by
/// pub_id; documents with no tokens in the stream are absent entirely.
class Index {
public:
    Index(const Corpus& corpus, Stream stream);

    Stream stream() const { return stream_; }
    const Corpus& corpus() const { return *corpus_; }

    std::size_t n_docs() const { return n_docs_; }
    double avg_doc_len() const { return avg_len_; }

    std::size_t doc_freq(const std::string& term) const;
    const std::vector<std::pair<std::string, int>>* postings(const std::string& term) const;
    int doc_len(const std::string& pub_id) const;  // 0 when absent from the stream

    const std::map<std::string, int>& doc_lengths() const { return doc_len_; }

private:
    Stream stream_;
    const Corpus* corpus_;
    std::map<std::string, std::vector<std::pair<std::string, int>>> postings_;
    std::map<std::string, int> doc_len_;
    std::size_t n_docs_ = 0;
    double avg_len_ = 0.0;
};

inline Index build_index(const Corpus& corpus, Stream stream) { return Index(corpus, stream); }

/// Sum over the author's documents and query terms of Freq(i,d)/|d|.
double tf(const Query& query, const std::string& author, const Index& index);

/// Sum over query terms of ln(|D| / df). Terms absent from the stream
/// contribute 0. Throws std::invalid_argument on an empty query.
double idf(const Query& query, const Index& index);

/// Okapi-style score summed over the author's documents and query terms; the
/// idf component is floored at zero so scores stay non-negative.
double bm25(const Query& query, const std::string& author, const Index& index,
            const Bm25Params& params = {});

/// Pub ids containing at least one query term in either stream, sorted.
std::vector<std::string> matching_pubs(const Query& query, const Index& title_index,
                                       const Index& abstract_index);

struct TextualAuxFeatures {
    double unique_matching_authors = 0;  // corpus-wide over all matching docs
    double matching_year_span = 0;       // author's first to last matching pub
    double sum_doc_len_title = 0;        // over all the author's pubs
    double sum_doc_len_abstract = 0;
};

TextualAuxFeatures textual_aux_features(const Query& query, const std::string& author,
                                        const Corpus& corpus, const Index& title_index,
                                        const Index& abstract_index);

}  // namespace expertrank
