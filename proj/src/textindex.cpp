#include "expertrank/textindex.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace expertrank {

Query Query::parse(std::string query_id, const std::string& text) {
    Query q;
    q.id = std::move(query_id);
    q.text = text;
    for (auto& t : tokenize(text))
        if (std::find(q.terms.begin(), q.terms.end(), t) == q.terms.end())
            q.terms.push_back(std::move(t));
    return q;
}

Index::Index(const Corpus& corpus, Stream stream) : stream_(stream), corpus_(&corpus) {
    for (const auto& p : corpus.publications()) {
        const std::string* text = nullptr;
        if (stream == Stream::title) {
            text = &p.title;
        } else if (p.abstract_text) {
            text = &*p.abstract_text;
        }
        if (!text) continue;
        auto terms = tokenize(*text);
        if (terms.empty()) continue;
        doc_len_[p.id] = static_cast<int>(terms.size());
        n_docs_ += 1;
        std::map<std::string, int> freqs;
        for (auto& t : terms) freqs[t] += 1;
        for (auto& [term, freq] : freqs) postings_[term].emplace_back(p.id, freq);
    }
    // Corpus publications may arrive in any order; the postings contract is
    // pub_id ascending.
    std::size_t total = 0;
    for (auto& [term, plist] : postings_) {
        std::sort(plist.begin(), plist.end());
        (void)term;
    }
    for (const auto& [id, len] : doc_len_) total += static_cast<std::size_t>(len);
    avg_len_ = n_docs_ ? static_cast<double>(total) / n_docs_ : 0.0;
}

std::size_t Index::doc_freq(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
}

const std::vector<std::pair<std::string, int>>* Index::postings(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

int Index::doc_len(const std::string& pub_id) const {
    auto it = doc_len_.find(pub_id);
    return it == doc_len_.end() ? 0 : it->second;
}

namespace {

// Walks the author's (sorted) pub ids against a term's postings list and
// calls fn(pub_id, freq) for each doc of the author containing the term.
template <typename Fn>
void for_each_author_posting(const Corpus& corpus, const std::string& author,
                             const std::vector<std::pair<std::string, int>>& postings, Fn&& fn) {
    auto it = corpus.author_index().find(author);
    if (it == corpus.author_index().end()) return;
    const auto& docs = it->second;
    std::size_t di = 0, pi = 0;
    while (di < docs.size() && pi < postings.size()) {
        int cmp = docs[di].compare(postings[pi].first);
        if (cmp == 0) {
            fn(postings[pi].first, postings[pi].second);
            ++di;
            ++pi;
        } else if (cmp < 0) {
            ++di;
        } else {
            ++pi;
        }
    }
}

}  // namespace

double tf(const Query& query, const std::string& author, const Index& index) {
    double total = 0.0;
    for (const auto& term : query.terms) {
        const auto* plist = index.postings(term);
        if (!plist) continue;
        for_each_author_posting(index.corpus(), author, *plist,
                                [&](const std::string& pub_id, int freq) {
                                    total += static_cast<double>(freq) / index.doc_len(pub_id);
                                });
    }
    return total;
}

double idf(const Query& query, const Index& index) {
    if (query.terms.empty()) throw std::invalid_argument("idf: empty query");
    double total = 0.0;
    for (const auto& term : query.terms) {
        std::size_t df = index.doc_freq(term);
        if (df == 0) continue;
        total += std::log(static_cast<double>(index.n_docs()) / static_cast<double>(df));
    }
    return total;
}

double bm25(const Query& query, const std::string& author, const Index& index,
            const Bm25Params& params) {
    const double n = static_cast<double>(index.n_docs());
    const double avg = index.avg_doc_len();
    double total = 0.0;
    for (const auto& term : query.terms) {
        const auto* plist = index.postings(term);
        if (!plist) continue;
        const double df = static_cast<double>(plist->size());
        const double df_idf = std::max(0.0, std::log((n - df + 0.5) / (df + 0.5)));
        for_each_author_posting(
            index.corpus(), author, *plist, [&](const std::string& pub_id, int freq) {
                const double dl = index.doc_len(pub_id);
                const double norm_freq = freq / dl;
                double idf_component = df_idf;
                if (params.idf_from_term_freq)
                    idf_component = std::max(0.0, std::log((n - freq + 0.5) / (freq + 0.5)));
                const double saturation =
                    (params.k1 + 1.0) * norm_freq /
                    (norm_freq + params.k1 * (1.0 - params.b + params.b * dl / avg));
                total += idf_component * saturation;
            });
    }
    return total;
}

std::vector<std::string> matching_pubs(const Query& query, const Index& title_index,
                                       const Index& abstract_index) {
    std::set<std::string> hit;
    for (const Index* idx : {&title_index, &abstract_index}) {
        for (const auto& term : query.terms) {
            const auto* plist = idx->postings(term);
            if (!plist) continue;
            for (const auto& [pub_id, freq] : *plist) hit.insert(pub_id);
        }
    }
    return {hit.begin(), hit.end()};
}

TextualAuxFeatures textual_aux_features(const Query& query, const std::string& author,
                                        const Corpus& corpus, const Index& title_index,
                                        const Index& abstract_index) {
    TextualAuxFeatures out;

    auto matches = matching_pubs(query, title_index, abstract_index);
    std::set<std::string> unique_authors;
    for (const auto& id : matches) {
        const Publication* p = corpus.find(id);
        for (const auto& a : p->authors) unique_authors.insert(a);
    }
    out.unique_matching_authors = static_cast<double>(unique_authors.size());

    auto it = corpus.author_index().find(author);
    if (it != corpus.author_index().end()) {
        int first = 0, last = 0;
        bool any = false;
        for (const auto& id : it->second) {
            out.sum_doc_len_title += title_index.doc_len(id);
            out.sum_doc_len_abstract += abstract_index.doc_len(id);
            if (std::binary_search(matches.begin(), matches.end(), id)) {
                int y = corpus.find(id)->year;
                if (!any) {
                    first = last = y;
                    any = true;
                } else {
                    first = std::min(first, y);
                    last = std::max(last, y);
                }
            }
        }
        if (any) out.matching_year_span = last - first;
    }
    return out;
}

}  // namespace expertrank
