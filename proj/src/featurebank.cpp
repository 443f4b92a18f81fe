#include "expertrank/featurebank.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "expertrank/util.hpp"

namespace expertrank {

const char* feature_group_name(FeatureGroup g) {
    switch (g) {
        case FeatureGroup::textual: return "textual";
        case FeatureGroup::profile: return "profile";
        case FeatureGroup::graph: return "graph";
    }
    return "textual";
}

FeatureGroup feature_group_from_name(const std::string& name) {
    if (name == "textual" || name == "text") return FeatureGroup::textual;
    if (name == "profile") return FeatureGroup::profile;
    if (name == "graph") return FeatureGroup::graph;
    throw std::invalid_argument("unknown feature group: " + name);
}

FeatureRegistry FeatureRegistry::full() {
    FeatureRegistry reg;
    const auto T = FeatureGroup::textual;
    const auto P = FeatureGroup::profile;
    const auto G = FeatureGroup::graph;
    reg.features_ = {
        {"tf_title", T},
        {"idf_title", T},
        {"bm25_title", T},
        {"doc_len_sum_title", T},
        {"tf_abstract", T},
        {"idf_abstract", T},
        {"bm25_abstract", T},
        {"doc_len_sum_abstract", T},
        {"matching_unique_authors", T},
        {"matching_year_span", T},
        {"career_span_years", P},
        {"conf_papers_per_year", P},
        {"journal_papers_per_year", P},
        {"n_conference_pubs", P},
        {"n_conference_pubs_matching", P},
        {"n_conference_pubs_nonmatching", P},
        {"n_journal_pubs", P},
        {"n_journal_pubs_matching", P},
        {"n_journal_pubs_nonmatching", P},
        {"cit_total_matching", G},
        {"cit_avg_matching", G},
        {"cit_max_matching", G},
        {"cit_per_year", G},
        {"n_collaborators", G},
        {"h_index", G},
        {"h_index_matching", G},
        {"contemporary_h_index", G},
        {"trend_h_index", G},
        {"individual_h_index", G},
        {"a_index", G},
        {"g_index", G},
        {"e_index", G},
        {"institution_h_index", G},
        {"pagerank_sum_matching", G},
        {"pagerank_avg_matching", G},
    };
    return reg;
}

FeatureRegistry FeatureRegistry::select(const std::vector<std::string>& names) {
    const FeatureRegistry all = full();
    FeatureRegistry reg;
    std::set<std::string> wanted(names.begin(), names.end());
    for (const auto& f : all.features_)
        if (wanted.count(f.name)) {
            reg.features_.push_back(f);
            wanted.erase(f.name);
        }
    if (!wanted.empty())
        throw std::invalid_argument("unknown feature name: " + *wanted.begin());
    return reg;
}

FeatureRegistry FeatureRegistry::filtered(const std::set<FeatureGroup>& groups) const {
    FeatureRegistry reg;
    for (const auto& f : features_)
        if (groups.count(f.group)) reg.features_.push_back(f);
    return reg;
}

std::vector<std::string> FeatureRegistry::names() const {
    std::vector<std::string> out;
    out.reserve(features_.size());
    for (const auto& f : features_) out.push_back(f.name);
    return out;
}

std::uint64_t FeatureRegistry::fingerprint() const {
    std::uint64_t h = fnv1a("feature-registry-v1");
    for (const auto& f : features_) h = fnv1a(f.name + "\n", h);
    return h;
}

ProfileFeatures profile_features(const std::string& author,
                                 const std::vector<std::string>& matching_pubs,
                                 const Corpus& corpus) {
    ProfileFeatures out;
    auto it = corpus.author_index().find(author);
    if (it == corpus.author_index().end() || it->second.empty()) return out;

    int first = 0, last = 0;
    bool any = false;
    for (const auto& pub_id : it->second) {
        const Publication* p = corpus.find(pub_id);
        if (!any) {
            first = last = p->year;
            any = true;
        } else {
            first = std::min(first, p->year);
            last = std::max(last, p->year);
        }
        const bool matches =
            std::binary_search(matching_pubs.begin(), matching_pubs.end(), pub_id);
        if (p->venue_type == VenueType::conference) {
            out.n_conference += 1;
            (matches ? out.n_conference_matching : out.n_conference_nonmatching) += 1;
        } else if (p->venue_type == VenueType::journal) {
            out.n_journal += 1;
            (matches ? out.n_journal_matching : out.n_journal_nonmatching) += 1;
        }
    }
    out.career_span = last - first;
    const double years = out.career_span + 1;
    out.conf_per_year = out.n_conference / years;
    out.journal_per_year = out.n_journal / years;
    return out;
}

std::optional<std::string> author_institution(const Corpus& corpus, const std::string& author) {
    auto it = corpus.author_index().find(author);
    if (it == corpus.author_index().end()) return std::nullopt;
    std::optional<std::string> best;
    int best_year = 0;
    for (const auto& pub_id : it->second) {  // ascending, so ties keep the earliest id
        const Publication* p = corpus.find(pub_id);
        auto inst = p->institutions.find(author);
        if (inst == p->institutions.end()) continue;
        if (!best || p->year > best_year) {
            best = inst->second;
            best_year = p->year;
        }
    }
    return best;
}

FeaturePipeline::FeaturePipeline(const Corpus& corpus, FeatureParams params,
                                 FeatureRegistry registry)
    : corpus_(&corpus),
      params_(params),
      registry_(std::move(registry)),
      title_(corpus, Stream::title),
      abstract_(corpus, Stream::abstract),
      graph_(build_citation_graph(corpus)) {
    if (params_.scholar.now_year <= 0) {
        int max_year = 0;
        for (const auto& p : corpus.publications()) max_year = std::max(max_year, p.year);
        params_.scholar.now_year = max_year;
    }
    pagerank_ = pagerank(graph_, params_.pagerank);

    std::map<std::string, std::vector<int>> inst_counts;
    for (const auto& p : corpus.publications()) {
        std::set<std::string> insts;
        for (const auto& [author, inst] : p.institutions) insts.insert(inst);
        if (insts.empty()) continue;
        auto node = graph_.node_index(p.id);
        const int cites = node >= 0 ? static_cast<int>(graph_.in_degree(node)) : 0;
        for (const auto& inst : insts) inst_counts[inst].push_back(cites);
    }
    for (const auto& [inst, counts] : inst_counts) institution_h_[inst] = h_index(counts);

    const auto full_names = FeatureRegistry::full().names();
    for (const auto& f : registry_.features()) {
        auto pos = std::find(full_names.begin(), full_names.end(), f.name);
        if (pos == full_names.end())
            throw std::invalid_argument("unknown feature in registry: " + f.name);
        projection_.push_back(static_cast<std::size_t>(pos - full_names.begin()));
    }
}

std::vector<std::string> FeaturePipeline::candidate_pool(const Query& query) const {
    std::set<std::string> authors;
    for (const auto& pub_id : matching(query))
        for (const auto& a : corpus_->find(pub_id)->authors) authors.insert(a);
    return {authors.begin(), authors.end()};
}

FeatureMatrix FeaturePipeline::extract(const Query& query,
                                       std::vector<std::string> candidates) const {
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    FeatureMatrix mat;
    mat.query_id = query.id;
    mat.feature_names = registry_.names();
    mat.fingerprint = registry_.fingerprint();
    mat.authors = candidates;
    mat.rows.reserve(candidates.size());

    const auto match = matching(query);
    const double idf_title = idf(query, title_);
    const double idf_abstract = idf(query, abstract_);

    // corpus-wide matching-author count is constant across candidates
    std::set<std::string> match_authors;
    for (const auto& pub_id : match)
        for (const auto& a : corpus_->find(pub_id)->authors) match_authors.insert(a);
    const double unique_matching_authors = static_cast<double>(match_authors.size());

    for (const auto& author : candidates) {
        std::vector<double> full(FeatureRegistry::full().size(), 0.0);

        const auto aux = textual_aux_features(query, author, *corpus_, title_, abstract_);
        full[0] = tf(query, author, title_);
        full[1] = idf_title;
        full[2] = bm25(query, author, title_, params_.bm25);
        full[3] = aux.sum_doc_len_title;
        full[4] = tf(query, author, abstract_);
        full[5] = idf_abstract;
        full[6] = bm25(query, author, abstract_, params_.bm25);
        full[7] = aux.sum_doc_len_abstract;
        full[8] = unique_matching_authors;
        full[9] = aux.matching_year_span;

        const auto prof = profile_features(author, match, *corpus_);
        full[10] = prof.career_span;
        full[11] = prof.conf_per_year;
        full[12] = prof.journal_per_year;
        full[13] = prof.n_conference;
        full[14] = prof.n_conference_matching;
        full[15] = prof.n_conference_nonmatching;
        full[16] = prof.n_journal;
        full[17] = prof.n_journal_matching;
        full[18] = prof.n_journal_nonmatching;

        const auto cit = citation_count_features(author, match, *corpus_, graph_);
        full[19] = cit.total_matching;
        full[20] = cit.avg_matching;
        full[21] = cit.max_matching;
        full[22] = cit.citations_per_year;
        full[23] = cit.n_collaborators;

        std::vector<int> counts;
        long long total_citations = 0;
        for (const auto& rec : author_citation_records(author, *corpus_, graph_)) {
            counts.push_back(rec.n_citations);
            total_citations += rec.n_citations;
        }
        const int h = h_index(counts);
        full[24] = h;
        full[25] = h_index_query(author, match, *corpus_, graph_);
        full[26] = contemporary_h(author, params_.scholar, *corpus_, graph_);
        full[27] = trend_h(author, params_.scholar, *corpus_, graph_);
        full[28] = individual_h(author, *corpus_, graph_);
        full[29] = a_index(total_citations, h);
        full[30] = g_index(counts);
        full[31] = e_index(counts);
        if (auto inst = author_institution(*corpus_, author)) {
            auto it = institution_h_.find(*inst);
            if (it != institution_h_.end()) full[32] = it->second;
        }
        const auto pr = pagerank_features(author, match, pagerank_, *corpus_, graph_);
        full[33] = pr.sum;
        full[34] = pr.avg;

        std::vector<double> row(projection_.size());
        for (std::size_t i = 0; i < projection_.size(); ++i) row[i] = full[projection_[i]];
        mat.rows.push_back(std::move(row));
    }
    return mat;
}

FeatureMatrix project(const FeatureMatrix& matrix, const FeatureRegistry& registry) {
    std::vector<std::size_t> cols;
    for (const auto& f : registry.features()) {
        auto it = std::find(matrix.feature_names.begin(), matrix.feature_names.end(), f.name);
        if (it == matrix.feature_names.end())
            throw std::invalid_argument("project: feature missing from matrix: " + f.name);
        cols.push_back(static_cast<std::size_t>(it - matrix.feature_names.begin()));
    }
    FeatureMatrix out;
    out.query_id = matrix.query_id;
    out.feature_names = registry.names();
    out.fingerprint = registry.fingerprint();
    out.authors = matrix.authors;
    out.rows.reserve(matrix.rows.size());
    for (const auto& row : matrix.rows) {
        std::vector<double> projected(cols.size());
        for (std::size_t i = 0; i < cols.size(); ++i) projected[i] = row[cols[i]];
        out.rows.push_back(std::move(projected));
    }
    return out;
}

void save_feature_matrices_tsv(const std::string& path, const std::vector<FeatureMatrix>& mats) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write feature matrix file: " + path);
    if (mats.empty()) return;
    out << "query_id\tauthor_id";
    for (const auto& name : mats.front().feature_names) out << '\t' << name;
    out << '\n';
    for (const auto& mat : mats) {
        if (mat.feature_names != mats.front().feature_names)
            throw std::invalid_argument("feature matrices with mixed layouts in one file");
        for (std::size_t r = 0; r < mat.authors.size(); ++r) {
            out << mat.query_id << '\t' << mat.authors[r];
            for (double v : mat.rows[r]) out << '\t' << fmt_double(v, 9);
            out << '\n';
        }
    }
}

std::vector<FeatureMatrix> load_feature_matrices_tsv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read feature matrix file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty feature matrix file: " + path);

    std::vector<std::string> header;
    {
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, '\t')) header.push_back(cell);
    }
    if (header.size() < 3 || header[0] != "query_id" || header[1] != "author_id")
        throw std::runtime_error("bad feature matrix header: " + path);
    std::vector<std::string> names(header.begin() + 2, header.end());

    std::uint64_t fp = fnv1a("feature-registry-v1");
    for (const auto& n : names) fp = fnv1a(n + "\n", fp);

    std::vector<FeatureMatrix> mats;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string qid, author, cell;
        std::getline(ss, qid, '\t');
        std::getline(ss, author, '\t');
        std::vector<double> row;
        while (std::getline(ss, cell, '\t')) row.push_back(std::stod(cell));
        if (row.size() != names.size())
            throw std::runtime_error("feature row width mismatch in " + path);
        if (mats.empty() || mats.back().query_id != qid) {
            FeatureMatrix mat;
            mat.query_id = qid;
            mat.feature_names = names;
            mat.fingerprint = fp;
            mats.push_back(std::move(mat));
        }
        mats.back().authors.push_back(author);
        mats.back().rows.push_back(std::move(row));
    }
    return mats;
}

}  // namespace expertrank
