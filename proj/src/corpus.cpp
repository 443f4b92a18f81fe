#include "expertrank/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "expertrank/tokenize.hpp"

namespace expertrank {

using nlohmann::json;

const char* venue_type_name(VenueType t) {
    switch (t) {
        case VenueType::journal: return "journal";
        case VenueType::conference: return "conference";
        case VenueType::other: return "other";
    }
    return "other";
}

VenueType venue_type_from_name(const std::string& name) {
    if (name == "journal") return VenueType::journal;
    if (name == "conference") return VenueType::conference;
    if (name == "other") return VenueType::other;
    throw std::invalid_argument("unknown venue_type: " + name);
}

Corpus::Corpus(std::vector<Publication> pubs) : pubs_(std::move(pubs)) {
    by_id_.reserve(pubs_.size());
    for (std::size_t i = 0; i < pubs_.size(); ++i) {
        by_id_.emplace(pubs_[i].id, i);
        for (const auto& a : pubs_[i].authors) author_index_[a].push_back(pubs_[i].id);
    }
    for (auto& [author, ids] : author_index_) std::sort(ids.begin(), ids.end());

    stats_.n_docs_total = pubs_.size();
    for (const auto& p : pubs_) {
        const std::string* texts[2] = {&p.title, p.abstract_text ? &*p.abstract_text : nullptr};
        for (int s = 0; s < 2; ++s) {
            if (!texts[s]) continue;
            auto terms = tokenize(*texts[s]);
            if (terms.empty()) continue;
            stats_.n_docs[s] += 1;
            stats_.total_tokens[s] += terms.size();
            std::set<std::string> uniq(terms.begin(), terms.end());
            for (const auto& t : uniq) stats_.doc_freq[s][t] += 1;
        }
    }
    for (int s = 0; s < 2; ++s)
        stats_.avg_doc_len[s] =
            stats_.n_docs[s] ? static_cast<double>(stats_.total_tokens[s]) / stats_.n_docs[s] : 0.0;
}

const Publication* Corpus::find(const std::string& pub_id) const {
    auto it = by_id_.find(pub_id);
    return it == by_id_.end() ? nullptr : &pubs_[it->second];
}

namespace {

Publication parse_record(const json& j) {
    Publication p;
    p.id = j.at("id").get<std::string>();
    if (p.id.empty()) throw std::invalid_argument("empty id");
    p.title = j.at("title").get<std::string>();
    if (j.contains("abstract") && !j.at("abstract").is_null())
        p.abstract_text = j.at("abstract").get<std::string>();
    p.year = j.at("year").get<int>();
    if (p.year <= 0) throw std::invalid_argument("year must be positive");
    p.venue = j.value("venue", std::string{});
    p.venue_type = venue_type_from_name(j.value("venue_type", std::string{"other"}));
    p.authors = j.at("authors").get<std::vector<std::string>>();
    if (p.authors.empty()) throw std::invalid_argument("authors must be non-empty");
    if (j.contains("institutions") && !j.at("institutions").is_null())
        p.institutions = j.at("institutions").get<std::map<std::string, std::string>>();
    if (j.contains("references") && !j.at("references").is_null())
        p.references = j.at("references").get<std::vector<std::string>>();
    return p;
}

}  // namespace

Corpus load_corpus(const std::string& path, LoadReport* report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read corpus file: " + path);

    LoadReport local;
    LoadReport& rep = report ? *report : local;

    std::vector<Publication> pubs;
    std::map<std::string, std::size_t> first_line_of_id;  // pub_id -> line number
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Publication p;
        try {
            p = parse_record(json::parse(line));
        } catch (const std::exception& e) {
            rep.malformed.push_back({line_no, e.what()});
            continue;
        }
        auto [it, inserted] = first_line_of_id.emplace(p.id, line_no);
        if (!inserted) {
            std::ostringstream msg;
            msg << "duplicate pub_id '" << p.id << "' on lines " << it->second << " and "
                << line_no;
            throw std::runtime_error(msg.str());
        }
        auto self = std::remove(p.references.begin(), p.references.end(), p.id);
        if (self != p.references.end()) {
            p.references.erase(self, p.references.end());
            rep.self_citations_dropped += 1;
            rep.warnings.push_back("self-citation dropped in '" + p.id + "' (line " +
                                   std::to_string(line_no) + ")");
        }
        pubs.push_back(std::move(p));
    }
    if (pubs.empty()) throw std::runtime_error("corpus contains no valid records: " + path);
    return Corpus(std::move(pubs));
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    for (const auto& p : corpus.publications()) {
        json j;
        j["id"] = p.id;
        j["title"] = p.title;
        j["abstract"] = p.abstract_text ? json(*p.abstract_text) : json(nullptr);
        j["year"] = p.year;
        j["venue"] = p.venue;
        j["venue_type"] = venue_type_name(p.venue_type);
        j["authors"] = p.authors;
        j["institutions"] = p.institutions.empty() ? json(nullptr) : json(p.institutions);
        j["references"] = p.references;
        out << j.dump() << '\n';
    }
}

CitationGraph::CitationGraph(std::vector<std::string> node_ids,
                             std::vector<std::vector<std::uint32_t>> in_adjacency,
                             std::vector<std::uint32_t> out_degree,
                             std::size_t n_dangling)
    : ids_(std::move(node_ids)),
      in_adj_(std::move(in_adjacency)),
      out_degree_(std::move(out_degree)),
      n_dangling_(n_dangling) {
    index_.reserve(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], i);
    for (const auto& links : in_adj_) n_edges_ += links.size();
}

std::int64_t CitationGraph::node_index(const std::string& pub_id) const {
    auto it = index_.find(pub_id);
    return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

CitationGraph build_citation_graph(const Corpus& corpus) {
    const auto& pubs = corpus.publications();
    std::vector<std::string> ids(pubs.size());
    std::unordered_map<std::string, std::uint32_t> idx;
    idx.reserve(pubs.size());
    for (std::size_t i = 0; i < pubs.size(); ++i) {
        ids[i] = pubs[i].id;
        idx.emplace(pubs[i].id, static_cast<std::uint32_t>(i));
    }

    std::vector<std::vector<std::uint32_t>> in_adj(pubs.size());
    std::vector<std::uint32_t> out_deg(pubs.size(), 0);
    std::size_t dangling = 0;
    for (std::size_t i = 0; i < pubs.size(); ++i) {
        for (const auto& ref : pubs[i].references) {
            auto it = idx.find(ref);
            if (it == idx.end()) {
                ++dangling;
                continue;
            }
            in_adj[it->second].push_back(static_cast<std::uint32_t>(i));
            out_deg[i] += 1;
        }
    }
    for (auto& links : in_adj) std::sort(links.begin(), links.end());
    return CitationGraph(std::move(ids), std::move(in_adj), std::move(out_deg), dangling);
}

Corpus filter_venues(const Corpus& corpus, const std::set<VenueType>& keep) {
    std::vector<Publication> pubs;
    for (const auto& p : corpus.publications())
        if (keep.count(p.venue_type)) pubs.push_back(p);
    return Corpus(std::move(pubs));
}

std::vector<const Publication*> author_documents(const Corpus& corpus, const std::string& author) {
    std::vector<const Publication*> docs;
    auto it = corpus.author_index().find(author);
    if (it == corpus.author_index().end()) return docs;
    docs.reserve(it->second.size());
    for (const auto& id : it->second) docs.push_back(corpus.find(id));
    return docs;
}

}  // namespace expertrank
