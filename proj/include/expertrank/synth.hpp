#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "expertrank/corpus.hpp"
#include "expertrank/ltr.hpp"

namespace expertrank {

/// Desk-scale corpus generator with planted experts. Each topic gets a block
/// of expert authors who write more topic-bearing and better-cited papers,
/// plus "noisy" prolific authors whose papers carry topic terms but attract
/// few citations.
struct SynthSpec {
    std::size_t n_pubs = 5000;
    std::size_t n_authors = 500;
    std::size_t n_topics = 10;
    std::size_t experts_per_topic = 5;
    double term_boost = 1.0;      // topic-term rate in expert papers
    double citation_boost = 1.0;  // share of references steered at expert papers
    std::uint64_t seed = 1;
};

struct SynthBookkeeping {
    std::size_t n_conference = 0;
    std::size_t n_journal = 0;
    std::size_t n_other = 0;
    std::size_t n_with_abstract = 0;
    std::size_t n_resolvable_references = 0;
    std::size_t n_dangling_references = 0;
    std::map<std::string, std::vector<std::string>> experts_by_query;
};

struct SynthResult {
    std::vector<Publication> publications;
    Judgments judgments;
    SynthBookkeeping stats;
};

SynthResult generate_synthetic(const SynthSpec& spec);

}  // namespace expertrank
