#include "expertrank/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

#include "expertrank/util.hpp"

namespace expertrank {

namespace {

std::string author_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "a%04zu", i);
    return buf;
}

std::string pub_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%05zu", i);
    return buf;
}

std::string word(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "w%03zu", i);
    return buf;
}

}  // namespace

SynthResult generate_synthetic(const SynthSpec& spec) {
    if (spec.n_pubs == 0 || spec.n_authors == 0 || spec.n_topics == 0)
        throw std::invalid_argument("generate_synthetic: empty spec");
    if (spec.experts_per_topic * spec.n_topics > spec.n_authors)
        throw std::invalid_argument(
            "generate_synthetic: not enough authors for the planted experts");

    const std::size_t P = spec.experts_per_topic;
    const std::size_t n_experts = P * spec.n_topics;
    const std::size_t noisy_per_topic =
        std::min<std::size_t>(2 * P, (spec.n_authors - n_experts) / std::max<std::size_t>(
                                          1, spec.n_topics));
    const std::size_t n_vocab = 300;
    const std::size_t n_institutions = 20;

    std::mt19937_64 rng(spec.seed);

    auto expert_of = [&](std::size_t topic, std::size_t k) { return topic * P + k; };
    auto noisy_of = [&](std::size_t topic, std::size_t j) {
        return n_experts + topic * noisy_per_topic + j;
    };
    // expert k gets selection weight P - k + 1: a strength ladder inside each
    // topic whose floor stays above the ambient authors' productivity
    const std::size_t weight_total = P * (P + 3) / 2;
    auto pick_expert = [&](std::size_t topic) {
        std::size_t roll = rng_below(rng, weight_total);
        for (std::size_t k = 0; k < P; ++k) {
            const std::size_t w = P - k + 1;
            if (roll < w) return expert_of(topic, k);
            roll -= w;
        }
        return expert_of(topic, P - 1);
    };

    auto topic_term = [&](std::size_t topic, char which) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "topic%02zu%c", topic, which);
        return std::string(buf);
    };

    auto random_words = [&](std::size_t count) {
        std::string text;
        for (std::size_t i = 0; i < count; ++i) {
            if (!text.empty()) text.push_back(' ');
            text += word(rng_below(rng, n_vocab));
        }
        return text;
    };

    const double term_a_rate = std::min(1.0, 0.95 * spec.term_boost);
    const double term_b_rate = std::min(1.0, 0.80 * spec.term_boost);
    const double cite_expert_rate = std::min(0.9, 0.45 * spec.citation_boost);

    SynthResult result;
    result.publications.resize(spec.n_pubs);
    std::vector<std::size_t> expert_pub_ids;

    for (std::size_t i = 0; i < spec.n_pubs; ++i) {
        Publication& p = result.publications[i];
        p.id = pub_name(i);
        p.year = 1995 + static_cast<int>(rng_below(rng, 30));
        p.venue = "venue" + std::to_string(rng_below(rng, 30));
        const double venue_roll = rng_unit(rng);
        p.venue_type = venue_roll < 0.45   ? VenueType::conference
                       : venue_roll < 0.90 ? VenueType::journal
                                           : VenueType::other;

        const double class_roll = rng_unit(rng);
        std::string title = random_words(3 + rng_below(rng, 5));
        bool topical_abstract = false;
        std::size_t topic = 0;
        const std::size_t background_lo = n_experts + spec.n_topics * noisy_per_topic;
        if (class_roll < 0.28) {  // expert paper
            topic = rng_below(rng, spec.n_topics);
            expert_pub_ids.push_back(i);
            p.authors.push_back(author_name(pick_expert(topic)));
            if (rng_unit(rng) < 0.30) {
                auto second = author_name(pick_expert(topic));
                if (second != p.authors[0]) p.authors.push_back(second);
            }
            const std::size_t extras = rng_below(rng, 2);
            for (std::size_t e = 0; e < extras && background_lo < spec.n_authors; ++e)
                p.authors.push_back(
                    author_name(background_lo + rng_below(rng, spec.n_authors - background_lo)));
            if (rng_unit(rng) < term_a_rate) title += " " + topic_term(topic, 'a');
            if (rng_unit(rng) < term_b_rate) title += " " + topic_term(topic, 'b');
            topical_abstract = true;
        } else if (class_roll < 0.50 && noisy_per_topic > 0) {  // noisy topical paper
            // term-stuffed but poorly cited: these authors confuse pure text
            // scores without looking like experts anywhere else
            topic = rng_below(rng, spec.n_topics);
            p.authors.push_back(author_name(noisy_of(topic, rng_below(rng, noisy_per_topic))));
            const std::size_t extras = rng_below(rng, 2);
            for (std::size_t e = 0; e < extras && background_lo < spec.n_authors; ++e)
                p.authors.push_back(
                    author_name(background_lo + rng_below(rng, spec.n_authors - background_lo)));
            const std::size_t stuffed = 2 + rng_below(rng, 3);
            for (std::size_t s = 0; s < stuffed; ++s) title += " " + topic_term(topic, 'a');
            if (rng_unit(rng) < 0.40) title += " " + topic_term(topic, 'b');
            topical_abstract = true;
        } else {  // background paper
            const std::size_t lo = background_lo < spec.n_authors ? background_lo : 0;
            const std::size_t n_auth = 1 + rng_below(rng, 2);
            for (std::size_t e = 0; e < n_auth; ++e)
                p.authors.push_back(author_name(lo + rng_below(rng, spec.n_authors - lo)));
        }
        std::sort(p.authors.begin(), p.authors.end());
        p.authors.erase(std::unique(p.authors.begin(), p.authors.end()), p.authors.end());
        p.title = title;

        if (rng_unit(rng) < 0.60) {
            std::string abstract = random_words(8 + rng_below(rng, 10));
            if (topical_abstract && rng_unit(rng) < 0.50)
                abstract += " " + topic_term(topic, 'a');
            p.abstract_text = abstract;
        }

        for (const auto& a : p.authors) {
            std::size_t idx = 0;
            std::sscanf(a.c_str(), "a%zu", &idx);
            p.institutions[a] = "inst" + std::to_string(idx % n_institutions);
        }
    }

    // second pass: references, steered toward expert papers
    for (std::size_t i = 0; i < spec.n_pubs; ++i) {
        Publication& p = result.publications[i];
        const std::size_t n_refs = rng_below(rng, 7);
        for (std::size_t r = 0; r < n_refs; ++r) {
            if (rng_unit(rng) < 0.01) {
                p.references.push_back("extern" + std::to_string(rng_below(rng, 1000)));
                result.stats.n_dangling_references += 1;
                continue;
            }
            std::size_t target;
            if (!expert_pub_ids.empty() && rng_unit(rng) < cite_expert_rate)
                target = expert_pub_ids[rng_below(rng, expert_pub_ids.size())];
            else
                target = rng_below(rng, spec.n_pubs);
            if (target == i) continue;
            p.references.push_back(pub_name(target));
            result.stats.n_resolvable_references += 1;
        }
        std::sort(p.references.begin(), p.references.end());
        p.references.erase(std::unique(p.references.begin(), p.references.end()),
                           p.references.end());
    }
    // dedupe can drop references; recount so the bookkeeping stays exact
    result.stats.n_resolvable_references = 0;
    result.stats.n_dangling_references = 0;
    for (const auto& p : result.publications) {
        for (const auto& ref : p.references) {
            if (ref.rfind("extern", 0) == 0)
                result.stats.n_dangling_references += 1;
            else
                result.stats.n_resolvable_references += 1;
        }
    }

    for (const auto& p : result.publications) {
        switch (p.venue_type) {
            case VenueType::conference: result.stats.n_conference += 1; break;
            case VenueType::journal: result.stats.n_journal += 1; break;
            case VenueType::other: result.stats.n_other += 1; break;
        }
        if (p.abstract_text) result.stats.n_with_abstract += 1;
    }

    for (std::size_t t = 0; t < spec.n_topics; ++t) {
        char qid[8];
        std::snprintf(qid, sizeof(qid), "q%02zu", t);
        auto& entry = result.judgments.queries[qid];
        entry.text = topic_term(t, 'a') + " " + topic_term(t, 'b');
        for (std::size_t k = 0; k < P; ++k) {
            const auto name = author_name(expert_of(t, k));
            entry.grades[name] = 1;
            result.stats.experts_by_query[qid].push_back(name);
        }
    }
    return result;
}

}  // namespace expertrank
