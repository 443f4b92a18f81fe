#include <doctest.h>

#include <cmath>
#include <random>

#include "expertrank/synth.hpp"
#include "expertrank/textindex.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace expertrank;

TEST_CASE("tokenize lowers, splits on non-alphanumerics, drops empties") {
    CHECK(tokenize("Semantic Web") == std::vector<std::string>{"semantic", "web"});
    CHECK(tokenize("").empty());
    CHECK(tokenize("SVM-based learning, 2008!") ==
          std::vector<std::string>{"svm", "based", "learning", "2008"});
}

TEST_CASE("tokenize is idempotent through join") {
    std::mt19937_64 rng(3);
    const std::string alphabet = "aB 9-_!c.Dd";
    for (int trial = 0; trial < 200; ++trial) {
        std::string s;
        const std::size_t len = rng() % 30;
        for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
        const auto once = tokenize(s);
        CHECK(tokenize(join_terms(once)) == once);
    }
}

TEST_CASE("build_index computes per-stream stats") {
    const Corpus corpus({testutil::pub("p1", "a b", {"x"}), testutil::pub("p2", "b c", {"y"})});
    const Index index = build_index(corpus, Stream::title);
    CHECK(index.n_docs() == 2);
    CHECK(index.avg_doc_len() == doctest::Approx(2.0));
    CHECK(index.doc_freq("a") == 1);
    CHECK(index.doc_freq("b") == 2);
    CHECK(index.doc_freq("c") == 1);
    CHECK(index.doc_freq("zzz") == 0);

    // same numbers must land in the corpus-level stats
    CHECK(corpus.stats().n_docs[0] == 2);
    CHECK(corpus.stats().doc_freq[0].at("b") == 2);
}

TEST_CASE("documents without an abstract stay out of the abstract stream") {
    auto with_abs = testutil::pub("p1", "t", {"x"});
    with_abs.abstract_text = "deep ranking models";
    const Corpus corpus({with_abs, testutil::pub("p2", "t2", {"y"})});
    const Index index = build_index(corpus, Stream::abstract);
    CHECK(index.n_docs() == 1);
    CHECK(index.doc_len("p1") == 3);
    CHECK(index.doc_len("p2") == 0);
}

TEST_CASE("index token totals match a brute recount on a synthetic corpus") {
    SynthSpec spec;
    spec.n_pubs = 200;
    spec.n_authors = 40;
    spec.n_topics = 3;
    spec.experts_per_topic = 3;
    spec.seed = 21;
    const Corpus corpus(generate_synthetic(spec).publications);
    const Index title = build_index(corpus, Stream::title);

    std::size_t total = 0, docs = 0;
    for (const auto& p : corpus.publications()) {
        const auto toks = tokenize(p.title);
        total += toks.size();
        if (!toks.empty()) ++docs;
    }
    std::size_t indexed_total = 0;
    for (const auto& [id, len] : title.doc_lengths()) indexed_total += len;
    CHECK(indexed_total == total);
    CHECK(title.n_docs() == docs);
}

TEST_CASE("tf matches hand values and the no-index oracle") {
    const Corpus corpus({testutil::pub("p1", "web web of data links", {"alice"})});
    const Index index = build_index(corpus, Stream::title);
    const Query q = Query::parse("q", "web");
    CHECK(tf(q, "alice", index) == doctest::Approx(0.4));
    CHECK(tf(q, "nobody", index) == 0.0);

    SynthSpec spec;
    spec.n_pubs = 150;
    spec.n_authors = 25;
    spec.n_topics = 3;
    spec.experts_per_topic = 2;
    spec.seed = 5;
    const Corpus synth(generate_synthetic(spec).publications);
    const Index title = build_index(synth, Stream::title);
    const Query topic = Query::parse("q", "topic01a topic01b w005");
    for (const auto& author : {"a0002", "a0010", "a0020"}) {
        CHECK(tf(topic, author, title) ==
              doctest::Approx(oracle::tf_naive(topic.terms, author, synth, false))
                  .epsilon(1e-12));
    }
}

TEST_CASE("idf follows the summed log formula") {
    std::vector<Publication> pubs;
    for (int i = 0; i < 100; ++i) {
        const std::string extra = i < 10 ? " rare" : "";
        pubs.push_back(testutil::pub("p" + std::to_string(i), "common" + extra, {"a"}));
    }
    const Corpus corpus(pubs);
    const Index index = build_index(corpus, Stream::title);

    CHECK(idf(Query::parse("q", "common"), index) == doctest::Approx(0.0));
    CHECK(idf(Query::parse("q", "rare"), index) == doctest::Approx(std::log(10.0)));
    // additivity; terms in every doc or in none contribute nothing
    CHECK(idf(Query::parse("q", "rare common"), index) == doctest::Approx(std::log(10.0)));
    CHECK(idf(Query::parse("q", "rare unseen"), index) == doctest::Approx(std::log(10.0)));
    CHECK_THROWS_AS(idf(Query::parse("q", "..."), index), std::invalid_argument);
}

TEST_CASE("bm25 single-term hand oracle") {
    const Corpus corpus({testutil::pub("p1", "term w1 w2 w3", {"alice"}),
                         testutil::pub("p2", "w4 w5 w6 w7", {"bob"}),
                         testutil::pub("p3", "w8 w9 w10 w11", {"bob"})});
    const Index index = build_index(corpus, Stream::title);
    const Query q = Query::parse("q", "term");
    const double expected = std::log(2.5 / 1.5) * (2.2 * 0.25) / (0.25 + 1.2);
    CHECK(bm25(q, "alice", index) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(expected == doctest::Approx(0.19377).epsilon(1e-4));
    CHECK(bm25(q, "bob", index) == 0.0);
}

TEST_CASE("bm25 equals the scalar reimplementation on synthetic authors") {
    SynthSpec spec;
    spec.n_pubs = 150;
    spec.n_authors = 25;
    spec.n_topics = 3;
    spec.experts_per_topic = 2;
    spec.seed = 9;
    const Corpus synth(generate_synthetic(spec).publications);
    const Index title = build_index(synth, Stream::title);
    const Index abstract = build_index(synth, Stream::abstract);
    const Query topic = Query::parse("q", "topic02a w010 w222");
    for (const auto& author : {"a0000", "a0004", "a0011", "a0019"}) {
        CHECK(bm25(topic, author, title) ==
              doctest::Approx(oracle::bm25_naive(topic.terms, author, synth, false, 1.2, 0.75))
                  .epsilon(1e-12));
        CHECK(bm25(topic, author, abstract) ==
              doctest::Approx(oracle::bm25_naive(topic.terms, author, synth, true, 1.2, 0.75))
                  .epsilon(1e-12));
    }
}

TEST_CASE("bm25 with k1=0 degenerates to an idf sum over matching doc-term pairs") {
    const Corpus corpus({testutil::pub("p1", "term term other", {"alice"}),
                         testutil::pub("p2", "term blah blah", {"alice"}),
                         testutil::pub("p3", "nothing here", {"bob"})});
    const Index index = build_index(corpus, Stream::title);
    Bm25Params params;
    params.k1 = 0.0;
    const Query q = Query::parse("q", "term");
    // with k1=0 the saturation factor is exactly 1 wherever freq > 0
    const double idf_component = std::max(0.0, std::log((3 - 2 + 0.5) / (2 + 0.5)));
    CHECK(bm25(q, "alice", index, params) == doctest::Approx(2 * idf_component));
}

TEST_CASE("the literal per-occurrence idf variant is switchable") {
    // term appears twice in the one matching doc; document frequency is 1
    const Corpus corpus({testutil::pub("p1", "term term w1 w2", {"alice"}),
                         testutil::pub("p2", "w3 w4 w5 w6", {"bob"}),
                         testutil::pub("p3", "w7 w8 w9 w10", {"bob"})});
    const Index index = build_index(corpus, Stream::title);
    const Query q = Query::parse("q", "term");

    const double nf = 2.0 / 4.0;
    const double saturation = 2.2 * nf / (nf + 1.2);
    Bm25Params standard;
    CHECK(bm25(q, "alice", index, standard) ==
          doctest::Approx(std::log(2.5 / 1.5) * saturation).epsilon(1e-12));

    // the per-occurrence form goes negative here and is floored at zero
    Bm25Params literal;
    literal.idf_from_term_freq = true;
    CHECK(bm25(q, "alice", index, literal) == 0.0);
}

TEST_CASE("bm25, tf, idf stay non-negative on random corpora") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Publication> pubs;
        const int n = 2 + rng() % 8;
        for (int i = 0; i < n; ++i) {
            std::string title;
            const int len = 1 + rng() % 6;
            for (int t = 0; t < len; ++t) title += " w" + std::to_string(rng() % 12);
            pubs.push_back(
                testutil::pub("p" + std::to_string(i), title, {"a" + std::to_string(rng() % 3)}));
        }
        const Corpus corpus(pubs);
        const Index idx = build_index(corpus, Stream::title);
        const Query q = Query::parse("q", "w1 w5 w11");
        for (const auto& author : {"a0", "a1", "a2"}) {
            CHECK(tf(q, author, idx) >= 0.0);
            CHECK(bm25(q, author, idx) >= 0.0);
        }
        CHECK(idf(q, idx) >= 0.0);
    }
}

TEST_CASE("textual auxiliary features") {
    auto p1 = testutil::pub("p1", "semantic web", {"alice", "bob"}, 2005);
    auto p2 = testutil::pub("p2", "semantic data", {"alice"}, 2010);
    auto p3 = testutil::pub("p3", "unrelated words", {"alice", "carol"}, 2001);
    const Corpus corpus({p1, p2, p3});
    const Index title = build_index(corpus, Stream::title);
    const Index abstract = build_index(corpus, Stream::abstract);
    const Query q = Query::parse("q", "semantic");

    const auto alice = textual_aux_features(q, "alice", corpus, title, abstract);
    CHECK(alice.matching_year_span == 5);
    CHECK(alice.unique_matching_authors == 2);  // alice, bob
    CHECK(alice.sum_doc_len_title == 6);
    CHECK(alice.sum_doc_len_abstract == 0);

    const auto carol = textual_aux_features(q, "carol", corpus, title, abstract);
    CHECK(carol.matching_year_span == 0);
    CHECK(carol.unique_matching_authors == 2);  // corpus-wide, not per candidate
    CHECK(carol.sum_doc_len_title == 2);
}

TEST_CASE("matching_pubs unions the two streams") {
    auto p1 = testutil::pub("p1", "semantic web", {"a"});
    auto p2 = testutil::pub("p2", "other", {"b"});
    p2.abstract_text = "semantic things";
    auto p3 = testutil::pub("p3", "nothing", {"c"});
    const Corpus corpus({p1, p2, p3});
    const Index title = build_index(corpus, Stream::title);
    const Index abstract = build_index(corpus, Stream::abstract);
    CHECK(matching_pubs(Query::parse("q", "semantic"), title, abstract) ==
          std::vector<std::string>{"p1", "p2"});
}

TEST_CASE("query parsing deduplicates terms") {
    const Query q = Query::parse("q", "Web semantic web");
    CHECK(q.terms == std::vector<std::string>{"web", "semantic"});
}
