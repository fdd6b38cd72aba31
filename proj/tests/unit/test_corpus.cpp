#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "sbdae/corpus.hpp"
#include "sbdae/error.hpp"

using namespace sbdae;

namespace {

Docs parse(const std::string &text) {
    std::istringstream in(text);
    return parse_sparse(in);
}

SparseDoc counts(std::initializer_list<Entry> e, std::optional<Label> y = Label::positive) {
    return SparseDoc{std::vector<Entry>(e), y};
}

}  // namespace

TEST_CASE("parse_sparse maps 1-based indices and labels") {
    auto docs = parse("+1 1:2 3:1\n? 2:5\n-1 4:0.5\n");
    REQUIRE(docs.size() == 3);
    CHECK(docs[0] == SparseDoc{{{0, 2.0}, {2, 1.0}}, Label::positive});
    CHECK(docs[1] == SparseDoc{{{1, 5.0}}, std::nullopt});
    CHECK(docs[2] == SparseDoc{{{3, 0.5}}, Label::negative});
}

TEST_CASE("parse_sparse skips comments, blank lines and explicit zeros") {
    auto docs = parse("# header\n\n1 1:0 2:3\r\n");
    REQUIRE(docs.size() == 1);
    CHECK(docs[0].entries == std::vector<Entry>{{1, 3.0}});
}

TEST_CASE("parse_sparse rejects malformed input with a line number") {
    auto fails_on_line = [](const std::string &text, std::size_t line) {
        try {
            parse(text);
        } catch (const ParseError &e) {
            CHECK(e.line() == line);
            return true;
        }
        return false;
    };
    CHECK(fails_on_line("+1 3:1 1:2\n", 1));          // non-increasing
    CHECK(fails_on_line("+1 1:1\n-1 2:1 2:3\n", 2));  // duplicate
    CHECK(fails_on_line("+1 1:-2\n", 1));             // negative
    CHECK(fails_on_line("+2 1:1\n", 1));              // bad label
    CHECK(fails_on_line("+1 1:1\n? 0:1\n", 2));       // index 0
    CHECK(fails_on_line("+1 1-1\n", 1));              // missing colon
    CHECK(fails_on_line("+1 1:abc\n", 1));
}

TEST_CASE("parse_sparse on a missing file is an I/O error naming the path") {
    try {
        parse_sparse(std::filesystem::path("/nonexistent/dir/train.svm"));
        FAIL("expected IoError");
    } catch (const IoError &e) {
        CHECK(std::string(e.what()).find("/nonexistent/dir/train.svm") != std::string::npos);
    }
}

TEST_CASE("sparse writer output parses back to the same docs") {
    Rng rng(3);
    Docs docs;
    for (int i = 0; i < 40; ++i) {
        auto label = i % 3 == 0 ? std::nullopt : std::optional<Label>(oracle::random_label(rng));
        docs.push_back(oracle::random_doc(rng, 30, 0.2, label));
    }
    std::ostringstream out;
    write_sparse(out, docs);
    CHECK(parse(out.str()) == docs);
}

TEST_CASE("normalize: log(1+c) over the max") {
    auto equal = normalize(counts({{0, 9}, {1, 9}}));
    CHECK(equal.entries[0].value == 1.0);
    CHECK(equal.entries[1].value == 1.0);

    auto mixed = normalize(counts({{0, 1}, {1, 9}}));
    CHECK(mixed.entries[0].value == doctest::Approx(0.301029995663981195).epsilon(1e-14));
    CHECK(mixed.entries[1].value == 1.0);
    CHECK(mixed.label == Label::positive);

    CHECK_THROWS_AS(normalize(counts({})), InvalidArgument);
}

TEST_CASE("normalize output lies in (0, 1] with max exactly 1 and the same support") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        SparseDoc doc;
        for (FeatureId j = 0; j < 50; ++j)
            if (uniform01(rng) < 0.3) doc.entries.push_back({j, static_cast<double>(1 + uniform_index(rng, 40))});
        if (doc.empty()) continue;
        auto n = normalize(doc);
        REQUIRE(n.entries.size() == doc.entries.size());
        double mx = 0.0;
        for (std::size_t i = 0; i < n.entries.size(); ++i) {
            CHECK(n.entries[i].id == doc.entries[i].id);
            CHECK(n.entries[i].value > 0.0);
            CHECK(n.entries[i].value <= 1.0);
            mx = std::max(mx, n.entries[i].value);
        }
        CHECK(mx == 1.0);
    }
}

TEST_CASE("prune_features drops rare train features everywhere") {
    // feature 2 (0-based) is in 2 of 3 train docs
    Corpus c = assemble_corpus({counts({{0, 1}, {2, 1}}), counts({{0, 2}, {2, 3}}), counts({{0, 1}, {1, 4}})},
                               {counts({{1, 1}, {2, 5}}, Label::negative)},
                               {counts({{0, 7}, {2, 1}}, std::nullopt)}, {"a", "b", "c"});
    auto p = prune_features(c, 3);
    REQUIRE(p.dim() == 1);
    CHECK(p.vocab.token(0) == "a");
    CHECK(p.vocab.doc_freq() == std::vector<std::size_t>{3});
    CHECK(p.train[0].entries == std::vector<Entry>{{0, 1.0}});
    CHECK(p.test[0].entries.empty());
    CHECK(p.unlabeled[0].entries == std::vector<Entry>{{0, 7.0}});

    auto mid = prune_features(c, 2);
    CHECK(mid.vocab.tokens() == std::vector<std::string>{"a", "c"});
    CHECK(mid.test[0].entries == std::vector<Entry>{{1, 5.0}});

    CHECK_THROWS_AS(prune_features(c, 4), InvalidArgument);
    CHECK_THROWS_AS(prune_features(c, 0), InvalidArgument);
}

TEST_CASE("prune_features with min_df=1 keeps every feature seen in train") {
    Corpus c = assemble_corpus({counts({{0, 1}, {3, 1}}), counts({{1, 2}})}, {}, {}, {"a", "b", "c", "d"});
    auto p = prune_features(c, 1);
    CHECK(p.vocab.tokens() == std::vector<std::string>{"a", "b", "d"});
    CHECK(p.train[0].entries == std::vector<Entry>{{0, 1.0}, {2, 1.0}});
}

TEST_CASE("unlabeled docs do not count toward document frequency") {
    Corpus c = assemble_corpus({counts({{0, 1}})}, {}, {counts({{1, 1}}, std::nullopt), counts({{1, 1}}, std::nullopt)},
                               {"a", "b"});
    CHECK(c.vocab.doc_freq() == std::vector<std::size_t>{1, 0});
    CHECK(prune_features(c, 1).dim() == 1);
}

TEST_CASE("pruning preserves each doc's (token, value) pairs among kept features") {
    Rng rng(5);
    const std::size_t d = 60;
    std::vector<std::string> tokens;
    for (std::size_t j = 0; j < d; ++j) tokens.push_back("t" + std::to_string(j));
    Docs train, test;
    for (int i = 0; i < 80; ++i) train.push_back(oracle::random_doc(rng, d, 0.08, Label::positive));
    for (int i = 0; i < 20; ++i) test.push_back(oracle::random_doc(rng, d, 0.08, Label::negative));
    Corpus c = assemble_corpus(train, test, {}, tokens);

    for (std::size_t min_df : {1u, 3u, 6u, 9u}) {
        auto p = prune_features(c, min_df);
        for (std::size_t i = 0; i < c.train.size(); ++i) {
            std::vector<std::pair<std::string, double>> before, after;
            for (const auto &e : c.train[i].entries)
                if (c.vocab.doc_freq()[e.id] >= min_df) before.emplace_back(c.vocab.token(e.id), e.value);
            for (const auto &e : p.train[i].entries) after.emplace_back(p.vocab.token(e.id), e.value);
            CHECK(before == after);
        }
        for (auto f : p.vocab.doc_freq()) CHECK(f >= min_df);
        p.validate();
    }
}

TEST_CASE("pruning commutes with a write/parse round trip of the splits") {
    Rng rng(9);
    Docs train, test;
    for (int i = 0; i < 50; ++i) train.push_back(oracle::random_doc(rng, 25, 0.15, oracle::random_label(rng)));
    for (int i = 0; i < 10; ++i) test.push_back(oracle::random_doc(rng, 25, 0.15, oracle::random_label(rng)));
    auto roundtrip = [](const Docs &docs) {
        std::ostringstream out;
        write_sparse(out, docs);
        std::istringstream in(out.str());
        return parse_sparse(in);
    };
    Corpus direct = assemble_corpus(train, test, {});
    for (std::size_t min_df : {1u, 4u, 8u}) {
        auto a = prune_features(direct, min_df);
        auto b = prune_features(assemble_corpus(roundtrip(train), roundtrip(test), {}), min_df);
        CHECK(a.vocab == b.vocab);
        CHECK(a.train == b.train);
        CHECK(a.test == b.test);
        CHECK(roundtrip(a.train) == a.train);
    }
}

TEST_CASE("normalize_corpus drops docs emptied by pruning") {
    Corpus c = assemble_corpus({counts({{0, 3}}), counts({{0, 1}}), counts({{1, 2}})}, {}, {}, {"a", "b"});
    auto p = prepare(c, 2);
    CHECK(p.train.size() == 2);
    for (const auto &doc : p.train) CHECK(doc.entries.front().value == 1.0);
}

TEST_CASE("vocabulary file round trip") {
    auto dir = std::filesystem::temp_directory_path() / "sbdae_vocab_test";
    std::filesystem::create_directories(dir);
    Vocabulary v({"good", "bad", "movie"}, {3, 4, 10});
    write_vocabulary(dir / "vocab.tsv", v);
    CHECK(read_vocabulary(dir / "vocab.tsv") == v);
    CHECK(v.find("bad") == FeatureId{1});
    CHECK_FALSE(v.find("ugly").has_value());
    CHECK_THROWS_AS(Vocabulary({"x", "x"}), InvalidArgument);
    std::filesystem::remove_all(dir);
}

TEST_CASE("corpus validation enforces split labels") {
    Corpus c = assemble_corpus({counts({{0, 1}})}, {}, {}, {"a"});
    c.unlabeled.push_back(counts({{0, 1}}));
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    CHECK_THROWS_AS(assemble_corpus({counts({{0, 1}}, std::nullopt)}, {}, {}), InvalidArgument);
    CHECK_THROWS_AS(assemble_corpus({counts({{3, 1}})}, {}, {}, {"a"}), InvalidArgument);
}
