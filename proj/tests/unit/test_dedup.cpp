#include "newslens/dedup.hpp"

#include "oracles.hpp"
#include "synth.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace newslens;
using namespace newslens::dedup;

namespace {

RawDocument doc(std::string id, std::string domain, std::string body, Date date = Date(2020, 1, 1))
{
    return RawDocument{std::move(id), "u", std::move(domain), "o", date, "t", std::move(body)};
}

std::set<std::string> ids(std::vector<RawDocument> const &docs)
{
    std::set<std::string> out;
    for (auto const &d : docs) {
        out.insert(d.doc_id);
    }
    return out;
}

std::set<std::pair<std::string, std::string>> pairs_of(std::vector<DuplicateCluster> const &clusters)
{
    std::set<std::pair<std::string, std::string>> out;
    for (auto const &c : clusters) {
        for (std::size_t i = 0; i < c.members.size(); ++i) {
            for (std::size_t j = i + 1; j < c.members.size(); ++j) {
                out.insert(std::minmax(c.members[i], c.members[j]));
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("shingles of six words with w=5")
{
    auto s = shingle("a b c d e f", 5);
    CHECK(s.size() == 2);
    CHECK(oracle::shingles("a b c d e f", 5) == std::set<std::string>{"a b c d e", "b c d e f"});
}

TEST_CASE("short text yields one shingle; empty text none")
{
    CHECK(shingle("a b", 5).size() == 1);
    CHECK(shingle("", 5).empty());
    CHECK(shingle("  ... ", 5).empty());
    CHECK(shingle("a b c d e", 5).size() == 1);
}

TEST_CASE("shingle sets are deterministic and de-duplicated")
{
    CHECK(shingle("x y z x y z x y z", 3).hashes == shingle("x y z x y z x y z", 3).hashes);
    CHECK(shingle("x y z x y z x y z", 3).size() == 3);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        auto const text = synth::random_text(5 + rng() % 80, 30, rng);
        CHECK(shingle(text, 5).size() == oracle::shingles(text, 5).size());
        auto const h = shingle(text, 5).hashes;
        CHECK(std::is_sorted(h.begin(), h.end()));
    }
}

TEST_CASE("equal sets give equal signatures; empty sets are degenerate")
{
    auto const s = shingle("the quick brown fox jumps over the lazy dog", 5);
    CHECK(signature(s, 256, 9) == signature(s, 256, 9));
    CHECK(signature(s, 256, 9)->size() == 256);
    CHECK_FALSE(signature(ShingleSet{}, 256, 9).has_value());
    CHECK(signature(s, 256, 9) != signature(s, 256, 10));
}

TEST_CASE("estimate_jaccard basics")
{
    MinHashSignature a{{1, 2, 3, 4}, 1};
    MinHashSignature b{{1, 2, 7, 8}, 1};
    CHECK(estimate_jaccard(a, a) == 1.0);
    CHECK(estimate_jaccard(a, b) == 0.5);
    CHECK_THROWS_AS(estimate_jaccard(a, MinHashSignature{{1, 2, 3}, 1}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_jaccard(a, MinHashSignature{{1, 2, 3, 4}, 2}), std::invalid_argument);
}

TEST_CASE("disjoint sets estimate near zero")
{
    std::mt19937_64 rng(17);
    MinHasher hasher(256, 3);
    double total = 0.0;
    for (int t = 0; t < 50; ++t) {
        auto [a, b] = synth::sets_with_jaccard(0.0, 200, rng);
        total += estimate_jaccard(*hasher.signature(a), *hasher.signature(b));
    }
    CHECK(total / 50 < 0.01);
}

TEST_CASE("mean estimate at Jaccard 0.8 is within 0.02 over 1000 trials")
{
    std::mt19937_64 rng(23);
    double total = 0.0;
    for (int t = 0; t < 1000; ++t) {
        auto [a, b] = synth::sets_with_jaccard(0.8, 150, rng);
        std::set<std::string> sa, sb;
        for (auto x : a) {
            sa.insert(std::to_string(x));
        }
        for (auto x : b) {
            sb.insert(std::to_string(x));
        }
        REQUIRE(oracle::jaccard(sa, sb) == doctest::Approx(0.8).epsilon(1e-12));
        MinHasher hasher(256, static_cast<std::uint64_t>(t) + 1);
        total += estimate_jaccard(*hasher.signature(a), *hasher.signature(b));
    }
    CHECK(std::abs(total / 1000 - 0.8) <= 0.02);
}

TEST_CASE("LSH parameters respect the permutation budget")
{
    auto const p = optimal_lsh_params(0.5, 256);
    CHECK(p.bands * p.rows <= 256);
    CHECK(p == LshParams{42, 6});
    CHECK(candidate_probability(0.9, p) > 0.99);
    CHECK(candidate_probability(0.1, p) < 0.01);
    CHECK_THROWS_AS(optimal_lsh_params(0.0, 256), std::invalid_argument);
    CHECK_THROWS_AS(optimal_lsh_params(0.5, 0), std::invalid_argument);
}

TEST_CASE("identical documents in one domain collapse to one survivor")
{
    std::vector<RawDocument> docs{doc("b", "x.fr", "one two three four five six seven", Date(2020, 1, 2)),
                                  doc("a", "x.fr", "one two three four five six seven", Date(2020, 1, 2))};
    auto r = dedup_per_domain(docs, DedupParams{0.5, 5, 256, 1, 1});
    REQUIRE(r.survivors.size() == 1);
    CHECK(r.survivors[0].doc_id == "a");
    REQUIRE(r.clusters.size() == 1);
    CHECK(r.clusters[0].members == std::vector<std::string>{"a", "b"});
    CHECK(r.clusters[0].survivor == "a");
}

TEST_CASE("earliest publication survives regardless of input order")
{
    std::vector<RawDocument> docs{doc("a", "x.fr", "one two three four five six seven", Date(2020, 3, 1)),
                                  doc("z", "x.fr", "one two three four five six seven", Date(2020, 1, 1))};
    auto forward = dedup_per_domain(docs);
    std::reverse(docs.begin(), docs.end());
    auto backward = dedup_per_domain(docs);
    CHECK(forward.survivors.front().doc_id == "z");
    CHECK(backward.survivors.front().doc_id == "z");
    CHECK(forward.clusters == backward.clusters);
}

TEST_CASE("identical documents on different domains both survive")
{
    std::vector<RawDocument> docs{doc("a", "x.fr", "one two three four five six seven"),
                                  doc("b", "y.fr", "one two three four five six seven")};
    auto r = dedup_per_domain(docs);
    CHECK(r.survivors.size() == 2);
    CHECK(r.clusters.empty());
}

TEST_CASE("empty bodies are kept as unique degenerate documents")
{
    std::vector<RawDocument> docs{doc("a", "x.fr", ""), doc("b", "x.fr", ""), doc("c", "x.fr", "...")};
    auto r = dedup_per_domain(docs);
    CHECK(r.survivors.size() == 3);
    CHECK(r.degenerate_documents == 3);
}

TEST_CASE("planted near-duplicates match the exact all-pairs clustering")
{
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        auto corpus = synth::planted_corpus(30, 4, 3, seed);
        CAPTURE(seed);
        REQUIRE(corpus.documents.size() >= 30);
        auto const expected = oracle::dedup(corpus.documents, 0.5);
        auto r = dedup_per_domain(corpus.documents, DedupParams{0.5, 5, 256, 42, 1});
        CHECK(ids(r.survivors) == expected.survivors);
        CHECK(pairs_of(r.clusters) == expected.duplicate_pairs);
        for (auto const &[src, copy] : corpus.cross_domain_copies) {
            CHECK(expected.duplicate_pairs.count(std::minmax(src, copy)) == 0);
            CHECK(pairs_of(r.clusters).count(std::minmax(src, copy)) == 0);
        }
    }
}

TEST_CASE("dedup output does not depend on thread count or input order")
{
    auto corpus = synth::planted_corpus(60, 5, 4, 77);
    DedupParams p{0.5, 5, 256, 9, 1};
    auto serial = dedup_per_domain(corpus.documents, p);
    p.threads = 8;
    auto parallel = dedup_per_domain(corpus.documents, p);
    CHECK(parallel.clusters == serial.clusters);
    CHECK(parallel.survivors == serial.survivors);
    std::reverse(corpus.documents.begin(), corpus.documents.end());
    auto reversed = dedup_per_domain(corpus.documents, p);
    CHECK(reversed.clusters == serial.clusters);
    CHECK(ids(reversed.survivors) == ids(serial.survivors));
}

TEST_CASE("survivors keep input order and clusters are sorted")
{
    auto corpus = synth::planted_corpus(40, 3, 0, 5);
    auto r = dedup_per_domain(corpus.documents);
    std::size_t pos = 0;
    for (auto const &s : r.survivors) {
        while (pos < corpus.documents.size() && corpus.documents[pos].doc_id != s.doc_id) {
            ++pos;
        }
        CHECK(pos < corpus.documents.size());
    }
    for (std::size_t i = 1; i < r.clusters.size(); ++i) {
        CHECK(std::tie(r.clusters[i - 1].domain, r.clusters[i - 1].survivor) <
              std::tie(r.clusters[i].domain, r.clusters[i].survivor));
    }
    for (auto const &c : r.clusters) {
        CHECK(c.members.size() >= 2);
        CHECK(c.members.front() == c.survivor);
    }
}

TEST_CASE("invalid thresholds are rejected")
{
    std::vector<RawDocument> docs{doc("a", "x.fr", "a b c")};
    CHECK_THROWS_AS(dedup_per_domain(docs, DedupParams{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(dedup_per_domain(docs, DedupParams{1.5}), std::invalid_argument);
}
