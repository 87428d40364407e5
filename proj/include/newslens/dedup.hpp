#pragma once

#include "newslens/ingest.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace newslens::dedup {

/// Hashes of the distinct contiguous word w-grams of a text, sorted ascending.
struct ShingleSet {
    std::vector<std::uint64_t> hashes;
    std::size_t window = 5;

    bool empty() const { return hashes.empty(); }
    std::size_t size() const { return hashes.size(); }
};

/// Texts with fewer than `w` tokens yield one shingle holding all of them;
/// texts with no tokens yield the empty set.
ShingleSet shingle(std::string_view text, std::size_t w = 5);

struct MinHashSignature {
    std::vector<std::uint64_t> values;
    std::uint64_t seed = 0;

    std::size_t size() const { return values.size(); }
    bool operator==(MinHashSignature const &) const = default;
};

/// Universal-hash permutation family h_i(x) = (a_i x + b_i) mod (2^61 - 1)
/// with coefficients drawn from a splitmix64 stream seeded by `seed`.
class MinHasher {
   public:
    explicit MinHasher(std::size_t permutations = 256, std::uint64_t seed = 1);

    /// nullopt for an empty shingle set (a degenerate document).
    std::optional<MinHashSignature> signature(ShingleSet const &shingles) const;
    std::optional<MinHashSignature> signature(std::span<std::uint64_t const> elements) const;

    std::size_t permutations() const { return a_.size(); }
    std::uint64_t seed() const { return seed_; }

   private:
    std::uint64_t seed_;
    std::vector<std::uint64_t> a_;
    std::vector<std::uint64_t> b_;
};

std::optional<MinHashSignature> signature(ShingleSet const &shingles, std::size_t n = 256,
                                          std::uint64_t seed = 1);

/// Fraction of positions at which two signatures agree. Throws
/// std::invalid_argument when lengths or seeds differ.
double estimate_jaccard(MinHashSignature const &a, MinHashSignature const &b);

struct LshParams {
    std::size_t bands = 0;
    std::size_t rows = 0;

    bool operator==(LshParams const &) const = default;
};

/// Minimises the equally weighted false-positive and false-negative areas of
/// the banding S-curve 1 - (1 - s^r)^b around `threshold`, over b * r <= n.
LshParams optimal_lsh_params(double threshold, std::size_t n);

/// Probability that a pair with Jaccard `s` shares at least one band bucket.
double candidate_probability(double s, LshParams params);

/// Sorted unique index pairs (i < j) that collide in at least one band.
std::vector<std::pair<std::size_t, std::size_t>> lsh_candidate_pairs(std::span<MinHashSignature const> signatures,
                                                                     LshParams params);

struct DedupParams {
    double threshold = 0.5;
    std::size_t shingle_size = 5;
    std::size_t permutations = 256;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct DuplicateCluster {
    std::string domain;
    std::vector<std::string> members;  // ordered by (published_at, doc_id); survivor first
    std::string survivor;

    bool operator==(DuplicateCluster const &) const = default;
};

struct DedupResult {
    std::vector<RawDocument> survivors;  // input order
    std::vector<DuplicateCluster> clusters;  // size >= 2, sorted by (domain, survivor)
    std::size_t degenerate_documents = 0;  // empty bodies, kept as unique
    LshParams lsh;
};

/// Clusters same-domain documents whose estimated Jaccard reaches `threshold`
/// (transitive closure over LSH candidates verified on signatures) and keeps
/// the earliest-published member of each cluster, ties by smallest doc_id.
DedupResult dedup_per_domain(std::span<RawDocument const> documents, DedupParams const &params = {});

}  // namespace newslens::dedup
