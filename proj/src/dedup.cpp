#include "newslens/dedup.hpp"

#include "newslens/hash.hpp"
#include "newslens/parallel.hpp"
#include "newslens/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace newslens::dedup {

namespace {

constexpr std::uint64_t mersenne61 = (std::uint64_t{1} << 61) - 1;

__extension__ using u128 = unsigned __int128;

std::uint64_t mod_mersenne61(u128 x)
{
    auto r = static_cast<std::uint64_t>(x & mersenne61) + static_cast<std::uint64_t>(x >> 61);
    r = (r & mersenne61) + (r >> 61);
    return r >= mersenne61 ? r - mersenne61 : r;
}

std::uint64_t hash_shingle(std::vector<std::string> const &tokens, std::size_t begin, std::size_t end)
{
    std::uint64_t h = fnv1a64("");
    for (auto i = begin; i < end; ++i) {
        if (i != begin) {
            h = fnv1a64(" ", h);
        }
        h = fnv1a64(tokens[i], h);
    }
    return mix64(h);
}

class DisjointSets {
   public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // smaller index becomes the root so the structure is order independent
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b) {
            parent_[std::max(a, b)] = std::min(a, b);
        }
    }

   private:
    std::vector<std::size_t> parent_;
};

// Simpson's rule; the S-curve is smooth so a fixed grid is plenty.
template <typename F>
double integrate(F &&f, double lo, double hi)
{
    constexpr int steps = 256;
    if (hi <= lo) {
        return 0.0;
    }
    double const h = (hi - lo) / steps;
    double sum = f(lo) + f(hi);
    for (int i = 1; i < steps; ++i) {
        sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

}  // namespace

ShingleSet shingle(std::string_view text, std::size_t w)
{
    if (w == 0) {
        throw std::invalid_argument("shingle size must be at least 1");
    }
    ShingleSet out;
    out.window = w;
    auto const tokens = text::tokenize(text);
    if (tokens.empty()) {
        return out;
    }
    if (tokens.size() < w) {
        out.hashes.push_back(hash_shingle(tokens, 0, tokens.size()));
        return out;
    }
    out.hashes.reserve(tokens.size() - w + 1);
    for (std::size_t i = 0; i + w <= tokens.size(); ++i) {
        out.hashes.push_back(hash_shingle(tokens, i, i + w));
    }
    std::sort(out.hashes.begin(), out.hashes.end());
    out.hashes.erase(std::unique(out.hashes.begin(), out.hashes.end()), out.hashes.end());
    return out;
}

MinHasher::MinHasher(std::size_t permutations, std::uint64_t seed) : seed_(seed)
{
    if (permutations == 0) {
        throw std::invalid_argument("number of permutations must be at least 1");
    }
    SplitMix64 rng(seed);
    a_.reserve(permutations);
    b_.reserve(permutations);
    for (std::size_t i = 0; i < permutations; ++i) {
        a_.push_back(1 + rng.next() % (mersenne61 - 1));
        b_.push_back(rng.next() % mersenne61);
    }
}

std::optional<MinHashSignature> MinHasher::signature(std::span<std::uint64_t const> elements) const
{
    if (elements.empty()) {
        return std::nullopt;
    }
    MinHashSignature sig;
    sig.seed = seed_;
    sig.values.assign(a_.size(), std::numeric_limits<std::uint64_t>::max());
    for (auto element : elements) {
        auto const x = mod_mersenne61(mix64(element));
        for (std::size_t i = 0; i < a_.size(); ++i) {
            auto const v = mod_mersenne61(static_cast<u128>(a_[i]) * x + b_[i]);
            sig.values[i] = std::min(sig.values[i], v);
        }
    }
    return sig;
}

std::optional<MinHashSignature> MinHasher::signature(ShingleSet const &shingles) const
{
    return signature(std::span<std::uint64_t const>(shingles.hashes));
}

std::optional<MinHashSignature> signature(ShingleSet const &shingles, std::size_t n, std::uint64_t seed)
{
    return MinHasher(n, seed).signature(shingles);
}

double estimate_jaccard(MinHashSignature const &a, MinHashSignature const &b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("signatures have different numbers of permutations");
    }
    if (a.seed != b.seed) {
        throw std::invalid_argument("signatures were built with different seeds");
    }
    if (a.values.empty()) {
        throw std::invalid_argument("empty signature");
    }
    std::size_t equal = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        equal += a.values[i] == b.values[i] ? 1 : 0;
    }
    return static_cast<double>(equal) / static_cast<double>(a.size());
}

double candidate_probability(double s, LshParams params)
{
    return 1.0 - std::pow(1.0 - std::pow(s, static_cast<double>(params.rows)), static_cast<double>(params.bands));
}

LshParams optimal_lsh_params(double threshold, std::size_t n)
{
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw std::invalid_argument("threshold must lie in (0, 1]");
    }
    if (n == 0) {
        throw std::invalid_argument("number of permutations must be at least 1");
    }
    LshParams best{1, n};
    double best_error = std::numeric_limits<double>::infinity();
    for (std::size_t b = 1; b <= n; ++b) {
        for (std::size_t r = 1; b * r <= n; ++r) {
            LshParams const p{b, r};
            auto const fp = integrate([&](double s) { return candidate_probability(s, p); }, 0.0, threshold);
            auto const fn = integrate([&](double s) { return 1.0 - candidate_probability(s, p); }, threshold, 1.0);
            auto const error = 0.5 * fp + 0.5 * fn;
            if (error < best_error) {
                best_error = error;
                best = p;
            }
        }
    }
    return best;
}

std::vector<std::pair<std::size_t, std::size_t>> lsh_candidate_pairs(std::span<MinHashSignature const> signatures,
                                                                     LshParams params)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (signatures.empty()) {
        return pairs;
    }
    if (params.bands * params.rows > signatures.front().size() || params.rows == 0) {
        throw std::invalid_argument("band configuration exceeds signature length");
    }
    for (std::size_t band = 0; band < params.bands; ++band) {
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < signatures.size(); ++i) {
            std::uint64_t h = mix64(band + 1);
            for (std::size_t r = 0; r < params.rows; ++r) {
                h = mix64(h ^ signatures[i].values[band * params.rows + r]);
            }
            buckets[h].push_back(i);
        }
        for (auto const &[_, members] : buckets) {
            for (std::size_t x = 0; x < members.size(); ++x) {
                for (std::size_t y = x + 1; y < members.size(); ++y) {
                    pairs.emplace_back(members[x], members[y]);
                }
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

DedupResult dedup_per_domain(std::span<RawDocument const> documents, DedupParams const &params)
{
    if (!(params.threshold > 0.0 && params.threshold <= 1.0)) {
        throw std::invalid_argument("dedup threshold must lie in (0, 1]");
    }
    DedupResult result;
    result.lsh = optimal_lsh_params(params.threshold, params.permutations);

    MinHasher const hasher(params.permutations, params.seed);
    std::vector<std::optional<MinHashSignature>> signatures(documents.size());
    parallel_for(documents.size(), params.threads, [&](std::size_t i) {
        signatures[i] = hasher.signature(shingle(documents[i].body, params.shingle_size));
    });

    std::map<std::string, std::vector<std::size_t>> by_domain;
    for (std::size_t i = 0; i < documents.size(); ++i) {
        if (!signatures[i]) {
            ++result.degenerate_documents;
            continue;
        }
        by_domain[documents[i].domain].push_back(i);
    }

    auto earlier = [&](std::size_t a, std::size_t b) {
        auto const &da = documents[a];
        auto const &db = documents[b];
        if (da.published_at != db.published_at) {
            return da.published_at < db.published_at;
        }
        return da.doc_id < db.doc_id;
    };

    std::vector<bool> dropped(documents.size(), false);
    for (auto const &[domain, members] : by_domain) {
        std::vector<MinHashSignature> local;
        local.reserve(members.size());
        for (auto idx : members) {
            local.push_back(*signatures[idx]);
        }
        DisjointSets sets(members.size());
        for (auto [x, y] : lsh_candidate_pairs(local, result.lsh)) {
            if (estimate_jaccard(local[x], local[y]) >= params.threshold) {
                sets.unite(x, y);
            }
        }
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t k = 0; k < members.size(); ++k) {
            groups[sets.find(k)].push_back(members[k]);
        }
        for (auto &[_, group] : groups) {
            if (group.size() < 2) {
                continue;
            }
            std::sort(group.begin(), group.end(), earlier);
            DuplicateCluster cluster;
            cluster.domain = domain;
            cluster.survivor = documents[group.front()].doc_id;
            for (auto idx : group) {
                cluster.members.push_back(documents[idx].doc_id);
            }
            for (std::size_t k = 1; k < group.size(); ++k) {
                dropped[group[k]] = true;
            }
            result.clusters.push_back(std::move(cluster));
        }
    }
    std::sort(result.clusters.begin(), result.clusters.end(), [](auto const &a, auto const &b) {
        return std::tie(a.domain, a.survivor) < std::tie(b.domain, b.survivor);
    });
    for (std::size_t i = 0; i < documents.size(); ++i) {
        if (!dropped[i]) {
            result.survivors.push_back(documents[i]);
        }
    }
    return result;
}

}  // namespace newslens::dedup
