#include "newslens/sentiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

namespace newslens::sentiment {

std::string_view to_string(ScoreMode mode) { return mode == ScoreMode::argmax ? "argmax" : "expected"; }

std::optional<ScoreMode> parse_score_mode(std::string_view name)
{
    if (name == "argmax") {
        return ScoreMode::argmax;
    }
    if (name == "expected") {
        return ScoreMode::expected;
    }
    return std::nullopt;
}

SentimentClass argmax_class(SentimentDistribution const &d)
{
    if (d.negative > d.neutral && d.negative > d.positive) {
        return SentimentClass::negative;
    }
    if (d.positive > d.neutral && d.positive > d.negative) {
        return SentimentClass::positive;
    }
    return SentimentClass::neutral;
}

double score_mention(SentimentDistribution const &d, ScoreMode mode)
{
    if (mode == ScoreMode::expected) {
        return d.positive - d.negative;
    }
    switch (argmax_class(d)) {
    case SentimentClass::negative:
        return -1.0;
    case SentimentClass::positive:
        return 1.0;
    case SentimentClass::neutral:
        break;
    }
    return 0.0;
}

double confidence(SentimentDistribution const &d) { return std::max({d.negative, d.neutral, d.positive}); }

double pearson(std::span<double const> x, std::span<double const> y)
{
    if (x.size() != y.size()) {
        throw std::invalid_argument("pearson: vectors differ in length");
    }
    if (x.size() < 2) {
        throw UndefinedCorrelation("pearson: need at least two points");
    }
    auto const n = static_cast<double>(x.size());
    double const mx = exact_sum(x) / n;
    double const my = exact_sum(y) / n;
    ExactSum sxy;
    ExactSum sxx;
    ExactSum syy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double const dx = x[i] - mx;
        double const dy = y[i] - my;
        sxy.add(dx * dy);
        sxx.add(dx * dx);
        syy.add(dy * dy);
    }
    if (sxx.value() == 0.0 || syy.value() == 0.0) {
        throw UndefinedCorrelation("pearson: zero variance");
    }
    return std::clamp(sxy.value() / std::sqrt(sxx.value() * syy.value()), -1.0, 1.0);
}

std::optional<double> StableSum::mean() const
{
    if (count_ == 0) {
        return std::nullopt;
    }
    return sum() / static_cast<double>(count_);
}

std::vector<MentionAnnotation> most_confident_per_class(std::span<MentionAnnotation const> mentions,
                                                        double keep_fraction)
{
    if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0)) {
        throw std::invalid_argument("keep_fraction must lie in [0, 1]");
    }
    std::map<SentimentClass, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < mentions.size(); ++i) {
        by_class[argmax_class(mentions[i].sentiment)].push_back(i);
    }
    std::vector<bool> keep(mentions.size(), false);
    for (auto &[_, members] : by_class) {
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            auto const ca = confidence(mentions[a].sentiment);
            auto const cb = confidence(mentions[b].sentiment);
            if (ca != cb) {
                return ca > cb;
            }
            auto const &ma = mentions[a];
            auto const &mb = mentions[b];
            auto key = [](MentionAnnotation const &m) {
                static std::string const none;
                return std::tie(m.doc_id, m.sentence_index, m.start, m.end, m.link ? m.link->kb_id : none,
                                m.sentiment.negative, m.sentiment.neutral, m.sentiment.positive);
            };
            return key(ma) < key(mb);
        });
        auto const quota =
            static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(members.size())));
        for (std::size_t k = 0; k < std::min(quota, members.size()); ++k) {
            keep[members[k]] = true;
        }
    }
    std::vector<MentionAnnotation> out;
    for (std::size_t i = 0; i < mentions.size(); ++i) {
        if (keep[i]) {
            out.push_back(mentions[i]);
        }
    }
    return out;
}

namespace {

struct EntityStats {
    std::size_t mentions = 0;
    StableSum scores;
};

std::map<std::string, EntityStats> per_entity(std::span<MentionAnnotation const> mentions, ScoreMode mode)
{
    std::map<std::string, EntityStats> out;
    for (auto const &m : mentions) {
        if (!m.link) {
            continue;
        }
        auto &s = out[m.link->kb_id];
        ++s.mentions;
        s.scores.add(score_mention(m.sentiment, mode));
    }
    return out;
}

}  // namespace

StabilityVectors stability_vectors(std::span<MentionAnnotation const> mentions, std::size_t top_k,
                                   double keep_fraction, ScoreMode mode)
{
    std::vector<MentionAnnotation> linked;
    for (auto const &m : mentions) {
        if (m.link) {
            linked.push_back(m);
        }
    }
    auto const full = per_entity(linked, mode);
    auto const filtered_mentions = most_confident_per_class(linked, keep_fraction);
    auto const filtered = per_entity(filtered_mentions, mode);

    std::vector<std::pair<std::string, std::size_t>> ranked;
    ranked.reserve(full.size());
    for (auto const &[id, s] : full) {
        ranked.emplace_back(id, s.mentions);
    }
    std::sort(ranked.begin(), ranked.end(), [](auto const &a, auto const &b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    ranked.resize(std::min(top_k, ranked.size()));

    StabilityVectors v;
    for (auto const &[id, count] : ranked) {
        v.counts_all.push_back(static_cast<double>(count));
        auto it = filtered.find(id);
        v.counts_kept.push_back(it == filtered.end() ? 0.0 : static_cast<double>(it->second.mentions));
        if (it != filtered.end()) {
            v.means_all.push_back(*full.at(id).scores.mean());
            v.means_kept.push_back(*it->second.scores.mean());
        }
    }
    return v;
}

StabilityResult stability_check(std::span<MentionAnnotation const> mentions, std::size_t top_k,
                                double keep_fraction, ScoreMode mode)
{
    auto const v = stability_vectors(mentions, top_k, keep_fraction, mode);
    StabilityResult result;
    result.entities = v.counts_all.size();
    result.sentiment_entities = v.means_all.size();
    result.pearson_mentions = pearson(v.counts_all, v.counts_kept);
    result.pearson_sentiment = pearson(v.means_all, v.means_kept);
    return result;
}

}  // namespace newslens::sentiment
