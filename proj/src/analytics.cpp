#include "newslens/analytics.hpp"

#include "newslens/hash.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace newslens::analytics {

using report::Cell;
using report::Column;
using report::ColumnType;
using report::ReportTable;
using sentiment::StableSum;

FactBuild build_facts(CorpusManifest const &manifest, std::span<MentionAnnotation const> mentions,
                      kb::KnowledgeBase const &kb, topics::TopicSubsets const &topic_subsets,
                      sentiment::ScoreMode mode)
{
    auto const docs = index_by_id(manifest);
    std::unordered_map<std::string, std::vector<std::string>> memberships;
    for (auto const &[topic_id, doc_ids] : topic_subsets) {
        for (auto const &id : doc_ids) {
            memberships[id].push_back(topic_id);  // map iteration keeps these sorted
        }
    }

    FactBuild out;
    for (std::size_t i = 0; i < mentions.size(); ++i) {
        auto const &m = mentions[i];
        if (m.entity_type != EntityType::person) {
            continue;
        }
        auto report_issue = [&](std::string message) { out.issues.push_back({i, m.doc_id, std::move(message)}); };
        if (!m.link) {
            report_issue("mention is not linked");
            continue;
        }
        auto doc_it = docs.find(m.doc_id);
        if (doc_it == docs.end()) {
            report_issue("unknown doc_id");
            continue;
        }
        auto const *person = kb.person(m.link->kb_id);
        if (person == nullptr) {
            report_issue("no person record for `" + m.link->kb_id + "`");
            continue;
        }
        auto const &doc = manifest.documents[doc_it->second];
        MentionFact f;
        f.doc_id = doc.doc_id;
        f.outlet = doc.outlet;
        f.domain = doc.domain;
        f.published_at = doc.published_at;
        f.year = doc.published_at.year();
        f.kb_id = person->kb_id;
        f.name = person->canonical_name;
        f.gender = person->gender;
        f.birth_date = person->birth_date;
        if (f.birth_date && doc.published_at < *f.birth_date) {
            report_issue("birth date of `" + person->kb_id + "` is after publication; age dropped");
            f.birth_date.reset();
        }
        f.country = person->country;
        f.is_politician = person->is_politician;
        if (person->is_politician) {
            f.orientation = kb::resolve_orientation(*person, kb, doc.published_at);
        }
        f.sentiment_score = sentiment::score_mention(m.sentiment, mode);
        if (auto t = memberships.find(doc.doc_id); t != memberships.end()) {
            f.topic_ids = t->second;
        }
        out.facts.push_back(std::move(f));
    }
    return out;
}

nlohmann::ordered_json to_json(AnalyticsOptions const &o)
{
    nlohmann::ordered_json j;
    j["max_outlets"] = o.max_outlets;
    j["min_mentions_per_outlet"] = o.min_mentions_per_outlet;
    j["demographic_outlets"] = o.demographic_outlets;
    j["top_politicians"] = o.top_politicians;
    j["extreme_pool"] = o.extreme_pool;
    j["extreme_k"] = o.extreme_k;
    j["similarity_support"] = o.similarity_support;
    j["similarity_floor"] = o.similarity_floor;
    j["temporal_politicians"] = o.temporal_politicians;
    j["sample_std"] = o.sample_std;
    j["stability_top_k"] = o.stability_top_k;
    j["stability_keep_fraction"] = o.stability_keep_fraction;
    j["score_mode"] = sentiment::to_string(o.score_mode);
    if (o.window) {
        j["window"] = {o.window->start.to_string(), o.window->end.to_string()};
    } else {
        j["window"] = nullptr;
    }
    return j;
}

std::string facts_fingerprint(std::span<MentionFact const> facts)
{
    std::uint64_t sum = 0;
    for (auto const &f : facts) {
        std::uint64_t h = fnv1a64(f.doc_id);
        h = fnv1a64("\x1f" + f.kb_id, h);
        h = fnv1a64("\x1f" + report::format_real(f.sentiment_score), h);
        for (auto const &t : f.topic_ids) {
            h = fnv1a64("\x1f" + t, h);
        }
        sum += mix64(h);
    }
    return to_hex(mix64(sum ^ facts.size()));
}

namespace {

Cell integer(std::size_t v) { return static_cast<std::int64_t>(v); }
Cell real_or_null(std::optional<double> v) { return v ? Cell{*v} : Cell{}; }
Cell text(std::string_view v) { return std::string(v); }

ReportTable make_table(std::string id, std::vector<Column> columns, std::span<MentionFact const> facts,
                       AnalyticsOptions const &options)
{
    ReportTable t;
    t.report_id = std::move(id);
    t.columns = std::move(columns);
    t.provenance = options.provenance;
    t.provenance.config_hash = to_hex(fnv1a64(to_json(options).dump()));
    if (t.provenance.corpus_hash.empty()) {
        t.provenance.corpus_hash = facts_fingerprint(facts);
    }
    return t;
}

std::vector<MentionFact const *> politicians(std::span<MentionFact const> facts)
{
    std::vector<MentionFact const *> out;
    for (auto const &f : facts) {
        if (f.is_politician) {
            out.push_back(&f);
        }
    }
    return out;
}

/// (key, count) sorted by count descending then key ascending.
std::vector<std::pair<std::string, std::size_t>> ranked(std::map<std::string, std::size_t> const &counts)
{
    std::vector<std::pair<std::string, std::size_t>> out(counts.begin(), counts.end());
    std::stable_sort(out.begin(), out.end(), [](auto const &a, auto const &b) { return a.second > b.second; });
    return out;
}

std::vector<std::string> top_keys(std::map<std::string, std::size_t> const &counts, std::size_t limit,
                                  std::size_t min_count = 0)
{
    std::vector<std::string> out;
    for (auto const &[key, count] : ranked(counts)) {
        if (out.size() == limit) {
            break;
        }
        if (count >= min_count) {
            out.push_back(key);
        }
    }
    return out;
}

std::vector<std::string> group_keys(MentionFact const &f, GroupBy by)
{
    switch (by) {
    case GroupBy::outlet:
        return {f.outlet};
    case GroupBy::topic:
        return f.topic_ids;
    case GroupBy::year:
        return {std::to_string(f.year)};
    }
    return {};
}

std::string_view group_suffix(GroupBy by)
{
    switch (by) {
    case GroupBy::outlet:
        return "outlet";
    case GroupBy::topic:
        return "topic";
    case GroupBy::year:
        return "year";
    }
    return "outlet";
}

/// Group order for orientation reports: outlets by mapped-mention count (with
/// the corpus-wide ALL group first), topics and years by key.
template <typename Counts>
std::vector<std::string> ordered_groups(Counts const &group_counts, GroupBy by, AnalyticsOptions const &options)
{
    std::vector<std::string> out;
    if (by == GroupBy::outlet) {
        out.emplace_back(all_group);
        for (auto &key : top_keys(group_counts, options.max_outlets)) {
            out.push_back(std::move(key));
        }
        return out;
    }
    for (auto const &[key, _] : group_counts) {
        out.push_back(key);
    }
    return out;
}

struct OrientationCell {
    std::size_t mentions = 0;
    StableSum scores;
};

struct OrientationGroup {
    std::size_t mentions = 0;
    StableSum scores;
    std::array<OrientationCell, 5> buckets;

    void add(MentionFact const &f)
    {
        ++mentions;
        scores.add(f.sentiment_score);
        auto &b = buckets[static_cast<std::size_t>(*f.orientation)];
        ++b.mentions;
        b.scores.add(f.sentiment_score);
    }
};

std::map<std::string, OrientationGroup> orientation_groups(std::span<MentionFact const> facts, GroupBy by)
{
    std::map<std::string, OrientationGroup> groups;
    for (auto const &f : facts) {
        if (!f.is_politician || !f.orientation) {
            continue;
        }
        if (by == GroupBy::outlet) {
            groups[std::string(all_group)].add(f);
        }
        for (auto const &key : group_keys(f, by)) {
            groups[key].add(f);
        }
    }
    return groups;
}

template <typename Group>
std::map<std::string, std::size_t> counts_without_all(std::map<std::string, Group> const &groups)
{
    std::map<std::string, std::size_t> counts;
    for (auto const &[key, g] : groups) {
        if (key != all_group) {
            counts[key] = g.mentions;
        }
    }
    return counts;
}

struct EntityAgg {
    std::string name;
    std::size_t mentions = 0;
    StableSum scores;
    std::map<int, StableSum> by_year;
};

std::map<std::string, EntityAgg> politician_aggregates(std::span<MentionFact const> facts)
{
    std::map<std::string, EntityAgg> out;
    for (auto const *f : politicians(facts)) {
        auto &e = out[f->kb_id];
        e.name = f->name;
        ++e.mentions;
        e.scores.add(f->sentiment_score);
        e.by_year[f->year].add(f->sentiment_score);
    }
    return out;
}

std::vector<std::string> most_mentioned(std::map<std::string, EntityAgg> const &aggs, std::size_t limit)
{
    std::map<std::string, std::size_t> counts;
    for (auto const &[id, e] : aggs) {
        counts[id] = e.mentions;
    }
    return top_keys(counts, limit);
}

std::optional<double> cosine(std::vector<double> const &a, std::vector<double> const &b)
{
    ExactSum dot;
    ExactSum na;
    ExactSum nb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot.add(a[i] * b[i]);
        na.add(a[i] * a[i]);
        nb.add(b[i] * b[i]);
    }
    if (na.value() == 0.0 || nb.value() == 0.0) {
        return std::nullopt;
    }
    return dot.value() / (std::sqrt(na.value()) * std::sqrt(nb.value()));
}

/// 1-based ranks by descending value; nulls last; ties by position (which is
/// already the outlet frequency order).
std::vector<std::size_t> rank_descending(std::vector<std::optional<double>> const &values)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (values[a].has_value() != values[b].has_value()) {
            return values[a].has_value();
        }
        return values[a] && *values[a] > *values[b];
    });
    std::vector<std::size_t> ranks(values.size());
    for (std::size_t r = 0; r < order.size(); ++r) {
        ranks[order[r]] = r + 1;
    }
    return ranks;
}

}  // namespace

ReportTable outlet_sentiment(std::span<MentionFact const> facts, AnalyticsOptions const &options)
{
    auto t = make_table("outlet_sentiment",
                        {{"rank", ColumnType::integer},
                         {"outlet", ColumnType::text},
                         {"mentions", ColumnType::integer},
                         {"mean_sentiment", ColumnType::real}},
                        facts, options);
    StableSum global;
    std::map<std::string, StableSum> per_outlet;
    std::map<std::string, std::size_t> counts;
    for (auto const *f : politicians(facts)) {
        global.add(f->sentiment_score);
        per_outlet[f->outlet].add(f->sentiment_score);
        ++counts[f->outlet];
    }
    t.rows.push_back({integer(0), text(all_group), integer(global.count()), real_or_null(global.mean())});
    auto const outlets = top_keys(counts, options.max_outlets, options.min_mentions_per_outlet);
    for (std::size_t i = 0; i < outlets.size(); ++i) {
        auto const &s = per_outlet.at(outlets[i]);
        t.rows.push_back({integer(i + 1), text(outlets[i]), integer(s.count()), real_or_null(s.mean())});
    }
    return t;
}

ReportTable orientation_mention_distribution(std::span<MentionFact const> facts, GroupBy by,
                                             AnalyticsOptions const &options)
{
    auto t = make_table("orientation_mentions_by_" + std::string(group_suffix(by)),
                        {{"group", ColumnType::text},
                         {"group_mentions", ColumnType::integer},
                         {"orientation", ColumnType::text},
                         {"mentions", ColumnType::integer},
                         {"share", ColumnType::real}},
                        facts, options);
    auto const groups = orientation_groups(facts, by);
    for (auto const &key : ordered_groups(counts_without_all(groups), by, options)) {
        auto it = groups.find(key);
        if (it == groups.end()) {
            continue;
        }
        auto const &g = it->second;
        for (auto o : kb::all_orientations) {
            auto const &b = g.buckets[static_cast<std::size_t>(o)];
            t.rows.push_back({text(key), integer(g.mentions), text(kb::to_string(o)), integer(b.mentions),
                              static_cast<double>(b.mentions) / static_cast<double>(g.mentions)});
        }
    }
    return t;
}

ReportTable orientation_sentiment_deviation(std::span<MentionFact const> facts, GroupBy by,
                                            AnalyticsOptions const &options)
{
    auto t = make_table("orientation_sentiment_by_" + std::string(group_suffix(by)),
                        {{"group", ColumnType::text},
                         {"group_mentions", ColumnType::integer},
                         {"group_mean", ColumnType::real},
                         {"orientation", ColumnType::text},
                         {"mentions", ColumnType::integer},
                         {"share", ColumnType::real},
                         {"mean_sentiment", ColumnType::real},
                         {"deviation", ColumnType::real}},
                        facts, options);
    auto const groups = orientation_groups(facts, by);
    for (auto const &key : ordered_groups(counts_without_all(groups), by, options)) {
        auto it = groups.find(key);
        if (it == groups.end()) {
            continue;
        }
        auto const &g = it->second;
        auto const group_mean = *g.scores.mean();
        for (auto o : kb::all_orientations) {
            auto const &b = g.buckets[static_cast<std::size_t>(o)];
            auto const mean = b.scores.mean();
            t.rows.push_back({text(key), integer(g.mentions), group_mean, text(kb::to_string(o)),
                              integer(b.mentions),
                              static_cast<double>(b.mentions) / static_cast<double>(g.mentions), real_or_null(mean),
                              mean ? Cell{*mean - group_mean} : Cell{}});
        }
    }
    return t;
}

ReportTable top_politicians(std::span<MentionFact const> facts, AnalyticsOptions const &options)
{
    auto t = make_table("top_politicians",
                        {{"rank", ColumnType::integer},
                         {"kb_id", ColumnType::text},
                         {"name", ColumnType::text},
                         {"mentions", ColumnType::integer},
                         {"mean_sentiment", ColumnType::real},
                         {"yearly_std", ColumnType::real},
                         {"years", ColumnType::integer}},
                        facts, options);
    auto const aggs = politician_aggregates(facts);
    auto const ids = most_mentioned(aggs, options.top_politicians);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto const &e = aggs.at(ids[i]);
        StableSum yearly;
        std::vector<double> means;
        for (auto const &[_, s] : e.by_year) {
            means.push_back(*s.mean());
            yearly.add(means.back());
        }
        auto const centre = *yearly.mean();
        StableSum squares;
        for (double m : means) {
            squares.add((m - centre) * (m - centre));
        }
        std::optional<double> std_dev;
        if (!options.sample_std) {
            std_dev = std::sqrt(squares.sum() / static_cast<double>(means.size()));
        } else if (means.size() > 1) {
            std_dev = std::sqrt(squares.sum() / static_cast<double>(means.size() - 1));
        }
        t.rows.push_back({integer(i + 1), text(ids[i]), text(e.name), integer(e.mentions), *e.scores.mean(),
                          real_or_null(std_dev), integer(means.size())});
    }
    return t;
}

ReportTable extreme_politicians(std::span<MentionFact const> facts, AnalyticsOptions const &options)
{
    auto t = make_table("extreme_politicians",
                        {{"list", ColumnType::text},
                         {"rank", ColumnType::integer},
                         {"kb_id", ColumnType::text},
                         {"name", ColumnType::text},
                         {"mentions", ColumnType::integer},
                         {"mean_sentiment", ColumnType::real}},
                        facts, options);
    auto const aggs = politician_aggregates(facts);
    struct Entry {
        std::string id;
        std::size_t mentions;
        double mean;
    };
    std::vector<Entry> pool;
    for (auto const &id : most_mentioned(aggs, options.extreme_pool)) {
        auto const &e = aggs.at(id);
        pool.push_back({id, e.mentions, *e.scores.mean()});
    }
    auto tie_break = [](Entry const &a, Entry const &b) {
        return a.mentions != b.mentions ? a.mentions > b.mentions : a.id < b.id;
    };
    auto emit = [&](std::string_view list, auto better) {
        auto sorted = pool;
        std::sort(sorted.begin(), sorted.end(), [&](Entry const &a, Entry const &b) {
            return a.mean != b.mean ? better(a.mean, b.mean) : tie_break(a, b);
        });
        for (std::size_t i = 0; i < std::min(options.extreme_k, sorted.size()); ++i) {
            auto const &e = sorted[i];
            t.rows.push_back(
                {text(list), integer(i + 1), text(e.id), text(aggs.at(e.id).name), integer(e.mentions), e.mean});
        }
    };
    emit("highest", std::greater<double>{});
    emit("lowest", std::less<double>{});
    return t;
}

ReportTable gender_report(std::span<MentionFact const> facts, GroupBy by, AnalyticsOptions const &options)
{
    if (by == GroupBy::topic) {
        throw std::invalid_argument("gender report supports outlet or year grouping");
    }
    auto t = make_table("gender_by_" + std::string(group_suffix(by)),
                        {{"group", ColumnType::text},
                         {"group_mentions", ColumnType::integer},
                         {"gender", ColumnType::text},
                         {"mentions", ColumnType::integer},
                         {"share", ColumnType::real},
                         {"mean_sentiment", ColumnType::real}},
                        facts, options);
    struct Group {
        std::size_t mentions = 0;
        std::array<StableSum, 4> genders;
    };
    std::map<std::string, Group> groups;
    std::map<std::string, std::size_t> outlet_counts;
    for (auto const *f : politicians(facts)) {
        auto add = [&](std::string const &key) {
            auto &g = groups[key];
            ++g.mentions;
            g.genders[static_cast<std::size_t>(f->gender)].add(f->sentiment_score);
        };
        if (by == GroupBy::outlet) {
            add(std::string(all_group));
            add(f->outlet);
            ++outlet_counts[f->outlet];
        } else {
            add(std::to_string(f->year));
        }
    }
    std::vector<std::string> order;
    if (by == GroupBy::outlet) {
        order.emplace_back(all_group);
        for (auto &k : top_keys(outlet_counts, options.demographic_outlets)) {
            order.push_back(std::move(k));
        }
    } else {
        for (auto const &[k, _] : groups) {
            order.push_back(k);
        }
    }
    for (auto const &key : order) {
        auto it = groups.find(key);
        if (it == groups.end()) {
            continue;
        }
        auto const &g = it->second;
        for (std::size_t k = 0; k < g.genders.size(); ++k) {
            auto const &s = g.genders[k];
            if (s.count() == 0) {
                continue;
            }
            t.rows.push_back({text(key), integer(g.mentions), text(kb::to_string(static_cast<kb::Gender>(k))),
                              integer(s.count()),
                              static_cast<double>(s.count()) / static_cast<double>(g.mentions), *s.mean()});
        }
    }
    return t;
}

ReportTable age_report(std::span<MentionFact const> facts, AnalyticsOptions const &options)
{
    auto t = make_table("age_by_outlet",
                        {{"group", ColumnType::text},
                         {"mentions", ColumnType::integer},
                         {"mentions_with_age", ColumnType::integer},
                         {"mean_age", ColumnType::real}},
                        facts, options);
    struct Group {
        std::size_t mentions = 0;
        StableSum ages;
    };
    std::map<std::string, Group> groups;
    std::map<std::string, std::size_t> counts;
    for (auto const *f : politicians(facts)) {
        auto const age = kb::age_at(f->birth_date, f->published_at);
        for (auto const &key : {std::string(all_group), f->outlet}) {
            auto &g = groups[key];
            ++g.mentions;
            if (age) {
                g.ages.add(*age);
            }
        }
        ++counts[f->outlet];
    }
    std::vector<std::string> order{std::string(all_group)};
    for (auto &k : top_keys(counts, options.demographic_outlets)) {
        order.push_back(std::move(k));
    }
    for (auto const &key : order) {
        auto const &g = groups[key];
        t.rows.push_back({text(key), integer(g.mentions), integer(g.ages.count()), real_or_null(g.ages.mean())});
    }
    return t;
}

ReportTable source_similarity_ranks(std::span<MentionFact const> facts, AnalyticsOptions const &options)
{
    auto t = make_table("source_similarity",
                        {{"outlet", ColumnType::text},
                         {"mentions", ColumnType::integer},
                         {"mentions_cosine", ColumnType::real},
                         {"mentions_rank", ColumnType::integer},
                         {"sentiment_cosine", ColumnType::real},
                         {"sentiment_rank", ColumnType::integer}},
                        facts, options);
    auto const pols = politicians(facts);
    std::map<std::string, std::size_t> corpus_counts;
    std::map<std::string, std::size_t> outlet_counts;
    for (auto const *f : pols) {
        ++corpus_counts[f->kb_id];
        ++outlet_counts[f->outlet];
    }
    auto const support = top_keys(corpus_counts, options.similarity_support);
    std::unordered_map<std::string, std::size_t> slot;
    for (std::size_t j = 0; j < support.size(); ++j) {
        slot.emplace(support[j], j);
    }
    auto const outlets = top_keys(outlet_counts, options.max_outlets);
    std::unordered_map<std::string, std::size_t> outlet_slot;
    for (std::size_t k = 0; k < outlets.size(); ++k) {
        outlet_slot.emplace(outlets[k], k);
    }

    struct Vectors {
        std::vector<std::size_t> counts;
        std::vector<StableSum> scores;
    };
    auto fresh = [&] { return Vectors{std::vector<std::size_t>(support.size(), 0), std::vector<StableSum>(support.size())}; };
    Vectors corpus = fresh();
    std::vector<Vectors> per_outlet(outlets.size(), fresh());
    for (auto const *f : pols) {
        auto s = slot.find(f->kb_id);
        if (s == slot.end()) {
            continue;
        }
        ++corpus.counts[s->second];
        corpus.scores[s->second].add(f->sentiment_score);
        if (auto o = outlet_slot.find(f->outlet); o != outlet_slot.end()) {
            ++per_outlet[o->second].counts[s->second];
            per_outlet[o->second].scores[s->second].add(f->sentiment_score);
        }
    }
    auto sentiment_vector = [&](Vectors const &v) {
        std::vector<std::optional<double>> out(support.size());
        for (std::size_t j = 0; j < support.size(); ++j) {
            if (v.counts[j] >= options.similarity_floor) {
                out[j] = v.scores[j].mean();
            }
        }
        return out;
    };
    auto as_reals = [](std::vector<std::size_t> const &c) {
        return std::vector<double>(c.begin(), c.end());
    };
    auto const corpus_mentions = as_reals(corpus.counts);
    auto const corpus_sentiment = sentiment_vector(corpus);

    std::vector<std::optional<double>> mention_cos(outlets.size());
    std::vector<std::optional<double>> sentiment_cos(outlets.size());
    for (std::size_t k = 0; k < outlets.size(); ++k) {
        mention_cos[k] = cosine(as_reals(per_outlet[k].counts), corpus_mentions);
        auto const own = sentiment_vector(per_outlet[k]);
        std::vector<double> a;
        std::vector<double> b;
        for (std::size_t j = 0; j < support.size(); ++j) {
            if (own[j] && corpus_sentiment[j]) {
                a.push_back(*own[j]);
                b.push_back(*corpus_sentiment[j]);
            }
        }
        sentiment_cos[k] = cosine(a, b);
    }
    auto const mention_ranks = rank_descending(mention_cos);
    auto const sentiment_ranks = rank_descending(sentiment_cos);
    for (std::size_t k = 0; k < outlets.size(); ++k) {
        t.rows.push_back({text(outlets[k]), integer(outlet_counts.at(outlets[k])), real_or_null(mention_cos[k]),
                          integer(mention_ranks[k]), real_or_null(sentiment_cos[k]), integer(sentiment_ranks[k])});
    }
    return t;
}

ReportTable temporal_series(std::span<MentionFact const> facts, Dimension dimension, Measure measure,
                            AnalyticsOptions const &options)
{
    std::string_view const dim_name = dimension == Dimension::orientation ? "orientation"
                                      : dimension == Dimension::politician ? "politician"
                                                                           : "gender";
    std::string_view const measure_name = measure == Measure::mentions ? "mentions" : "sentiment";
    auto t = make_table("temporal_" + std::string(dim_name) + "_" + std::string(measure_name),
                        {{"year", ColumnType::integer},
                         {"key", ColumnType::text},
                         {"label", ColumnType::text},
                         {"value", measure == Measure::mentions ? ColumnType::integer : ColumnType::real}},
                        facts, options);
    auto const pols = politicians(facts);

    // keys in output order with their display labels
    std::vector<std::pair<std::string, std::string>> keys;
    if (dimension == Dimension::orientation) {
        for (auto o : kb::all_orientations) {
            keys.emplace_back(kb::to_string(o), kb::to_string(o));
        }
    } else if (dimension == Dimension::politician) {
        auto const aggs = politician_aggregates(facts);
        for (auto const &id : most_mentioned(aggs, options.temporal_politicians)) {
            keys.emplace_back(id, aggs.at(id).name);
        }
    } else {
        std::array<bool, 4> present{};
        for (auto const *f : pols) {
            present[static_cast<std::size_t>(f->gender)] = true;
        }
        for (std::size_t g = 0; g < present.size(); ++g) {
            if (present[g]) {
                auto const name = kb::to_string(static_cast<kb::Gender>(g));
                keys.emplace_back(name, name);
            }
        }
    }
    auto key_of = [&](MentionFact const &f) -> std::optional<std::string> {
        switch (dimension) {
        case Dimension::orientation:
            return f.orientation ? std::optional<std::string>(kb::to_string(*f.orientation)) : std::nullopt;
        case Dimension::politician:
            return f.kb_id;
        case Dimension::gender:
            return std::string(kb::to_string(f.gender));
        }
        return std::nullopt;
    };

    std::optional<std::pair<int, int>> years;
    if (options.window) {
        years = std::pair{options.window->start.year(), options.window->end.year()};
    } else if (!pols.empty()) {
        auto [lo, hi] = std::minmax_element(pols.begin(), pols.end(),
                                            [](auto const *a, auto const *b) { return a->year < b->year; });
        years = std::pair{(*lo)->year, (*hi)->year};
    }
    if (!years) {
        return t;
    }
    std::map<std::pair<int, std::string>, StableSum> cells;
    for (auto const *f : pols) {
        if (auto k = key_of(*f)) {
            cells[{f->year, *k}].add(f->sentiment_score);
        }
    }
    for (int y = years->first; y <= years->second; ++y) {
        for (auto const &[key, label] : keys) {
            auto it = cells.find({y, key});
            Cell value;
            if (it != cells.end()) {
                value = measure == Measure::mentions ? integer(it->second.count()) : Cell{*it->second.mean()};
            }
            t.rows.push_back({static_cast<std::int64_t>(y), text(key), text(label), value});
        }
    }
    return t;
}

ReportTable corpus_stats(CorpusManifest const &manifest, std::span<MentionAnnotation const> all_mentions,
                         std::span<MentionAnnotation const> linked_mentions, std::span<MentionFact const> facts,
                         AnalyticsOptions const &options)
{
    auto t = make_table("corpus_stats",
                        {{"section", ColumnType::text}, {"key", ColumnType::text}, {"value", ColumnType::integer}},
                        facts, options);
    auto row = [&](std::string_view section, std::string_view key, std::size_t value) {
        t.rows.push_back({text(section), text(key), integer(value)});
    };
    auto ranked_rows = [&](std::string_view section, std::map<std::string, std::size_t> const &counts) {
        for (auto const &[key, count] : ranked(counts)) {
            row(section, key, count);
        }
    };

    std::map<std::string, std::size_t> per_outlet;
    std::map<std::string, std::size_t> per_year;
    for (auto const &doc : manifest.documents) {
        ++per_outlet[doc.outlet];
        ++per_year[std::to_string(doc.published_at.year())];
    }
    row("articles", "total", manifest.documents.size());
    ranked_rows("articles_per_outlet", per_outlet);
    for (auto const &[year, count] : per_year) {
        row("articles_per_year", year, count);
    }

    auto count_persons = [](std::span<MentionAnnotation const> ms) {
        return static_cast<std::size_t>(
            std::count_if(ms.begin(), ms.end(), [](auto const &m) { return m.entity_type == EntityType::person; }));
    };
    auto const pols = politicians(facts);
    row("mentions", "all_persons", count_persons(all_mentions));
    row("mentions", "persons_linked", count_persons(linked_mentions));
    row("mentions", "politicians", pols.size());

    std::map<std::string, std::size_t> countries;
    std::array<std::size_t, 5> orientations{};
    std::map<std::string, std::size_t> topics;
    std::array<std::size_t, 4> genders{};
    for (auto const *f : pols) {
        ++countries[f->country.empty() ? std::string("unknown") : f->country];
        if (f->orientation) {
            ++orientations[static_cast<std::size_t>(*f->orientation)];
        }
        for (auto const &topic : f->topic_ids) {
            ++topics[topic];
        }
        ++genders[static_cast<std::size_t>(f->gender)];
    }
    ranked_rows("politician_countries", countries);
    for (auto o : kb::all_orientations) {
        row("politician_orientations", kb::to_string(o), orientations[static_cast<std::size_t>(o)]);
    }
    for (auto const &[topic, count] : topics) {
        row("politician_topics", topic, count);
    }
    for (std::size_t g = 0; g < genders.size(); ++g) {
        row("politician_genders", kb::to_string(static_cast<kb::Gender>(g)), genders[g]);
    }
    return t;
}

ReportTable stability_report(std::span<MentionAnnotation const> linked_mentions, kb::KnowledgeBase const &kb,
                             AnalyticsOptions const &options)
{
    std::vector<MentionAnnotation> pols;
    for (auto const &m : linked_mentions) {
        if (m.entity_type != EntityType::person || !m.link) {
            continue;
        }
        if (auto const *p = kb.person(m.link->kb_id); p != nullptr && p->is_politician) {
            pols.push_back(m);
        }
    }
    auto t = make_table("stability",
                        {{"measure", ColumnType::text}, {"pearson", ColumnType::real}, {"entities", ColumnType::integer}},
                        {}, options);
    auto const v = sentiment::stability_vectors(pols, options.stability_top_k, options.stability_keep_fraction,
                                                options.score_mode);
    auto safe_pearson = [](std::vector<double> const &a, std::vector<double> const &b) -> Cell {
        try {
            return sentiment::pearson(a, b);
        } catch (sentiment::UndefinedCorrelation const &) {
            return {};
        }
    };
    t.rows.push_back({text("mentions"), safe_pearson(v.counts_all, v.counts_kept), integer(v.counts_all.size())});
    t.rows.push_back({text("sentiment"), safe_pearson(v.means_all, v.means_kept), integer(v.means_all.size())});
    return t;
}

std::vector<ReportSpec> const &report_catalog()
{
    using In = AnalysisInputs;
    using Opt = AnalyticsOptions;
    static std::vector<ReportSpec> const catalog = {
        {"outlet_sentiment", [](In const &in, Opt const &o) { return outlet_sentiment(in.facts, o); }},
        {"orientation_mentions_by_outlet",
         [](In const &in, Opt const &o) { return orientation_mention_distribution(in.facts, GroupBy::outlet, o); }},
        {"orientation_sentiment_by_outlet",
         [](In const &in, Opt const &o) { return orientation_sentiment_deviation(in.facts, GroupBy::outlet, o); }},
        {"orientation_mentions_by_topic",
         [](In const &in, Opt const &o) { return orientation_mention_distribution(in.facts, GroupBy::topic, o); }},
        {"orientation_sentiment_by_topic",
         [](In const &in, Opt const &o) { return orientation_sentiment_deviation(in.facts, GroupBy::topic, o); }},
        {"top_politicians", [](In const &in, Opt const &o) { return top_politicians(in.facts, o); }},
        {"extreme_politicians", [](In const &in, Opt const &o) { return extreme_politicians(in.facts, o); }},
        {"gender_by_outlet", [](In const &in, Opt const &o) { return gender_report(in.facts, GroupBy::outlet, o); }},
        {"gender_by_year", [](In const &in, Opt const &o) { return gender_report(in.facts, GroupBy::year, o); }},
        {"age_by_outlet", [](In const &in, Opt const &o) { return age_report(in.facts, o); }},
        {"source_similarity", [](In const &in, Opt const &o) { return source_similarity_ranks(in.facts, o); }},
        {"temporal_orientation_mentions",
         [](In const &in, Opt const &o) {
             return temporal_series(in.facts, Dimension::orientation, Measure::mentions, o);
         }},
        {"temporal_orientation_sentiment",
         [](In const &in, Opt const &o) {
             return temporal_series(in.facts, Dimension::orientation, Measure::mean_sentiment, o);
         }},
        {"temporal_politician_mentions",
         [](In const &in, Opt const &o) {
             return temporal_series(in.facts, Dimension::politician, Measure::mentions, o);
         }},
        {"temporal_politician_sentiment",
         [](In const &in, Opt const &o) {
             return temporal_series(in.facts, Dimension::politician, Measure::mean_sentiment, o);
         }},
        {"temporal_gender_mentions",
         [](In const &in, Opt const &o) { return temporal_series(in.facts, Dimension::gender, Measure::mentions, o); }},
        {"temporal_gender_sentiment",
         [](In const &in, Opt const &o) {
             return temporal_series(in.facts, Dimension::gender, Measure::mean_sentiment, o);
         }},
        {"corpus_stats",
         [](In const &in, Opt const &o) {
             if (in.manifest == nullptr) {
                 throw std::invalid_argument("corpus_stats needs the corpus manifest");
             }
             return corpus_stats(*in.manifest, in.all_mentions, in.linked_mentions, in.facts, o);
         }},
        {"stability",
         [](In const &in, Opt const &o) {
             if (in.kb == nullptr) {
                 throw std::invalid_argument("stability needs the knowledge base");
             }
             return stability_report(in.linked_mentions, *in.kb, o);
         }},
    };
    return catalog;
}

ReportTable run_report(std::string_view id, AnalysisInputs const &inputs, AnalyticsOptions const &options)
{
    for (auto const &spec : report_catalog()) {
        if (spec.id == id) {
            return spec.run(inputs, options);
        }
    }
    throw std::out_of_range("unknown report `" + std::string(id) + "`");
}

}  // namespace newslens::analytics
