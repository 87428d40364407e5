#pragma once

#include "newslens/annotations.hpp"
#include "newslens/ingest.hpp"
#include "newslens/kb.hpp"
#include "newslens/report.hpp"
#include "newslens/sentiment.hpp"
#include "newslens/topics.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newslens::analytics {

/// One linked person mention joined with its document, knowledge-base record
/// and topic memberships. Every report is computed from these rows.
struct MentionFact {
    std::string doc_id;
    std::string outlet;
    std::string domain;
    Date published_at;
    int year = 0;
    std::string kb_id;
    std::string name;
    kb::Gender gender = kb::Gender::unknown;
    std::optional<Date> birth_date;
    std::string country;
    bool is_politician = false;
    std::optional<kb::Orientation> orientation;  // mapped politicians only
    double sentiment_score = 0.0;
    std::vector<std::string> topic_ids;  // sorted

    bool operator==(MentionFact const &) const = default;
};

struct FactIssue {
    std::size_t mention_index = 0;
    std::string doc_id;
    std::string message;
};

struct FactBuild {
    std::vector<MentionFact> facts;
    std::vector<FactIssue> issues;  // referential failures; the mention gets no fact
};

/// Mentions must already be link-filtered. Non-person mentions are skipped;
/// unknown documents, unlinked mentions and kb ids without a person record are
/// reported. A birth date after publication is reported and dropped from the fact.
FactBuild build_facts(CorpusManifest const &manifest, std::span<MentionAnnotation const> mentions,
                      kb::KnowledgeBase const &kb, topics::TopicSubsets const &topic_subsets,
                      sentiment::ScoreMode mode = sentiment::ScoreMode::argmax);

/// Defaults follow the published analyses (40 outlets, top-10 lists, a pool of
/// 100 for extremes, a support of 1000 politicians with a floor of 10).
struct AnalyticsOptions {
    std::size_t max_outlets = 40;
    std::size_t min_mentions_per_outlet = 1;
    std::size_t demographic_outlets = 10;
    std::size_t top_politicians = 10;
    std::size_t extreme_pool = 100;
    std::size_t extreme_k = 10;
    std::size_t similarity_support = 1000;
    std::size_t similarity_floor = 10;
    std::size_t temporal_politicians = 10;
    bool sample_std = false;  // population std by default
    std::size_t stability_top_k = 1000;
    double stability_keep_fraction = 0.5;
    sentiment::ScoreMode score_mode = sentiment::ScoreMode::argmax;
    /// Temporal reports cover every year of this window; derived from the
    /// facts when absent.
    std::optional<DateWindow> window;
    report::Provenance provenance;  // corpus hash derived from the facts when empty
};

nlohmann::ordered_json to_json(AnalyticsOptions const &options);

enum class GroupBy { outlet, topic, year };
enum class Dimension { orientation, politician, gender };
enum class Measure { mentions, mean_sentiment };

/// Name of the row that aggregates the whole corpus in grouped reports.
inline constexpr std::string_view all_group = "ALL";

report::ReportTable outlet_sentiment(std::span<MentionFact const> facts, AnalyticsOptions const &options = {});
/// GroupBy::outlet or GroupBy::topic.
report::ReportTable orientation_mention_distribution(std::span<MentionFact const> facts, GroupBy by,
                                                     AnalyticsOptions const &options = {});
report::ReportTable orientation_sentiment_deviation(std::span<MentionFact const> facts, GroupBy by,
                                                    AnalyticsOptions const &options = {});
report::ReportTable top_politicians(std::span<MentionFact const> facts, AnalyticsOptions const &options = {});
report::ReportTable extreme_politicians(std::span<MentionFact const> facts, AnalyticsOptions const &options = {});
/// GroupBy::outlet (top outlets plus ALL) or GroupBy::year.
report::ReportTable gender_report(std::span<MentionFact const> facts, GroupBy by,
                                  AnalyticsOptions const &options = {});
report::ReportTable age_report(std::span<MentionFact const> facts, AnalyticsOptions const &options = {});
report::ReportTable source_similarity_ranks(std::span<MentionFact const> facts, AnalyticsOptions const &options = {});
report::ReportTable temporal_series(std::span<MentionFact const> facts, Dimension dimension, Measure measure,
                                    AnalyticsOptions const &options = {});
/// `all_mentions` is the raw annotation set, `linked_mentions` the output of
/// the link filter; `facts` are built from the latter.
report::ReportTable corpus_stats(CorpusManifest const &manifest, std::span<MentionAnnotation const> all_mentions,
                                 std::span<MentionAnnotation const> linked_mentions,
                                 std::span<MentionFact const> facts, AnalyticsOptions const &options = {});
/// Confidence-filter stability over politician mentions. Undefined
/// correlations are reported as nulls.
report::ReportTable stability_report(std::span<MentionAnnotation const> linked_mentions, kb::KnowledgeBase const &kb,
                                     AnalyticsOptions const &options = {});

/// Everything a report may need.
struct AnalysisInputs {
    CorpusManifest const *manifest = nullptr;
    std::span<MentionAnnotation const> all_mentions;
    std::span<MentionAnnotation const> linked_mentions;
    kb::KnowledgeBase const *kb = nullptr;
    std::span<MentionFact const> facts;
};

struct ReportSpec {
    std::string_view id;
    std::function<report::ReportTable(AnalysisInputs const &, AnalyticsOptions const &)> run;
};

/// Every report in the catalogue, in the order `analyze --all` writes them.
std::vector<ReportSpec> const &report_catalog();
/// Throws std::out_of_range for unknown ids.
report::ReportTable run_report(std::string_view id, AnalysisInputs const &inputs, AnalyticsOptions const &options);

/// Hash of the facts that does not depend on their order.
std::string facts_fingerprint(std::span<MentionFact const> facts);

}  // namespace newslens::analytics
