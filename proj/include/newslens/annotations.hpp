#pragma once

#include "newslens/error.hpp"
#include "newslens/ingest.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newslens {

enum class EntityType { person, organization, location };
enum class SentimentClass { negative, neutral, positive };

std::string_view to_string(EntityType type);
std::optional<EntityType> parse_entity_type(std::string_view name);
std::string_view to_string(SentimentClass cls);
std::optional<SentimentClass> parse_sentiment_class(std::string_view name);

struct SentimentDistribution {
    double negative = 0.0;
    double neutral = 1.0;
    double positive = 0.0;

    /// Each probability in [0, 1] and their sum within 1e-6 of one.
    bool valid() const;
    bool operator==(SentimentDistribution const &) const = default;
};

struct EntityLink {
    std::string kb_id;
    double log_likelihood = 0.0;  // <= 0

    bool operator==(EntityLink const &) const = default;
};

/// One entity mention. Offsets count Unicode scalar values from the start of
/// the sentence, half-open.
struct MentionAnnotation {
    std::string doc_id;
    std::size_t sentence_index = 0;
    std::size_t start = 0;
    std::size_t end = 0;
    std::string surface;
    EntityType entity_type = EntityType::person;
    std::optional<EntityLink> link;
    SentimentDistribution sentiment;

    bool operator==(MentionAnnotation const &) const = default;
};

struct AnnotationLoad {
    std::vector<MentionAnnotation> mentions;
    std::vector<RecordIssue> issues;

    bool ok() const { return issues.empty(); }
};

/// Schema-validates an annotation JSONL file. When `manifest` is given every
/// doc_id must name one of its documents.
AnnotationLoad read_annotations(std::filesystem::path const &path, CorpusManifest const *manifest = nullptr);
AnnotationLoad parse_annotations(std::string_view content, CorpusManifest const *manifest = nullptr);

std::string to_json_line(MentionAnnotation const &mention);
void write_annotations(std::ostream &out, std::span<MentionAnnotation const> mentions);

struct LinkFilterResult {
    std::vector<MentionAnnotation> kept;
    std::size_t dropped = 0;  // unlinked or at/below the threshold
};

/// Keeps mentions whose link log-likelihood is strictly greater than
/// `min_log_likelihood`.
LinkFilterResult filter_linked(std::span<MentionAnnotation const> mentions, double min_log_likelihood = -0.2);

// --- deterministic mock annotator ------------------------------------------

struct GazetteerEntry {
    std::string kb_id;
    EntityType entity_type = EntityType::person;
};

/// Surface form -> entity. Matching is exact and case-sensitive.
using Gazetteer = std::map<std::string, GazetteerEntry>;

struct SentimentRule {
    std::string cue;  // compared against sentence tokens after tokenisation
    SentimentClass label = SentimentClass::neutral;
};

/// Accepts `{"surface": "kb_id"}` or `{"surface": {"kb_id": ..., "entity_type": ...}}`.
Gazetteer load_gazetteer(std::filesystem::path const &path);
/// Accepts a JSON array of `{"cue": ..., "class": "negative|neutral|positive"}`.
std::vector<SentimentRule> load_sentiment_rules(std::filesystem::path const &path);

struct Sentence {
    std::u32string text;
    std::size_t offset = 0;  // scalar offset of the sentence in the body
};

/// Splits after '.', '!' or '?' when followed by whitespace. Leading
/// whitespace is not part of a sentence; empty sentences are skipped.
std::vector<Sentence> split_sentences(std::string_view body);

/// Annotates each document body with exact gazetteer matches (longest match
/// first, whole words only). The first rule whose cue occurs in the sentence
/// decides the class, otherwise neutral. Confidence and link likelihood are
/// derived from a hash of (seed, doc_id, sentence, start), so the output is a
/// pure function of the inputs.
std::vector<MentionAnnotation> mock_annotate(CorpusManifest const &manifest, Gazetteer const &gazetteer,
                                             std::span<SentimentRule const> rules, std::uint64_t seed);

}  // namespace newslens
