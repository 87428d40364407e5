#include "newslens/annotations.hpp"

#include "newslens/hash.hpp"
#include "newslens/json_io.hpp"
#include "newslens/text.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <unordered_set>

namespace newslens {

std::string_view to_string(EntityType type)
{
    switch (type) {
    case EntityType::person:
        return "person";
    case EntityType::organization:
        return "organization";
    case EntityType::location:
        return "location";
    }
    return "person";
}

std::optional<EntityType> parse_entity_type(std::string_view name)
{
    if (name == "person") {
        return EntityType::person;
    }
    if (name == "organization") {
        return EntityType::organization;
    }
    if (name == "location") {
        return EntityType::location;
    }
    return std::nullopt;
}

std::string_view to_string(SentimentClass cls)
{
    switch (cls) {
    case SentimentClass::negative:
        return "negative";
    case SentimentClass::neutral:
        return "neutral";
    case SentimentClass::positive:
        return "positive";
    }
    return "neutral";
}

std::optional<SentimentClass> parse_sentiment_class(std::string_view name)
{
    if (name == "negative") {
        return SentimentClass::negative;
    }
    if (name == "neutral") {
        return SentimentClass::neutral;
    }
    if (name == "positive") {
        return SentimentClass::positive;
    }
    return std::nullopt;
}

bool SentimentDistribution::valid() const
{
    auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
    return in_unit(negative) && in_unit(neutral) && in_unit(positive) &&
           std::abs(negative + neutral + positive - 1.0) <= 1e-6;
}

namespace {

constexpr std::array<std::string_view, 11> annotation_fields = {
    "doc_id", "sentence_index", "start", "end", "surface", "entity_type",
    "kb_id", "link_log_likelihood", "p_negative", "p_neutral", "p_positive"};

struct LineError {
    std::string field;
    std::string message;
};

std::optional<LineError> read_mention(nlohmann::json const &obj, MentionAnnotation &m)
{
    for (auto const &[key, _] : obj.items()) {
        if (std::find(annotation_fields.begin(), annotation_fields.end(), key) == annotation_fields.end()) {
            return LineError{key, "unknown field"};
        }
    }
    for (auto name : annotation_fields) {
        if (!obj.contains(std::string(name))) {
            return LineError{std::string(name), "missing field"};
        }
    }
    auto const &doc_id = obj["doc_id"];
    if (!doc_id.is_string() || doc_id.get<std::string>().empty()) {
        return LineError{"doc_id", "expected a non-empty string"};
    }
    m.doc_id = doc_id.get<std::string>();
    for (auto [name, slot] : {std::pair{"sentence_index", &m.sentence_index}, std::pair{"start", &m.start},
                              std::pair{"end", &m.end}}) {
        auto const &v = obj[name];
        if (!v.is_number_unsigned()) {
            return LineError{name, "expected a non-negative integer"};
        }
        *slot = v.get<std::size_t>();
    }
    if (m.start >= m.end) {
        return LineError{"end", "span must satisfy start < end"};
    }
    if (!obj["surface"].is_string()) {
        return LineError{"surface", "expected a string"};
    }
    m.surface = obj["surface"].get<std::string>();
    auto const &type = obj["entity_type"];
    auto parsed_type = type.is_string() ? parse_entity_type(type.get<std::string>()) : std::nullopt;
    if (!parsed_type) {
        return LineError{"entity_type", "expected one of person, organization, location"};
    }
    m.entity_type = *parsed_type;

    auto const &kb = obj["kb_id"];
    auto const &ll = obj["link_log_likelihood"];
    if (kb.is_null() != ll.is_null()) {
        return LineError{kb.is_null() ? "kb_id" : "link_log_likelihood",
                         "kb_id and link_log_likelihood must be both null or both set"};
    }
    if (!kb.is_null()) {
        if (!kb.is_string() || kb.get<std::string>().empty()) {
            return LineError{"kb_id", "expected a non-empty string or null"};
        }
        if (!ll.is_number()) {
            return LineError{"link_log_likelihood", "expected a number or null"};
        }
        auto const value = ll.get<double>();
        if (!(value <= 0.0)) {
            return LineError{"link_log_likelihood", "log-likelihood must be <= 0"};
        }
        m.link = EntityLink{kb.get<std::string>(), value};
    } else {
        m.link.reset();
    }
    for (auto [name, slot] : {std::pair{"p_negative", &m.sentiment.negative},
                              std::pair{"p_neutral", &m.sentiment.neutral},
                              std::pair{"p_positive", &m.sentiment.positive}}) {
        auto const &v = obj[name];
        if (!v.is_number()) {
            return LineError{name, "expected a number"};
        }
        *slot = v.get<double>();
    }
    if (!m.sentiment.valid()) {
        return LineError{"p_negative,p_neutral,p_positive",
                         "class probabilities must lie in [0, 1] and sum to 1 (within 1e-6)"};
    }
    return std::nullopt;
}

}  // namespace

AnnotationLoad parse_annotations(std::string_view content, CorpusManifest const *manifest)
{
    AnnotationLoad result;
    std::unordered_set<std::string> known;
    if (manifest != nullptr) {
        for (auto const &doc : manifest->documents) {
            known.insert(doc.doc_id);
        }
    }
    auto const lines = json_io::split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto const line_no = i + 1;
        if (json_io::is_blank(lines[i])) {
            continue;
        }
        auto obj = json_io::parse_object(lines[i]);
        if (!obj) {
            result.issues.push_back({line_no, "", "not a JSON object"});
            continue;
        }
        MentionAnnotation m;
        if (auto err = read_mention(*obj, m)) {
            result.issues.push_back({line_no, std::move(err->field), std::move(err->message)});
            continue;
        }
        if (manifest != nullptr && !known.contains(m.doc_id)) {
            result.issues.push_back({line_no, "doc_id", "unknown doc_id `" + m.doc_id + "`"});
            continue;
        }
        result.mentions.push_back(std::move(m));
    }
    return result;
}

AnnotationLoad read_annotations(std::filesystem::path const &path, CorpusManifest const *manifest)
{
    return parse_annotations(json_io::read_file(path), manifest);
}

std::string to_json_line(MentionAnnotation const &m)
{
    nlohmann::ordered_json obj;
    obj["doc_id"] = m.doc_id;
    obj["sentence_index"] = m.sentence_index;
    obj["start"] = m.start;
    obj["end"] = m.end;
    obj["surface"] = m.surface;
    obj["entity_type"] = to_string(m.entity_type);
    if (m.link) {
        obj["kb_id"] = m.link->kb_id;
        obj["link_log_likelihood"] = m.link->log_likelihood;
    } else {
        obj["kb_id"] = nullptr;
        obj["link_log_likelihood"] = nullptr;
    }
    obj["p_negative"] = m.sentiment.negative;
    obj["p_neutral"] = m.sentiment.neutral;
    obj["p_positive"] = m.sentiment.positive;
    return obj.dump();
}

void write_annotations(std::ostream &out, std::span<MentionAnnotation const> mentions)
{
    for (auto const &m : mentions) {
        out << to_json_line(m) << '\n';
    }
}

LinkFilterResult filter_linked(std::span<MentionAnnotation const> mentions, double min_log_likelihood)
{
    LinkFilterResult result;
    for (auto const &m : mentions) {
        if (m.link && m.link->log_likelihood > min_log_likelihood) {
            result.kept.push_back(m);
        } else {
            ++result.dropped;
        }
    }
    return result;
}

Gazetteer load_gazetteer(std::filesystem::path const &path)
{
    auto doc = nlohmann::json::parse(json_io::read_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw DataError(path.string() + ": gazetteer must be a JSON object");
    }
    Gazetteer out;
    for (auto const &[surface, value] : doc.items()) {
        GazetteerEntry entry;
        if (value.is_string()) {
            entry.kb_id = value.get<std::string>();
        } else if (value.is_object() && value.contains("kb_id") && value["kb_id"].is_string()) {
            entry.kb_id = value["kb_id"].get<std::string>();
            if (auto it = value.find("entity_type"); it != value.end()) {
                auto type = it->is_string() ? parse_entity_type(it->get<std::string>()) : std::nullopt;
                if (!type) {
                    throw DataError(path.string() + ": bad entity_type for `" + surface + "`");
                }
                entry.entity_type = *type;
            }
        } else {
            throw DataError(path.string() + ": bad gazetteer entry for `" + surface + "`");
        }
        if (surface.empty() || entry.kb_id.empty()) {
            throw DataError(path.string() + ": empty surface or kb_id");
        }
        out.emplace(surface, std::move(entry));
    }
    return out;
}

std::vector<SentimentRule> load_sentiment_rules(std::filesystem::path const &path)
{
    auto doc = nlohmann::json::parse(json_io::read_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        throw DataError(path.string() + ": sentiment rules must be a JSON array");
    }
    std::vector<SentimentRule> rules;
    for (auto const &item : doc) {
        if (!item.is_object() || !item.contains("cue") || !item["cue"].is_string() || !item.contains("class") ||
            !item["class"].is_string()) {
            throw DataError(path.string() + ": each rule needs string `cue` and `class`");
        }
        auto cls = parse_sentiment_class(item["class"].get<std::string>());
        if (!cls) {
            throw DataError(path.string() + ": unknown class `" + item["class"].get<std::string>() + "`");
        }
        rules.push_back({item["cue"].get<std::string>(), *cls});
    }
    return rules;
}

std::vector<Sentence> split_sentences(std::string_view body)
{
    std::vector<Sentence> out;
    auto const scalars = text::decode_utf8(body);
    auto const n = scalars.size();
    std::size_t begin = 0;
    auto flush = [&](std::size_t end) {
        while (begin < end && text::is_space(scalars[begin])) {
            ++begin;
        }
        auto stop = end;
        while (stop > begin && text::is_space(scalars[stop - 1])) {
            --stop;
        }
        if (stop > begin) {
            out.push_back({scalars.substr(begin, stop - begin), begin});
        }
        begin = end;
    };
    for (std::size_t i = 0; i < n; ++i) {
        auto const c = scalars[i];
        if ((c == U'.' || c == U'!' || c == U'?') && i + 1 < n && text::is_space(scalars[i + 1])) {
            flush(i + 1);
        }
    }
    flush(n);
    return out;
}

namespace {

bool is_word_char(char32_t c) { return !text::is_space(c) && !text::is_punctuation(c); }

struct CompiledSurface {
    std::u32string text;
    Gazetteer::const_iterator entry;
};

SentimentDistribution mock_distribution(SentimentClass label, SplitMix64 &rng)
{
    // winning class in [0.51, 1.0) so the argmax is never tied
    double const top = 0.51 + 0.49 * rng.next_unit();
    double const split = rng.next_unit();
    double const rest_a = (1.0 - top) * split;
    double const rest_b = (1.0 - top) - rest_a;
    switch (label) {
    case SentimentClass::negative:
        return {top, rest_a, rest_b};
    case SentimentClass::positive:
        return {rest_a, rest_b, top};
    case SentimentClass::neutral:
        break;
    }
    return {rest_a, top, rest_b};
}

}  // namespace

std::vector<MentionAnnotation> mock_annotate(CorpusManifest const &manifest, Gazetteer const &gazetteer,
                                             std::span<SentimentRule const> rules, std::uint64_t seed)
{
    std::vector<CompiledSurface> surfaces;
    for (auto it = gazetteer.begin(); it != gazetteer.end(); ++it) {
        surfaces.push_back({text::decode_utf8(it->first), it});
    }
    std::stable_sort(surfaces.begin(), surfaces.end(),
                     [](auto const &a, auto const &b) { return a.text.size() > b.text.size(); });

    std::vector<std::string> cues;
    for (auto const &rule : rules) {
        auto tokens = text::tokenize(rule.cue);
        cues.push_back(tokens.empty() ? std::string{} : tokens.front());
    }

    std::vector<MentionAnnotation> out;
    for (auto const &doc : manifest.documents) {
        auto const sentences = split_sentences(doc.body);
        for (std::size_t s = 0; s < sentences.size(); ++s) {
            auto const &sentence = sentences[s].text;
            auto const tokens = text::tokenize(text::encode_utf8(sentence));
            auto label = SentimentClass::neutral;
            for (std::size_t r = 0; r < rules.size(); ++r) {
                if (!cues[r].empty() && std::find(tokens.begin(), tokens.end(), cues[r]) != tokens.end()) {
                    label = rules[r].label;
                    break;
                }
            }
            std::size_t i = 0;
            while (i < sentence.size()) {
                bool const word_start = i == 0 || !is_word_char(sentence[i - 1]);
                CompiledSurface const *hit = nullptr;
                if (word_start) {
                    for (auto const &candidate : surfaces) {
                        auto const len = candidate.text.size();
                        if (sentence.compare(i, len, candidate.text) == 0 &&
                            (i + len == sentence.size() || !is_word_char(sentence[i + len]))) {
                            hit = &candidate;
                            break;
                        }
                    }
                }
                if (hit == nullptr) {
                    ++i;
                    continue;
                }
                std::uint64_t key = fnv1a64(doc.doc_id, mix64(seed));
                key = mix64(key ^ (static_cast<std::uint64_t>(s) << 32) ^ i);
                SplitMix64 rng(key);
                MentionAnnotation m;
                m.doc_id = doc.doc_id;
                m.sentence_index = s;
                m.start = i;
                m.end = i + hit->text.size();
                m.surface = hit->entry->first;
                m.entity_type = hit->entry->second.entity_type;
                m.sentiment = mock_distribution(label, rng);
                m.link = EntityLink{hit->entry->second.kb_id, -0.3 * rng.next_unit()};
                out.push_back(std::move(m));
                i += hit->text.size();
            }
        }
    }
    return out;
}

}  // namespace newslens
