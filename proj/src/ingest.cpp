#include "newslens/ingest.hpp"

#include "newslens/hash.hpp"
#include "newslens/json_io.hpp"
#include "newslens/parallel.hpp"
#include "newslens/text.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

namespace newslens {

namespace {

constexpr std::array<std::string_view, 7> corpus_fields = {
    "doc_id", "url", "domain", "outlet", "published_at", "title", "body"};

using ParsedLine = std::variant<std::monostate, RawDocument, RecordIssue>;

ParsedLine parse_line(std::string_view line, std::size_t line_no)
{
    if (json_io::is_blank(line)) {
        return std::monostate{};
    }
    auto issue = [&](std::string field, std::string msg) {
        return RecordIssue{line_no, std::move(field), std::move(msg)};
    };
    auto parsed = json_io::parse_object(line);
    if (!parsed) {
        return issue("", "not a JSON object");
    }
    auto const &obj = *parsed;
    for (auto const &[key, _] : obj.items()) {
        if (std::find(corpus_fields.begin(), corpus_fields.end(), key) == corpus_fields.end()) {
            return issue(key, "unknown field");
        }
    }
    std::array<std::string, 7> values;
    for (std::size_t i = 0; i < corpus_fields.size(); ++i) {
        auto const name = std::string(corpus_fields[i]);
        auto it = obj.find(name);
        if (it == obj.end()) {
            return issue(name, "missing field");
        }
        if (!it->is_string()) {
            return issue(name, "expected a string");
        }
        values[i] = it->get<std::string>();
    }
    RawDocument doc;
    doc.doc_id = std::move(values[0]);
    doc.url = std::move(values[1]);
    doc.domain = std::move(values[2]);
    doc.outlet = std::move(values[3]);
    doc.title = std::move(values[5]);
    doc.body = std::move(values[6]);
    if (doc.doc_id.empty()) {
        return issue("doc_id", "must be non-empty");
    }
    if (doc.domain.empty()) {
        return issue("domain", "must be non-empty");
    }
    if (std::any_of(doc.domain.begin(), doc.domain.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
        return issue("domain", "must be lowercase");
    }
    if (doc.outlet.empty()) {
        return issue("outlet", "must be non-empty");
    }
    auto date = Date::parse(values[4]);
    if (!date) {
        return issue("published_at", "expected an ISO-8601 date (YYYY-MM-DD)");
    }
    doc.published_at = *date;
    return doc;
}

}  // namespace

CorpusLoad parse_corpus(std::string_view content, LoadOptions const &options)
{
    auto const lines = json_io::split_lines(content);
    std::vector<ParsedLine> parsed(lines.size());
    parallel_for(lines.size(), options.threads, [&](std::size_t i) { parsed[i] = parse_line(lines[i], i + 1); });

    CorpusLoad result;
    std::unordered_map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        if (auto *problem = std::get_if<RecordIssue>(&parsed[i])) {
            result.issues.push_back(std::move(*problem));
            continue;
        }
        auto *doc = std::get_if<RawDocument>(&parsed[i]);
        if (doc == nullptr) {
            continue;
        }
        auto const line_no = i + 1;
        if (options.window && !options.window->contains(doc->published_at)) {
            result.issues.push_back({line_no, "published_at", "outside the corpus window"});
            continue;
        }
        if (options.outlet_metadata && !options.outlet_metadata->contains(doc->outlet)) {
            result.issues.push_back({line_no, "outlet", "outlet `" + doc->outlet + "` absent from outlet metadata"});
            continue;
        }
        if (auto [it, inserted] = seen.emplace(doc->doc_id, line_no); !inserted) {
            result.issues.push_back(
                {line_no, "doc_id", "duplicate doc_id (first seen on line " + std::to_string(it->second) + ")"});
            continue;
        }
        result.manifest.documents.push_back(std::move(*doc));
    }

    auto &manifest = result.manifest;
    if (options.outlet_metadata) {
        manifest.outlet_metadata = *options.outlet_metadata;
    } else {
        for (auto const &doc : manifest.documents) {
            manifest.outlet_metadata.try_emplace(doc.outlet);
        }
    }
    if (options.window) {
        manifest.window = options.window;
    } else if (!manifest.documents.empty()) {
        auto [lo, hi] = std::minmax_element(
            manifest.documents.begin(), manifest.documents.end(),
            [](auto const &a, auto const &b) { return a.published_at < b.published_at; });
        manifest.window = DateWindow{lo->published_at, hi->published_at};
    }
    return result;
}

CorpusLoad load_corpus(std::filesystem::path const &path, LoadOptions const &options)
{
    return parse_corpus(json_io::read_file(path), options);
}

OutletMetadata load_outlet_metadata(std::filesystem::path const &path)
{
    auto const content = json_io::read_file(path);
    auto doc = nlohmann::json::parse(content, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw DataError(path.string() + ": outlet metadata must be a JSON object");
    }
    OutletMetadata out;
    for (auto const &[outlet, info] : doc.items()) {
        OutletInfo entry;
        if (!info.is_object()) {
            throw DataError(path.string() + ": entry for `" + outlet + "` must be an object");
        }
        if (auto it = info.find("leaning"); it != info.end() && !it->is_null()) {
            if (!it->is_string()) {
                throw DataError(path.string() + ": leaning of `" + outlet + "` must be a string or null");
            }
            entry.leaning = it->get<std::string>();
        }
        out.emplace(outlet, std::move(entry));
    }
    return out;
}

CorpusManifest filter_min_length(CorpusManifest const &manifest, std::size_t min_chars)
{
    CorpusManifest out;
    out.window = manifest.window;
    out.outlet_metadata = manifest.outlet_metadata;
    std::copy_if(manifest.documents.begin(), manifest.documents.end(), std::back_inserter(out.documents),
                 [&](RawDocument const &doc) {
                     // byte length bounds the scalar count from above
                     return doc.body.size() >= min_chars && text::scalar_length(doc.body) >= min_chars;
                 });
    return out;
}

std::string to_json_line(RawDocument const &doc)
{
    nlohmann::ordered_json obj;
    obj["doc_id"] = doc.doc_id;
    obj["url"] = doc.url;
    obj["domain"] = doc.domain;
    obj["outlet"] = doc.outlet;
    obj["published_at"] = doc.published_at.to_string();
    obj["title"] = doc.title;
    obj["body"] = doc.body;
    return obj.dump();
}

void write_corpus(std::ostream &out, std::vector<RawDocument> const &documents)
{
    for (auto const &doc : documents) {
        out << to_json_line(doc) << '\n';
    }
}

void write_corpus(std::ostream &out, CorpusManifest const &manifest) { write_corpus(out, manifest.documents); }

std::unordered_map<std::string, std::size_t> index_by_id(CorpusManifest const &manifest)
{
    std::unordered_map<std::string, std::size_t> ids;
    ids.reserve(manifest.documents.size());
    for (std::size_t i = 0; i < manifest.documents.size(); ++i) {
        ids.emplace(manifest.documents[i].doc_id, i);
    }
    return ids;
}

std::string corpus_fingerprint(CorpusManifest const &manifest)
{
    std::uint64_t h = fnv1a64("");
    for (auto const &doc : manifest.documents) {
        h = fnv1a64(to_json_line(doc), h);
        h = fnv1a64("\n", h);
    }
    return to_hex(h);
}

}  // namespace newslens
