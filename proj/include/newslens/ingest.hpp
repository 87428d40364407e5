#pragma once

#include "newslens/date.hpp"
#include "newslens/error.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace newslens {

struct RawDocument {
    std::string doc_id;
    std::string url;
    std::string domain;
    std::string outlet;
    Date published_at;
    std::string title;
    std::string body;

    bool operator==(RawDocument const &) const = default;
};

struct OutletInfo {
    std::optional<std::string> leaning;

    bool operator==(OutletInfo const &) const = default;
};

using OutletMetadata = std::map<std::string, OutletInfo>;

struct CorpusManifest {
    std::vector<RawDocument> documents;
    std::optional<DateWindow> window;  // nullopt only for an empty, window-less corpus
    OutletMetadata outlet_metadata;
};

struct LoadOptions {
    /// Documents outside this window are schema violations. When absent the
    /// window is the span of the loaded publication dates.
    std::optional<DateWindow> window;
    /// When present every document's outlet must be a key of this map.
    std::optional<OutletMetadata> outlet_metadata;
    unsigned threads = 1;
};

struct CorpusLoad {
    CorpusManifest manifest;
    std::vector<RecordIssue> issues;

    bool ok() const { return issues.empty(); }
};

/// Parses a corpus file (one JSON object per line). Malformed lines are kept
/// out of the manifest and reported in `issues`. Throws DataError when the file
/// cannot be read.
CorpusLoad load_corpus(std::filesystem::path const &path, LoadOptions const &options = {});
CorpusLoad parse_corpus(std::string_view content, LoadOptions const &options = {});

/// Reads `{"outlet": {"leaning": "..." | null}, ...}`.
OutletMetadata load_outlet_metadata(std::filesystem::path const &path);

/// Keeps documents whose body holds at least `min_chars` Unicode scalar values.
CorpusManifest filter_min_length(CorpusManifest const &manifest, std::size_t min_chars = 200);

/// Canonical single-line serialisation (fixed field order, no trailing newline).
std::string to_json_line(RawDocument const &doc);
void write_corpus(std::ostream &out, CorpusManifest const &manifest);
void write_corpus(std::ostream &out, std::vector<RawDocument> const &documents);

/// Position of each document in `manifest.documents`, keyed by doc_id.
std::unordered_map<std::string, std::size_t> index_by_id(CorpusManifest const &manifest);

/// Order-sensitive hash of the canonical serialisation.
std::string corpus_fingerprint(CorpusManifest const &manifest);

}  // namespace newslens
