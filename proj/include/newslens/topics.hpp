#pragma once

#include "newslens/ingest.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace newslens::topics {

struct Posting {
    std::uint32_t doc = 0;  // position in InvertedIndex::doc_ids()
    std::uint32_t term_frequency = 0;

    bool operator==(Posting const &) const = default;
};

/// Term -> postings over the tokenised concatenation of title and body.
/// Postings are ordered by document position.
class InvertedIndex {
   public:
    InvertedIndex() = default;
    InvertedIndex(std::vector<std::string> doc_ids, std::vector<std::uint32_t> doc_lengths,
                  std::map<std::string, std::vector<Posting>, std::less<>> postings);

    std::size_t doc_count() const { return doc_ids_.size(); }
    double avg_doc_length() const { return avg_doc_length_; }
    std::vector<std::string> const &doc_ids() const { return doc_ids_; }
    std::vector<std::uint32_t> const &doc_lengths() const { return doc_lengths_; }
    std::map<std::string, std::vector<Posting>, std::less<>> const &postings() const { return postings_; }

    /// Empty span for unknown terms.
    std::span<Posting const> postings(std::string_view term) const;
    std::size_t document_frequency(std::string_view term) const { return postings(term).size(); }
    std::optional<std::uint32_t> position(std::string_view doc_id) const;

    bool operator==(InvertedIndex const &other) const
    {
        return doc_ids_ == other.doc_ids_ && doc_lengths_ == other.doc_lengths_ && postings_ == other.postings_;
    }

   private:
    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> doc_lengths_;
    double avg_doc_length_ = 0.0;
    std::map<std::string, std::vector<Posting>, std::less<>> postings_;
    std::unordered_map<std::string, std::uint32_t> positions_;
};

/// Text that gets indexed for a document: title, newline, body.
std::string indexed_text(RawDocument const &doc);

InvertedIndex build_index(CorpusManifest const &manifest, unsigned threads = 1);
InvertedIndex build_index(std::span<RawDocument const> documents, unsigned threads = 1);

void write_index(std::ostream &out, InvertedIndex const &index);
InvertedIndex read_index(std::filesystem::path const &path);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// ln(1 + (N - df + 0.5) / (df + 0.5))
double bm25_idf(std::size_t doc_count, std::size_t document_frequency);

/// Tokenised query with duplicates removed, first occurrence order kept.
std::vector<std::string> query_terms(std::string_view query_text);

/// Sum over distinct query terms of idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len / avglen)).
/// Throws std::out_of_range when `doc_id` is not indexed.
double bm25_score(InvertedIndex const &index, std::span<std::string const> query_terms, std::string_view doc_id,
                  Bm25Params const &params = {});

/// Term-at-a-time scores of every document containing at least one query term,
/// keyed by document position.
std::map<std::uint32_t, double> score_matching(InvertedIndex const &index, std::span<std::string const> query_terms,
                                               Bm25Params const &params = {});

struct TopicQuery {
    std::string topic_id;
    std::string query_text;
    double pertinence_threshold = 0.0;
};

class TopicCatalog {
   public:
    TopicCatalog() = default;
    explicit TopicCatalog(std::vector<TopicQuery> topics);

    /// Throws std::out_of_range for unknown topic ids.
    TopicQuery const &at(std::string_view topic_id) const;
    std::vector<TopicQuery> const &topics() const { return topics_; }

   private:
    std::vector<TopicQuery> topics_;
};

/// JSON array of {topic_id, query_text, threshold}.
TopicCatalog load_topics(std::filesystem::path const &path);
TopicCatalog parse_topics(std::string_view content);

/// Documents containing at least one query term whose score reaches the
/// topic's pertinence threshold.
std::set<std::string> select_topic_subset(InvertedIndex const &index, TopicQuery const &topic,
                                          Bm25Params const &params = {});
std::set<std::string> select_topic_subset(InvertedIndex const &index, TopicCatalog const &catalog,
                                          std::string_view topic_id, Bm25Params const &params = {});

using TopicSubsets = std::map<std::string, std::set<std::string>>;

TopicSubsets select_all_topics(InvertedIndex const &index, TopicCatalog const &catalog, Bm25Params const &params = {});

}  // namespace newslens::topics
