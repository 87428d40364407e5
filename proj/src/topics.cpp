#include "newslens/topics.hpp"

#include "newslens/error.hpp"
#include "newslens/json_io.hpp"
#include "newslens/parallel.hpp"
#include "newslens/text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

namespace newslens::topics {

InvertedIndex::InvertedIndex(std::vector<std::string> doc_ids, std::vector<std::uint32_t> doc_lengths,
                             std::map<std::string, std::vector<Posting>, std::less<>> postings)
    : doc_ids_(std::move(doc_ids)), doc_lengths_(std::move(doc_lengths)), postings_(std::move(postings))
{
    if (doc_ids_.size() != doc_lengths_.size()) {
        throw DataError("index: doc_ids and doc_lengths differ in size");
    }
    if (doc_ids_.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw DataError("index: too many documents");
    }
    std::uint64_t total = 0;
    for (std::uint32_t i = 0; i < doc_ids_.size(); ++i) {
        if (!positions_.emplace(doc_ids_[i], i).second) {
            throw DataError("index: duplicate doc_id `" + doc_ids_[i] + "`");
        }
        total += doc_lengths_[i];
    }
    avg_doc_length_ = doc_ids_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(doc_ids_.size());
    for (auto const &[term, list] : postings_) {
        for (auto const &p : list) {
            if (p.doc >= doc_ids_.size() || p.term_frequency == 0) {
                throw DataError("index: invalid posting for term `" + term + "`");
            }
        }
    }
}

std::span<Posting const> InvertedIndex::postings(std::string_view term) const
{
    auto it = postings_.find(term);
    if (it == postings_.end()) {
        return {};
    }
    return it->second;
}

std::optional<std::uint32_t> InvertedIndex::position(std::string_view doc_id) const
{
    auto it = positions_.find(std::string(doc_id));
    if (it == positions_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string indexed_text(RawDocument const &doc) { return doc.title + "\n" + doc.body; }

InvertedIndex build_index(std::span<RawDocument const> documents, unsigned threads)
{
    std::vector<std::map<std::string, std::uint32_t>> counts(documents.size());
    std::vector<std::uint32_t> lengths(documents.size());
    parallel_for(documents.size(), threads, [&](std::size_t i) {
        auto const tokens = text::tokenize(indexed_text(documents[i]));
        lengths[i] = static_cast<std::uint32_t>(tokens.size());
        for (auto const &t : tokens) {
            ++counts[i][t];
        }
    });
    std::vector<std::string> ids;
    ids.reserve(documents.size());
    std::map<std::string, std::vector<Posting>, std::less<>> postings;
    for (std::size_t i = 0; i < documents.size(); ++i) {
        ids.push_back(documents[i].doc_id);
        for (auto const &[term, tf] : counts[i]) {
            postings[term].push_back({static_cast<std::uint32_t>(i), tf});
        }
    }
    return InvertedIndex(std::move(ids), std::move(lengths), std::move(postings));
}

InvertedIndex build_index(CorpusManifest const &manifest, unsigned threads)
{
    return build_index(std::span<RawDocument const>(manifest.documents), threads);
}

void write_index(std::ostream &out, InvertedIndex const &index)
{
    nlohmann::ordered_json doc;
    doc["doc_ids"] = index.doc_ids();
    doc["doc_lengths"] = index.doc_lengths();
    auto &postings = doc["postings"] = nlohmann::ordered_json::object();
    for (auto const &[term, list] : index.postings()) {
        auto arr = nlohmann::ordered_json::array();
        for (auto const &p : list) {
            arr.push_back({p.doc, p.term_frequency});
        }
        postings[term] = std::move(arr);
    }
    out << doc.dump() << '\n';
}

InvertedIndex read_index(std::filesystem::path const &path)
{
    auto doc = nlohmann::json::parse(json_io::read_file(path), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw DataError(path.string() + ": not an index file");
    }
    try {
        std::map<std::string, std::vector<Posting>, std::less<>> postings;
        for (auto const &[term, list] : doc.at("postings").items()) {
            auto &out = postings[term];
            for (auto const &p : list) {
                out.push_back({p.at(0).get<std::uint32_t>(), p.at(1).get<std::uint32_t>()});
            }
        }
        return InvertedIndex(doc.at("doc_ids").get<std::vector<std::string>>(),
                             doc.at("doc_lengths").get<std::vector<std::uint32_t>>(), std::move(postings));
    } catch (nlohmann::json::exception const &e) {
        throw DataError(path.string() + ": malformed index: " + e.what());
    }
}

double bm25_idf(std::size_t doc_count, std::size_t document_frequency)
{
    auto const n = static_cast<double>(doc_count);
    auto const df = static_cast<double>(document_frequency);
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

std::vector<std::string> query_terms(std::string_view query_text)
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto &t : text::tokenize(query_text)) {
        if (seen.insert(t).second) {
            out.push_back(std::move(t));
        }
    }
    return out;
}

namespace {

double term_weight(double idf, std::uint32_t tf, std::uint32_t doc_length, double avg_length, Bm25Params const &params)
{
    auto const f = static_cast<double>(tf);
    double const norm = avg_length > 0.0 ? static_cast<double>(doc_length) / avg_length : 0.0;
    return idf * f * (params.k1 + 1.0) / (f + params.k1 * (1.0 - params.b + params.b * norm));
}

std::vector<std::string> distinct(std::span<std::string const> terms)
{
    std::vector<std::string> out;
    for (auto const &t : terms) {
        if (std::find(out.begin(), out.end(), t) == out.end()) {
            out.push_back(t);
        }
    }
    return out;
}

}  // namespace

double bm25_score(InvertedIndex const &index, std::span<std::string const> terms, std::string_view doc_id,
                  Bm25Params const &params)
{
    auto pos = index.position(doc_id);
    if (!pos) {
        throw std::out_of_range("document `" + std::string(doc_id) + "` is not indexed");
    }
    double score = 0.0;
    for (auto const &term : distinct(terms)) {
        auto const list = index.postings(term);
        auto it = std::lower_bound(list.begin(), list.end(), *pos,
                                   [](Posting const &p, std::uint32_t doc) { return p.doc < doc; });
        if (it == list.end() || it->doc != *pos) {
            continue;
        }
        score += term_weight(bm25_idf(index.doc_count(), list.size()), it->term_frequency,
                             index.doc_lengths()[*pos], index.avg_doc_length(), params);
    }
    return score;
}

std::map<std::uint32_t, double> score_matching(InvertedIndex const &index, std::span<std::string const> terms,
                                               Bm25Params const &params)
{
    std::map<std::uint32_t, double> scores;
    for (auto const &term : distinct(terms)) {
        auto const list = index.postings(term);
        if (list.empty()) {
            continue;
        }
        auto const idf = bm25_idf(index.doc_count(), list.size());
        for (auto const &p : list) {
            scores[p.doc] +=
                term_weight(idf, p.term_frequency, index.doc_lengths()[p.doc], index.avg_doc_length(), params);
        }
    }
    return scores;
}

TopicCatalog::TopicCatalog(std::vector<TopicQuery> topics) : topics_(std::move(topics))
{
    std::unordered_set<std::string> ids;
    for (auto const &t : topics_) {
        if (t.topic_id.empty()) {
            throw DataError("topic with empty topic_id");
        }
        if (!ids.insert(t.topic_id).second) {
            throw DataError("duplicate topic_id `" + t.topic_id + "`");
        }
        if (!(t.pertinence_threshold >= 0.0)) {
            throw DataError("topic `" + t.topic_id + "` has a negative threshold");
        }
    }
}

TopicQuery const &TopicCatalog::at(std::string_view topic_id) const
{
    for (auto const &t : topics_) {
        if (t.topic_id == topic_id) {
            return t;
        }
    }
    throw std::out_of_range("unknown topic `" + std::string(topic_id) + "`");
}

TopicCatalog parse_topics(std::string_view content)
{
    auto doc = nlohmann::json::parse(content, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) {
        throw DataError("topics config must be a JSON array");
    }
    std::vector<TopicQuery> topics;
    for (auto const &item : doc) {
        if (!item.is_object() || !item.contains("topic_id") || !item["topic_id"].is_string() ||
            !item.contains("query_text") || !item["query_text"].is_string() || !item.contains("threshold") ||
            !item["threshold"].is_number()) {
            throw DataError("each topic needs string topic_id, string query_text and numeric threshold");
        }
        topics.push_back({item["topic_id"].get<std::string>(), item["query_text"].get<std::string>(),
                          item["threshold"].get<double>()});
    }
    return TopicCatalog(std::move(topics));
}

TopicCatalog load_topics(std::filesystem::path const &path)
{
    try {
        return parse_topics(json_io::read_file(path));
    } catch (DataError const &e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::set<std::string> select_topic_subset(InvertedIndex const &index, TopicQuery const &topic,
                                          Bm25Params const &params)
{
    auto const terms = query_terms(topic.query_text);
    std::set<std::string> out;
    for (auto const &[doc, score] : score_matching(index, terms, params)) {
        if (score >= topic.pertinence_threshold) {
            out.insert(index.doc_ids()[doc]);
        }
    }
    return out;
}

std::set<std::string> select_topic_subset(InvertedIndex const &index, TopicCatalog const &catalog,
                                          std::string_view topic_id, Bm25Params const &params)
{
    return select_topic_subset(index, catalog.at(topic_id), params);
}

TopicSubsets select_all_topics(InvertedIndex const &index, TopicCatalog const &catalog, Bm25Params const &params)
{
    TopicSubsets out;
    for (auto const &t : catalog.topics()) {
        out.emplace(t.topic_id, select_topic_subset(index, t, params));
    }
    return out;
}

}  // namespace newslens::topics
