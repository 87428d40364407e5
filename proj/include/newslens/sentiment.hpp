#pragma once

#include "newslens/annotations.hpp"
#include "newslens/fsum.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace newslens::sentiment {

/// How a class distribution becomes a scalar in [-1, 1].
enum class ScoreMode {
    argmax,    // negative -> -1, neutral -> 0, positive -> +1
    expected,  // p_positive - p_negative
};

std::string_view to_string(ScoreMode mode);
std::optional<ScoreMode> parse_score_mode(std::string_view name);

/// Argmax class; any tie for the maximum resolves to neutral.
SentimentClass argmax_class(SentimentDistribution const &d);
double score_mention(SentimentDistribution const &d, ScoreMode mode = ScoreMode::argmax);
/// Largest class probability.
double confidence(SentimentDistribution const &d);

/// Raised when a correlation is undefined (constant input or too few points).
class UndefinedCorrelation : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Pearson product-moment coefficient; throws std::invalid_argument on length
/// mismatch and UndefinedCorrelation on fewer than two points or zero variance.
double pearson(std::span<double const> x, std::span<double const> y);

/// Correctly rounded sum and mean; neither depends on the order values were
/// added in.
class StableSum {
   public:
    void add(double v)
    {
        exact_.add(v);
        ++count_;
    }
    std::size_t count() const { return count_; }
    double sum() const { return exact_.value(); }
    /// nullopt when empty.
    std::optional<double> mean() const;

   private:
    ExactSum exact_;
    std::size_t count_ = 0;
};

/// For each argmax class, the ceil(keep_fraction * n) most confident mentions
/// (ties by doc_id, sentence_index, start, end, kb_id, then the
/// probabilities). Output keeps input order.
std::vector<MentionAnnotation> most_confident_per_class(std::span<MentionAnnotation const> mentions,
                                                        double keep_fraction);

/// Paired per-entity vectors behind stability_check.
struct StabilityVectors {
    std::vector<double> counts_all;
    std::vector<double> counts_kept;
    std::vector<double> means_all;   // support entities with >= 1 kept mention
    std::vector<double> means_kept;
};

StabilityVectors stability_vectors(std::span<MentionAnnotation const> mentions, std::size_t top_k = 1000,
                                   double keep_fraction = 0.5, ScoreMode mode = ScoreMode::argmax);

struct StabilityResult {
    double pearson_mentions = 0.0;
    double pearson_sentiment = 0.0;
    std::size_t entities = 0;            // top-k support size
    std::size_t sentiment_entities = 0;  // support entities present after filtering
};

/// Compares per-entity mention counts and mean scores computed from all
/// mentions against those computed from the per-class most confident subset,
/// over the `top_k` most-mentioned linked entities (ties by kb_id). Mention
/// counts are correlated over the whole support; mean scores over support
/// entities that keep at least one mention. Unlinked mentions are ignored.
StabilityResult stability_check(std::span<MentionAnnotation const> mentions, std::size_t top_k = 1000,
                                double keep_fraction = 0.5, ScoreMode mode = ScoreMode::argmax);

}  // namespace newslens::sentiment
