#pragma once

#include "newslens/annotations.hpp"
#include "newslens/date.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newslens::kb {

enum class Gender { male, female, other, unknown };

std::string_view to_string(Gender gender);
std::optional<Gender> parse_gender(std::string_view name);

/// Ordered left to right: RL < CL < C < CR < RR.
enum class Orientation { RL, CL, C, CR, RR };

inline constexpr std::array<Orientation, 5> all_orientations = {
    Orientation::RL, Orientation::CL, Orientation::C, Orientation::CR, Orientation::RR};

std::string_view to_string(Orientation orientation);
std::optional<Orientation> parse_orientation(std::string_view name);

struct PersonRecord {
    std::string kb_id;
    std::string canonical_name;
    Gender gender = Gender::unknown;
    std::optional<Date> birth_date;
    std::string country;
    bool is_politician = false;
    std::vector<std::string> party_ids;  // most recent first
};

struct PartyRecord {
    std::string party_kb_id;
    std::string name;
    std::string country;
    double left_right = 5.0;  // 0 (left) .. 10 (right)
};

/// Four increasing cut points splitting [0, 10] into half-open buckets
/// [0,c0) [c0,c1) [c1,c2) [c2,c3) [c3,10].
struct OrientationScale {
    std::array<double, 4> cuts{2.0, 4.0, 6.0, 8.0};
};

/// Throws std::out_of_range for scores outside [0, 10] (or NaN).
Orientation orientation_of(double left_right, OrientationScale const &scale = {});

class KnowledgeBase {
   public:
    KnowledgeBase() = default;

    /// Validates referential integrity; throws DataError on duplicates,
    /// out-of-range scores or crosswalk rows naming an unknown party.
    KnowledgeBase(std::vector<PersonRecord> persons, std::vector<PartyRecord> parties,
                  std::map<std::string, std::string> crosswalk, OrientationScale scale = {});

    PersonRecord const *person(std::string_view kb_id) const;
    PartyRecord const *party(std::string_view party_kb_id) const;
    /// ParlGov party row for an encyclopedia party id, when crosswalked.
    PartyRecord const *crosswalked_party(std::string_view encyclopedia_party_id) const;

    std::map<std::string, PersonRecord, std::less<>> const &persons() const { return persons_; }
    std::map<std::string, PartyRecord, std::less<>> const &parties() const { return parties_; }
    std::map<std::string, std::string, std::less<>> const &crosswalk() const { return crosswalk_; }
    OrientationScale const &scale() const { return scale_; }

   private:
    std::map<std::string, PersonRecord, std::less<>> persons_;
    std::map<std::string, PartyRecord, std::less<>> parties_;
    std::map<std::string, std::string, std::less<>> crosswalk_;
    OrientationScale scale_;
};

/// Person snapshot (JSONL), party snapshot (JSONL) and crosswalk CSV with a
/// header `encyclopedia_party_id,parlgov_party_id`.
KnowledgeBase load_kb(std::filesystem::path const &person_path, std::filesystem::path const &party_path,
                      std::filesystem::path const &crosswalk_path, OrientationScale scale = {});

std::vector<PersonRecord> parse_persons(std::string_view content);
std::vector<PartyRecord> parse_parties(std::string_view content);
std::map<std::string, std::string> parse_crosswalk(std::string_view content);

/// Bucket of the first listed party that has a crosswalked score. The
/// publication date is accepted for interface stability; affiliations are not
/// time-resolved.
std::optional<Orientation> resolve_orientation(PersonRecord const &person, KnowledgeBase const &kb,
                                               Date published_at);

/// Exact day difference divided by 365.2425. nullopt when the birth date is
/// unknown; std::invalid_argument when it is after the publication date.
std::optional<double> age_at(std::optional<Date> birth_date, Date published_at);
double age_at(Date birth_date, Date published_at);

struct KbCoverage {
    std::size_t persons = 0;
    std::size_t politicians = 0;
    std::size_t politicians_with_orientation = 0;
    std::size_t linked_mentions = 0;
    std::size_t mentions_with_record = 0;
    std::size_t politician_mentions = 0;
    std::size_t mappable_politician_mentions = 0;

    /// Share of politician mentions that resolve to an orientation; nullopt
    /// when there are no politician mentions.
    std::optional<double> mappable_fraction() const;
};

KbCoverage kb_coverage(KnowledgeBase const &kb, std::span<MentionAnnotation const> linked_mentions);

}  // namespace newslens::kb
