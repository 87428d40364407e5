#include "newslens/kb.hpp"

#include "newslens/error.hpp"
#include "newslens/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace newslens::kb {

std::string_view to_string(Gender gender)
{
    switch (gender) {
    case Gender::male:
        return "male";
    case Gender::female:
        return "female";
    case Gender::other:
        return "other";
    case Gender::unknown:
        return "unknown";
    }
    return "unknown";
}

std::optional<Gender> parse_gender(std::string_view name)
{
    if (name == "male") {
        return Gender::male;
    }
    if (name == "female") {
        return Gender::female;
    }
    if (name == "other") {
        return Gender::other;
    }
    if (name == "unknown") {
        return Gender::unknown;
    }
    return std::nullopt;
}

std::string_view to_string(Orientation orientation)
{
    switch (orientation) {
    case Orientation::RL:
        return "RL";
    case Orientation::CL:
        return "CL";
    case Orientation::C:
        return "C";
    case Orientation::CR:
        return "CR";
    case Orientation::RR:
        return "RR";
    }
    return "C";
}

std::optional<Orientation> parse_orientation(std::string_view name)
{
    for (auto o : all_orientations) {
        if (to_string(o) == name) {
            return o;
        }
    }
    return std::nullopt;
}

Orientation orientation_of(double left_right, OrientationScale const &scale)
{
    if (!(left_right >= 0.0 && left_right <= 10.0)) {
        throw std::out_of_range("left-right score must lie in [0, 10]");
    }
    std::size_t bucket = 0;
    while (bucket < scale.cuts.size() && left_right >= scale.cuts[bucket]) {
        ++bucket;
    }
    return all_orientations[bucket];
}

KnowledgeBase::KnowledgeBase(std::vector<PersonRecord> persons, std::vector<PartyRecord> parties,
                             std::map<std::string, std::string> crosswalk, OrientationScale scale)
    : scale_(scale)
{
    for (std::size_t i = 1; i < scale_.cuts.size(); ++i) {
        if (!(scale_.cuts[i - 1] < scale_.cuts[i])) {
            throw ConfigError("orientation cut points must be strictly increasing");
        }
    }
    for (auto &party : parties) {
        if (!(party.left_right >= 0.0 && party.left_right <= 10.0)) {
            throw DataError("party `" + party.party_kb_id + "` has left_right outside [0, 10]");
        }
        auto id = party.party_kb_id;
        if (!parties_.emplace(id, std::move(party)).second) {
            throw DataError("duplicate party_kb_id `" + id + "`");
        }
    }
    for (auto &[encyclopedia_id, parlgov_id] : crosswalk) {
        if (!parties_.contains(parlgov_id)) {
            throw DataError("crosswalk row `" + encyclopedia_id + "` references undefined party `" + parlgov_id + "`");
        }
        crosswalk_.emplace(encyclopedia_id, parlgov_id);
    }
    for (auto &person : persons) {
        auto id = person.kb_id;
        if (!persons_.emplace(id, std::move(person)).second) {
            throw DataError("duplicate kb_id `" + id + "`");
        }
    }
}

PersonRecord const *KnowledgeBase::person(std::string_view kb_id) const
{
    auto it = persons_.find(kb_id);
    return it == persons_.end() ? nullptr : &it->second;
}

PartyRecord const *KnowledgeBase::party(std::string_view party_kb_id) const
{
    auto it = parties_.find(party_kb_id);
    return it == parties_.end() ? nullptr : &it->second;
}

PartyRecord const *KnowledgeBase::crosswalked_party(std::string_view encyclopedia_party_id) const
{
    auto it = crosswalk_.find(encyclopedia_party_id);
    return it == crosswalk_.end() ? nullptr : party(it->second);
}

namespace {

std::string require_string(nlohmann::json const &obj, char const *field, std::size_t line, bool allow_empty = false)
{
    auto it = obj.find(field);
    if (it == obj.end() || !it->is_string() || (!allow_empty && it->get<std::string>().empty())) {
        throw DataError(describe({line, field, "expected a non-empty string"}));
    }
    return it->get<std::string>();
}

void require_known_fields(nlohmann::json const &obj, std::initializer_list<std::string_view> fields, std::size_t line)
{
    for (auto const &[key, _] : obj.items()) {
        if (std::find(fields.begin(), fields.end(), key) == fields.end()) {
            throw DataError(describe({line, key, "unknown field"}));
        }
    }
}

}  // namespace

std::vector<PersonRecord> parse_persons(std::string_view content)
{
    std::vector<PersonRecord> out;
    auto const lines = json_io::split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto const line_no = i + 1;
        if (json_io::is_blank(lines[i])) {
            continue;
        }
        auto obj = json_io::parse_object(lines[i]);
        if (!obj) {
            throw DataError(describe({line_no, "", "not a JSON object"}));
        }
        require_known_fields(*obj, {"kb_id", "name", "gender", "birth_date", "country", "is_politician", "party_ids"},
                             line_no);
        PersonRecord p;
        p.kb_id = require_string(*obj, "kb_id", line_no);
        p.canonical_name = require_string(*obj, "name", line_no);
        p.country = require_string(*obj, "country", line_no, true);
        if (auto it = obj->find("gender"); it != obj->end() && !it->is_null()) {
            auto g = it->is_string() ? parse_gender(it->get<std::string>()) : std::nullopt;
            if (!g) {
                throw DataError(describe({line_no, "gender", "expected male, female, other, unknown or null"}));
            }
            p.gender = *g;
        }
        if (auto it = obj->find("birth_date"); it != obj->end() && !it->is_null()) {
            auto d = it->is_string() ? Date::parse(it->get<std::string>()) : std::nullopt;
            if (!d) {
                throw DataError(describe({line_no, "birth_date", "expected YYYY-MM-DD or null"}));
            }
            p.birth_date = d;
        }
        auto pol = obj->find("is_politician");
        if (pol == obj->end() || !pol->is_boolean()) {
            throw DataError(describe({line_no, "is_politician", "expected a boolean"}));
        }
        p.is_politician = pol->get<bool>();
        auto parties = obj->find("party_ids");
        if (parties == obj->end() || !parties->is_array()) {
            throw DataError(describe({line_no, "party_ids", "expected an array of strings"}));
        }
        for (auto const &id : *parties) {
            if (!id.is_string()) {
                throw DataError(describe({line_no, "party_ids", "expected an array of strings"}));
            }
            p.party_ids.push_back(id.get<std::string>());
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<PartyRecord> parse_parties(std::string_view content)
{
    std::vector<PartyRecord> out;
    auto const lines = json_io::split_lines(content);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto const line_no = i + 1;
        if (json_io::is_blank(lines[i])) {
            continue;
        }
        auto obj = json_io::parse_object(lines[i]);
        if (!obj) {
            throw DataError(describe({line_no, "", "not a JSON object"}));
        }
        require_known_fields(*obj, {"party_kb_id", "name", "country", "left_right"}, line_no);
        PartyRecord p;
        p.party_kb_id = require_string(*obj, "party_kb_id", line_no);
        p.name = require_string(*obj, "name", line_no);
        p.country = require_string(*obj, "country", line_no, true);
        auto lr = obj->find("left_right");
        if (lr == obj->end() || !lr->is_number()) {
            throw DataError(describe({line_no, "left_right", "expected a number"}));
        }
        p.left_right = lr->get<double>();
        if (!(p.left_right >= 0.0 && p.left_right <= 10.0)) {
            throw DataError(describe({line_no, "left_right", "must lie in [0, 10]"}));
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::map<std::string, std::string> parse_crosswalk(std::string_view content)
{
    std::map<std::string, std::string> out;
    auto const lines = json_io::split_lines(content);
    bool header_seen = false;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto line = lines[i];
        if (json_io::is_blank(line)) {
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw DataError(describe({i + 1, "", "expected exactly two comma-separated columns"}));
        }
        auto left = std::string(line.substr(0, comma));
        auto right = std::string(line.substr(comma + 1));
        if (!header_seen) {
            header_seen = true;
            if (left != "encyclopedia_party_id" || right != "parlgov_party_id") {
                throw DataError(describe({i + 1, "", "expected header encyclopedia_party_id,parlgov_party_id"}));
            }
            continue;
        }
        if (left.empty() || right.empty()) {
            throw DataError(describe({i + 1, "", "empty party id"}));
        }
        if (!out.emplace(left, right).second) {
            throw DataError(describe({i + 1, "encyclopedia_party_id", "duplicate crosswalk entry `" + left + "`"}));
        }
    }
    return out;
}

KnowledgeBase load_kb(std::filesystem::path const &person_path, std::filesystem::path const &party_path,
                      std::filesystem::path const &crosswalk_path, OrientationScale scale)
{
    auto with_file = [](std::filesystem::path const &path, auto &&parse) {
        try {
            return parse(json_io::read_file(path));
        } catch (DataError const &e) {
            throw DataError(path.string() + ": " + e.what());
        }
    };
    return KnowledgeBase(with_file(person_path, parse_persons), with_file(party_path, parse_parties),
                         with_file(crosswalk_path, parse_crosswalk), scale);
}

std::optional<Orientation> resolve_orientation(PersonRecord const &person, KnowledgeBase const &kb,
                                               Date /*published_at*/)
{
    for (auto const &party_id : person.party_ids) {
        if (auto const *party = kb.crosswalked_party(party_id)) {
            return orientation_of(party->left_right, kb.scale());
        }
    }
    return std::nullopt;
}

double age_at(Date birth_date, Date published_at)
{
    if (published_at < birth_date) {
        throw std::invalid_argument("birth date " + birth_date.to_string() + " is after publication date " +
                                    published_at.to_string());
    }
    return static_cast<double>(published_at.days_since_epoch() - birth_date.days_since_epoch()) / 365.2425;
}

std::optional<double> age_at(std::optional<Date> birth_date, Date published_at)
{
    if (!birth_date) {
        return std::nullopt;
    }
    return age_at(*birth_date, published_at);
}

std::optional<double> KbCoverage::mappable_fraction() const
{
    if (politician_mentions == 0) {
        return std::nullopt;
    }
    return static_cast<double>(mappable_politician_mentions) / static_cast<double>(politician_mentions);
}

KbCoverage kb_coverage(KnowledgeBase const &kb, std::span<MentionAnnotation const> linked_mentions)
{
    KbCoverage c;
    c.persons = kb.persons().size();
    for (auto const &[_, person] : kb.persons()) {
        if (person.is_politician) {
            ++c.politicians;
            if (resolve_orientation(person, kb, Date{})) {
                ++c.politicians_with_orientation;
            }
        }
    }
    for (auto const &m : linked_mentions) {
        if (!m.link || m.entity_type != EntityType::person) {
            continue;
        }
        ++c.linked_mentions;
        auto const *person = kb.person(m.link->kb_id);
        if (person == nullptr) {
            continue;
        }
        ++c.mentions_with_record;
        if (person->is_politician) {
            ++c.politician_mentions;
            if (resolve_orientation(*person, kb, Date{})) {
                ++c.mappable_politician_mentions;
            }
        }
    }
    return c;
}

}  // namespace newslens::kb
