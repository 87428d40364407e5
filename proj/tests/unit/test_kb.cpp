#include "newslens/error.hpp"
#include "newslens/kb.hpp"

#include "fixture.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace newslens;
using namespace newslens::kb;

namespace {

PersonRecord person(std::string id, std::vector<std::string> parties, bool politician = true)
{
    PersonRecord p;
    p.kb_id = std::move(id);
    p.canonical_name = p.kb_id;
    p.is_politician = politician;
    p.party_ids = std::move(parties);
    return p;
}

KnowledgeBase small_kb()
{
    std::vector<PersonRecord> persons{person("Q1", {"E1"}), person("Q2", {}), person("Q3", {"E1"}),
                                      person("Q4", {"E2", "E1"}), person("Q5", {"E9", "E2"}),
                                      person("Q6", {"E9"})};
    std::vector<PartyRecord> parties{{"P1", "Left", "FR", 1.0}, {"P2", "Right", "FR", 8.5}};
    std::map<std::string, std::string> crosswalk{{"E1", "P1"}, {"E2", "P2"}};
    return KnowledgeBase(persons, parties, crosswalk);
}

}  // namespace

TEST_CASE("orientation buckets and boundaries")
{
    CHECK(orientation_of(5.0) == Orientation::C);
    CHECK(orientation_of(0.0) == Orientation::RL);
    CHECK(orientation_of(10.0) == Orientation::RR);
    CHECK(orientation_of(3.9) == Orientation::CL);
    CHECK(orientation_of(4.0) == Orientation::C);
    CHECK(orientation_of(2.0) == Orientation::CL);
    CHECK(orientation_of(std::nextafter(2.0, 0.0)) == Orientation::RL);
    CHECK(orientation_of(6.0) == Orientation::CR);
    CHECK(orientation_of(8.0) == Orientation::RR);
    CHECK_THROWS_AS(orientation_of(-0.01), std::out_of_range);
    CHECK_THROWS_AS(orientation_of(10.01), std::out_of_range);
    CHECK_THROWS_AS(orientation_of(std::nan("")), std::out_of_range);
}

TEST_CASE("orientation sweep is total and monotone and matches the if-chain")
{
    Orientation previous = Orientation::RL;
    for (int i = 0; i <= 1000; ++i) {
        double const s = i / 100.0;
        auto const o = orientation_of(s);
        CHECK(static_cast<int>(o) >= static_cast<int>(previous));
        CHECK(std::string(to_string(o)) == oracle::orientation_bucket(s));
        previous = o;
    }
}

TEST_CASE("custom cut points")
{
    OrientationScale scale{{1.0, 3.0, 7.0, 9.0}};
    CHECK(orientation_of(2.5, scale) == Orientation::CL);
    CHECK(orientation_of(7.0, scale) == Orientation::CR);
}

TEST_CASE("names round trip")
{
    for (auto o : all_orientations) {
        CHECK(parse_orientation(to_string(o)) == o);
    }
    for (auto g : {Gender::male, Gender::female, Gender::other, Gender::unknown}) {
        CHECK(parse_gender(to_string(g)) == g);
    }
    CHECK_FALSE(parse_orientation("X").has_value());
}

TEST_CASE("resolve_orientation")
{
    auto const kb = small_kb();
    auto const when = Date(2020, 1, 1);
    SUBCASE("one crosswalked party resolves")
    {
        CHECK(resolve_orientation(*kb.person("Q1"), kb, when) == Orientation::RL);
    }
    SUBCASE("no parties gives none, politician flag unaffected")
    {
        CHECK(kb.person("Q2")->is_politician);
        CHECK_FALSE(resolve_orientation(*kb.person("Q2"), kb, when).has_value());
    }
    SUBCASE("shared party shares the bucket")
    {
        CHECK(resolve_orientation(*kb.person("Q1"), kb, when) == resolve_orientation(*kb.person("Q3"), kb, when));
    }
    SUBCASE("most recent mapped party wins")
    {
        CHECK(resolve_orientation(*kb.person("Q4"), kb, when) == Orientation::RR);
    }
    SUBCASE("unmapped most recent party falls through to the next mapped one")
    {
        CHECK(resolve_orientation(*kb.person("Q5"), kb, when) == Orientation::RR);
        CHECK_FALSE(resolve_orientation(*kb.person("Q6"), kb, when).has_value());
    }
}

TEST_CASE("resolve_orientation is invariant to record insertion order")
{
    std::vector<PersonRecord> persons{person("Q1", {"E1"}), person("Q4", {"E2", "E1"}), person("Q6", {"E9"})};
    std::vector<PartyRecord> parties{{"P1", "Left", "FR", 1.0}, {"P2", "Right", "FR", 8.5}};
    std::map<std::string, std::string> crosswalk{{"E1", "P1"}, {"E2", "P2"}};
    KnowledgeBase a(persons, parties, crosswalk);
    std::reverse(persons.begin(), persons.end());
    std::reverse(parties.begin(), parties.end());
    KnowledgeBase b(persons, parties, crosswalk);
    for (auto id : {"Q1", "Q4", "Q6"}) {
        CHECK(resolve_orientation(*a.person(id), a, Date(2020, 1, 1)) ==
              resolve_orientation(*b.person(id), b, Date(2020, 1, 1)));
    }
}

TEST_CASE("knowledge base validation")
{
    std::vector<PartyRecord> parties{{"P1", "Left", "FR", 1.0}};
    CHECK_THROWS_AS(KnowledgeBase({person("Q1", {}), person("Q1", {})}, parties, {}), DataError);
    CHECK_THROWS_AS(KnowledgeBase({}, {{"P1", "a", "FR", 1.0}, {"P1", "b", "FR", 2.0}}, {}), DataError);
    CHECK_THROWS_AS(KnowledgeBase({}, {{"P1", "a", "FR", 11.0}}, {}), DataError);
    CHECK_THROWS_AS(KnowledgeBase({}, parties, {{"E1", "P404"}}), DataError);
    KnowledgeBase ok({person("Q1", {"E1"})}, parties, {{"E1", "P1"}});
    CHECK(ok.crosswalked_party("E1")->party_kb_id == "P1");
    CHECK(ok.crosswalked_party("E2") == nullptr);
    CHECK(ok.person("missing") == nullptr);
}

TEST_CASE("age_at")
{
    CHECK(age_at(Date(2000, 1, 1), Date(2020, 1, 1)) == doctest::Approx(20.0).epsilon(0.0005));
    CHECK(age_at(Date(1990, 6, 1), Date(1990, 6, 1)) == 0.0);
    CHECK_FALSE(age_at(std::optional<Date>{}, Date(2020, 1, 1)).has_value());
    CHECK_THROWS_AS(age_at(Date(2021, 1, 1), Date(2020, 1, 1)), std::invalid_argument);
}

TEST_CASE("age_at matches a day-count oracle on random pairs")
{
    std::mt19937 rng(99);
    for (int i = 0; i < 100; ++i) {
        Date birth(1920 + static_cast<int>(rng() % 80), 1 + rng() % 12, 1 + rng() % 28);
        Date pub(2016 + static_cast<int>(rng() % 7), 1 + rng() % 12, 1 + rng() % 28);
        double const expected = static_cast<double>(oracle::days_between(birth.to_string(), pub.to_string())) / 365.2425;
        CHECK(std::abs(age_at(birth, pub) - expected) < 0.01);
    }
}

TEST_CASE("parsers report bad records")
{
    auto persons = parse_persons(
        R"({"kb_id": "Q1", "name": "A", "gender": "female", "birth_date": null, "country": "FR", "is_politician": true, "party_ids": ["E1"]})");
    REQUIRE(persons.size() == 1);
    CHECK(persons[0].gender == Gender::female);
    CHECK_FALSE(persons[0].birth_date.has_value());
    CHECK_THROWS_AS(parse_persons(R"({"kb_id": "Q1"})"), DataError);
    CHECK_THROWS_AS(parse_parties(R"({"party_kb_id": "P1", "name": "x", "country": "FR", "left_right": "high"})"),
                    DataError);
    auto cw = parse_crosswalk("encyclopedia_party_id,parlgov_party_id\nE1,P1\r\nE2,P2\n");
    CHECK(cw == std::map<std::string, std::string>{{"E1", "P1"}, {"E2", "P2"}});
    CHECK_THROWS_AS(parse_crosswalk("a,b\nE1,P1\n"), DataError);
    CHECK_THROWS_AS(parse_crosswalk("encyclopedia_party_id,parlgov_party_id\nE1\n"), DataError);
}

TEST_CASE("fixture knowledge base loads and covers politicians")
{
    auto const dir = testing_support::fixture_dir();
    auto kb = load_kb(dir / "persons.jsonl", dir / "parties.jsonl", dir / "crosswalk.csv");
    CHECK(kb.persons().size() > 50);
    std::size_t politicians = 0;
    std::size_t mapped = 0;
    for (auto const &[id, p] : kb.persons()) {
        if (p.is_politician) {
            ++politicians;
            mapped += resolve_orientation(p, kb, Date(2020, 1, 1)).has_value() ? 1 : 0;
        }
    }
    auto const coverage = kb_coverage(kb, std::span<MentionAnnotation const>{});
    CHECK(coverage.politicians == politicians);
    CHECK(coverage.politicians_with_orientation == mapped);
    CHECK(mapped < politicians);
    CHECK_FALSE(coverage.mappable_fraction().has_value());
}

TEST_CASE("coverage counts mentions")
{
    auto const kb = small_kb();
    std::vector<MentionAnnotation> ms(4);
    ms[0].link = EntityLink{"Q1", -0.1};
    ms[1].link = EntityLink{"Q2", -0.1};
    ms[2].link = EntityLink{"Qx", -0.1};
    ms[3].link = EntityLink{"Q4", -0.1};
    auto c = kb_coverage(kb, ms);
    CHECK(c.linked_mentions == 4);
    CHECK(c.mentions_with_record == 3);
    CHECK(c.politician_mentions == 3);
    CHECK(c.mappable_politician_mentions == 2);
    CHECK(*c.mappable_fraction() == doctest::Approx(2.0 / 3.0));
}
