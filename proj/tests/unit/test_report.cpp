#include "newslens/report.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <random>

using namespace newslens::report;

namespace {

ReportTable sample()
{
    ReportTable t;
    t.report_id = "sample";
    t.columns = {{"group", ColumnType::text}, {"n", ColumnType::integer}, {"share", ColumnType::real}};
    t.rows = {{std::string("ALL"), std::int64_t{3}, 0.25},
              {std::string("a,b"), std::int64_t{0}, Cell{}},
              {std::string("say \"hi\""), std::int64_t{-1}, -0.0}};
    t.provenance = {"cfg", "corpus", 7};
    return t;
}

}  // namespace

TEST_CASE("real formatting is shortest round trip")
{
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(0.25) == "0.25");
    CHECK(format_real(-0.0) == "0");
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_real(1e-7) == "1e-07");
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-1e3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        double const v = d(rng);
        auto const s = format_real(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
}

TEST_CASE("cells")
{
    CHECK(format_cell(Cell{}) == "");
    CHECK(format_cell(std::int64_t{42}) == "42");
    CHECK(format_cell(std::string("x")) == "x");
    CHECK(is_null(Cell{}));
    CHECK_FALSE(is_null(0.0));
}

TEST_CASE("csv quoting and nulls")
{
    CHECK(to_csv(sample()) == "group,n,share\nALL,3,0.25\n\"a,b\",0,\n\"say \"\"hi\"\"\",-1,0\n");
    ReportTable empty;
    empty.columns = {{"only", ColumnType::text}};
    CHECK(to_csv(empty) == "only\n");
}

TEST_CASE("json keeps column order, nulls and provenance")
{
    auto const j = to_json(sample());
    CHECK(j["report_id"] == "sample");
    CHECK(j["columns"][1]["type"] == "integer");
    CHECK(j["rows"][1]["share"].is_null());
    CHECK(j["rows"][0].begin().key() == "group");
    CHECK(j["provenance"]["seed"] == 7);
    CHECK(j["provenance"]["config_hash"] == "cfg");
}

TEST_CASE("column lookup")
{
    auto const t = sample();
    CHECK(t.column("n") == 1);
    CHECK(std::get<double>(t.at(0, "share")) == 0.25);
    CHECK_THROWS_AS(t.column("missing"), std::out_of_range);
}
