#include "newslens/error.hpp"
#include "newslens/ingest.hpp"
#include "newslens/json_io.hpp"

#include "fixture.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace newslens;

namespace {

std::string doc_line(std::string const &id, std::string const &body = "body text", std::string const &date = "2020-05-01",
                     std::string const &outlet = "lemonde", std::string const &domain = "lemonde.fr")
{
    return R"({"doc_id":")" + id + R"(","url":"https://)" + domain + "/" + id + R"(","domain":")" + domain +
           R"(","outlet":")" + outlet + R"(","published_at":")" + date + R"(","title":"T","body":")" + body + "\"}";
}

CorpusManifest with_bodies(std::vector<std::string> const &bodies)
{
    CorpusManifest m;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        m.documents.push_back({"d" + std::to_string(i), "u", "x.fr", "x", Date(2020, 1, 1), "t", bodies[i]});
    }
    return m;
}

}  // namespace

TEST_CASE("three valid records load in order")
{
    auto load = parse_corpus(doc_line("a") + "\n" + doc_line("b") + "\n" + doc_line("c") + "\n");
    REQUIRE(load.ok());
    REQUIRE(load.manifest.documents.size() == 3);
    CHECK(load.manifest.documents[0].doc_id == "a");
    CHECK(load.manifest.documents[2].doc_id == "c");
    CHECK(load.manifest.documents[1].published_at == Date(2020, 5, 1));
}

TEST_CASE("missing body is reported on line 1, field body")
{
    auto load = parse_corpus(
        R"({"doc_id":"a","url":"u","domain":"x.fr","outlet":"x","published_at":"2020-01-01","title":"t"})");
    REQUIRE(load.issues.size() == 1);
    CHECK(load.issues[0].line == 1);
    CHECK(load.issues[0].field == "body");
    CHECK(load.manifest.documents.empty());
}

TEST_CASE("empty file gives an empty manifest and no issues")
{
    auto load = parse_corpus("");
    CHECK(load.ok());
    CHECK(load.manifest.documents.empty());
    CHECK_FALSE(load.manifest.window.has_value());
}

TEST_CASE("schema violations name line and field")
{
    std::string const content = doc_line("a") + "\n" +                                // 1 ok
                                "not json\n" +                                         // 2
                                doc_line("b", "x", "2020-13-01") + "\n" +              // 3 bad date
                                doc_line("a") + "\n" +                                 // 4 duplicate id
                                doc_line("c", "x", "2020-01-01", "", "x.fr") + "\n" +  // 5 empty outlet
                                doc_line("d", "x", "2020-01-01", "o", "UPPER.fr") + "\n" +  // 6 domain case
                                R"({"doc_id":"e","url":"u","domain":"x.fr","outlet":"x","published_at":"2020-01-01","title":"t","body":"b","extra":1})" +
                                "\n" +  // 7 unknown field
                                R"({"doc_id":"f","url":"u","domain":"x.fr","outlet":"x","published_at":"2020-01-01","title":"t","body":3})" +
                                "\n";  // 8 wrong type
    auto load = parse_corpus(content);
    REQUIRE(load.issues.size() == 7);
    CHECK(load.manifest.documents.size() == 1);
    std::vector<std::pair<std::size_t, std::string>> got;
    for (auto const &i : load.issues) {
        got.emplace_back(i.line, i.field);
    }
    CHECK(got == std::vector<std::pair<std::size_t, std::string>>{
                     {2, ""}, {3, "published_at"}, {4, "doc_id"}, {5, "outlet"}, {6, "domain"}, {7, "extra"},
                     {8, "body"}});
}

TEST_CASE("window and outlet metadata are enforced")
{
    LoadOptions options;
    options.window = DateWindow{Date(2016, 1, 1), Date(2022, 12, 31)};
    options.outlet_metadata = OutletMetadata{{"lemonde", OutletInfo{"center-left"}}};
    auto load = parse_corpus(doc_line("a") + "\n" + doc_line("b", "x", "2015-12-31") + "\n" +
                                 doc_line("c", "x", "2020-01-01", "unknown") + "\n",
                             options);
    REQUIRE(load.issues.size() == 2);
    CHECK(load.issues[0].field == "published_at");
    CHECK(load.issues[1].field == "outlet");
    CHECK(load.manifest.window == options.window);
}

TEST_CASE("derived window spans the loaded dates")
{
    auto load = parse_corpus(doc_line("a", "x", "2019-03-01") + "\n" + doc_line("b", "x", "2017-06-30") + "\n");
    REQUIRE(load.manifest.window.has_value());
    CHECK(load.manifest.window->start == Date(2017, 6, 30));
    CHECK(load.manifest.window->end == Date(2019, 3, 1));
}

TEST_CASE("parallel loading keeps file order and issues")
{
    std::string content;
    for (int i = 0; i < 500; ++i) {
        content += (i % 37 == 5 ? std::string("{broken") : doc_line("d" + std::to_string(i))) + "\n";
    }
    auto serial = parse_corpus(content);
    for (unsigned threads : {2U, 8U}) {
        auto parallel = parse_corpus(content, LoadOptions{std::nullopt, std::nullopt, threads});
        CHECK(parallel.manifest.documents == serial.manifest.documents);
        CHECK(parallel.issues == serial.issues);
    }
}

TEST_CASE("CRLF line endings and blank lines are tolerated")
{
    auto load = parse_corpus(doc_line("a") + "\r\n\r\n" + doc_line("b") + "\r\n");
    CHECK(load.ok());
    CHECK(load.manifest.documents.size() == 2);
}

TEST_CASE("filter_min_length counts Unicode scalars of the body")
{
    auto m = with_bodies({std::string(199, 'x'), std::string(200, 'x'), std::string(201, 'x')});
    CHECK(filter_min_length(m, 200).documents.size() == 2);
    CHECK(filter_min_length(m, 0).documents.size() == 3);
    CHECK(filter_min_length(m, 1000).documents.empty());

    std::string accented;
    for (int i = 0; i < 200; ++i) {
        accented += "é";  // 2 bytes, 1 scalar
    }
    auto u = with_bodies({accented, accented.substr(2)});
    auto kept = filter_min_length(u, 200);
    REQUIRE(kept.documents.size() == 1);
    CHECK(kept.documents[0].doc_id == "d0");
}

TEST_CASE("filter_min_length is idempotent and order preserving")
{
    auto m = with_bodies({"short", std::string(300, 'a'), "tiny", std::string(250, 'b'), std::string(200, 'c')});
    auto once = filter_min_length(m, 200);
    auto twice = filter_min_length(once, 200);
    CHECK(once.documents == twice.documents);
    REQUIRE(once.documents.size() == 3);
    CHECK(once.documents[0].doc_id == "d1");
    CHECK(once.documents[1].doc_id == "d3");
    CHECK(once.documents[2].doc_id == "d4");
}

TEST_CASE("canonical serialisation is byte stable")
{
    auto const raw = testing_support::read_text(testing_support::fixture_dir() / "raw_corpus.jsonl");
    auto first = parse_corpus(raw);
    REQUIRE(first.ok());
    std::ostringstream a;
    write_corpus(a, first.manifest);
    auto second = parse_corpus(a.str());
    REQUIRE(second.ok());
    std::ostringstream b;
    write_corpus(b, second.manifest);
    CHECK(a.str() == b.str());
    CHECK(first.manifest.documents == second.manifest.documents);
    CHECK(corpus_fingerprint(first.manifest) == corpus_fingerprint(second.manifest));
}

TEST_CASE("to_json_line uses the fixed field order and escapes text")
{
    RawDocument d{"a", "u", "x.fr", "x", Date(2020, 1, 2), "T \"q\"", "line\nbreak é"};
    CHECK(to_json_line(d) ==
          R"({"doc_id":"a","url":"u","domain":"x.fr","outlet":"x","published_at":"2020-01-02","title":"T \"q\"","body":"line\nbreak é"})");
}

TEST_CASE("unreadable corpus file raises DataError")
{
    CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.jsonl"), DataError);
}

TEST_CASE("outlet metadata loader")
{
    testing_support::TempDir dir;
    auto const path = dir.path() / "outlets.json";
    std::ofstream(path) << R"({"a": {"leaning": "left"}, "b": {"leaning": null}, "c": {}})";
    auto meta = load_outlet_metadata(path);
    REQUIRE(meta.size() == 3);
    CHECK(meta["a"].leaning == std::optional<std::string>("left"));
    CHECK_FALSE(meta["b"].leaning.has_value());
    CHECK_FALSE(meta["c"].leaning.has_value());
    std::ofstream(path) << R"([1, 2])";
    CHECK_THROWS_AS(load_outlet_metadata(path), DataError);
}

TEST_CASE("atomic writes replace the whole file")
{
    testing_support::TempDir dir;
    auto const path = dir.path() / "artifact.txt";
    json_io::write_file_atomic(path, "first");
    json_io::write_file_atomic(path, "second");
    CHECK(testing_support::read_text(path) == "second");
    for (auto const &entry : std::filesystem::directory_iterator(dir.path())) {
        CHECK(entry.path().filename() == "artifact.txt");
    }
}
