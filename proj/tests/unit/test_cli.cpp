#include "newslens/cli.hpp"
#include "newslens/json_io.hpp"

#include "fixture.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using testing_support::TempDir;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    int const code = newslens::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string config() { return (testing_support::fixture_dir() / "config.json").string(); }

/// Copy of the fixture config with `edit` applied, written into `dir`, with
/// input paths made absolute.
std::string edited_config(fs::path const &dir, std::function<void(nlohmann::json &)> const &edit)
{
    auto j = nlohmann::json::parse(testing_support::read_text(config()));
    for (auto &[key, value] : j["paths"].items()) {
        value = (testing_support::fixture_dir() / value.get<std::string>()).string();
    }
    edit(j);
    auto const path = dir / "config.json";
    std::ofstream(path) << j.dump(2);
    return path.string();
}

std::map<std::string, std::string> snapshot(fs::path const &root)
{
    std::map<std::string, std::string> files;
    for (auto const &entry : fs::recursive_directory_iterator(root)) {
        if (entry.is_regular_file()) {
            files[fs::relative(entry.path(), root).string()] = testing_support::read_text(entry.path());
        }
    }
    return files;
}

nlohmann::json error_of(Result const &r) { return nlohmann::json::parse(r.err); }

class EnvGuard {
   public:
    explicit EnvGuard(char const *value) { ::setenv(newslens::cli::output_dir_env, value, 1); }
    ~EnvGuard() { ::unsetenv(newslens::cli::output_dir_env); }
};

}  // namespace

TEST_CASE("help exits cleanly")
{
    auto r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("analyze") != std::string::npos);
}

TEST_CASE("missing corpus path is a config error and writes nothing")
{
    TempDir dir;
    auto const cfg = edited_config(dir.path(), [](auto &j) { j["paths"]["corpus"] = "/nonexistent/corpus.jsonl"; });
    auto const out = dir.path() / "out";
    auto r = run({"ingest", "--config", cfg, "--out", out.string()});
    CHECK(r.code == 2);
    auto e = error_of(r);
    CHECK(e["status"] == "error");
    CHECK(e["stage"] == "ingest");
    CHECK(e["kind"] == "config");
    CHECK(e["exit_code"] == 2);
    CHECK((!fs::exists(out) || fs::is_empty(out)));
}

TEST_CASE("config errors get the config exit code")
{
    TempDir dir;
    auto unknown = edited_config(dir.path(), [](auto &j) { j["colour"] = "blue"; });
    CHECK(run({"ingest", "--config", unknown, "--out", (dir.path() / "o").string()}).code == 2);
    auto bad_type = edited_config(dir.path(), [](auto &j) { j["dedup"]["threshold"] = "high"; });
    CHECK(run({"dedup", "--config", bad_type, "--out", (dir.path() / "o").string()}).code == 2);
    CHECK(run({"ingest", "--config", (dir.path() / "absent.json").string()}).code == 2);
    std::ofstream(dir.path() / "broken.json") << "{not json";
    CHECK(run({"ingest", "--config", (dir.path() / "broken.json").string()}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"ingest", "--threads", "0"}).code == 2);
}

TEST_CASE("stages need their upstream artifacts and a seed where hashing is seeded")
{
    TempDir dir;
    auto const out = (dir.path() / "out").string();
    auto r = run({"dedup", "--config", config(), "--out", out});
    CHECK(r.code == 2);
    CHECK(error_of(r)["message"].get<std::string>().find("ingest") != std::string::npos);

    auto no_seed = edited_config(dir.path(), [](auto &j) { j.erase("seed"); });
    REQUIRE(run({"ingest", "--config", no_seed, "--out", out}).code == 0);
    CHECK(run({"dedup", "--config", no_seed, "--out", out}).code == 2);
    CHECK(run({"dedup", "--config", no_seed, "--out", out, "--seed", "7"}).code == 0);
}

TEST_CASE("schema violations are data errors with issues")
{
    TempDir dir;
    auto const corpus = dir.path() / "bad.jsonl";
    std::ofstream(corpus) << "{\"doc_id\": 1}\nnot json\n";
    auto r = run({"ingest", "--config", config(), "--corpus", corpus.string(), "--out", (dir.path() / "o").string()});
    CHECK(r.code == 3);
    auto e = error_of(r);
    CHECK(e["kind"] == "data");
    REQUIRE(e["issues"].is_array());
    CHECK(e["issues"].size() == 2);
    CHECK(e["issues"][1]["line"] == 2);
    CHECK_FALSE(fs::exists(dir.path() / "o" / "corpus.jsonl"));
}

TEST_CASE("import-annotations validates against the deduplicated corpus")
{
    TempDir dir;
    auto const out = (dir.path() / "out").string();
    REQUIRE(run({"ingest", "--config", config(), "--out", out}).code == 0);
    REQUIRE(run({"dedup", "--config", config(), "--out", out}).code == 0);
    auto const ann = dir.path() / "ann.jsonl";
    std::ofstream(ann)
        << R"({"doc_id":"ghost","sentence_index":0,"start":0,"end":1,"surface":"x","entity_type":"person","kb_id":null,"link_log_likelihood":null,"p_negative":0.2,"p_neutral":0.6,"p_positive":0.2})"
        << "\n";
    auto r = run({"import-annotations", "--config", config(), "--out", out, "--annotations", ann.string()});
    CHECK(r.code == 3);
    CHECK(error_of(r)["issues"][0]["field"] == "doc_id");
}

TEST_CASE("full pipeline writes artifacts and logs, and reruns are byte identical")
{
    TempDir dir;
    auto const out = dir.path() / "out";
    testing_support::run_pipeline(out);
    for (auto const *name : {"corpus.jsonl", "corpus.dedup.jsonl", "dedup_clusters.json", "annotations.jsonl",
                             "kb.json", "index.json", "topic_subsets.json"}) {
        CHECK_MESSAGE(fs::exists(out / name), name);
    }
    for (auto const *stage : {"ingest", "dedup", "annotate-mock", "kb-load", "index", "topic-select", "analyze"}) {
        auto const log = nlohmann::json::parse(testing_support::read_text(out / "logs" / (std::string(stage) + ".json")));
        CHECK(log["stage"] == stage);
        CHECK(log["status"] == "ok");
        CHECK(log.contains("config"));
    }
    for (auto const &id : testing_support::golden_ids()) {
        CHECK(fs::exists(out / "reports" / (id + ".csv")));
        CHECK(fs::exists(out / "reports" / (id + ".json")));
    }
    auto const first = snapshot(out);
    testing_support::run_pipeline(out, 4);
    testing_support::cli({"stats", "--config", config(), "--out", out.string()});
    auto second = snapshot(out);
    CHECK(fs::exists(out / "stats.json"));
    second.erase("stats.json");
    second.erase("logs/stats.json");
    for (auto const &[name, content] : first) {
        CAPTURE(name);
        if (name.rfind("logs/", 0) == 0) {
            continue;  // logs record the thread count
        }
        CHECK(second.at(name) == content);
    }
}

TEST_CASE("single report and topic listing")
{
    TempDir dir;
    auto const out = dir.path() / "out";
    testing_support::run_pipeline(out);
    auto const all = testing_support::read_text(out / "reports" / "top_politicians.csv");
    fs::remove_all(out / "reports");
    auto r = run({"analyze", "--report", "top_politicians", "--config", config(), "--out", out.string()});
    REQUIRE(r.code == 0);
    CHECK(testing_support::read_text(out / "reports" / "top_politicians.csv") == all);
    CHECK(run({"analyze", "--report", "nope", "--config", config(), "--out", out.string()}).code == 2);
    CHECK(run({"analyze", "--config", config(), "--out", out.string()}).code == 2);

    auto t = run({"topic-select", "--topic", "climate", "--config", config(), "--out", out.string()});
    REQUIRE(t.code == 0);
    auto const subsets = nlohmann::json::parse(testing_support::read_text(out / "topic_subsets.json"));
    std::string expected;
    for (auto const &id : subsets["topics"]["climate"]) {
        expected += id.get<std::string>() + "\n";
    }
    CHECK(t.out == expected);
    CHECK(run({"topic-select", "--topic", "astrology", "--config", config(), "--out", out.string()}).code == 2);
}

TEST_CASE("output directory: flag beats environment beats config")
{
    TempDir dir;
    auto const cfg = edited_config(dir.path(), [&](auto &j) { j["output_dir"] = (dir.path() / "from_config").string(); });
    {
        EnvGuard env((dir.path() / "from_env").c_str());
        CHECK(run({"ingest", "--config", cfg}).code == 0);
        CHECK(fs::exists(dir.path() / "from_env" / "corpus.jsonl"));
        CHECK(run({"ingest", "--config", cfg, "--out", (dir.path() / "from_flag").string()}).code == 0);
        CHECK(fs::exists(dir.path() / "from_flag" / "corpus.jsonl"));
    }
    CHECK(run({"ingest", "--config", cfg}).code == 0);
    CHECK(fs::exists(dir.path() / "from_config" / "corpus.jsonl"));
}

TEST_CASE("a failing rerun leaves the previous artifact intact")
{
    TempDir dir;
    auto const out = dir.path() / "out";
    REQUIRE(run({"ingest", "--config", config(), "--out", out.string()}).code == 0);
    auto const before = testing_support::read_text(out / "corpus.jsonl");
    auto const corpus = dir.path() / "bad.jsonl";
    std::ofstream(corpus) << "garbage\n";
    CHECK(run({"ingest", "--config", config(), "--corpus", corpus.string(), "--out", out.string()}).code == 3);
    CHECK(testing_support::read_text(out / "corpus.jsonl") == before);
}
