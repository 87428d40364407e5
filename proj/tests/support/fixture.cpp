#include "fixture.hpp"

#include "newslens/cli.hpp"
#include "newslens/json_io.hpp"
#include "newslens/topics.hpp"
#include "newslens/analytics.hpp"
#include "newslens/annotations.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <atomic>
#include <random>
#include <sstream>
#include <stdexcept>

namespace testing_support {

namespace fs = std::filesystem;

fs::path fixture_dir() { return NEWSLENS_FIXTURE_DIR; }
fs::path golden_dir() { return NEWSLENS_GOLDEN_DIR; }

TempDir::TempDir(std::string const &tag)
{
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path_);
}

TempDir::~TempDir()
{
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void cli(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    if (int code = newslens::cli::run(args, out, err); code != 0) {
        std::string joined;
        for (auto const &a : args) {
            joined += a + " ";
        }
        throw std::runtime_error("newslens " + joined + "exited " + std::to_string(code) + ": " + err.str());
    }
}

void run_pipeline(fs::path const &out, unsigned threads)
{
    auto const config = (fixture_dir() / "config.json").string();
    for (std::string stage : {"ingest", "dedup", "annotate-mock", "kb-load", "index", "topic-select"}) {
        cli({stage, "--config", config, "--out", out.string(), "--threads", std::to_string(threads)});
    }
    cli({"analyze", "--all", "--config", config, "--out", out.string(), "--threads", std::to_string(threads)});
}

std::string read_text(fs::path const &path) { return newslens::json_io::read_file(path); }

namespace {

std::size_t scalars(std::string const &s)
{
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) {
        return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
    }));
}

}  // namespace

oracle::Inputs oracle_inputs()
{
    auto const dir = fixture_dir();
    auto const config = nlohmann::json::parse(read_text(dir / "config.json"));
    auto const path = [&](char const *key) { return dir / config["paths"][key].get<std::string>(); };

    auto load = newslens::load_corpus(path("corpus"));
    if (!load.ok()) {
        throw std::runtime_error("fixture corpus does not load");
    }
    std::size_t const min_length = config["ingest"]["min_length"];
    std::vector<newslens::RawDocument> long_docs;
    for (auto const &d : load.manifest.documents) {
        if (scalars(d.body) >= min_length) {
            long_docs.push_back(d);
        }
    }
    auto const outcome = oracle::dedup(long_docs, config["dedup"]["threshold"], config["dedup"]["shingle_size"]);

    oracle::Inputs in;
    for (auto const &d : long_docs) {
        if (outcome.survivors.count(d.doc_id)) {
            in.docs.push_back(d);
        }
    }
    newslens::CorpusManifest manifest;
    manifest.documents = in.docs;
    in.all_mentions = newslens::mock_annotate(manifest, newslens::load_gazetteer(path("gazetteer")),
                                              newslens::load_sentiment_rules(path("sentiment_rules")),
                                              config["seed"].get<std::uint64_t>());
    in.persons = newslens::kb::parse_persons(read_text(path("persons")));
    in.parties = newslens::kb::parse_parties(read_text(path("parties")));
    in.crosswalk = newslens::kb::parse_crosswalk(read_text(path("crosswalk")));
    in.topics = newslens::topics::load_topics(path("topics")).topics();
    in.link_threshold = config["link_threshold"];
    in.first_year = std::stoi(config["window"]["start"].get<std::string>().substr(0, 4));
    in.last_year = std::stoi(config["window"]["end"].get<std::string>().substr(0, 4));
    return in;
}

oracle::Options oracle_options()
{
    auto const config = nlohmann::json::parse(read_text(fixture_dir() / "config.json"));
    auto const a = config.value("analytics", nlohmann::json::object());
    oracle::Options o;
    o.max_outlets = a.value("max_outlets", o.max_outlets);
    o.min_mentions_per_outlet = a.value("min_mentions_per_outlet", o.min_mentions_per_outlet);
    o.demographic_outlets = a.value("demographic_outlets", o.demographic_outlets);
    o.top_politicians = a.value("top_politicians", o.top_politicians);
    o.extreme_pool = a.value("extreme_pool", o.extreme_pool);
    o.extreme_k = a.value("extreme_k", o.extreme_k);
    o.similarity_support = a.value("similarity_support", o.similarity_support);
    o.similarity_floor = a.value("similarity_floor", o.similarity_floor);
    o.temporal_politicians = a.value("temporal_politicians", o.temporal_politicians);
    o.stability_top_k = a.value("stability_top_k", o.stability_top_k);
    o.keep_fraction = a.value("stability_keep_fraction", o.keep_fraction);
    return o;
}

EngineRun engine_reports(oracle::Inputs const &in, oracle::Options const &o)
{
    using namespace newslens;
    CorpusManifest manifest;
    manifest.documents = in.docs;
    manifest.window = DateWindow{Date(in.first_year, 1, 1), Date(in.last_year, 12, 31)};
    kb::KnowledgeBase const kb(in.persons, in.parties, in.crosswalk);
    auto const index = topics::build_index(manifest);
    auto const subsets = topics::select_all_topics(index, topics::TopicCatalog(in.topics));
    auto const linked = filter_linked(in.all_mentions, in.link_threshold).kept;

    EngineRun run;
    run.facts = analytics::build_facts(manifest, linked, kb, subsets).facts;
    analytics::AnalyticsOptions options;
    options.max_outlets = o.max_outlets;
    options.min_mentions_per_outlet = o.min_mentions_per_outlet;
    options.demographic_outlets = o.demographic_outlets;
    options.top_politicians = o.top_politicians;
    options.extreme_pool = o.extreme_pool;
    options.extreme_k = o.extreme_k;
    options.similarity_support = o.similarity_support;
    options.similarity_floor = o.similarity_floor;
    options.temporal_politicians = o.temporal_politicians;
    options.stability_top_k = o.stability_top_k;
    options.stability_keep_fraction = o.keep_fraction;
    options.window = manifest.window;

    analytics::AnalysisInputs inputs;
    inputs.manifest = &manifest;
    inputs.all_mentions = in.all_mentions;
    inputs.linked_mentions = linked;
    inputs.kb = &kb;
    inputs.facts = run.facts;
    for (auto const &spec : analytics::report_catalog()) {
        run.tables.emplace(std::string(spec.id), spec.run(inputs, options));
    }
    return run;
}

bool tables_match(newslens::report::ReportTable const &a, newslens::report::ReportTable const &b, double tolerance,
                  std::string *why)
{
    using newslens::report::Cell;
    auto fail = [&](std::string msg) {
        if (why != nullptr) {
            *why = a.report_id + ": " + msg;
        }
        return false;
    };
    if (a.report_id != b.report_id) {
        return fail("id differs from " + b.report_id);
    }
    if (a.columns.size() != b.columns.size()) {
        return fail("column count differs");
    }
    for (std::size_t c = 0; c < a.columns.size(); ++c) {
        if (a.columns[c].name != b.columns[c].name || a.columns[c].type != b.columns[c].type) {
            return fail("column " + std::to_string(c) + " differs");
        }
    }
    if (a.rows.size() != b.rows.size()) {
        return fail("row count " + std::to_string(a.rows.size()) + " vs " + std::to_string(b.rows.size()));
    }
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
        for (std::size_t c = 0; c < a.columns.size(); ++c) {
            Cell const &x = a.rows[r][c];
            Cell const &y = b.rows[r][c];
            auto const where = "row " + std::to_string(r) + " column " + a.columns[c].name + ": " +
                               newslens::report::format_cell(x) + " vs " + newslens::report::format_cell(y);
            if (x.index() != y.index()) {
                return fail(where);
            }
            if (auto const *dx = std::get_if<double>(&x)) {
                if (!(std::abs(*dx - std::get<double>(y)) <= tolerance)) {
                    return fail(where);
                }
            } else if (x != y) {
                return fail(where);
            }
        }
    }
    return true;
}

std::vector<std::string> golden_ids()
{
    std::vector<std::string> ids;
    for (auto const &entry : fs::directory_iterator(golden_dir())) {
        if (entry.path().extension() == ".csv") {
            ids.push_back(entry.path().stem().string());
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace testing_support
