#include "newslens/cli.hpp"

#include "newslens/analytics.hpp"
#include "newslens/annotations.hpp"
#include "newslens/dedup.hpp"
#include "newslens/error.hpp"
#include "newslens/hash.hpp"
#include "newslens/ingest.hpp"
#include "newslens/json_io.hpp"
#include "newslens/kb.hpp"
#include "newslens/report.hpp"
#include "newslens/topics.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

namespace newslens::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

/// DataError carrying the per-record problems behind it.
class RecordsError : public DataError {
   public:
    RecordsError(std::string const &what, std::vector<RecordIssue> issues)
        : DataError(what + ": " + std::to_string(issues.size()) + " invalid record(s)"), issues_(std::move(issues))
    {
    }
    std::vector<RecordIssue> const &issues() const { return issues_; }

   private:
    std::vector<RecordIssue> issues_;
};

// Artifact names inside the output directory.
constexpr char const *corpus_file = "corpus.jsonl";
constexpr char const *dedup_corpus_file = "corpus.dedup.jsonl";
constexpr char const *clusters_file = "dedup_clusters.json";
constexpr char const *annotations_file = "annotations.jsonl";
constexpr char const *kb_file = "kb.json";
constexpr char const *index_file = "index.json";
constexpr char const *subsets_file = "topic_subsets.json";
constexpr char const *stats_file = "stats.json";

struct Paths {
    std::optional<fs::path> corpus;
    std::optional<fs::path> outlets;
    std::optional<fs::path> annotations;
    std::optional<fs::path> persons;
    std::optional<fs::path> parties;
    std::optional<fs::path> crosswalk;
    std::optional<fs::path> topics;
    std::optional<fs::path> gazetteer;
    std::optional<fs::path> sentiment_rules;
};

struct PipelineConfig {
    Paths paths;
    std::optional<fs::path> output_dir;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::optional<DateWindow> window;
    std::size_t min_length = 200;
    dedup::DedupParams dedup;
    double link_threshold = -0.2;
    kb::OrientationScale scale;
    topics::Bm25Params bm25;
    analytics::AnalyticsOptions analytics;
};

[[noreturn]] void bad_config(std::string const &message) { throw ConfigError(message); }

void check_keys(nlohmann::json const &obj, std::string const &where, std::set<std::string> const &allowed)
{
    if (!obj.is_object()) {
        bad_config(where + " must be an object");
    }
    for (auto const &[key, _] : obj.items()) {
        if (!allowed.contains(key)) {
            bad_config("unknown config key `" + (where.empty() ? key : where + "." + key) + "`");
        }
    }
}

template <typename T>
T config_value(nlohmann::json const &obj, std::string const &key)
{
    try {
        return obj.at(key).get<T>();
    } catch (nlohmann::json::exception const &) {
        bad_config("config key `" + key + "` has the wrong type");
    }
}

std::size_t config_count(nlohmann::json const &obj, std::string const &key)
{
    auto const &v = obj.at(key);
    if (!v.is_number_unsigned()) {
        bad_config("config key `" + key + "` must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

Date config_date(nlohmann::json const &v, std::string const &key)
{
    auto d = v.is_string() ? Date::parse(v.get<std::string>()) : std::nullopt;
    if (!d) {
        bad_config("config key `" + key + "` must be a YYYY-MM-DD date");
    }
    return *d;
}

void apply_analytics(nlohmann::json const &j, analytics::AnalyticsOptions &o)
{
    check_keys(j, "analytics",
               {"max_outlets", "min_mentions_per_outlet", "demographic_outlets", "top_politicians", "extreme_pool",
                "extreme_k", "similarity_support", "similarity_floor", "temporal_politicians", "sample_std",
                "stability_top_k", "stability_keep_fraction", "score_mode"});
    auto count = [&](char const *key, std::size_t &dst) {
        if (j.contains(key)) {
            dst = config_count(j, key);
        }
    };
    count("max_outlets", o.max_outlets);
    count("min_mentions_per_outlet", o.min_mentions_per_outlet);
    count("demographic_outlets", o.demographic_outlets);
    count("top_politicians", o.top_politicians);
    count("extreme_pool", o.extreme_pool);
    count("extreme_k", o.extreme_k);
    count("similarity_support", o.similarity_support);
    count("similarity_floor", o.similarity_floor);
    count("temporal_politicians", o.temporal_politicians);
    count("stability_top_k", o.stability_top_k);
    if (j.contains("sample_std")) {
        o.sample_std = config_value<bool>(j, "sample_std");
    }
    if (j.contains("stability_keep_fraction")) {
        o.stability_keep_fraction = config_value<double>(j, "stability_keep_fraction");
        if (!(o.stability_keep_fraction > 0.0 && o.stability_keep_fraction <= 1.0)) {
            bad_config("analytics.stability_keep_fraction must lie in (0, 1]");
        }
    }
    if (j.contains("score_mode")) {
        auto mode = sentiment::parse_score_mode(config_value<std::string>(j, "score_mode"));
        if (!mode) {
            bad_config("analytics.score_mode must be `argmax` or `expected`");
        }
        o.score_mode = *mode;
    }
}

PipelineConfig load_config(fs::path const &file)
{
    std::string text;
    try {
        text = json_io::read_file(file);
    } catch (DataError const &) {
        bad_config("cannot read config file " + file.string());
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (nlohmann::json::parse_error const &e) {
        bad_config("config file " + file.string() + " is not valid JSON: " + e.what());
    }
    check_keys(j, "",
               {"paths", "output_dir", "seed", "threads", "window", "ingest", "dedup", "link_threshold",
                "orientation_cuts", "bm25", "analytics"});
    auto const base = fs::absolute(file).parent_path();
    auto resolve = [&](std::string const &p) { return (base / p).lexically_normal(); };

    PipelineConfig c;
    if (j.contains("paths")) {
        auto const &p = j["paths"];
        check_keys(p, "paths",
                   {"corpus", "outlets", "annotations", "persons", "parties", "crosswalk", "topics", "gazetteer",
                    "sentiment_rules"});
        auto path = [&](char const *key, std::optional<fs::path> &dst) {
            if (p.contains(key)) {
                dst = resolve(config_value<std::string>(p, key));
            }
        };
        path("corpus", c.paths.corpus);
        path("outlets", c.paths.outlets);
        path("annotations", c.paths.annotations);
        path("persons", c.paths.persons);
        path("parties", c.paths.parties);
        path("crosswalk", c.paths.crosswalk);
        path("topics", c.paths.topics);
        path("gazetteer", c.paths.gazetteer);
        path("sentiment_rules", c.paths.sentiment_rules);
    }
    if (j.contains("output_dir")) {
        c.output_dir = resolve(config_value<std::string>(j, "output_dir"));
    }
    if (j.contains("seed")) {
        c.seed = config_count(j, "seed");
    }
    if (j.contains("threads")) {
        c.threads = static_cast<unsigned>(std::max<std::size_t>(1, config_count(j, "threads")));
    }
    if (j.contains("window")) {
        auto const &w = j["window"];
        check_keys(w, "window", {"start", "end"});
        if (!w.contains("start") || !w.contains("end")) {
            bad_config("window needs `start` and `end`");
        }
        DateWindow window{config_date(w["start"], "window.start"), config_date(w["end"], "window.end")};
        if (window.end < window.start) {
            bad_config("window.end precedes window.start");
        }
        c.window = window;
    }
    if (j.contains("ingest")) {
        check_keys(j["ingest"], "ingest", {"min_length"});
        if (j["ingest"].contains("min_length")) {
            c.min_length = config_count(j["ingest"], "min_length");
        }
    }
    if (j.contains("dedup")) {
        auto const &d = j["dedup"];
        check_keys(d, "dedup", {"shingle_size", "permutations", "threshold"});
        if (d.contains("shingle_size")) {
            c.dedup.shingle_size = config_count(d, "shingle_size");
        }
        if (d.contains("permutations")) {
            c.dedup.permutations = config_count(d, "permutations");
        }
        if (d.contains("threshold")) {
            c.dedup.threshold = config_value<double>(d, "threshold");
        }
    }
    if (j.contains("link_threshold")) {
        c.link_threshold = config_value<double>(j, "link_threshold");
    }
    if (j.contains("orientation_cuts")) {
        auto cuts = config_value<std::vector<double>>(j, "orientation_cuts");
        if (cuts.size() != 4) {
            bad_config("orientation_cuts needs exactly four values");
        }
        std::copy(cuts.begin(), cuts.end(), c.scale.cuts.begin());
    }
    if (j.contains("bm25")) {
        check_keys(j["bm25"], "bm25", {"k1", "b"});
        if (j["bm25"].contains("k1")) {
            c.bm25.k1 = config_value<double>(j["bm25"], "k1");
        }
        if (j["bm25"].contains("b")) {
            c.bm25.b = config_value<double>(j["bm25"], "b");
        }
    }
    if (j.contains("analytics")) {
        apply_analytics(j["analytics"], c.analytics);
    }
    return c;
}

ojson effective_config(PipelineConfig const &c)
{
    ojson j;
    j["seed"] = c.seed ? ojson(*c.seed) : ojson(nullptr);
    j["threads"] = c.threads;
    j["window"] = c.window ? ojson{{"start", c.window->start.to_string()}, {"end", c.window->end.to_string()}}
                           : ojson(nullptr);
    j["min_length"] = c.min_length;
    j["dedup"] = {{"shingle_size", c.dedup.shingle_size},
                  {"permutations", c.dedup.permutations},
                  {"threshold", c.dedup.threshold}};
    j["link_threshold"] = c.link_threshold;
    j["orientation_cuts"] = c.scale.cuts;
    j["bm25"] = {{"k1", c.bm25.k1}, {"b", c.bm25.b}};
    j["analytics"] = analytics::to_json(c.analytics);
    return j;
}

/// Resolved flags and config for one invocation.
struct Context {
    std::string stage;
    PipelineConfig config;
    fs::path out;
    ojson inputs = ojson::object();
    ojson outputs = ojson::array();
    ojson counts = ojson::object();
    std::ostream *stdout_stream = nullptr;

    fs::path artifact(std::string const &name) const { return out / name; }

    fs::path require(std::optional<fs::path> const &path, std::string const &what) const
    {
        if (!path) {
            bad_config(stage + ": no " + what + " path given");
        }
        if (!fs::exists(*path)) {
            bad_config(stage + ": " + what + " not found at " + path->string());
        }
        return *path;
    }

    fs::path require_artifact(std::string const &name, std::string const &producer) const
    {
        auto p = artifact(name);
        if (!fs::exists(p)) {
            bad_config(stage + ": missing " + p.string() + "; run `" + producer + "` first");
        }
        return p;
    }

    std::uint64_t require_seed() const
    {
        if (!config.seed) {
            bad_config(stage + ": a seed is required (--seed or config `seed`)");
        }
        return *config.seed;
    }

    void note_input(std::string const &name, fs::path const &path, std::string const &content)
    {
        inputs[name] = {{"path", path.string()}, {"fingerprint", to_hex(fnv1a64(content))}};
    }

    void write(std::string const &name, std::string_view content)
    {
        fs::create_directories((out / name).parent_path());
        json_io::write_file_atomic(out / name, content);
        outputs.push_back(name);
    }

    void write_log() const
    {
        ojson log;
        log["stage"] = stage;
        log["status"] = "ok";
        log["config"] = effective_config(config);
        log["inputs"] = inputs;
        log["outputs"] = outputs;
        log["counts"] = counts;
        fs::create_directories(out / "logs");
        json_io::write_file_atomic(out / "logs" / (stage + ".json"), log.dump(2) + "\n");
    }
};

ojson issues_json(std::vector<RecordIssue> const &issues, std::size_t limit = 50)
{
    ojson arr = ojson::array();
    for (std::size_t i = 0; i < std::min(limit, issues.size()); ++i) {
        arr.push_back({{"line", issues[i].line}, {"field", issues[i].field}, {"message", issues[i].message}});
    }
    return arr;
}

CorpusManifest read_stage_corpus(Context &ctx, std::string const &name, std::string const &producer)
{
    auto const path = ctx.require_artifact(name, producer);
    auto const content = json_io::read_file(path);
    ctx.note_input("corpus", path, content);
    auto load = parse_corpus(content, LoadOptions{ctx.config.window, std::nullopt, ctx.config.threads});
    if (!load.ok()) {
        throw RecordsError(path.string(), std::move(load.issues));
    }
    return std::move(load.manifest);
}

std::vector<MentionAnnotation> read_stage_annotations(Context &ctx, CorpusManifest const &manifest)
{
    auto const path = ctx.require_artifact(annotations_file, "annotate-mock` or `import-annotations");
    auto const content = json_io::read_file(path);
    ctx.note_input("annotations", path, content);
    auto load = parse_annotations(content, &manifest);
    if (!load.ok()) {
        throw RecordsError(path.string(), std::move(load.issues));
    }
    return std::move(load.mentions);
}

kb::KnowledgeBase read_kb(Context &ctx)
{
    auto const persons = ctx.require(ctx.config.paths.persons, "person snapshot");
    auto const parties = ctx.require(ctx.config.paths.parties, "party snapshot");
    auto const crosswalk = ctx.require(ctx.config.paths.crosswalk, "party crosswalk");
    for (auto const &[name, path] : {std::pair{"persons", persons}, {"parties", parties}, {"crosswalk", crosswalk}}) {
        ctx.note_input(name, path, json_io::read_file(path));
    }
    try {
        return kb::load_kb(persons, parties, crosswalk, ctx.config.scale);
    } catch (std::invalid_argument const &e) {
        bad_config(std::string("orientation_cuts: ") + e.what());
    }
}

topics::TopicCatalog read_topics(Context &ctx)
{
    auto const path = ctx.require(ctx.config.paths.topics, "topics config");
    ctx.note_input("topics", path, json_io::read_file(path));
    return topics::load_topics(path);
}

std::string corpus_text(std::vector<RawDocument> const &docs)
{
    std::ostringstream s;
    write_corpus(s, docs);
    return s.str();
}

std::string annotations_text(std::span<MentionAnnotation const> mentions)
{
    std::ostringstream s;
    write_annotations(s, mentions);
    return s.str();
}

topics::TopicSubsets read_subsets(Context &ctx)
{
    auto const path = ctx.require_artifact(subsets_file, "topic-select");
    auto const content = json_io::read_file(path);
    ctx.note_input("topic_subsets", path, content);
    topics::TopicSubsets out;
    try {
        auto const j = nlohmann::json::parse(content);
        for (auto const &[topic, ids] : j.at("topics").items()) {
            out[topic] = ids.get<std::set<std::string>>();
        }
    } catch (nlohmann::json::exception const &e) {
        throw DataError(path.string() + ": malformed topic subsets: " + e.what());
    }
    return out;
}

// --- stages -------------------------------------------------------------------

void stage_ingest(Context &ctx)
{
    auto const path = ctx.require(ctx.config.paths.corpus, "corpus");
    LoadOptions options{ctx.config.window, std::nullopt, ctx.config.threads};
    if (ctx.config.paths.outlets) {
        auto const outlets = ctx.require(ctx.config.paths.outlets, "outlet metadata");
        ctx.note_input("outlets", outlets, json_io::read_file(outlets));
        options.outlet_metadata = load_outlet_metadata(outlets);
    }
    auto const content = json_io::read_file(path);
    ctx.note_input("corpus", path, content);
    auto load = parse_corpus(content, options);
    if (!load.ok()) {
        throw RecordsError(path.string(), std::move(load.issues));
    }
    auto const kept = filter_min_length(load.manifest, ctx.config.min_length);
    ctx.write(corpus_file, corpus_text(kept.documents));
    ctx.counts["documents_loaded"] = load.manifest.documents.size();
    ctx.counts["documents_short"] = load.manifest.documents.size() - kept.documents.size();
    ctx.counts["documents_kept"] = kept.documents.size();
}

void stage_dedup(Context &ctx)
{
    auto const manifest = read_stage_corpus(ctx, corpus_file, "ingest");
    auto params = ctx.config.dedup;
    params.seed = ctx.require_seed();
    params.threads = ctx.config.threads;
    dedup::DedupResult result;
    try {
        result = dedup::dedup_per_domain(manifest.documents, params);
    } catch (std::invalid_argument const &e) {
        bad_config(std::string("dedup: ") + e.what());
    }
    ojson clusters = ojson::array();
    std::size_t removed = 0;
    for (auto const &c : result.clusters) {
        clusters.push_back({{"domain", c.domain}, {"survivor", c.survivor}, {"members", c.members}});
        removed += c.members.size() - 1;
    }
    ojson report;
    report["lsh"] = {{"bands", result.lsh.bands}, {"rows", result.lsh.rows}};
    report["documents"] = manifest.documents.size();
    report["survivors"] = result.survivors.size();
    report["degenerate_documents"] = result.degenerate_documents;
    report["clusters"] = clusters;
    ctx.write(dedup_corpus_file, corpus_text(result.survivors));
    ctx.write(clusters_file, report.dump(2) + "\n");
    ctx.counts["documents"] = manifest.documents.size();
    ctx.counts["survivors"] = result.survivors.size();
    ctx.counts["removed"] = removed;
    ctx.counts["clusters"] = result.clusters.size();
}

void stage_annotate_mock(Context &ctx)
{
    auto const manifest = read_stage_corpus(ctx, dedup_corpus_file, "dedup");
    auto const seed = ctx.require_seed();
    auto const gaz_path = ctx.require(ctx.config.paths.gazetteer, "gazetteer");
    auto const rules_path = ctx.require(ctx.config.paths.sentiment_rules, "sentiment rules");
    ctx.note_input("gazetteer", gaz_path, json_io::read_file(gaz_path));
    ctx.note_input("sentiment_rules", rules_path, json_io::read_file(rules_path));
    auto const gazetteer = load_gazetteer(gaz_path);
    if (gazetteer.empty()) {
        bad_config("annotate-mock: the gazetteer is empty");
    }
    auto const rules = load_sentiment_rules(rules_path);
    auto const mentions = mock_annotate(manifest, gazetteer, rules, seed);
    ctx.write(annotations_file, annotations_text(mentions));
    ctx.counts["documents"] = manifest.documents.size();
    ctx.counts["mentions"] = mentions.size();
}

void stage_import_annotations(Context &ctx)
{
    auto const manifest = read_stage_corpus(ctx, dedup_corpus_file, "dedup");
    auto const path = ctx.require(ctx.config.paths.annotations, "annotations");
    auto const content = json_io::read_file(path);
    ctx.note_input("annotations", path, content);
    auto load = parse_annotations(content, &manifest);
    if (!load.ok()) {
        throw RecordsError(path.string(), std::move(load.issues));
    }
    auto const linked = filter_linked(load.mentions, ctx.config.link_threshold);
    ctx.write(annotations_file, annotations_text(load.mentions));
    ctx.counts["mentions"] = load.mentions.size();
    ctx.counts["linked_kept"] = linked.kept.size();
    ctx.counts["link_dropped"] = linked.dropped;
}

void stage_kb_load(Context &ctx)
{
    auto const kb = read_kb(ctx);
    std::size_t politicians = 0;
    std::size_t mapped = 0;
    std::set<std::string> unmapped_parties;
    for (auto const &[id, p] : kb.persons()) {
        if (!p.is_politician) {
            continue;
        }
        ++politicians;
        if (kb::resolve_orientation(p, kb, Date(2000, 1, 1))) {
            ++mapped;
        }
        for (auto const &party : p.party_ids) {
            if (kb.crosswalked_party(party) == nullptr) {
                unmapped_parties.insert(party);
            }
        }
    }
    ojson orientation_counts = ojson::object();
    for (auto o : kb::all_orientations) {
        orientation_counts[std::string(kb::to_string(o))] = 0;
    }
    for (auto const &[id, p] : kb.persons()) {
        if (p.is_politician) {
            if (auto o = kb::resolve_orientation(p, kb, Date(2000, 1, 1))) {
                orientation_counts[std::string(kb::to_string(*o))] =
                    orientation_counts[std::string(kb::to_string(*o))].get<std::size_t>() + 1;
            }
        }
    }
    ojson summary;
    summary["persons"] = kb.persons().size();
    summary["politicians"] = politicians;
    summary["politicians_with_orientation"] = mapped;
    summary["parties"] = kb.parties().size();
    summary["crosswalk_entries"] = kb.crosswalk().size();
    summary["politician_orientations"] = orientation_counts;
    summary["unmapped_party_ids"] = unmapped_parties;
    ctx.write(kb_file, summary.dump(2) + "\n");
    ctx.counts["persons"] = kb.persons().size();
    ctx.counts["politicians"] = politicians;
    ctx.counts["politicians_with_orientation"] = mapped;
}

void stage_index(Context &ctx)
{
    auto const manifest = read_stage_corpus(ctx, dedup_corpus_file, "dedup");
    auto const index = topics::build_index(manifest, ctx.config.threads);
    std::ostringstream s;
    topics::write_index(s, index);
    ctx.write(index_file, s.str());
    ctx.counts["documents"] = index.doc_count();
    ctx.counts["terms"] = index.postings().size();
}

void stage_topic_select(Context &ctx, std::optional<std::string> const &topic)
{
    auto const path = ctx.require_artifact(index_file, "index");
    ctx.note_input("index", path, json_io::read_file(path));
    auto const index = topics::read_index(path);
    auto const catalog = read_topics(ctx);
    auto write_ids = [&](std::string const &id, std::set<std::string> const &ids) {
        std::string text;
        for (auto const &d : ids) {
            text += d + "\n";
        }
        ctx.write("topics/" + id + ".txt", text);
        ctx.counts[id] = ids.size();
    };
    if (topic) {
        try {
            catalog.at(*topic);
        } catch (std::out_of_range const &) {
            bad_config("topic-select: unknown topic `" + *topic + "`");
        }
        auto const ids = topics::select_topic_subset(index, catalog, *topic, ctx.config.bm25);
        write_ids(*topic, ids);
        for (auto const &d : ids) {
            *ctx.stdout_stream << d << "\n";
        }
        return;
    }
    auto const subsets = topics::select_all_topics(index, catalog, ctx.config.bm25);
    ojson j;
    j["topics"] = ojson::object();
    for (auto const &[id, ids] : subsets) {
        j["topics"][id] = ids;
        write_ids(id, ids);
    }
    ctx.write(subsets_file, j.dump(2) + "\n");
}

struct AnalysisState {
    CorpusManifest manifest;
    std::vector<MentionAnnotation> all_mentions;
    std::vector<MentionAnnotation> linked;
    kb::KnowledgeBase kb;
    analytics::FactBuild facts;
};

AnalysisState load_analysis(Context &ctx)
{
    AnalysisState s;
    s.manifest = read_stage_corpus(ctx, dedup_corpus_file, "dedup");
    s.all_mentions = read_stage_annotations(ctx, s.manifest);
    s.linked = filter_linked(s.all_mentions, ctx.config.link_threshold).kept;
    s.kb = read_kb(ctx);
    auto const subsets = read_subsets(ctx);
    s.facts = analytics::build_facts(s.manifest, s.linked, s.kb, subsets, ctx.config.analytics.score_mode);
    ctx.counts["mentions"] = s.all_mentions.size();
    ctx.counts["linked_mentions"] = s.linked.size();
    ctx.counts["facts"] = s.facts.facts.size();
    ctx.counts["fact_issues"] = s.facts.issues.size();
    return s;
}

analytics::AnalyticsOptions analysis_options(Context const &ctx, AnalysisState const &s)
{
    auto options = ctx.config.analytics;
    options.window = ctx.config.window ? ctx.config.window : s.manifest.window;
    options.provenance.corpus_hash = corpus_fingerprint(s.manifest);
    options.provenance.seed = ctx.config.seed.value_or(0);
    return options;
}

void stage_analyze(Context &ctx, std::optional<std::string> const &report_id, bool all)
{
    if (all == report_id.has_value()) {
        bad_config("analyze: pass exactly one of --report <id> or --all");
    }
    auto const &catalog = analytics::report_catalog();
    if (report_id && std::none_of(catalog.begin(), catalog.end(), [&](auto const &r) { return r.id == *report_id; })) {
        bad_config("analyze: unknown report `" + *report_id + "`");
    }
    auto const state = load_analysis(ctx);
    auto const options = analysis_options(ctx, state);
    analytics::AnalysisInputs inputs{&state.manifest, state.all_mentions, state.linked, &state.kb,
                                     state.facts.facts};
    ojson written = ojson::array();
    for (auto const &spec : catalog) {
        if (report_id && spec.id != *report_id) {
            continue;
        }
        auto const table = spec.run(inputs, options);
        auto const base = "reports/" + std::string(spec.id);
        ctx.write(base + ".csv", report::to_csv(table));
        ctx.write(base + ".json", report::to_json(table).dump(2) + "\n");
        written.push_back(spec.id);
    }
    ctx.counts["reports"] = written.size();
}

void stage_stats(Context &ctx)
{
    auto const state = load_analysis(ctx);
    auto const options = analysis_options(ctx, state);
    auto const table = analytics::corpus_stats(state.manifest, state.all_mentions, state.linked, state.facts.facts,
                                               options);
    auto const coverage = kb::kb_coverage(state.kb, state.linked);
    ojson j;
    j["corpus_hash"] = options.provenance.corpus_hash;
    j["documents"] = state.manifest.documents.size();
    j["mentions"] = state.all_mentions.size();
    j["linked_mentions"] = state.linked.size();
    j["link_dropped"] = state.all_mentions.size() - state.linked.size();
    j["kb_coverage"] = {{"linked_mentions", coverage.linked_mentions},
                        {"mentions_with_record", coverage.mentions_with_record},
                        {"politician_mentions", coverage.politician_mentions},
                        {"mappable_politician_mentions", coverage.mappable_politician_mentions},
                        {"mappable_fraction", coverage.mappable_fraction() ? ojson(*coverage.mappable_fraction())
                                                                            : ojson(nullptr)}};
    ojson issues = ojson::array();
    for (auto const &i : state.facts.issues) {
        issues.push_back({{"mention_index", i.mention_index}, {"doc_id", i.doc_id}, {"message", i.message}});
    }
    j["fact_issues"] = issues;
    j["corpus_stats"] = report::to_json(table)["rows"];
    ctx.write(stats_file, j.dump(2) + "\n");
}

// --- error reporting ----------------------------------------------------------

int fail(std::ostream &err, std::string const &stage, int code, std::string const &kind, std::string const &message,
         std::vector<RecordIssue> const &issues = {})
{
    ojson e;
    e["status"] = "error";
    e["stage"] = stage;
    e["exit_code"] = code;
    e["kind"] = kind;
    e["message"] = message;
    if (!issues.empty()) {
        e["issue_count"] = issues.size();
        e["issues"] = issues_json(issues);
    }
    err << e.dump() << "\n";
    return code;
}

}  // namespace

int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"newslens: news-coverage analytics pipeline", "newslens"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_flag;
    std::optional<std::uint64_t> seed_flag;
    std::optional<unsigned> threads_flag;
    app.add_option("--config", config_path, "JSON pipeline config");
    app.add_option("--out", out_flag, "output directory");
    app.add_option("--threads", threads_flag, "worker threads")->check(CLI::PositiveNumber);

    Paths path_flags;
    auto add_path = [](CLI::App *sub, std::string const &name, std::optional<fs::path> &dst, std::string desc) {
        sub->add_option(name, dst, std::move(desc));
    };

    auto *ingest = app.add_subcommand("ingest", "validate the raw corpus and drop short documents");
    std::optional<std::size_t> min_length;
    add_path(ingest, "--corpus", path_flags.corpus, "raw corpus JSONL");
    add_path(ingest, "--outlets", path_flags.outlets, "outlet metadata JSON");
    ingest->add_option("--min-length", min_length, "minimum body length in characters");

    auto *dedup_cmd = app.add_subcommand("dedup", "remove near-duplicate documents within each domain");
    std::optional<std::size_t> shingle_size;
    std::optional<std::size_t> permutations;
    std::optional<double> threshold;
    dedup_cmd->add_option("--shingle-size", shingle_size, "words per shingle")->check(CLI::PositiveNumber);
    dedup_cmd->add_option("--permutations", permutations, "MinHash permutations")->check(CLI::PositiveNumber);
    dedup_cmd->add_option("--threshold", threshold, "Jaccard threshold")->check(CLI::Range(0.0, 1.0));
    dedup_cmd->add_option("--seed", seed_flag, "hash seed");

    auto *annotate = app.add_subcommand("annotate-mock", "annotate with a gazetteer and keyword rules");
    add_path(annotate, "--gazetteer", path_flags.gazetteer, "surface -> kb_id JSON");
    add_path(annotate, "--rules", path_flags.sentiment_rules, "sentiment rules JSON");
    annotate->add_option("--seed", seed_flag, "annotation seed");

    auto *import_cmd = app.add_subcommand("import-annotations", "validate and import an annotation JSONL file");
    add_path(import_cmd, "--annotations", path_flags.annotations, "annotation JSONL");
    std::optional<double> link_threshold;
    import_cmd->add_option("--link-threshold", link_threshold, "minimum link log-likelihood (exclusive)");

    auto *kb_cmd = app.add_subcommand("kb-load", "validate knowledge-base snapshots");
    add_path(kb_cmd, "--persons", path_flags.persons, "person snapshot JSONL");
    add_path(kb_cmd, "--parties", path_flags.parties, "party snapshot JSONL");
    add_path(kb_cmd, "--crosswalk", path_flags.crosswalk, "party crosswalk CSV");

    auto *index_cmd = app.add_subcommand("index", "build the inverted index");

    auto *topic_cmd = app.add_subcommand("topic-select", "select topic subsets by BM25 pertinence");
    std::optional<std::string> topic;
    add_path(topic_cmd, "--topics", path_flags.topics, "topics JSON");
    topic_cmd->add_option("--topic", topic, "single topic id; prints matching doc_ids");

    auto *analyze = app.add_subcommand("analyze", "compute reports");
    std::optional<std::string> report_id;
    bool all_reports = false;
    analyze->add_option("--report", report_id, "report id");
    analyze->add_flag("--all", all_reports, "every report");

    auto *stats = app.add_subcommand("stats", "corpus and knowledge-base statistics");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (CLI::CallForHelp const &) {
        out << app.help();
        return exit_ok;
    } catch (CLI::CallForAllHelp const &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (CLI::ParseError const &e) {
        return fail(err, "", exit_config, "config", e.what());
    }

    auto *sub = app.get_subcommands().front();
    auto const stage = sub->get_name();
    try {
        Context ctx;
        ctx.stage = stage;
        ctx.stdout_stream = &out;
        if (!config_path.empty()) {
            ctx.config = load_config(config_path);
        }
        auto &c = ctx.config;
        auto override_path = [](std::optional<fs::path> &dst, std::optional<fs::path> const &flag) {
            if (flag) {
                dst = fs::absolute(*flag).lexically_normal();
            }
        };
        override_path(c.paths.corpus, path_flags.corpus);
        override_path(c.paths.outlets, path_flags.outlets);
        override_path(c.paths.annotations, path_flags.annotations);
        override_path(c.paths.persons, path_flags.persons);
        override_path(c.paths.parties, path_flags.parties);
        override_path(c.paths.crosswalk, path_flags.crosswalk);
        override_path(c.paths.topics, path_flags.topics);
        override_path(c.paths.gazetteer, path_flags.gazetteer);
        override_path(c.paths.sentiment_rules, path_flags.sentiment_rules);
        if (seed_flag) {
            c.seed = seed_flag;
        }
        if (threads_flag) {
            c.threads = *threads_flag;
        }
        if (min_length) {
            c.min_length = *min_length;
        }
        if (shingle_size) {
            c.dedup.shingle_size = *shingle_size;
        }
        if (permutations) {
            c.dedup.permutations = *permutations;
        }
        if (threshold) {
            c.dedup.threshold = *threshold;
        }
        if (link_threshold) {
            c.link_threshold = *link_threshold;
        }

        if (!out_flag.empty()) {
            ctx.out = fs::absolute(out_flag);
        } else if (char const *env = std::getenv(output_dir_env); env != nullptr && *env != '\0') {
            ctx.out = fs::absolute(env);
        } else if (c.output_dir) {
            ctx.out = *c.output_dir;
        } else {
            bad_config("no output directory (--out, " + std::string(output_dir_env) + " or config `output_dir`)");
        }
        ctx.out = ctx.out.lexically_normal();

        if (sub == ingest) {
            stage_ingest(ctx);
        } else if (sub == dedup_cmd) {
            stage_dedup(ctx);
        } else if (sub == annotate) {
            stage_annotate_mock(ctx);
        } else if (sub == import_cmd) {
            stage_import_annotations(ctx);
        } else if (sub == kb_cmd) {
            stage_kb_load(ctx);
        } else if (sub == index_cmd) {
            stage_index(ctx);
        } else if (sub == topic_cmd) {
            stage_topic_select(ctx, topic);
        } else if (sub == analyze) {
            stage_analyze(ctx, report_id, all_reports);
        } else if (sub == stats) {
            stage_stats(ctx);
        }
        ctx.write_log();
        return exit_ok;
    } catch (ConfigError const &e) {
        return fail(err, stage, exit_config, "config", e.what());
    } catch (RecordsError const &e) {
        return fail(err, stage, exit_data, "data", e.what(), e.issues());
    } catch (DataError const &e) {
        return fail(err, stage, exit_data, "data", e.what());
    } catch (std::exception const &e) {
        return fail(err, stage, exit_internal, "internal", e.what());
    }
}

int run(int argc, char const *const *argv)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, std::cout, std::cerr);
}

}  // namespace newslens::cli
