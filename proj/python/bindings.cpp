#include "newslens/annotations.hpp"
#include "newslens/cli.hpp"
#include "newslens/dedup.hpp"
#include "newslens/kb.hpp"
#include "newslens/sentiment.hpp"
#include "newslens/text.hpp"
#include "newslens/topics.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace newslens;

namespace {

std::vector<std::string> to_lines(std::vector<MentionAnnotation> const &mentions)
{
    std::vector<std::string> lines;
    lines.reserve(mentions.size());
    for (auto const &m : mentions) {
        lines.push_back(to_json_line(m));
    }
    return lines;
}

AnnotationLoad parse_or_throw(std::string const &content)
{
    auto load = parse_annotations(content);
    if (!load.ok()) {
        throw py::value_error(describe(load.issues.front()));
    }
    return load;
}

std::vector<RawDocument> as_documents(std::vector<std::pair<std::string, std::string>> const &docs)
{
    std::vector<RawDocument> out;
    for (auto const &[id, text] : docs) {
        RawDocument d;
        d.doc_id = id;
        d.body = text;
        out.push_back(std::move(d));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "newslens core bindings";

    m.def("tokenize", &text::tokenize, py::arg("text"));

    m.def(
        "shingle", [](std::string const &text, std::size_t w) { return dedup::shingle(text, w).hashes; },
        py::arg("text"), py::arg("w") = 5);

    m.def(
        "minhash_signature",
        [](std::vector<std::uint64_t> const &elements, std::size_t n, std::uint64_t seed) -> std::optional<std::vector<std::uint64_t>> {
            auto sig = dedup::MinHasher(n, seed).signature(elements);
            if (!sig) {
                return std::nullopt;
            }
            return sig->values;
        },
        py::arg("elements"), py::arg("n") = 256, py::arg("seed") = 1);

    m.def(
        "estimate_jaccard",
        [](std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
            return dedup::estimate_jaccard({std::move(a), 0}, {std::move(b), 0});
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "optimal_lsh_params",
        [](double threshold, std::size_t n) {
            auto const p = dedup::optimal_lsh_params(threshold, n);
            return std::pair{p.bands, p.rows};
        },
        py::arg("threshold"), py::arg("n"));

    m.def(
        "bm25_scores",
        [](std::vector<std::pair<std::string, std::string>> const &docs, std::string const &query, double k1, double b) {
            auto const documents = as_documents(docs);
            auto const index = topics::build_index(documents);
            auto const terms = topics::query_terms(query);
            std::map<std::string, double> scores;
            for (auto const &[pos, score] : topics::score_matching(index, terms, {k1, b})) {
                scores[index.doc_ids()[pos]] = score;
            }
            return scores;
        },
        py::arg("docs"), py::arg("query"), py::arg("k1") = 1.2, py::arg("b") = 0.75);

    m.def(
        "topic_subset",
        [](std::vector<std::pair<std::string, std::string>> const &docs, std::string const &query, double threshold) {
            auto const documents = as_documents(docs);
            return topics::select_topic_subset(topics::build_index(documents), topics::TopicQuery{"q", query, threshold});
        },
        py::arg("docs"), py::arg("query"), py::arg("threshold"));

    m.def(
        "orientation_of", [](double x) { return std::string(kb::to_string(kb::orientation_of(x))); },
        py::arg("left_right"));

    m.def(
        "validate_annotations",
        [](std::string const &content) {
            auto const load = parse_annotations(content);
            std::vector<py::dict> issues;
            for (auto const &i : load.issues) {
                issues.push_back(py::dict(py::arg("line") = i.line, py::arg("field") = i.field,
                                          py::arg("message") = i.message));
            }
            return std::pair{to_lines(load.mentions), issues};
        },
        py::arg("content"));

    m.def(
        "filter_linked",
        [](std::string const &content, double min_log_likelihood) {
            return to_lines(filter_linked(parse_or_throw(content).mentions, min_log_likelihood).kept);
        },
        py::arg("content"), py::arg("min_log_likelihood") = -0.2);

    m.def(
        "score_mention",
        [](double negative, double neutral, double positive) {
            return sentiment::score_mention({negative, neutral, positive});
        },
        py::arg("negative"), py::arg("neutral"), py::arg("positive"));

    m.def(
        "stability_check",
        [](std::string const &content, std::size_t top_k, double keep_fraction) {
            auto const r = sentiment::stability_check(parse_or_throw(content).mentions, top_k, keep_fraction);
            return std::pair{r.pearson_mentions, r.pearson_sentiment};
        },
        py::arg("content"), py::arg("top_k") = 1000, py::arg("keep_fraction") = 0.5);

    m.def(
        "run_cli",
        [](std::vector<std::string> const &args) {
            std::ostringstream out;
            std::ostringstream err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));

    py::register_exception<sentiment::UndefinedCorrelation>(m, "UndefinedCorrelation", PyExc_ValueError);
}
