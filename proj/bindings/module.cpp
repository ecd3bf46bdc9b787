#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reviewpulse/correlation.hpp"
#include "reviewpulse/diff.hpp"
#include "reviewpulse/forest.hpp"
#include "reviewpulse/hunk.hpp"
#include "reviewpulse/language.hpp"
#include "reviewpulse/lda.hpp"
#include "reviewpulse/metrics.hpp"
#include "reviewpulse/reconstruct.hpp"
#include "reviewpulse/shap.hpp"
#include "reviewpulse/stats.hpp"
#include "reviewpulse/text_util.hpp"
#include "reviewpulse/two_stage.hpp"

#include <sstream>

namespace py = pybind11;
using namespace reviewpulse;

namespace {

py::list edits_to_list(const std::vector<LineEdit>& edits)
{
    py::list out;
    for (const LineEdit& edit : edits)
        out.append(py::make_tuple(edit.op == EditOp::Insert ? "insert" : "delete",
            edit.line, edit.text));
    return out;
}

std::vector<LineEdit> edits_from_list(const py::list& edits)
{
    std::vector<LineEdit> out;
    for (const auto& entry : edits) {
        const py::tuple t = entry.cast<py::tuple>();
        out.push_back({ t[0].cast<std::string>() == "insert" ? EditOp::Insert : EditOp::Delete,
            t[1].cast<std::size_t>(), t[2].cast<std::string>() });
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "reviewpulse core: diff reconstruction, agreement metrics, topic models, "
              "random forests and Shapley attributions";

    // --- diff / hunks ---
    m.def(
        "text_diff",
        [](const std::string& a, const std::string& b) { return edits_to_list(text_diff(a, b)); },
        py::arg("a"), py::arg("b"),
        "Minimal line-level edit script as (op, line, text) tuples.");
    m.def(
        "apply_edits",
        [](const std::string& a, const py::list& edits) {
            return apply_edits(a, edits_from_list(edits));
        },
        py::arg("a"), py::arg("edits"));

    py::class_<HunkLine>(m, "HunkLine")
        .def_property_readonly("origin",
            [](const HunkLine& line) { return std::string(1, origin_marker(line.origin)); })
        .def_readonly("text", &HunkLine::text)
        .def_readonly("old_line", &HunkLine::old_line)
        .def_readonly("new_line", &HunkLine::new_line);
    py::class_<Hunk>(m, "Hunk")
        .def_readonly("old_start", &Hunk::old_start)
        .def_readonly("old_count", &Hunk::old_count)
        .def_readonly("new_start", &Hunk::new_start)
        .def_readonly("new_count", &Hunk::new_count)
        .def_readonly("heading", &Hunk::heading)
        .def_readonly("lines", &Hunk::lines)
        .def("last_new_line", &Hunk::last_new_line);
    m.def("parse_hunk", &parse_hunk, py::arg("diff_hunk"));
    m.def(
        "slice_hunk",
        [](const Hunk& hunk, std::optional<int> start, int end) {
            return slice_hunk(hunk, start, end);
        },
        py::arg("hunk"), py::arg("start"), py::arg("end"),
        "Lines covering [start, end]; start=None takes the three preceding lines.");
    m.def(
        "categorize_subsequent",
        [](const std::string& original_path, const std::string& original_text,
            const std::string& final_path, const std::optional<std::string>& final_text) {
            const SubsequentChange change = categorize_subsequent(original_path,
                original_text, final_path, final_text);
            return py::make_tuple(std::string(to_string(change.category)), change.final_path,
                edits_to_list(change.diff));
        },
        py::arg("original_path"), py::arg("original_text"), py::arg("final_path"),
        py::arg("final_text"),
        "Five-way post-review change category with the line edits.");

    // --- language / comment structure ---
    m.def(
        "detect_language",
        [](const std::string& text) {
            const LanguageTag tag = detect_language(text);
            return py::make_tuple(tag.english() ? "english" : "other", tag.confidence);
        },
        py::arg("text"));
    m.def(
        "code_spans",
        [](const std::string& body) {
            const CodeSpans spans = extract_code_spans(body);
            return py::make_tuple(spans.has_inline, spans.has_multiline, spans.code_chars);
        },
        py::arg("body"), "(has_inline, has_multiline, code_chars) of a comment body.");
    m.def("tokenize_comment", &tokenize_comment, py::arg("body"));
    m.def("split_general_comment", &split_general_comment, py::arg("body"));

    // --- agreement metrics ---
    py::class_<ConfusionMatrix>(m, "ConfusionMatrix")
        .def_readonly("labels", &ConfusionMatrix::labels)
        .def_readonly("counts", &ConfusionMatrix::counts)
        .def("total", &ConfusionMatrix::total);
    m.def("confusion", &confusion, py::arg("gold"), py::arg("pred"), py::arg("labels"));
    m.def("overall_accuracy", &overall_accuracy, py::arg("matrix"));
    m.def("cohen_kappa", &cohen_kappa, py::arg("matrix"));
    m.def("macro_f1", &macro_f1, py::arg("matrix"));

    // --- statistics ---
    m.def(
        "fisher_exact",
        [](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
            return fisher_exact({ a, b, c, d });
        },
        py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"),
        "Two-sided Fisher exact p-value of a 2x2 table.");
    m.def(
        "pearson",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return pearson(x, y).value;
        },
        py::arg("x"), py::arg("y"));
    m.def(
        "spearman",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            return spearman(x, y).value;
        },
        py::arg("x"), py::arg("y"));
    m.def(
        "quantile_bins",
        [](std::vector<double> values, int k) {
            const QuantileBins bins = quantile_bins(std::move(values), k);
            return py::make_tuple(bins.minimum, bins.uppers);
        },
        py::arg("values"), py::arg("k") = 5, "(minimum, upper edges) of half-open bins.");
    m.def(
        "autospearman",
        [](const std::vector<std::vector<double>>& columns,
            const std::vector<std::string>& names, double threshold) {
            const AutoSpearmanResult result = autospearman(columns, names, threshold);
            py::list removed;
            for (const RemovedFeature& r : result.removed)
                removed.append(py::make_tuple(r.name, r.partner, r.rho));
            return py::make_tuple(result.retained, removed);
        },
        py::arg("columns"), py::arg("names"), py::arg("threshold") = 0.7);

    // --- topic model ---
    py::class_<TopicModel>(m, "TopicModel")
        .def_readonly("num_topics", &TopicModel::num_topics)
        .def_readonly("vocabulary", &TopicModel::vocabulary)
        .def_readonly("topic_word", &TopicModel::topic_word)
        .def("top_tokens", &TopicModel::top_tokens, py::arg("topic"), py::arg("n") = 10)
        .def("save_text",
            [](const TopicModel& model) {
                std::ostringstream out;
                model.save(out);
                return out.str();
            })
        .def_static("load_text", [](const std::string& text) {
            std::istringstream in(text);
            return TopicModel::load(in);
        });
    m.def("train_lda", &train_lda, py::arg("corpus"), py::arg("num_topics"),
        py::arg("alpha") = 0.0, py::arg("beta") = 0.0, py::arg("iterations") = 1000,
        py::arg("seed") = 42);
    m.def("infer_topics", &infer_topics, py::arg("model"), py::arg("doc"),
        py::arg("iterations") = 200, py::arg("seed") = 42);

    // --- forest + attribution ---
    py::class_<Forest>(m, "Forest")
        .def_readonly("n_features", &Forest::n_features)
        .def("predict",
            [](const Forest& forest, const std::vector<double>& x) {
                return forest.predict(x);
            })
        .def("save_text",
            [](const Forest& forest) {
                std::ostringstream out;
                forest.save(out);
                return out.str();
            })
        .def_static("load_text", [](const std::string& text) {
            std::istringstream in(text);
            return Forest::load(in);
        });
    m.def(
        "split_train_test",
        [](const std::vector<int>& labels, double fraction, std::uint64_t seed) {
            const TrainTestSplit split = split_train_test(labels, fraction, seed);
            return py::make_tuple(split.train, split.test);
        },
        py::arg("labels"), py::arg("fraction") = 0.8, py::arg("seed") = 42);
    m.def(
        "train_forest",
        [](const std::vector<std::vector<double>>& rows, const std::vector<int>& labels,
            int n_trees, int max_depth, int min_leaf, int features_per_split,
            std::uint64_t seed) {
            ForestParams params;
            params.n_trees = n_trees;
            params.max_depth = max_depth;
            params.min_leaf = min_leaf;
            params.features_per_split = features_per_split;
            params.seed = seed;
            return train_forest(rows, labels, params);
        },
        py::arg("rows"), py::arg("labels"), py::arg("n_trees") = 100,
        py::arg("max_depth") = -1, py::arg("min_leaf") = 1,
        py::arg("features_per_split") = 0, py::arg("seed") = 42);
    m.def(
        "tree_shap",
        [](const Forest& forest, const std::vector<double>& x) {
            const ShapExplanation explanation = tree_shap(forest, x);
            return py::make_tuple(explanation.phi, explanation.base);
        },
        py::arg("forest"), py::arg("x"), "(phi per feature, base value).");

    // --- voting ---
    m.def(
        "vote",
        [](const std::vector<std::string>& runs) {
            std::vector<SixClass> labels;
            labels.reserve(runs.size());
            for (const std::string& run : runs)
                labels.push_back(six_class_from_string(run));
            const SixClass final = vote(labels);
            return py::make_tuple(std::string(to_string(final)),
                vote_agreement(labels, final));
        },
        py::arg("runs"),
        "Majority with the conservative tie-break; returns (label, agreement).");
    m.def("parse_llm_payload", [](const std::string& text) {
        const ParsedPayload payload = parse_llm_payload(text);
        return py::make_tuple(payload.label, payload.items);
    });

    py::register_exception<Error>(m, "ReviewpulseError");
}
