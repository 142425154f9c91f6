#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metacomb/combiner.hpp"
#include "metacomb/core_math.hpp"
#include "metacomb/metrics.hpp"
#include "metacomb/synthgen.hpp"
#include "metacomb/theorem.hpp"
#include "metacomb/threshold.hpp"

namespace py = pybind11;
using namespace metacomb;

namespace {

std::vector<std::uint8_t> to_labels(const std::vector<int>& v) {
    std::vector<std::uint8_t> out;
    out.reserve(v.size());
    for (int x : v) out.push_back(x ? 1 : 0);
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stacked-ensemble toolkit core: probability combination, threshold "
              "training, evaluation metrics, and weight-sum bound checks";
    m.attr("__version__") = "0.1.0";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
    py::register_exception<SingularityError>(m, "SingularityError", PyExc_ArithmeticError);
    py::register_exception<DegenerateClassError>(m, "DegenerateClassError", PyExc_ArithmeticError);

    py::class_<CombinerParams>(m, "CombinerParams")
        .def(py::init([](std::vector<double> weights, double bias) {
                 CombinerParams p;
                 p.weights = std::move(weights);
                 p.bias = bias;
                 return p;
             }),
             py::arg("weights"), py::arg("bias") = 0.0)
        .def_readwrite("weights", &CombinerParams::weights)
        .def_readwrite("bias", &CombinerParams::bias)
        .def("weight_sum", &CombinerParams::weight_sum)
        .def("sign_homogeneous", &CombinerParams::sign_homogeneous);

    m.def("sigmoid", &sigmoid, py::arg("x"));
    m.def(
        "combine_scores",
        [](const CombinerParams& p, const std::vector<double>& probs) {
            return combine_scores(p, probs);
        },
        py::arg("params"), py::arg("probs"));
    m.def("biased_sigmoid", &biased_sigmoid, py::arg("params"), py::arg("y"));
    m.def("assign_class", &assign_class, py::arg("score"), py::arg("t"));

    py::class_<ConfusionCounts>(m, "ConfusionCounts")
        .def(py::init([](std::int64_t tp, std::int64_t fp, std::int64_t fn, std::int64_t tn) {
                 return ConfusionCounts{tp, fp, fn, tn};
             }),
             py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("tn") = 0)
        .def_readwrite("tp", &ConfusionCounts::tp)
        .def_readwrite("fp", &ConfusionCounts::fp)
        .def_readwrite("fn", &ConfusionCounts::fn)
        .def_readwrite("tn", &ConfusionCounts::tn);

    py::class_<ClassMetrics>(m, "ClassMetrics")
        .def_readonly("precision", &ClassMetrics::precision)
        .def_readonly("recall", &ClassMetrics::recall)
        .def_readonly("f1", &ClassMetrics::f1);

    m.def(
        "confusion",
        [](const std::vector<int>& gold, const std::vector<int>& pred) {
            return confusion(to_labels(gold), to_labels(pred));
        },
        py::arg("gold"), py::arg("pred"));
    m.def("f1_from_counts", &f1_from_counts, py::arg("counts"));
    m.def(
        "macro_f1", [](const std::vector<double>& f1s) { return macro_f1_values(f1s); },
        py::arg("f1_scores"));

    py::class_<GridSpec>(m, "GridSpec")
        .def(py::init([](double base, double max, double step) {
                 return GridSpec{base, max, step};
             }),
             py::arg("base") = 0.01, py::arg("max") = 0.99, py::arg("step") = 0.01)
        .def_readwrite("base", &GridSpec::base)
        .def_readwrite("max", &GridSpec::max)
        .def_readwrite("step", &GridSpec::step)
        .def("size", &GridSpec::size)
        .def("point", &GridSpec::point);

    py::class_<ThresholdSearchResult>(m, "ThresholdSearchResult")
        .def_readonly("threshold", &ThresholdSearchResult::threshold)
        .def_readonly("f1", &ThresholdSearchResult::f1);

    m.def(
        "train_threshold",
        [](const std::vector<double>& scores, const std::vector<int>& gold, const GridSpec& grid) {
            return train_threshold(scores, to_labels(gold), grid);
        },
        py::arg("scores"), py::arg("gold"), py::arg("grid") = GridSpec{});
    m.def(
        "brute_force_threshold_oracle",
        [](const std::vector<double>& scores, const std::vector<int>& gold, const GridSpec& grid) {
            return brute_force_threshold_oracle(scores, to_labels(gold), grid);
        },
        py::arg("scores"), py::arg("gold"), py::arg("grid") = GridSpec{});

    py::class_<TrainingConfig>(m, "TrainingConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainingConfig::learning_rate)
        .def_readwrite("max_epochs", &TrainingConfig::max_epochs)
        .def_readwrite("grad_tolerance", &TrainingConfig::grad_tolerance)
        .def_readwrite("l2_penalty", &TrainingConfig::l2_penalty)
        .def_readwrite("seed", &TrainingConfig::seed);

    m.def(
        "train_class_combiner",
        [](const std::vector<std::vector<double>>& columns, const std::vector<int>& gold,
           const TrainingConfig& cfg) {
            return train_class_combiner(columns, to_labels(gold), cfg);
        },
        py::arg("columns"), py::arg("gold"), py::arg("config") = TrainingConfig{});
    m.def(
        "combiner_loss",
        [](const CombinerParams& p, const std::vector<std::vector<double>>& columns,
           const std::vector<int>& gold, double l2) {
            return combiner_loss(p, columns, to_labels(gold), l2);
        },
        py::arg("params"), py::arg("columns"), py::arg("gold"), py::arg("l2_penalty") = 0.0);
    m.def(
        "predict_scores",
        [](const CombinerParams& p, const std::vector<std::vector<double>>& columns) {
            std::vector<double> out;
            if (columns.empty()) return out;
            const std::size_t n = columns.front().size();
            std::vector<double> probs(columns.size());
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < columns.size(); ++k) probs[k] = columns[k][i];
                out.push_back(biased_sigmoid(p, combine_scores(p, probs)));
            }
            return out;
        },
        py::arg("params"), py::arg("columns"),
        "Combined probability per sample from K model-probability columns");

    py::enum_<SignCase>(m, "SignCase")
        .value("positive", SignCase::positive)
        .value("negative", SignCase::negative);

    py::class_<ClassNorms>(m, "ClassNorms")
        .def(py::init([](double u, double err_combined, double err_interp, double t) {
                 return ClassNorms{u, err_combined, err_interp, t};
             }),
             py::arg("u_norm"), py::arg("err_combined"), py::arg("err_interp"),
             py::arg("threshold") = 0.5)
        .def_readwrite("u_norm", &ClassNorms::u_norm)
        .def_readwrite("err_combined", &ClassNorms::err_combined)
        .def_readwrite("err_interp", &ClassNorms::err_interp)
        .def_readwrite("threshold", &ClassNorms::threshold);

    py::class_<BoundInterval>(m, "BoundInterval")
        .def_readonly("lo", &BoundInterval::lo)
        .def_readonly("hi", &BoundInterval::hi)
        .def_readonly("valid", &BoundInterval::valid)
        .def_readonly("sign_case", &BoundInterval::sign_case);

    m.def(
        "class_norm",
        [](const std::vector<int>& a) { return class_norm(to_labels(a)); },
        py::arg("assignments"));
    m.def(
        "class_diff_norm",
        [](const std::vector<int>& a, const std::vector<int>& b) {
            return class_diff_norm(to_labels(a), to_labels(b));
        },
        py::arg("a"), py::arg("b"));
    m.def("bound_interval", &bound_interval, py::arg("norms"), py::arg("sign_case"));
    m.def(
        "interpolation_scores",
        [](const CombinerParams& p, const std::vector<std::vector<double>>& columns) {
            return interpolation_scores(p, columns);
        },
        py::arg("params"), py::arg("columns"));
}
