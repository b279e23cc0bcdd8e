#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "syrup/calibrate.hpp"
#include "syrup/error.hpp"
#include "syrup/metrics.hpp"
#include "syrup/parse.hpp"
#include "syrup/population.hpp"
#include "syrup/prompt.hpp"
#include "syrup/synth.hpp"
#include "syrup/types.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

syrup::BehaviorVector behavior_from_category(int category) {
    return syrup::BehaviorVector::from_category(category);
}

std::vector<syrup::DesignRow> make_rows(const std::vector<double>& z,
                                        const std::vector<int>& category,
                                        const std::vector<int>& y) {
    if (z.size() != y.size() || (!category.empty() && category.size() != z.size()))
        throw py::value_error("z, category and y must have equal length");
    std::vector<syrup::DesignRow> rows(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        rows[i].z = z[i];
        rows[i].u = behavior_from_category(category.empty() ? 0 : category[i]);
        rows[i].y = y[i];
    }
    return rows;
}

py::dict report_to_dict(const syrup::FitReport& report) {
    py::dict d;
    d["kind"] = syrup::to_string(report.params.kind);
    d["alpha"] = report.params.alpha;
    d["beta"] = report.params.beta;
    d["gamma1"] = report.params.gamma1;
    d["gamma2"] = report.params.gamma2;
    d["ridge_lambda"] = report.params.ridge_lambda;
    d["log_likelihood"] = report.log_likelihood;
    d["n_iterations"] = report.n_iterations;
    d["converged"] = report.converged;
    return d;
}

syrup::CalibratorParams params_from_dict(const py::dict& d) {
    syrup::CalibratorParams p;
    p.kind = syrup::calibrator_kind_from_string(d["kind"].cast<std::string>());
    p.alpha = d["alpha"].cast<double>();
    p.beta = d["beta"].cast<double>();
    if (d.contains("gamma1")) p.gamma1 = d["gamma1"].cast<std::array<double, 4>>();
    if (d.contains("gamma2")) p.gamma2 = d["gamma2"].cast<std::array<double, 4>>();
    if (d.contains("ridge_lambda")) p.ridge_lambda = d["ridge_lambda"].cast<double>();
    p.validate();
    return p;
}

}  // namespace

PYBIND11_MODULE(_syrup, m) {
    m.doc() = "sycophancy-aware uncertainty estimation: calibrators, metrics, parsing";

    m.def(
        "brier_score",
        [](double p_hat, int accuracy) { return syrup::brier_score(p_hat, accuracy); },
        "p_hat"_a, "accuracy"_a, "(p_hat - accuracy)^2");

    m.def(
        "brier_skill_score",
        [](const std::vector<double>& p_hat, const std::vector<int>& accuracy) {
            if (p_hat.size() != accuracy.size())
                throw py::value_error("p_hat and accuracy must have equal length");
            std::vector<syrup::ScoredRecord> scored(p_hat.size());
            for (std::size_t i = 0; i < p_hat.size(); ++i) {
                scored[i].record.accuracy = accuracy[i];
                scored[i].p_hat = p_hat[i];
                scored[i].bs = syrup::brier_score(p_hat[i], accuracy[i]);
            }
            return syrup::brier_skill_score(scored);
        },
        "p_hat"_a, "accuracy"_a,
        "1 - sum(BS) / sum((mu - acc)^2): percent of correctness variance explained");

    m.def(
        "fit_platt",
        [](const std::vector<double>& z, const std::vector<int>& y, double ridge_lambda) {
            return report_to_dict(syrup::fit_platt(make_rows(z, {}, y), ridge_lambda));
        },
        "z"_a, "y"_a, "ridge_lambda"_a = 1e-4,
        "MLE of logit(p) = alpha*z + beta; returns coefficients and fit diagnostics");

    m.def(
        "fit_syrup",
        [](const std::vector<double>& z, const std::vector<int>& category,
           const std::vector<int>& y, double ridge_lambda) {
            return report_to_dict(syrup::fit_syrup(make_rows(z, category, y), ridge_lambda));
        },
        "z"_a, "category"_a, "y"_a, "ridge_lambda"_a = 1e-4,
        "MLE of logit(p) = alpha*z + gamma1'u + z*gamma2'u + beta with reference-cell coding");

    m.def(
        "predict",
        [](const py::dict& params, double z, int category) {
            return syrup::predict(params_from_dict(params), z, behavior_from_category(category))
                .p_hat;
        },
        "params"_a, "z"_a, "category"_a = 0,
        "calibrated probability of correctness for one derivative value");

    m.def(
        "parse_answer",
        [](const std::string& raw_text, const std::string& task_kind, bool elicits_confidence) {
            auto parsed = syrup::parse_answer(
                raw_text, syrup::task_kind_from_string(task_kind), elicits_confidence);
            return py::make_tuple(parsed.answer, parsed.dnc);
        },
        "raw_text"_a, "task_kind"_a, "elicits_confidence"_a,
        "extract (answer, dnc) from a completion; raises ValueError on parse failure");

    m.def(
        "compute_itp",
        [](const std::vector<double>& logprobs) {
            return syrup::compute_itp(std::span<const double>(logprobs));
        },
        "logprobs"_a, "sum of token log-probabilities (log of the sequence probability)");

    m.def("dnc_to_derivative",
          [](int dnc, const std::string& parsed_answer, const std::string& task_kind) {
              return syrup::dnc_to_derivative(dnc, parsed_answer,
                                              syrup::task_kind_from_string(task_kind));
          },
          "dnc"_a, "parsed_answer"_a, "task_kind"_a,
          "log of the (clamped) confidence the 1-10 rating assigns the given answer");

    m.def(
        "encode_behavior",
        [](const std::optional<std::string>& level) {
            std::optional<syrup::UserSuggestion> suggestion;
            if (level) {
                syrup::UserSuggestion s;
                s.suggested_answer = "x";
                s.confidence =
                    syrup::ConfidenceLevel::from_level(syrup::conf_level_from_string(*level));
                suggestion = s;
            }
            auto behavior = syrup::encode_behavior(suggestion);
            return py::make_tuple(behavior.category, behavior.onehot);
        },
        "level"_a = py::none(),
        "(category, onehot) for an optional suggestion confidence level");

    m.def(
        "render_suggestion",
        [](const std::string& answer, const std::string& level) {
            syrup::UserSuggestion s;
            s.suggested_answer = answer;
            s.confidence =
                syrup::ConfidenceLevel::from_level(syrup::conf_level_from_string(level));
            return syrup::render_suggestion(s);
        },
        "answer"_a, "level"_a = "null_conf", "the fixed user-suggestion sentence");

    m.def(
        "aggregate_splits",
        [](const std::vector<double>& values) {
            auto [mean, sd] = syrup::aggregate_splits(values);
            return py::make_tuple(mean, sd);
        },
        "values"_a, "(mean, population std) over per-split metric values");

    m.def(
        "expected_acc_bias",
        [](double p_base, double p_follow, double correctness_pct) {
            syrup::SycophantSpec spec;
            spec.p_base = p_base;
            spec.p_follow = {{syrup::ConfLevel::null_conf, p_follow},
                             {syrup::ConfLevel::low, p_follow},
                             {syrup::ConfLevel::high, p_follow}};
            return syrup::expected_acc_bias(spec, correctness_pct);
        },
        "p_base"_a, "p_follow"_a, "correctness_pct"_a,
        "closed-form accuracy bias (fraction) of the synthetic sycophant");

    py::register_exception<syrup::ParseFailure>(m, "ParseFailure", PyExc_ValueError);
    py::register_exception<syrup::DegenerateLabels>(m, "DegenerateLabels", PyExc_ValueError);
}
