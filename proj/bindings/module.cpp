#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "hsc/controller.hpp"
#include "hsc/linalg.hpp"
#include "hsc/scenario.hpp"
#include "hsc/simulation.hpp"

namespace py = pybind11;
using nlohmann::json;

namespace {

hsc::ScenarioConfig config_from_spec(const std::string& spec,
                                     const std::map<std::string, std::string>& overrides) {
    std::string text;
    if (const hsc::ScenarioConfig* b = hsc::find_builtin(spec)) {
        text = hsc::serialize_scenario(*b);
    } else {
        text = spec;  // assume an inline JSON document
    }
    json doc = json::parse(text);
    for (const auto& [path, value] : overrides) {
        json* node = &doc;
        std::size_t start = 0;
        while (true) {
            const auto dot = path.find('.', start);
            const std::string key = path.substr(start, dot - start);
            if (dot == std::string::npos) {
                json parsed = json::parse(value, nullptr, false);
                (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
                break;
            }
            node = &(*node)[key];
            start = dot + 1;
        }
    }
    return hsc::parse_scenario(doc.dump());
}

py::dict log_to_dict(const hsc::SimLog& log) {
    py::dict columns;
    for (const auto& name : hsc::SimLog::column_names())
        columns[name.c_str()] = log.column(name);
    py::dict meta;
    meta["scenario"] = log.scenario_name;
    meta["config_hash"] = hsc::config_hash(log.config_json);
    meta["ts"] = log.ts;

    const hsc::Metrics m = hsc::compute_metrics(log);
    py::dict metrics;
    metrics["steady_state_tau_diff"] = m.steady_state_tau_diff;
    metrics["settle_times"] = m.settle_times;
    metrics["max_abs_theta_s"] = m.max_abs_theta_s;
    metrics["mean_disagreement"] = m.mean_disagreement;

    py::dict out;
    out["columns"] = columns;
    out["meta"] = meta;
    out["metrics"] = metrics;
    return out;
}

}  // namespace

PYBIND11_MODULE(_hscsim, m) {
    m.doc() = "Adaptive haptic shared-control simulation core";
    m.attr("__version__") = "0.1.0";

    m.def("list_scenarios", [] {
        std::vector<std::string> names;
        for (const auto& cfg : hsc::builtin_scenarios()) names.push_back(cfg.name);
        return names;
    });

    m.def("scenario_json", [](const std::string& name) {
        const hsc::ScenarioConfig* b = hsc::find_builtin(name);
        if (!b) throw py::value_error("no built-in scenario named '" + name + "'");
        return hsc::serialize_scenario(*b);
    });

    m.def(
        "run",
        [](const std::string& spec, const std::map<std::string, std::string>& overrides) {
            return log_to_dict(hsc::run_simulation(config_from_spec(spec, overrides)));
        },
        py::arg("spec"), py::arg("overrides") = std::map<std::string, std::string>{},
        "Run a scenario (built-in name or JSON text) and return columns/meta/metrics.");

    m.def(
        "run_csv",
        [](const std::string& spec, const std::map<std::string, std::string>& overrides) {
            return hsc::to_csv(hsc::run_simulation(config_from_spec(spec, overrides)));
        },
        py::arg("spec"), py::arg("overrides") = std::map<std::string, std::string>{});

    m.def(
        "compare",
        [](const std::string& spec) {
            auto cfg_a = config_from_spec(spec, {{"controller.adaptive", "true"}});
            auto cfg_f = config_from_spec(spec, {{"controller.adaptive", "false"}});
            const hsc::SimLog la = hsc::run_simulation(cfg_a);
            const hsc::SimLog lf = hsc::run_simulation(cfg_f);
            const hsc::ComparisonReport rep = hsc::compare_runs(la, lf);
            py::dict out;
            out["disagreement_ratio"] = rep.disagreement_ratio;
            out["tau_diff_ratio"] = rep.tau_diff_ratio;
            out["adaptive_lower_disagreement"] = rep.adaptive_lower_disagreement;
            out["adaptive_tracks_epsilon"] = rep.adaptive_tracks_epsilon;
            out["identical_modes"] = rep.identical_modes;
            out["adaptive"] = log_to_dict(la);
            out["fixed"] = log_to_dict(lf);
            return out;
        },
        py::arg("spec"));

    m.def(
        "discretize",
        [](double alpha_b, double alpha_k, double beta_b, double beta_k, double ts) {
            const auto p = hsc::discretize({alpha_b, alpha_k}, {beta_b, beta_k}, ts);
            py::dict d;
            d["alpha_tilde_b"] = p.alpha_tilde.b;
            d["alpha_tilde_k"] = p.alpha_tilde.k;
            d["beta_tilde_b"] = p.beta_tilde.b;
            d["beta_tilde_k"] = p.beta_tilde.k;
            return d;
        },
        py::arg("alpha_b"), py::arg("alpha_k"), py::arg("beta_b"), py::arg("beta_k"),
        py::arg("ts"));

    m.def(
        "intent_torque",
        [](double b, double k, double theta, double theta_prev, double ts) {
            return hsc::intent_torque({b, k}, {theta, theta_prev, ts});
        },
        py::arg("b"), py::arg("k"), py::arg("theta"), py::arg("theta_prev"), py::arg("ts"));

    m.def("stage_cost", &hsc::stage_cost, py::arg("tau_h"), py::arg("tau_a"), py::arg("epsilon"));
    m.def("pointwise_target", &hsc::pointwise_target, py::arg("tau_h"), py::arg("epsilon"));

    m.def(
        "lstsq",
        [](const std::vector<std::vector<double>>& a_rows, const std::vector<double>& b) {
            if (a_rows.empty()) throw py::value_error("empty matrix");
            const std::size_t cols = a_rows.front().size();
            hsc::DenseMatrix a(a_rows.size(), cols);
            for (std::size_t i = 0; i < a_rows.size(); ++i) {
                if (a_rows[i].size() != cols) throw py::value_error("ragged matrix");
                for (std::size_t j = 0; j < cols; ++j) a(i, j) = a_rows[i][j];
            }
            return hsc::lstsq(a, b);
        },
        py::arg("a"), py::arg("b"));
}
