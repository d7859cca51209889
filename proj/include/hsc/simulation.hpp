#pragma once

#include <string>
#include <vector>

#include "hsc/scenario.hpp"

namespace hsc {

/// One control-step record. Torques follow the two views the model keeps:
/// *_intent are the controller-side torques (impedance times intent motion),
/// *_coupling the torques actually applied to the wheel.
struct SimRow {
    double t = 0.0;
    double theta_s = 0.0;
    double dtheta_s = 0.0;
    double theta_h = 0.0;
    double theta_a = 0.0;
    double b_h = 0.0;
    double k_h = 0.0;
    double b_a = 0.0;
    double k_a = 0.0;
    double tau_h_intent = 0.0;
    double tau_a_intent = 0.0;
    double tau_h_coupling = 0.0;
    double tau_a_coupling = 0.0;
    double tau_total_intent = 0.0;
    double tau_diff = 0.0;
    double epsilon = 0.0;
    double stage_cost = 0.0;
    double safety_term = 0.0;
    double disagreement_term = 0.0;
};

struct SimLog {
    std::string scenario_name;
    std::string config_json;  // canonical serialized config of the run
    double ts = 0.0;
    std::vector<SimRow> rows;

    static const std::vector<std::string>& column_names();
    std::vector<double> column(const std::string& name) const;
};

struct RunOptions {
    double dt = 1e-3;        // inner plant step
    double noise_std = 0.0;  // optional measurement noise on theta_h (off by default)
};

SimLog run_simulation(const ScenarioConfig& cfg, const RunOptions& opts = {});

struct Metrics {
    double steady_state_tau_diff = 0.0;  // mean |tau_diff| over the final 20%
    std::vector<double> settle_times;    // per k_h breakpoint; +inf if never settled
    double max_abs_theta_s = 0.0;
    double mean_disagreement = 0.0;
};

Metrics compute_metrics(const SimLog& log, double tolerance = 0.05);

struct ComparisonReport {
    Metrics adaptive;
    Metrics fixed;
    double disagreement_ratio = 1.0;  // adaptive / fixed
    double tau_diff_ratio = 1.0;
    double max_theta_ratio = 1.0;
    bool adaptive_lower_disagreement = false;
    bool adaptive_tracks_epsilon = false;
    bool identical_modes = false;
};

ComparisonReport compare_runs(const SimLog& adaptive, const SimLog& fixed);

/// CSV with the exact SimRow column names, 9 significant digits.
std::string to_csv(const SimLog& log);

/// JSON mirror: { "meta": {...}, "columns": {...} }.
std::string to_json(const SimLog& log, const std::vector<std::string>& overrides = {});

/// FNV-1a over the canonical config text, as fixed-width hex.
std::string config_hash(const std::string& config_json);

}  // namespace hsc
