#include "hsc/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <random>

#include <json.hpp>

namespace hsc {

using nlohmann::json;

const std::vector<std::string>& SimLog::column_names() {
    static const std::vector<std::string> names = {
        "t",           "theta_s",      "dtheta_s",       "theta_h",
        "theta_a",     "b_h",          "k_h",            "b_a",
        "k_a",         "tau_h_intent", "tau_a_intent",   "tau_h_coupling",
        "tau_a_coupling", "tau_total_intent", "tau_diff", "epsilon",
        "stage_cost",  "safety_term",  "disagreement_term"};
    return names;
}

namespace {

double field(const SimRow& r, std::size_t idx) {
    switch (idx) {
        case 0: return r.t;
        case 1: return r.theta_s;
        case 2: return r.dtheta_s;
        case 3: return r.theta_h;
        case 4: return r.theta_a;
        case 5: return r.b_h;
        case 6: return r.k_h;
        case 7: return r.b_a;
        case 8: return r.k_a;
        case 9: return r.tau_h_intent;
        case 10: return r.tau_a_intent;
        case 11: return r.tau_h_coupling;
        case 12: return r.tau_a_coupling;
        case 13: return r.tau_total_intent;
        case 14: return r.tau_diff;
        case 15: return r.epsilon;
        case 16: return r.stage_cost;
        case 17: return r.safety_term;
        case 18: return r.disagreement_term;
        default: throw OutOfDomain("SimRow: bad column index");
    }
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

std::vector<double> SimLog::column(const std::string& name) const {
    const auto& names = column_names();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw OutOfDomain("SimLog: no column named '" + name + "'");
    const std::size_t idx = static_cast<std::size_t>(it - names.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const SimRow& r : rows) out.push_back(field(r, idx));
    return out;
}

SimLog run_simulation(const ScenarioConfig& cfg, const RunOptions& opts) {
    validate_scenario(cfg);
    const double ts = cfg.controller.ts;
    if (cfg.duration < ts) throw ValidationError("duration shorter than one control step");
    if (!(opts.dt > 0.0)) throw ValidationError("inner step dt must be > 0");

    const std::size_t n_ticks = static_cast<std::size_t>(std::floor(cfg.duration / ts + 1e-9));
    const std::size_t inner_steps = static_cast<std::size_t>(std::llround(ts / opts.dt));
    if (inner_steps == 0) throw ValidationError("inner step dt larger than ts");

    SimLog log;
    log.scenario_name = cfg.name;
    log.config_json = serialize_scenario(cfg);
    log.ts = ts;
    log.rows.reserve(n_ticks + 1);

    ControllerState st;
    st.z_a = {cfg.automation.b_a0, cfg.automation.k_a0};
    st.gamma_prev = {0.0, 0.0};

    std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.seed));
    std::normal_distribution<double> noise(0.0, 1.0);

    HumanObservation obs;
    PlantState ps;

    for (std::size_t k = 0; k <= n_ticks; ++k) {
        const double t = static_cast<double>(k) * ts;
        HumanState hs = human_state(cfg, t);
        if (opts.noise_std > 0.0) hs.theta += opts.noise_std * noise(rng);
        const double theta_a = sample_schedule(cfg.automation.theta_a, t);
        const double dtheta_a = schedule_rate(cfg.automation.theta_a, t, ts);
        const double eps = sample_schedule(cfg.controller.epsilon, t);

        if (k == 0) {
            obs.theta_h_hist = {hs.theta, hs.theta};
            st.theta_a_hist = {theta_a, theta_a};
            obs.primed = st.primed = true;
        } else {
            obs.theta_h_hist = {hs.theta, obs.theta_h_hist[0]};
            st.theta_a_hist = {theta_a, st.theta_a_hist[0]};
        }
        obs.z_h = hs.z;

        const ControllerConfig ccfg = cfg.controller_config(eps);
        PlanResult pr;
        try {
            if (ccfg.adaptive) {
                std::vector<double> future;
                if (ccfg.horizon_theta == HorizonTheta::scheduled) {
                    future.resize(ccfg.np);
                    for (std::size_t n = 1; n <= ccfg.np; ++n)
                        future[n - 1] = sample_schedule(
                            cfg.automation.theta_a,
                            std::min(t + static_cast<double>(n) * ts, cfg.duration));
                }
                pr = plan(st, obs, ccfg, future);
            } else {
                pr = plan_fixed(st, ccfg);
            }
        } catch (const Error& e) {
            throw SimulationError(k, e.what());
        }
        st.z_a = pr.z_next;
        st.gamma_prev = pr.action;
        st.cost_breakdown = pr.diag.first_step;

        SimRow row;
        row.t = t;
        row.theta_s = ps.theta_s;
        row.dtheta_s = ps.dtheta_s;
        row.theta_h = hs.theta;
        row.theta_a = theta_a;
        row.b_h = hs.z.b;
        row.k_h = hs.z.k;
        row.b_a = pr.z_next.b;
        row.k_a = pr.z_next.k;
        row.tau_h_intent = intent_torque(hs.z, {obs.theta_h_hist[0], obs.theta_h_hist[1], ts});
        row.tau_a_intent =
            intent_torque(pr.z_next, {st.theta_a_hist[0], st.theta_a_hist[1], ts});
        row.tau_h_coupling = coupling_torque(hs.z, hs.theta, hs.dtheta, ps);
        row.tau_a_coupling = coupling_torque(pr.z_next, theta_a, dtheta_a, ps);
        row.tau_total_intent = row.tau_h_intent + row.tau_a_intent;
        row.tau_diff = row.tau_h_intent - row.tau_a_intent;
        row.epsilon = eps;
        row.safety_term = std::abs(std::abs(row.tau_total_intent) - eps);
        row.disagreement_term = std::abs(row.tau_diff);
        row.stage_cost = row.safety_term + row.disagreement_term;
        log.rows.push_back(row);

        if (k == n_ticks) break;

        PlantInputs inputs;
        inputs.human = {hs.z, hs.theta, hs.dtheta};
        inputs.automation = {pr.z_next, theta_a, dtheta_a};
        inputs.tau_v = sample_schedule(cfg.tau_v, t);
        try {
            for (std::size_t i = 0; i < inner_steps; ++i)
                ps = rk4_step(ps, inputs, cfg.plant, opts.dt);
        } catch (const Error& e) {
            throw SimulationError(k, e.what());
        }
    }
    return log;
}

Metrics compute_metrics(const SimLog& log, double tolerance) {
    if (log.rows.empty()) throw EmptyLog("compute_metrics: log has no rows");
    Metrics m;

    const std::size_t n = log.rows.size();
    const std::size_t tail_start = n - std::max<std::size_t>(1, n / 5);
    double acc = 0.0;
    for (std::size_t i = tail_start; i < n; ++i) acc += std::abs(log.rows[i].tau_diff);
    m.steady_state_tau_diff = acc / static_cast<double>(n - tail_start);

    acc = 0.0;
    for (const SimRow& r : log.rows) {
        acc += std::abs(r.tau_diff);
        m.max_abs_theta_s = std::max(m.max_abs_theta_s, std::abs(r.theta_s));
    }
    m.mean_disagreement = acc / static_cast<double>(n);

    // Breakpoints of the human stiffness trace, including the start of the run.
    std::vector<std::size_t> bps{0};
    for (std::size_t i = 1; i < n; ++i)
        if (log.rows[i].k_h != log.rows[i - 1].k_h) bps.push_back(i);

    for (std::size_t b = 0; b < bps.size(); ++b) {
        const std::size_t lo = bps[b];
        const std::size_t hi = b + 1 < bps.size() ? bps[b + 1] : n;
        double settle = std::numeric_limits<double>::infinity();
        for (std::size_t j = lo; j < hi; ++j) {
            bool stays = true;
            for (std::size_t i = j; i < hi; ++i) {
                if (std::abs(log.rows[i].k_a - log.rows[i].k_h) >= tolerance) {
                    stays = false;
                    break;
                }
            }
            if (stays) {
                settle = log.rows[j].t - log.rows[lo].t;
                break;
            }
        }
        m.settle_times.push_back(settle);
    }
    return m;
}

ComparisonReport compare_runs(const SimLog& adaptive, const SimLog& fixed) {
    if (adaptive.rows.size() != fixed.rows.size() || adaptive.ts != fixed.ts)
        throw TimingMismatch("compare_runs: logs cover different timings");
    for (std::size_t i = 0; i < adaptive.rows.size(); ++i)
        if (adaptive.rows[i].t != fixed.rows[i].t)
            throw TimingMismatch("compare_runs: timestamps differ");

    ComparisonReport rep;
    rep.adaptive = compute_metrics(adaptive);
    rep.fixed = compute_metrics(fixed);

    const auto ratio = [](double a, double b) {
        if (b == 0.0) return a == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
        return a / b;
    };
    rep.disagreement_ratio = ratio(rep.adaptive.mean_disagreement, rep.fixed.mean_disagreement);
    rep.tau_diff_ratio = ratio(rep.adaptive.steady_state_tau_diff, rep.fixed.steady_state_tau_diff);
    rep.max_theta_ratio = ratio(rep.adaptive.max_abs_theta_s, rep.fixed.max_abs_theta_s);
    rep.adaptive_lower_disagreement =
        rep.adaptive.mean_disagreement < rep.fixed.mean_disagreement;

    const std::size_t n = adaptive.rows.size();
    const std::size_t tail = n - std::max<std::size_t>(1, n / 5);
    double net = 0.0, eps = 0.0;
    for (std::size_t i = tail; i < n; ++i) {
        net += std::abs(adaptive.rows[i].tau_total_intent);
        eps += adaptive.rows[i].epsilon;
    }
    net /= static_cast<double>(n - tail);
    eps /= static_cast<double>(n - tail);
    rep.adaptive_tracks_epsilon = eps > 0.0 && std::abs(net - eps) <= 0.1 * eps;

    bool identical = true;
    for (std::size_t i = 0; i < n && identical; ++i)
        identical = adaptive.rows[i].b_a == fixed.rows[i].b_a &&
                    adaptive.rows[i].k_a == fixed.rows[i].k_a;
    rep.identical_modes = identical;
    return rep;
}

std::string to_csv(const SimLog& log) {
    std::string out;
    const auto& names = SimLog::column_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ',';
        out += names[i];
    }
    out += '\n';
    for (const SimRow& r : log.rows) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) out += ',';
            out += format_value(field(r, i));
        }
        out += '\n';
    }
    return out;
}

std::string config_hash(const std::string& config_json) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : config_json) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string to_json(const SimLog& log, const std::vector<std::string>& overrides) {
    json meta{{"scenario", log.scenario_name},
              {"config_hash", config_hash(log.config_json)},
              {"version", "0.1.0"},
              {"config", json::parse(log.config_json)}};
    if (!overrides.empty()) meta["overrides"] = overrides;

    json cols = json::object();
    for (const auto& name : SimLog::column_names()) cols[name] = log.column(name);

    json doc{{"meta", meta}, {"columns", cols}};
    return doc.dump(2);
}

}  // namespace hsc
