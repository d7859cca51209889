#include "hsc/scenario.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace hsc {

using nlohmann::json;

double sample_schedule(const Schedule& s, double t) {
    if (t < 0.0) throw OutOfDomain("sample_schedule: t < 0");
    switch (s.kind) {
        case ScheduleKind::constant:
            return s.value;
        case ScheduleKind::steps: {
            if (s.points.empty()) throw ValidationError("steps schedule has no points");
            double v = s.points.front().second;
            for (const auto& [pt, pv] : s.points) {
                if (t >= pt) v = pv;  // left-closed: the new value holds at the breakpoint
                else break;
            }
            return v;
        }
        case ScheduleKind::sinusoid:
            return s.offset + s.amplitude * std::sin(s.omega * t + s.phase);
    }
    throw ValidationError("sample_schedule: unknown kind");
}

double schedule_rate(const Schedule& s, double t, double ts) {
    if (t < 0.0) throw OutOfDomain("schedule_rate: t < 0");
    switch (s.kind) {
        case ScheduleKind::constant:
            return 0.0;
        case ScheduleKind::steps: {
            if (t < ts) return 0.0;
            return (sample_schedule(s, t) - sample_schedule(s, t - ts)) / ts;
        }
        case ScheduleKind::sinusoid:
            return s.amplitude * s.omega * std::cos(s.omega * t + s.phase);
    }
    throw ValidationError("schedule_rate: unknown kind");
}

ImpedanceDynamicsParams ScenarioConfig::dynamics() const {
    return discretize({controller.alpha_b, controller.alpha_k},
                      {controller.beta_b, controller.beta_k}, controller.ts);
}

ControllerConfig ScenarioConfig::controller_config(double epsilon_now) const {
    ControllerConfig c;
    c.ts = controller.ts;
    c.np = controller.np;
    c.epsilon = epsilon_now;
    c.dynamics = dynamics();
    c.adaptive = controller.adaptive;
    c.horizon_theta = controller.horizon_theta;
    return c;
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key))
            throw ParseError("unknown key '" + key + "' in " + where);
    }
}

Schedule parse_schedule(const json& j, const std::string& where) {
    if (j.is_number()) return Schedule::constant_of(j.get<double>());
    if (!j.is_object()) throw ParseError(where + ": schedule must be a number or an object");
    const std::string kind = j.value("kind", std::string{});
    Schedule s;
    if (kind == "constant") {
        reject_unknown_keys(j, {"kind", "value"}, where);
        s.kind = ScheduleKind::constant;
        if (!j.contains("value")) throw ParseError(where + ": constant schedule needs 'value'");
        s.value = j.at("value").get<double>();
    } else if (kind == "steps") {
        reject_unknown_keys(j, {"kind", "points"}, where);
        s.kind = ScheduleKind::steps;
        if (!j.contains("points") || !j.at("points").is_array())
            throw ParseError(where + ": steps schedule needs a 'points' array");
        for (const auto& p : j.at("points")) {
            if (!p.is_array() || p.size() != 2)
                throw ParseError(where + ": each point must be [time, value]");
            s.points.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
    } else if (kind == "sinusoid") {
        reject_unknown_keys(j, {"kind", "amplitude", "omega", "phase", "offset"}, where);
        s.kind = ScheduleKind::sinusoid;
        if (!j.contains("amplitude") || !j.contains("omega"))
            throw ParseError(where + ": sinusoid schedule needs 'amplitude' and 'omega'");
        s.amplitude = j.at("amplitude").get<double>();
        s.omega = j.at("omega").get<double>();
        s.phase = j.value("phase", 0.0);
        s.offset = j.value("offset", 0.0);
    } else {
        throw ParseError(where + ": unknown schedule kind '" + kind + "'");
    }
    return s;
}

json schedule_to_json(const Schedule& s) {
    switch (s.kind) {
        case ScheduleKind::constant:
            return s.value;  // canonical short form
        case ScheduleKind::steps: {
            json pts = json::array();
            for (const auto& [t, v] : s.points) pts.push_back(json::array({t, v}));
            return json{{"kind", "steps"}, {"points", pts}};
        }
        case ScheduleKind::sinusoid:
            return json{{"kind", "sinusoid"},
                        {"amplitude", s.amplitude},
                        {"omega", s.omega},
                        {"phase", s.phase},
                        {"offset", s.offset}};
    }
    return json{};
}

void validate_schedule(const Schedule& s, const std::string& where, bool require_nonneg) {
    if (s.kind == ScheduleKind::steps) {
        if (s.points.empty()) throw ValidationError(where + ": steps schedule has no points");
        if (s.points.front().first != 0.0)
            throw ValidationError(where + ": first breakpoint must be at t=0");
        for (std::size_t i = 1; i < s.points.size(); ++i)
            if (!(s.points[i].first > s.points[i - 1].first))
                throw ValidationError(where + ": breakpoint times must be strictly increasing");
    }
    if (require_nonneg) {
        if (s.kind == ScheduleKind::constant && s.value < 0.0)
            throw ValidationError(where + ": value must be >= 0");
        if (s.kind == ScheduleKind::steps)
            for (const auto& [t, v] : s.points)
                if (v < 0.0) throw ValidationError(where + ": values must be >= 0");
        if (s.kind == ScheduleKind::sinusoid && s.offset - std::abs(s.amplitude) < 0.0)
            throw ValidationError(where + ": sinusoid dips below 0");
    }
}

ModeLabel parse_mode(const std::string& m) {
    if (m == "cooperative") return ModeLabel::cooperative;
    if (m == "non-cooperative") return ModeLabel::non_cooperative;
    if (m == "custom") return ModeLabel::custom;
    throw ParseError("unknown mode_label '" + m + "'");
}

}  // namespace

const char* to_string(ModeLabel m) {
    switch (m) {
        case ModeLabel::cooperative: return "cooperative";
        case ModeLabel::non_cooperative: return "non-cooperative";
        case ModeLabel::custom: return "custom";
    }
    return "custom";
}

ScenarioConfig parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("scenario: document root must be an object");

    reject_unknown_keys(j,
                        {"name", "duration", "plant", "controller", "human", "automation",
                         "tau_v", "mode_label", "seed"},
                        "scenario");

    ScenarioConfig cfg;
    try {
        cfg.name = j.value("name", std::string{});
        cfg.duration = j.at("duration").get<double>();

        const json& pl = j.at("plant");
        reject_unknown_keys(pl, {"j_sw", "j_h", "j_a", "b_sw"}, "plant");
        cfg.plant = {pl.at("j_sw").get<double>(), pl.at("j_h").get<double>(),
                     pl.at("j_a").get<double>(), pl.at("b_sw").get<double>()};

        const json& ct = j.at("controller");
        reject_unknown_keys(ct,
                            {"ts", "np", "epsilon", "adaptive", "alpha_b", "alpha_k", "beta_b",
                             "beta_k", "horizon_theta"},
                            "controller");
        cfg.controller.ts = ct.at("ts").get<double>();
        if (!ct.at("np").is_number_integer() || ct.at("np").get<long>() < 0)
            throw ParseError("controller.np must be a non-negative integer");
        cfg.controller.np = ct.at("np").get<std::size_t>();
        cfg.controller.epsilon = parse_schedule(ct.at("epsilon"), "controller.epsilon");
        cfg.controller.adaptive = ct.at("adaptive").get<bool>();
        cfg.controller.alpha_b = ct.at("alpha_b").get<double>();
        cfg.controller.alpha_k = ct.at("alpha_k").get<double>();
        cfg.controller.beta_b = ct.at("beta_b").get<double>();
        cfg.controller.beta_k = ct.at("beta_k").get<double>();
        if (ct.contains("horizon_theta")) {
            const std::string ht = ct.at("horizon_theta").get<std::string>();
            if (ht == "frozen") cfg.controller.horizon_theta = HorizonTheta::frozen;
            else if (ht == "scheduled") cfg.controller.horizon_theta = HorizonTheta::scheduled;
            else throw ParseError("controller.horizon_theta must be 'frozen' or 'scheduled'");
        }

        const json& hu = j.at("human");
        reject_unknown_keys(hu, {"k_h", "b_h", "theta_h"}, "human");
        cfg.human.k_h = parse_schedule(hu.at("k_h"), "human.k_h");
        cfg.human.b_h = parse_schedule(hu.at("b_h"), "human.b_h");
        cfg.human.theta_h = parse_schedule(hu.at("theta_h"), "human.theta_h");

        const json& au = j.at("automation");
        reject_unknown_keys(au, {"theta_a", "b_a0", "k_a0"}, "automation");
        cfg.automation.theta_a = parse_schedule(au.at("theta_a"), "automation.theta_a");
        cfg.automation.b_a0 = au.value("b_a0", 0.01);
        cfg.automation.k_a0 = au.value("k_a0", 1.0);

        cfg.tau_v = parse_schedule(j.at("tau_v"), "tau_v");
        cfg.mode_label = parse_mode(j.at("mode_label").get<std::string>());
        cfg.seed = j.value("seed", 0L);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }

    validate_scenario(cfg);
    return cfg;
}

std::string serialize_scenario(const ScenarioConfig& cfg) {
    json ct{{"ts", cfg.controller.ts},
            {"np", cfg.controller.np},
            {"epsilon", schedule_to_json(cfg.controller.epsilon)},
            {"adaptive", cfg.controller.adaptive},
            {"alpha_b", cfg.controller.alpha_b},
            {"alpha_k", cfg.controller.alpha_k},
            {"beta_b", cfg.controller.beta_b},
            {"beta_k", cfg.controller.beta_k}};
    if (cfg.controller.horizon_theta == HorizonTheta::scheduled)
        ct["horizon_theta"] = "scheduled";

    json j{{"name", cfg.name},
           {"duration", cfg.duration},
           {"plant",
            {{"j_sw", cfg.plant.j_sw},
             {"j_h", cfg.plant.j_h},
             {"j_a", cfg.plant.j_a},
             {"b_sw", cfg.plant.b_sw}}},
           {"controller", ct},
           {"human",
            {{"k_h", schedule_to_json(cfg.human.k_h)},
             {"b_h", schedule_to_json(cfg.human.b_h)},
             {"theta_h", schedule_to_json(cfg.human.theta_h)}}},
           {"automation",
            {{"theta_a", schedule_to_json(cfg.automation.theta_a)},
             {"b_a0", cfg.automation.b_a0},
             {"k_a0", cfg.automation.k_a0}}},
           {"tau_v", schedule_to_json(cfg.tau_v)},
           {"mode_label", to_string(cfg.mode_label)},
           {"seed", cfg.seed}};
    return j.dump(2);
}

void validate_scenario(const ScenarioConfig& cfg) {
    if (!(cfg.duration > 0.0)) throw ValidationError("duration must be > 0");
    if (!(equivalent_inertia(cfg.plant) > 0.0))
        throw ValidationError("plant: equivalent inertia must be > 0");
    if (cfg.plant.b_sw < 0.0) throw ValidationError("plant.b_sw must be >= 0");
    if (!(cfg.controller.ts > 0.0)) throw ValidationError("controller.ts must be > 0");
    if (cfg.controller.np < 1) throw ValidationError("controller.np must be >= 1");
    if (cfg.automation.b_a0 < 0.0 || cfg.automation.k_a0 < 0.0)
        throw ValidationError("automation initial impedance must be >= 0");

    validate_schedule(cfg.controller.epsilon, "controller.epsilon", true);
    validate_schedule(cfg.human.k_h, "human.k_h", true);
    validate_schedule(cfg.human.b_h, "human.b_h", true);
    validate_schedule(cfg.human.theta_h, "human.theta_h", false);
    validate_schedule(cfg.automation.theta_a, "automation.theta_a", false);
    validate_schedule(cfg.tau_v, "tau_v", false);

    try {
        (void)cfg.dynamics();
    } catch (const SingularDiscretization& e) {
        throw ValidationError(std::string("controller dynamics: ") + e.what());
    }
}

HumanState human_state(const ScenarioConfig& cfg, double t) {
    if (t < 0.0 || t > cfg.duration) throw OutOfDomain("human_state: t outside [0, duration]");
    HumanState hs;
    hs.theta = sample_schedule(cfg.human.theta_h, t);
    hs.dtheta = schedule_rate(cfg.human.theta_h, t, cfg.controller.ts);
    hs.z = {sample_schedule(cfg.human.b_h, t), sample_schedule(cfg.human.k_h, t)};
    return hs;
}

namespace {

ScenarioConfig base_config() {
    ScenarioConfig cfg;
    cfg.duration = 30.0;
    cfg.plant = {0.1, 0.001, 0.001, 0.01};
    cfg.controller = {};  // ts=0.1, np=20, alpha=beta=I
    cfg.human.b_h = Schedule::constant_of(0.01);
    cfg.tau_v = Schedule::constant_of(0.0);
    return cfg;
}

std::vector<ScenarioConfig> make_builtins() {
    std::vector<ScenarioConfig> out;

    {
        // Cooperative stiffness tracking: the safety floor follows 2|tau_H| so
        // the safety and agreement terms share their optimum and the
        // automation mirrors the human's stiffness plateaus.
        ScenarioConfig cfg = base_config();
        cfg.name = "fig3_cooperative";
        cfg.mode_label = ModeLabel::cooperative;
        cfg.human.k_h = Schedule::steps_of({{0.0, 1.0}, {8.0, 0.05}, {20.0, 0.75}});
        cfg.human.theta_h = Schedule::constant_of(0.5);
        cfg.automation.theta_a = Schedule::constant_of(0.5);
        cfg.controller.epsilon = Schedule::steps_of({{0.0, 1.0}, {8.0, 0.05}, {20.0, 0.75}});
        out.push_back(cfg);
    }
    {
        ScenarioConfig cfg = base_config();
        cfg.name = "fig4_noncooperative";
        cfg.mode_label = ModeLabel::non_cooperative;
        cfg.human.k_h = Schedule::steps_of({{0.0, 1.0}, {3.0, 0.05}, {20.0, 0.75}});
        cfg.human.theta_h = Schedule::constant_of(0.5);
        cfg.automation.theta_a = Schedule::constant_of(-0.5);
        cfg.controller.epsilon = Schedule::constant_of(0.1);
        out.push_back(cfg);
    }
    {
        // Sweep base: a weak human with an aligned automation, so the floor
        // dominates and the differential torque grows with epsilon.
        ScenarioConfig cfg = base_config();
        cfg.name = "fig5_epsilon_sweep";
        cfg.mode_label = ModeLabel::cooperative;
        cfg.human.k_h = Schedule::constant_of(0.05);
        cfg.human.theta_h = Schedule::constant_of(0.5);
        cfg.automation.theta_a = Schedule::constant_of(0.5);
        cfg.controller.epsilon = Schedule::constant_of(0.1);
        out.push_back(cfg);
    }
    {
        ScenarioConfig cfg = base_config();
        cfg.name = "fig6_adaptive_vs_fixed";
        cfg.mode_label = ModeLabel::non_cooperative;
        cfg.human.k_h = Schedule::constant_of(1.0);
        cfg.human.theta_h = Schedule::constant_of(0.5);
        cfg.automation.theta_a = Schedule::constant_of(-0.5);
        cfg.controller.epsilon = Schedule::constant_of(0.1);
        out.push_back(cfg);
    }
    return out;
}

}  // namespace

const std::vector<ScenarioConfig>& builtin_scenarios() {
    static const std::vector<ScenarioConfig> builtins = make_builtins();
    return builtins;
}

const ScenarioConfig* find_builtin(const std::string& name) {
    for (const auto& cfg : builtin_scenarios())
        if (cfg.name == name) return &cfg;
    return nullptr;
}

}  // namespace hsc
