#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hsc/controller.hpp"
#include "hsc/plant.hpp"

namespace hsc {

enum class ScheduleKind { constant, steps, sinusoid };

/// A scalar signal over time: a constant, a left-closed step sequence, or
/// offset + amplitude*sin(omega*t + phase).
struct Schedule {
    ScheduleKind kind = ScheduleKind::constant;
    double value = 0.0;                                   // constant
    std::vector<std::pair<double, double>> points;        // steps: (time, value)
    double amplitude = 0.0, omega = 0.0, phase = 0.0, offset = 0.0;  // sinusoid

    static Schedule constant_of(double v) {
        Schedule s;
        s.value = v;
        return s;
    }
    static Schedule steps_of(std::vector<std::pair<double, double>> pts) {
        Schedule s;
        s.kind = ScheduleKind::steps;
        s.points = std::move(pts);
        return s;
    }

    bool operator==(const Schedule&) const = default;
};

double sample_schedule(const Schedule& s, double t);

/// Signal rate: analytic for sinusoids, zero on constant segments, backward
/// difference at ts granularity across step breakpoints.
double schedule_rate(const Schedule& s, double t, double ts);

enum class ModeLabel { cooperative, non_cooperative, custom };

struct ScenarioControllerSection {
    double ts = 0.1;
    std::size_t np = 20;
    Schedule epsilon = Schedule::constant_of(0.1);
    bool adaptive = true;
    double alpha_b = 1.0, alpha_k = 1.0, beta_b = 1.0, beta_k = 1.0;
    HorizonTheta horizon_theta = HorizonTheta::frozen;

    bool operator==(const ScenarioControllerSection&) const = default;
};

struct HumanSection {
    Schedule k_h;
    Schedule b_h;
    Schedule theta_h;

    bool operator==(const HumanSection&) const = default;
};

struct AutomationSection {
    Schedule theta_a;
    double b_a0 = 0.01;  // initial automation impedance
    double k_a0 = 1.0;

    bool operator==(const AutomationSection&) const = default;
};

struct ScenarioConfig {
    std::string name;
    double duration = 30.0;
    PlantParams plant{0.1, 0.001, 0.001, 0.01};
    ScenarioControllerSection controller;
    HumanSection human;
    AutomationSection automation;
    Schedule tau_v;
    ModeLabel mode_label = ModeLabel::custom;
    long seed = 0;

    ImpedanceDynamicsParams dynamics() const;
    /// Controller view of this config with the safety floor sampled for one tick.
    ControllerConfig controller_config(double epsilon_now) const;

    bool operator==(const ScenarioConfig&) const = default;
};

struct HumanState {
    double theta = 0.0;
    double dtheta = 0.0;
    ImpedanceState z;
};

/// Parses a scenario document (JSON text). Unknown keys are rejected.
ScenarioConfig parse_scenario(const std::string& text);

/// Canonical JSON rendering; parse(serialize(cfg)) == cfg.
std::string serialize_scenario(const ScenarioConfig& cfg);

/// Throws ValidationError naming the violated invariant.
void validate_scenario(const ScenarioConfig& cfg);

HumanState human_state(const ScenarioConfig& cfg, double t);

/// The built-in study configurations, in a stable order.
const std::vector<ScenarioConfig>& builtin_scenarios();

/// nullptr when the name is not a built-in.
const ScenarioConfig* find_builtin(const std::string& name);

const char* to_string(ModeLabel m);

}  // namespace hsc
