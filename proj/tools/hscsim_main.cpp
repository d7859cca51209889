// hscsim: run, sweep, compare and plot haptic shared-control simulations.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hsc/scenario.hpp"
#include "hsc/simulation.hpp"
#include "hsc/svg_plot.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct GlobalOpts {
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    bool quiet = false;
};

void note(const GlobalOpts& g, const std::string& msg) {
    if (!g.quiet) std::cout << msg << "\n";
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw hsc::Error("cannot write '" + path.string() + "'");
    f << content;
}

// Scenario source text: a built-in name or a file path.
struct ResolvedScenario {
    std::string name;
    std::string text;
};

ResolvedScenario resolve_scenario(const std::string& arg) {
    if (const hsc::ScenarioConfig* b = hsc::find_builtin(arg))
        return {arg, hsc::serialize_scenario(*b)};
    std::ifstream f(arg, std::ios::binary);
    if (!f) throw hsc::ParseError("no built-in or readable file named '" + arg + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return {fs::path(arg).stem().string(), ss.str()};
}

// Applies one dotted-path override to the scenario document.
void apply_override(json& doc, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw hsc::ParseError("--set expects dotted.key=value, got '" + spec + "'");
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw hsc::ParseError("--set: empty key segment in '" + path + "'");
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

hsc::ScenarioConfig load_config(const GlobalOpts& g, const ResolvedScenario& rs) {
    json doc;
    try {
        doc = json::parse(rs.text);
    } catch (const json::parse_error& e) {
        throw hsc::ParseError(std::string("scenario: ") + e.what());
    }
    for (const auto& ov : g.overrides) apply_override(doc, ov);
    hsc::ScenarioConfig cfg = hsc::parse_scenario(doc.dump());
    if (cfg.name.empty()) cfg.name = rs.name;
    return cfg;
}

json metrics_json(const hsc::Metrics& m, double tolerance) {
    json settles = json::array();
    for (double s : m.settle_times)
        settles.push_back(std::isfinite(s) ? json(s) : json(nullptr));
    return json{{"steady_state_tau_diff", m.steady_state_tau_diff},
                {"settle_times", settles},
                {"max_abs_theta_s", m.max_abs_theta_s},
                {"mean_disagreement", m.mean_disagreement},
                {"tolerance", tolerance}};
}

void write_run_outputs(const GlobalOpts& g, const hsc::SimLog& log, const std::string& name) {
    fs::create_directories(g.out_dir);
    const fs::path base = fs::path(g.out_dir) / name;
    write_file(base.string() + ".csv", hsc::to_csv(log));
    write_file(base.string() + ".json", hsc::to_json(log, g.overrides));
    const hsc::Metrics m = hsc::compute_metrics(log);
    write_file(base.string() + ".metrics.json", metrics_json(m, 0.05).dump(2) + "\n");
    note(g, "wrote " + base.string() + ".{csv,json,metrics.json}");
}

int cmd_run(const GlobalOpts& g, const std::string& scenario) {
    const hsc::ScenarioConfig cfg = load_config(g, resolve_scenario(scenario));
    const hsc::SimLog log = hsc::run_simulation(cfg);
    write_run_outputs(g, log, cfg.name);
    return 0;
}

std::vector<double> parse_value_list(const std::string& text) {
    std::vector<double> values;
    std::istringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        if (cell.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end == cell.c_str() || *end != '\0')
            throw hsc::ValidationError("sweep: '" + cell + "' is not a number");
        values.push_back(v);
    }
    return values;
}

int cmd_sweep(const GlobalOpts& g, const std::string& scenario, const std::string& key,
              std::vector<double> values) {
    if (values.empty()) throw hsc::ValidationError("sweep: no values given");
    std::sort(values.begin(), values.end());
    const ResolvedScenario rs = resolve_scenario(scenario);

    struct SweepRow {
        double value;
        hsc::SimLog log;
    };
    std::vector<std::future<SweepRow>> futures;
    for (double v : values) {
        futures.push_back(std::async(std::launch::async, [&, v]() {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", v);
            GlobalOpts local = g;
            local.overrides.push_back(key + "=" + buf);
            const hsc::ScenarioConfig cfg = load_config(local, rs);
            return SweepRow{v, hsc::run_simulation(cfg)};
        }));
    }

    fs::create_directories(g.out_dir);
    std::string summary = "value,steady_state_tau_diff,max_abs_theta_s\n";
    for (auto& fut : futures) {
        SweepRow row = fut.get();
        char vbuf[32];
        std::snprintf(vbuf, sizeof vbuf, "%g", row.value);
        const std::string name = row.log.scenario_name + "_" + vbuf;
        write_file((fs::path(g.out_dir) / (name + ".csv")).string(), hsc::to_csv(row.log));
        write_file((fs::path(g.out_dir) / (name + ".json")).string(),
                   hsc::to_json(row.log, {key + "=" + vbuf}));
        const hsc::Metrics m = hsc::compute_metrics(row.log);
        char line[120];
        std::snprintf(line, sizeof line, "%g,%.9g,%.9g\n", row.value, m.steady_state_tau_diff,
                      m.max_abs_theta_s);
        summary += line;
        note(g, "ran " + name);
    }
    const fs::path spath = fs::path(g.out_dir) / "sweep_summary.csv";
    write_file(spath.string(), summary);
    note(g, "wrote " + spath.string());
    return 0;
}

int cmd_compare(const GlobalOpts& g, const std::string& scenario) {
    const ResolvedScenario rs = resolve_scenario(scenario);

    GlobalOpts ga = g;
    ga.overrides.push_back("controller.adaptive=true");
    const hsc::ScenarioConfig cfg_a = load_config(ga, rs);
    GlobalOpts gf = g;
    gf.overrides.push_back("controller.adaptive=false");
    const hsc::ScenarioConfig cfg_f = load_config(gf, rs);

    const hsc::SimLog log_a = hsc::run_simulation(cfg_a);
    const hsc::SimLog log_f = hsc::run_simulation(cfg_f);
    const hsc::ComparisonReport rep = hsc::compare_runs(log_a, log_f);

    fs::create_directories(g.out_dir);
    const fs::path base = fs::path(g.out_dir) / cfg_a.name;
    write_file(base.string() + "_adaptive.csv", hsc::to_csv(log_a));
    write_file(base.string() + "_adaptive.json", hsc::to_json(log_a, ga.overrides));
    write_file(base.string() + "_fixed.csv", hsc::to_csv(log_f));
    write_file(base.string() + "_fixed.json", hsc::to_json(log_f, gf.overrides));

    json rj{{"scenario", cfg_a.name},
            {"disagreement_ratio", rep.disagreement_ratio},
            {"tau_diff_ratio", rep.tau_diff_ratio},
            {"max_theta_ratio", rep.max_theta_ratio},
            {"adaptive_lower_disagreement", rep.adaptive_lower_disagreement},
            {"adaptive_tracks_epsilon", rep.adaptive_tracks_epsilon},
            {"identical_modes", rep.identical_modes},
            {"adaptive", metrics_json(rep.adaptive, 0.05)},
            {"fixed", metrics_json(rep.fixed, 0.05)}};
    write_file((fs::path(g.out_dir) / "comparison.json").string(), rj.dump(2) + "\n");
    if (rep.identical_modes)
        note(g, "note: both runs produced identical automation impedance traces");
    note(g, "wrote " + (fs::path(g.out_dir) / "comparison.json").string());
    return 0;
}

int cmd_plot(const GlobalOpts& g, const std::string& log_path,
             const std::vector<std::string>& panel_specs, const std::string& out_path,
             const std::string& title) {
    const hsc::Table table = hsc::read_csv_table(log_path);

    hsc::PlotSpec spec;
    spec.title = title;
    if (panel_specs.empty()) {
        spec.panels = {{"theta_s"}, {"k_h", "k_a", "b_a"}, {"tau_h_intent", "tau_a_intent", "tau_diff"}};
    } else {
        for (const auto& ps : panel_specs) {
            std::vector<std::string> cols;
            std::istringstream ss(ps);
            std::string c;
            while (std::getline(ss, c, ',')) cols.push_back(c);
            spec.panels.push_back(cols);
        }
    }

    const std::string svg = hsc::render_svg(table, spec);
    fs::path out = out_path.empty() ? fs::path(log_path).replace_extension(".svg")
                                    : fs::path(out_path);
    if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
    write_file(out, svg);
    note(g, "wrote " + out.string());
    return 0;
}

int cmd_list(const GlobalOpts& g) {
    (void)g;
    for (const auto& cfg : hsc::builtin_scenarios())
        std::cout << cfg.name << "  (" << hsc::to_string(cfg.mode_label) << ")\n";
    return 0;
}

int map_error(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (dynamic_cast<const hsc::ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const hsc::ValidationError*>(&e)) return kExitValidation;
    return kExitRuntime;
}

int map_plot_error(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (dynamic_cast<const hsc::MissingColumn*>(&e)) return kExitParse;
    if (dynamic_cast<const hsc::ParseError*>(&e)) return kExitParse;
    if (dynamic_cast<const hsc::EmptyLog*>(&e)) return kExitValidation;
    return kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"haptic shared-control simulation suite"};
    app.require_subcommand(1);
    app.fallthrough();  // allow global flags after the subcommand name

    GlobalOpts g;
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_option("--set", g.overrides, "dotted.key=value config override (repeatable)");
    app.add_flag("--quiet", g.quiet, "suppress progress output");

    std::string scenario;
    auto* run = app.add_subcommand("run", "run one scenario and export CSV/JSON/metrics");
    run->add_option("scenario", scenario, "built-in name or scenario file")->required();

    std::string sweep_scenario, sweep_key = "controller.epsilon";
    std::string sweep_values = "0.05,0.1,0.2,0.4";
    auto* sweep = app.add_subcommand("sweep", "run a scenario once per value of a config key");
    sweep->add_option("scenario", sweep_scenario)->required();
    sweep->add_option("--key", sweep_key, "dotted config key")->capture_default_str();
    sweep->add_option("--values", sweep_values, "comma-separated values to sweep")
        ->capture_default_str();

    std::string cmp_scenario;
    auto* cmp = app.add_subcommand("compare", "run adaptive and fixed variants and compare");
    cmp->add_option("scenario", cmp_scenario)->required();

    std::string plot_log, plot_out, plot_title;
    std::vector<std::string> plot_panels;
    auto* plot = app.add_subcommand("plot", "render a run CSV as an SVG figure");
    plot->add_option("log", plot_log, "CSV produced by run/sweep/compare")->required();
    plot->add_option("--panel", plot_panels,
                     "comma-separated columns for one subplot (repeatable)");
    plot->add_option("-o,--output", plot_out, "output SVG path");
    plot->add_option("--title", plot_title, "figure title");

    auto* list = app.add_subcommand("list", "list built-in scenarios");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(g, scenario);
        if (*sweep) return cmd_sweep(g, sweep_scenario, sweep_key, parse_value_list(sweep_values));
        if (*cmp) return cmd_compare(g, cmp_scenario);
        if (*list) return cmd_list(g);
        if (*plot) {
            try {
                return cmd_plot(g, plot_log, plot_panels, plot_out, plot_title);
            } catch (const std::exception& e) {
                return map_plot_error(e);
            }
        }
    } catch (const std::exception& e) {
        return map_error(e);
    }
    return 0;
}
