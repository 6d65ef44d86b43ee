#include "gme/run.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "gme/closed_form.hpp"
#include "gme/entanglement.hpp"
#include "gme/grid.hpp"
#include "gme/propagator.hpp"
#include "gme/verification.hpp"

#ifndef GME_GIT_REVISION
#define GME_GIT_REVISION "unknown"
#endif

namespace gme {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
    throw config_error("config field '" + field + "': " + why);
}

double require_number(const json& j, const std::string& field) {
    if (!j.contains(field)) bad_field(field, "missing");
    if (!j[field].is_number()) bad_field(field, "must be a number");
    return j[field].get<double>();
}

void check_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                return key == a;
            }) == allowed.end()) {
            bad_field(where.empty() ? key : where + "." + key, "unknown field");
        }
    }
}

RunMode parse_mode(const std::string& s) {
    if (s == "closed-form" || s == "closed_form") return RunMode::closed_form;
    if (s == "simulate") return RunMode::simulate;
    if (s == "sweep") return RunMode::sweep;
    if (s == "verify") return RunMode::verify;
    if (s == "relativistic") return RunMode::relativistic;
    bad_field("mode", "must be one of closed-form|simulate|sweep|verify|relativistic, got '" + s + "'");
}

const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::closed_form: return "closed-form";
        case RunMode::simulate: return "simulate";
        case RunMode::sweep: return "sweep";
        case RunMode::verify: return "verify";
        case RunMode::relativistic: return "relativistic";
    }
    return "?";
}

double* group_field(DimensionlessGroups& g, const std::string& name) {
    if (name == "phi") return &g.phi;
    if (name == "epsilon") return &g.epsilon;
    if (name == "xi") return &g.xi;
    if (name == "Omega") return &g.Omega;
    if (name == "omegaT") return &g.omegaT;
    return nullptr;
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be an object");
    check_keys(j, "", {"schema_version", "mode", "params", "groups", "sweep",
                       "sweep_outputs", "numerics", "out_dir", "threads",
                       "with_oracle"});

    RunConfig cfg;
    if (!j.contains("schema_version")) bad_field("schema_version", "missing");
    if (!j["schema_version"].is_number_integer())
        bad_field("schema_version", "must be an integer");
    cfg.schema_version = j["schema_version"].get<int>();
    if (cfg.schema_version != 1)
        bad_field("schema_version", "unsupported version " + std::to_string(cfg.schema_version));

    if (!j.contains("mode") || !j["mode"].is_string())
        bad_field("mode", "missing or not a string");
    cfg.mode = parse_mode(j["mode"].get<std::string>());

    if (j.contains("params") && j.contains("groups"))
        throw config_error("config must contain exactly one of 'params' or 'groups', not both");

    if (j.contains("params")) {
        const json& p = j["params"];
        if (!p.is_object()) bad_field("params", "must be an object");
        check_keys(p, "params", {"m", "d", "alpha", "beta", "T", "G", "hbar", "c"});
        ExperimentParams ep{};
        ep.m = require_number(p, "m");
        ep.d = require_number(p, "d");
        ep.alpha = require_number(p, "alpha");
        ep.beta = require_number(p, "beta");
        ep.T = require_number(p, "T");
        ep.G = p.contains("G") ? require_number(p, "G") : 6.67430e-11;
        ep.hbar = p.contains("hbar") ? require_number(p, "hbar") : 1.054571817e-34;
        ep.c = p.contains("c") ? require_number(p, "c") : 299792458.0;
        cfg.params = ep;
    }
    if (j.contains("groups")) {
        const json& g = j["groups"];
        if (!g.is_object()) bad_field("groups", "must be an object");
        check_keys(g, "groups", {"phi", "epsilon", "xi", "Omega", "omegaT"});
        DimensionlessGroups dg{};
        dg.phi = require_number(g, "phi");
        dg.epsilon = require_number(g, "epsilon");
        dg.xi = g.contains("xi") ? require_number(g, "xi") : 0.0;
        dg.Omega = g.contains("Omega") ? require_number(g, "Omega") : 0.0;
        dg.omegaT = require_number(g, "omegaT");
        cfg.groups = dg;
    }
    if (cfg.mode != RunMode::verify && !cfg.params && !cfg.groups)
        throw config_error("config must contain one of 'params' or 'groups'");

    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (!s.is_object()) bad_field("sweep", "must be an object");
        check_keys(s, "sweep", {"parameter", "min", "max", "count", "scale"});
        SweepAxis ax;
        if (!s.contains("parameter") || !s["parameter"].is_string())
            bad_field("sweep.parameter", "missing or not a string");
        ax.parameter = s["parameter"].get<std::string>();
        DimensionlessGroups probe{};
        if (!group_field(probe, ax.parameter))
            bad_field("sweep.parameter", "must be one of phi|epsilon|xi|Omega|omegaT");
        ax.min = require_number(s, "min");
        ax.max = require_number(s, "max");
        if (!s.contains("count") || !s["count"].is_number_integer())
            bad_field("sweep.count", "missing or not an integer");
        ax.count = s["count"].get<int>();
        if (ax.count < 1) bad_field("sweep.count", "must be >= 1");
        if (s.contains("scale")) {
            ax.scale = s["scale"].get<std::string>();
            if (ax.scale != "linear" && ax.scale != "log")
                bad_field("sweep.scale", "must be 'linear' or 'log'");
            if (ax.scale == "log" && (ax.min <= 0.0 || ax.max <= 0.0))
                bad_field("sweep.scale", "log scale requires positive min and max");
        }
        cfg.sweep = ax;
    }
    if (cfg.mode == RunMode::sweep && !cfg.sweep)
        bad_field("sweep", "missing (required for sweep mode)");

    if (j.contains("sweep_outputs")) {
        if (!j["sweep_outputs"].is_array()) bad_field("sweep_outputs", "must be an array");
        for (const auto& o : j["sweep_outputs"]) {
            if (!o.is_string()) bad_field("sweep_outputs", "entries must be strings");
            std::string name = o.get<std::string>();
            static const char* known[] = {"unified", "path", "oscillator",
                                          "oscillator_large", "relativistic",
                                          "simulated"};
            if (std::find(std::begin(known), std::end(known), name) == std::end(known))
                bad_field("sweep_outputs", "unknown output '" + name + "'");
            cfg.sweep_outputs.push_back(name);
        }
    }

    if (j.contains("numerics")) {
        const json& n = j["numerics"];
        if (!n.is_object()) bad_field("numerics", "must be an object");
        check_keys(n, "numerics", {"final_grid_points", "quadrature_nodes",
                                   "split_steps", "split_grid_points", "tolerance"});
        auto get_int = [&](const char* f, int dflt, int lo) {
            if (!n.contains(f)) return dflt;
            if (!n[f].is_number_integer()) bad_field(std::string("numerics.") + f, "must be an integer");
            int v = n[f].get<int>();
            if (v < lo) bad_field(std::string("numerics.") + f, "must be >= " + std::to_string(lo));
            return v;
        };
        cfg.numerics.final_grid_points = get_int("final_grid_points", 96, 8);
        cfg.numerics.quadrature_nodes = get_int("quadrature_nodes", 64, 16);
        cfg.numerics.split_steps = get_int("split_steps", 256, 1);
        cfg.numerics.split_grid_points = get_int("split_grid_points", 128, 16);
        if (n.contains("tolerance")) cfg.numerics.tolerance = require_number(n, "tolerance");
    }

    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string()) bad_field("out_dir", "must be a string");
        cfg.out_dir = j["out_dir"].get<std::string>();
    }
    if (j.contains("threads")) {
        if (!j["threads"].is_number_integer()) bad_field("threads", "must be an integer");
        cfg.threads = j["threads"].get<int>();
        if (cfg.threads < 1) bad_field("threads", "must be >= 1");
    }
    if (j.contains("with_oracle")) {
        if (!j["with_oracle"].is_boolean()) bad_field("with_oracle", "must be a boolean");
        cfg.with_oracle = j["with_oracle"].get<bool>();
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

DimensionlessGroups resolve_groups(const RunConfig& config) {
    DimensionlessGroups g{};
    if (config.params) {
        config.params->validate();
        g = derive_groups(*config.params);
    } else if (config.groups) {
        g = *config.groups;
    } else {
        throw config_error("config has neither 'params' nor 'groups'");
    }
    g.validate();
    return g;
}

std::string describe_config(const RunConfig& config) {
    json j;
    j["schema_version"] = config.schema_version;
    j["mode"] = mode_name(config.mode);
    if (config.params || config.groups) {
        DimensionlessGroups g = resolve_groups(config);
        j["groups"] = {{"phi", g.phi}, {"epsilon", g.epsilon}, {"xi", g.xi},
                       {"Omega", g.Omega}, {"omegaT", g.omegaT}};
    }
    if (config.sweep) {
        j["sweep"] = {{"parameter", config.sweep->parameter},
                      {"min", config.sweep->min},
                      {"max", config.sweep->max},
                      {"count", config.sweep->count},
                      {"scale", config.sweep->scale}};
    }
    if (!config.sweep_outputs.empty()) j["sweep_outputs"] = config.sweep_outputs;
    j["numerics"] = {{"final_grid_points", config.numerics.final_grid_points},
                     {"quadrature_nodes", config.numerics.quadrature_nodes},
                     {"split_steps", config.numerics.split_steps},
                     {"split_grid_points", config.numerics.split_grid_points},
                     {"tolerance", config.numerics.tolerance}};
    // Thread count deliberately omitted: outputs are thread-count independent,
    // and the determinism contract compares emitted headers byte for byte.
    return j.dump();
}

namespace {

void print_regime(const DimensionlessGroups& g, std::ostream& out) {
    RegimeReport report = validate_regime(g);
    for (const auto& c : report.checks) {
        if (!c.pass)
            out << "# warning: regime assumption " << c.assumption
                << " strained (value " << fmt(c.value) << ")\n";
    }
}

}  // namespace

int run_closed_form(const RunConfig& config, std::ostream& out) {
    DimensionlessGroups g = resolve_groups(config);
    print_regime(g, out);
    out << "formula,E\n";
    out << "unified," << fmt(entanglement_unified(g).value) << "\n";
    out << "path," << fmt(entanglement_path_limit(g).value) << "\n";
    out << "oscillator," << fmt(entanglement_oscillator_limit(g).value) << "\n";
    out << "oscillator_large," << fmt(entanglement_oscillator_large_omegaT(g).value) << "\n";
    if (g.xi == 0.0) {
        ClosedFormResult rel = relativistic_correction(g);
        out << "relativistic," << fmt(rel.value) << "\n";
        out << "relativistic_correction," << fmt(*rel.correction) << "\n";
    }
    return 0;
}

int run_relativistic(const RunConfig& config, std::ostream& out) {
    DimensionlessGroups g = resolve_groups(config);
    print_regime(g, out);
    ClosedFormResult rel = relativistic_correction(g);
    ClosedFormResult osc = entanglement_oscillator_limit(g);
    out << "quantity,value\n";
    out << "E_oscillator," << fmt(osc.value) << "\n";
    out << "correction_general," << fmt(*rel.correction) << "\n";
    out << "correction_large_omegaT," << fmt(*rel.correction_large_omegaT) << "\n";
    out << "E_corrected," << fmt(rel.value) << "\n";
    return 0;
}

int run_simulate(const RunConfig& config, std::ostream& out) {
    DimensionlessGroups g = resolve_groups(config);
    print_regime(g, out);

    OneParticleState packet;
    packet.kind = g.xi > 0.0 ? PacketKind::two_gaussians : PacketKind::single_gaussian;
    packet.xi = g.xi;

    double span = g.xi / 2.0 + 4.0 + 4.0 * g.omegaT;
    Axis axis;
    if (config.with_oracle) {
        // Shared grid fine enough for the split-step oracle.
        int n = std::max(config.numerics.split_grid_points,
                         static_cast<int>(std::ceil(2.0 * span / 0.125)));
        axis = make_axis(-span, span, n);
    } else {
        axis = default_final_axis(g.xi, g.omegaT, config.numerics.final_grid_points);
    }

    EvolutionSpec spec;
    spec.omegaT = g.omegaT;
    spec.lagrangian = LagrangianConfig{0, 0, 0, g};
    spec.quadrature_nodes = config.numerics.quadrature_nodes;
    spec.final_axis_A = spec.final_axis_B = axis;
    BipartiteWavefunction psi = evolve_stationary_phase(packet, packet, spec, config.threads);

    EntanglementResult eq = measure_quadrature(psi);
    EntanglementResult es = measure_schmidt(psi);
    out << "quantity,value\n";
    out << "E_quadrature," << fmt(eq.value) << "\n";
    out << "E_schmidt," << fmt(es.value) << "\n";
    out << "purity," << fmt(es.purity) << "\n";
    out << "E_closed_form," << fmt(entanglement_unified(g).value) << "\n";
    const auto& spectrum = *es.schmidt_spectrum;
    for (int i = 0; i < std::min<int>(6, static_cast<int>(spectrum.size())); ++i)
        out << "schmidt_" << i << "," << fmt(spectrum[i]) << "\n";

    if (config.with_oracle) {
        BipartiteWavefunction psi2 = initial_state(packet, packet, axis, axis);
        BipartiteWavefunction oracle = normalize(evolve_split_step(
            psi2, PotentialKind::expanded_second_order, config.numerics.split_steps,
            g.omegaT, g));
        out << "oracle_fidelity," << fmt(fidelity(psi, oracle)) << "\n";
        out << "oracle_E_schmidt," << fmt(measure_schmidt(oracle).value) << "\n";
    }

    std::filesystem::create_directories(config.out_dir);
    std::string state_path = config.out_dir + "/state.bin";
    save_grid_state_file(psi, state_path);
    out << "state_file," << state_path << "\n";

    // Marginal probability densities of |psi|^2 along each axis.
    std::string marg_path = config.out_dir + "/marginals.csv";
    std::ofstream marg(marg_path);
    marg << "# " << describe_config(config) << "\n";
    marg << "# revision " << GME_GIT_REVISION << "\n";
    marg << "y,pA,pB\n";
    const auto& amp = psi.amplitudes;
    for (int i = 0; i < amp.rows(); ++i) {
        double pa = 0.0, pb = 0.0;
        for (int j = 0; j < amp.cols(); ++j) {
            pa += std::norm(amp(i, j)) * psi.axis_B.step;
            pb += std::norm(amp(j, i)) * psi.axis_A.step;
        }
        marg << fmt(psi.axis_A.point(i)) << "," << fmt(pa) << "," << fmt(pb) << "\n";
    }
    out << "marginals_file," << marg_path << "\n";
    return 0;
}

namespace {

std::vector<std::string> sweep_columns(const RunConfig& config) {
    if (!config.sweep_outputs.empty()) return config.sweep_outputs;
    return {"unified", "path", "oscillator", "oscillator_large"};
}

std::string sweep_cell(const std::string& output, const DimensionlessGroups& g,
                       const RunConfig& config) {
    try {
        if (output == "unified") return fmt(entanglement_unified(g).value);
        if (output == "path") return fmt(entanglement_path_limit(g).value);
        if (output == "oscillator") return fmt(entanglement_oscillator_limit(g).value);
        if (output == "oscillator_large")
            return fmt(entanglement_oscillator_large_omegaT(g).value);
        if (output == "relativistic") return fmt(*relativistic_correction(g).correction);
        if (output == "simulated") {
            OneParticleState packet;
            packet.kind = g.xi > 0.0 ? PacketKind::two_gaussians
                                     : PacketKind::single_gaussian;
            packet.xi = g.xi;
            EvolutionSpec spec;
            spec.omegaT = g.omegaT;
            spec.lagrangian = LagrangianConfig{0, 0, 0, g};
            spec.quadrature_nodes = config.numerics.quadrature_nodes;
            spec.final_axis_A = spec.final_axis_B = default_final_axis(
                g.xi, g.omegaT, config.numerics.final_grid_points);
            BipartiteWavefunction psi =
                evolve_stationary_phase(packet, packet, spec, 1);
            return fmt(measure_schmidt(psi).value);
        }
    } catch (const unsupported_regime&) {
        return "nan";
    }
    return "nan";
}

}  // namespace

void write_sweep_csv(const RunConfig& config, std::ostream& out) {
    if (!config.sweep) throw config_error("sweep block missing");
    const SweepAxis& ax = *config.sweep;
    DimensionlessGroups base = resolve_groups(config);
    std::vector<std::string> columns = sweep_columns(config);

    // Parameter values in deterministic order.
    std::vector<double> values(ax.count);
    for (int i = 0; i < ax.count; ++i) {
        double t = ax.count == 1 ? 0.0 : static_cast<double>(i) / (ax.count - 1);
        values[i] = ax.scale == "log"
                        ? ax.min * std::pow(ax.max / ax.min, t)
                        : ax.min + (ax.max - ax.min) * t;
    }

    // Worker pool computes rows out of order; the single writer below emits
    // them in index order so output is byte-identical for any thread count.
    std::vector<std::string> rows(ax.count);
    int nthreads = std::max(1, std::min(config.threads, ax.count));
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= ax.count) return;
            DimensionlessGroups g = base;
            *group_field(g, ax.parameter) = values[i];
            std::string row = fmt(values[i]);
            for (const auto& col : columns) row += "," + sweep_cell(col, g, config);
            rows[i] = row + "\n";
        }
    };
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    out << "# " << describe_config(config) << "\n";
    out << "# revision " << GME_GIT_REVISION << "\n";
    out << ax.parameter;
    for (const auto& col : columns) out << "," << col;
    out << "\n";
    for (const auto& row : rows) {
        out << row;
        out.flush();  // rows land on disk incrementally: interrupted sweeps keep partial data
    }
}

int run_sweep(const RunConfig& config, std::ostream& out) {
    std::filesystem::create_directories(config.out_dir);
    std::string path = config.out_dir + "/sweep.csv";
    std::ofstream csv(path);
    if (!csv) throw config_error("cannot open output file: " + path);
    write_sweep_csv(config, csv);
    out << "sweep_file," << path << "\n";
    return 0;
}

int run_verify(const RunConfig& config, std::ostream& out) {
    std::vector<CriterionResult> results = run_verification(config.threads, true);
    bool all = true;
    json report = json::array();
    for (const auto& r : results) {
        all = all && r.passed;
        out << (r.passed ? "PASS" : "FAIL") << " criterion " << r.id << " ("
            << r.name << "): " << r.detail << "\n";
        report.push_back({{"id", r.id}, {"name", r.name},
                          {"passed", r.passed}, {"detail", r.detail}});
    }
    out << (all ? "PASS" : "FAIL") << " overall\n";
    std::filesystem::create_directories(config.out_dir);
    std::ofstream jf(config.out_dir + "/verify.json");
    jf << report.dump(2) << "\n";
    return all ? 0 : 1;
}

void emit_ffunction_plot(double lo, double hi, int samples,
                         std::ostream& csv_out, std::ostream& svg_out) {
    if (samples < 2) throw config_error("plot sample count must be >= 2");
    if (!(hi > lo)) throw config_error("plot range must have hi > lo");

    std::vector<double> xs(samples), y0(samples), y2(samples), y4(samples);
    csv_out << "x,f0,f2,f4\n";
    for (int i = 0; i < samples; ++i) {
        double x = lo + (hi - lo) * i / (samples - 1);
        xs[i] = x;
        y0[i] = f0(x);
        y2[i] = f2(x);
        y4[i] = f4(x);
        csv_out << fmt(x) << "," << fmt(y0[i]) << "," << fmt(y2[i]) << ","
                << fmt(y4[i]) << "\n";
    }

    const int W = 640, H = 480, margin = 50;
    double ymin = 1e300, ymax = -1e300;
    for (int i = 0; i < samples; ++i) {
        ymin = std::min({ymin, y0[i], y2[i], y4[i]});
        ymax = std::max({ymax, y0[i], y2[i], y4[i]});
    }
    double pad = 0.05 * (ymax - ymin + 1e-12);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return margin + (W - 2 * margin) * (x - lo) / (hi - lo); };
    auto py = [&](double y) { return H - margin - (H - 2 * margin) * (y - ymin) / (ymax - ymin); };
    auto polyline = [&](const std::vector<double>& ys, const char* color) {
        svg_out << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" points=\"";
        for (int i = 0; i < samples; ++i)
            svg_out << fmt(px(xs[i])) << "," << fmt(py(ys[i])) << " ";
        svg_out << "\"/>\n";
    };

    svg_out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
            << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg_out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    svg_out << "<line x1=\"" << margin << "\" y1=\"" << H - margin << "\" x2=\""
            << W - margin << "\" y2=\"" << H - margin << "\" stroke=\"black\"/>\n";
    svg_out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
            << "\" y2=\"" << H - margin << "\" stroke=\"black\"/>\n";
    polyline(y0, "#1f77b4");
    polyline(y2, "#d62728");
    polyline(y4, "#2ca02c");
    svg_out << "<text x=\"" << W - margin - 90 << "\" y=\"" << margin
            << "\" fill=\"#1f77b4\">f0</text>\n";
    svg_out << "<text x=\"" << W - margin - 60 << "\" y=\"" << margin
            << "\" fill=\"#d62728\">f2</text>\n";
    svg_out << "<text x=\"" << W - margin - 30 << "\" y=\"" << margin
            << "\" fill=\"#2ca02c\">f4</text>\n";
    svg_out << "</svg>\n";
}

}  // namespace gme
