// gme: gravity-mediated entanglement calculator.
// Subcommands: closed-form, simulate, sweep, verify, plot-f.
// Exit codes: 0 success, 1 verification failure, 2 config error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "gme/run.hpp"

namespace {

// Flags override file values; a config file is optional for verify and plot-f.
struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    int threads = 0;
    double tolerance = 0.0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required) {
    auto* opt = cmd->add_option("--config", flags.config_path, "config file (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--threads", flags.threads, "worker thread count");
    cmd->add_option("--tolerance", flags.tolerance, "numerical tolerance override");
}

gme::RunConfig load(const CommonFlags& flags, gme::RunMode mode) {
    gme::RunConfig cfg;
    if (!flags.config_path.empty()) cfg = gme::parse_config_file(flags.config_path);
    cfg.mode = mode;
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (flags.threads > 0) cfg.threads = flags.threads;
    if (flags.tolerance > 0.0) cfg.numerics.tolerance = flags.tolerance;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gravity-mediated entanglement between delocalized masses"};
    app.require_subcommand(1);

    CommonFlags cf_flags, rel_flags, sim_flags, sweep_flags, verify_flags;
    bool with_oracle = false;

    auto* cf = app.add_subcommand("closed-form", "closed-form entanglement measures");
    add_common(cf, cf_flags, true);
    auto* rel = cf->add_flag("--relativistic", "report relativistic corrections only");

    auto* sim = app.add_subcommand("simulate", "stationary-phase evolution + entanglement");
    add_common(sim, sim_flags, true);
    sim->add_flag("--with-oracle", with_oracle, "also run the split-step oracle");

    auto* swp = app.add_subcommand("sweep", "parameter sweep to CSV");
    add_common(swp, sweep_flags, true);

    auto* ver = app.add_subcommand("verify", "run the verification suite");
    add_common(ver, verify_flags, false);

    auto* plot = app.add_subcommand("plot-f", "tabulate and plot the shape functions");
    std::string plot_out = ".";
    double plot_lo = 0.0, plot_hi = 5.0;
    int plot_samples = 256;
    plot->add_option("--out", plot_out, "output directory");
    plot->add_option("--min", plot_lo, "range start");
    plot->add_option("--max", plot_hi, "range end");
    plot->add_option("--samples", plot_samples, "sample count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cf->parsed()) {
            auto cfg = load(cf_flags, rel->count() ? gme::RunMode::relativistic
                                                   : gme::RunMode::closed_form);
            return rel->count() ? gme::run_relativistic(cfg, std::cout)
                                : gme::run_closed_form(cfg, std::cout);
        }
        if (sim->parsed()) {
            auto cfg = load(sim_flags, gme::RunMode::simulate);
            if (with_oracle) cfg.with_oracle = true;
            return gme::run_simulate(cfg, std::cout);
        }
        if (swp->parsed()) {
            return gme::run_sweep(load(sweep_flags, gme::RunMode::sweep), std::cout);
        }
        if (ver->parsed()) {
            return gme::run_verify(load(verify_flags, gme::RunMode::verify), std::cout);
        }
        if (plot->parsed()) {
            std::filesystem::create_directories(plot_out);
            std::ofstream csv(plot_out + "/ffunctions.csv");
            std::ofstream svg(plot_out + "/ffunctions.svg");
            gme::emit_ffunction_plot(plot_lo, plot_hi, plot_samples, csv, svg);
            std::cout << "wrote " << plot_out << "/ffunctions.csv and .svg\n";
            return 0;
        }
    } catch (const gme::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const gme::invalid_parameter& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
