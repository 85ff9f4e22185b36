#include "abres/errors.hpp"
#include "abres/experiments.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

struct ConfigFlags {
    std::string config_path;
    double alpha = 0, beta = 0, c = 0, t_min = 0, t_max = 0;
    double contour_gamma = 0;
    int modes = 0, t_points = 0, x_points = 0, contour_nodes = 0;
    std::string t_spacing, datum, out_dir;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--alpha", f.alpha, "ML parameter alpha");
    cmd->add_option("--beta", f.beta, "ML parameter beta");
    cmd->add_option("--c", f.c, "kernel constant c");
    cmd->add_option("--modes", f.modes, "mode count K");
    cmd->add_option("--t-min", f.t_min, "time grid start");
    cmd->add_option("--t-max", f.t_max, "time grid end");
    cmd->add_option("--t-points", f.t_points, "time grid size");
    cmd->add_option("--t-spacing", f.t_spacing, "log or linear");
    cmd->add_option("--x-points", f.x_points, "heatmap x resolution");
    cmd->add_option("--datum", f.datum, "initial datum, e.g. \"sin x\"");
    cmd->add_option("--out-dir", f.out_dir, "output directory");
    cmd->add_option("--contour-gamma", f.contour_gamma, "contour half-angle");
    cmd->add_option("--contour-nodes", f.contour_nodes, "nodes per ray");
}

abres::ExperimentConfig resolve_config(const CLI::App* cmd,
                                       const ConfigFlags& f,
                                       const std::string& experiment) {
    abres::ExperimentConfig cfg;
    if (cmd->count("--config")) {
        std::ifstream in(f.config_path);
        if (!in)
            throw std::invalid_argument("cannot read config file " +
                                        f.config_path);
        std::ostringstream text;
        text << in.rdbuf();
        cfg = abres::ExperimentConfig::from_json(text.str());
        cfg.experiment = experiment;
    } else {
        cfg = abres::ExperimentConfig::defaults_for(experiment);
    }
    if (cmd->count("--alpha"))
        cfg.alpha = f.alpha;
    if (cmd->count("--beta"))
        cfg.beta = f.beta;
    if (cmd->count("--c"))
        cfg.c = f.c;
    if (cmd->count("--modes"))
        cfg.modes = f.modes;
    if (cmd->count("--t-min"))
        cfg.t_grid.t_min = f.t_min;
    if (cmd->count("--t-max"))
        cfg.t_grid.t_max = f.t_max;
    if (cmd->count("--t-points"))
        cfg.t_grid.n_points = f.t_points;
    if (cmd->count("--t-spacing"))
        cfg.t_grid.spacing = f.t_spacing;
    if (cmd->count("--x-points"))
        cfg.x_points = f.x_points;
    if (cmd->count("--datum"))
        cfg.datum = f.datum;
    if (cmd->count("--out-dir"))
        cfg.out_dir = f.out_dir;
    if (cmd->count("--contour-gamma"))
        cfg.contour.gamma = f.contour_gamma;
    if (cmd->count("--contour-nodes"))
        cfg.contour.n_nodes = f.contour_nodes;
    cfg.validate();
    return cfg;
}

void print_complex(abres::Cplx z) {
    if (z.imag() == 0.0)
        std::cout << abres::format_float(z.real()) << "\n";
    else
        std::cout << abres::format_float(z.real()) << " "
                  << abres::format_float(z.imag()) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Atangana-Baleanu resolvent family experiments"};
    app.require_subcommand(1);

    double ml_alpha = 0, ml_beta = 0, z_re = 0, z_im = 0;
    auto* ml = app.add_subcommand("ml-eval",
                                  "evaluate the Mittag-Leffler function");
    ml->add_option("--alpha", ml_alpha)->required();
    ml->add_option("--beta", ml_beta)->required();
    ml->add_option("--z-re", z_re)->required();
    ml->add_option("--z-im", z_im);

    double sy_alpha = 0, sy_beta = 0, sy_c = 1.0, s_re = 0, s_im = 0;
    auto* sy = app.add_subcommand("symbol-eval",
                                  "evaluate the Laplace symbol");
    sy->add_option("--alpha", sy_alpha)->required();
    sy->add_option("--beta", sy_beta)->required();
    sy->add_option("--c", sy_c);
    sy->add_option("--s-re", s_re)->required();
    sy->add_option("--s-im", s_im);

    std::string run_what, check_what = "theorems", export_what;
    ConfigFlags run_flags, check_flags, export_flags;
    auto* run = app.add_subcommand("run", "run an experiment");
    run->add_option("experiment", run_what, "experiment name")
        ->required()
        ->check(CLI::IsMember({"fundamental-mode", "multi-mode", "heatmap",
                               "bounds"}));
    add_config_flags(run, run_flags);

    auto* check = app.add_subcommand("check", "run the theorem check suite");
    check->add_option("suite", check_what)->check(CLI::IsMember({"theorems"}));
    add_config_flags(check, check_flags);

    auto* exp = app.add_subcommand(
        "export", "run an experiment and render plot-ready SVG output");
    exp->add_option("experiment", export_what, "experiment name")
        ->required()
        ->check(CLI::IsMember({"fundamental-mode", "multi-mode", "heatmap"}));
    add_config_flags(exp, export_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (ml->parsed()) {
            print_complex(abres::ml_eval({ml_alpha, ml_beta},
                                         abres::Cplx(z_re, z_im)));
        } else if (sy->parsed()) {
            print_complex(abres::laplace_symbol({sy_alpha, sy_beta, sy_c},
                                                abres::Cplx(s_re, s_im)));
        } else if (run->parsed()) {
            if (!abres::run_experiment(
                    resolve_config(run, run_flags, run_what)))
                return 1;
        } else if (check->parsed()) {
            auto cfg = resolve_config(check, check_flags, "theorem-suite");
            if (!abres::run_experiment(cfg))
                return 1;
        } else if (exp->parsed()) {
            auto cfg = resolve_config(exp, export_flags, export_what);
            cfg.emit_svg = true;
            if (!abres::run_experiment(cfg))
                return 1;
        }
    } catch (const abres::QuadratureError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const abres::SeriesNotConvergedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
