#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "config.hpp"
#include "run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"non-Hermitian tilted-lattice laboratory"};
    app.set_version_flag("--version", cli::kToolVersion);

    std::string config_path, preset, out_dir;
    int jobs = 0;
    bool seedless = false;
    app.add_option("--config", config_path, "JSON run configuration file");
    app.add_option("--preset", preset,
                   "continuum preset (fig1a, fig1b, fig1c); without --config "
                   "runs a spectrum sweep over kappa");
    app.add_option("--jobs", jobs, "worker pool size (0 = library default)");
    app.add_option("--out", out_dir, "directory prepended to the output path");
    app.add_flag("--seedless", seedless,
                 "reserved; nothing here draws random numbers");

    CLI11_PARSE(app, argc, argv);

    if (config_path.empty() && preset.empty()) {
        std::cerr << "error: need --config or --preset\n";
        return 2;
    }

    cli::RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream is(config_path, std::ios::binary);
            if (!is) {
                std::cerr << "error: cannot read " << config_path << "\n";
                return 2;
            }
            std::ostringstream ss;
            ss << is.rdbuf();
            cfg = cli::parse_config(ss.str());
            if (!preset.empty()) {
                cfg.preset = preset;
                cfg.model = cli::preset_model(preset);
                cfg.model_present = true;
            }
        } else {
            // Preset-only shorthand: sweep the tilt strength from zero up to
            // the preset's own kappa.
            const fgh::ContinuousModel m = cli::preset_model(preset);
            cfg.mode = "spectrum-sweep";
            cfg.preset = preset;
            cfg.model = m;
            cfg.model_present = true;
            cfg.sweep.present = true;
            cfg.sweep.parameter = "kappa";
            cfg.sweep.lo = 0.0;
            cfg.sweep.hi = m.kappa;
            cfg.sweep.steps = 13;
            cfg.output_path = cfg.mode + ".csv";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (!out_dir.empty())
        cfg.output_path =
            (std::filesystem::path(out_dir) / cfg.output_path).string();

    return cli::run(cfg, jobs);
}
