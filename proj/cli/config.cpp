#include "config.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace cli {

namespace {

using nlohmann::ordered_json;

const std::vector<std::string> kModes = {
    "spectrum-sweep", "fidelity", "effective-couplings", "scale-free",
    "evolve",         "propagator", "spacing"};

int line_of_offset(const std::string& text, size_t byte) {
    return 1 + static_cast<int>(std::count(
                   text.begin(), text.begin() + std::min(byte, text.size()),
                   '\n'));
}

struct Collector {
    std::vector<std::string> violations;

    void add(const std::string& msg) { violations.push_back(msg); }

    void check_keys(const ordered_json& obj, const std::string& where,
                    const std::vector<std::string>& allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (std::find(allowed.begin(), allowed.end(), it.key()) ==
                allowed.end())
                add(where + ": unknown key \"" + it.key() + "\"");
        }
    }

    template <typename T>
    bool fetch(const ordered_json& obj, const std::string& where,
               const std::string& key, T& out) {
        auto it = obj.find(key);
        if (it == obj.end()) return false;
        try {
            out = it->get<T>();
            return true;
        } catch (const nlohmann::json::exception&) {
            add(where + "." + key + ": wrong type");
            return false;
        }
    }
};

bool equal_model(const fgh::ContinuousModel& a, const fgh::ContinuousModel& b) {
    return a.L == b.L && a.n_grid == b.n_grid && a.gamma == b.gamma &&
           a.omega == b.omega && a.b == b.b && a.a == b.a &&
           a.kappa == b.kappa && a.hbar == b.hbar && a.mass == b.mass;
}

} // namespace

bool RunConfig::operator==(const RunConfig& o) const {
    return mode == o.mode && preset == o.preset &&
           equal_model(model, o.model) && model_present == o.model_present &&
           ladder == o.ladder && sweep == o.sweep &&
           evolution == o.evolution && propagation == o.propagation &&
           scan == o.scan && tolerances == o.tolerances &&
           output_path == o.output_path;
}

fgh::ContinuousModel preset_model(const std::string& name) {
    fgh::ContinuousModel m;
    if (name == "fig1a") {
        m.L = 3.0; m.n_grid = 201; m.gamma = 800.0; m.omega = 2;
        m.b = 0.76; m.a = 80; m.kappa = 0.0062;
    } else if (name == "fig1b") {
        m.L = 3.0; m.n_grid = 201; m.gamma = 1500.0; m.omega = 3;
        m.b = 0.83; m.a = 100; m.kappa = 0.0252;
    } else if (name == "fig1c") {
        m.L = 2.3; m.n_grid = 401; m.gamma = 7000.0; m.omega = 7;
        m.b = 0.935; m.a = 200; m.kappa = 0.3440;
    } else {
        throw ConfigError("unknown preset \"" + name +
                          "\" (have fig1a, fig1b, fig1c)");
    }
    return m;
}

RunConfig parse_config(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config parse error at line " +
                          std::to_string(line_of_offset(text, e.byte)) + ": " +
                          e.what());
    }

    Collector c;
    if (!root.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    c.check_keys(root, "config",
                 {"mode", "preset", "model", "ladder", "sweep", "evolution",
                  "propagation", "scan", "tolerances", "output_path"});

    RunConfig cfg;
    if (!c.fetch(root, "config", "mode", cfg.mode))
        c.add("config.mode: required");
    else if (std::find(kModes.begin(), kModes.end(), cfg.mode) == kModes.end())
        c.add("config.mode: \"" + cfg.mode + "\" is not a known mode");

    if (c.fetch(root, "config", "preset", cfg.preset)) {
        try {
            cfg.model = preset_model(cfg.preset);
            cfg.model_present = true;
        } catch (const ConfigError& e) {
            c.add(e.what());
        }
    }

    if (root.contains("model") && root["model"].is_object()) {
        const auto& m = root["model"];
        c.check_keys(m, "model",
                     {"L", "n_grid", "gamma", "omega", "b", "a", "kappa"});
        c.fetch(m, "model", "L", cfg.model.L);
        c.fetch(m, "model", "n_grid", cfg.model.n_grid);
        c.fetch(m, "model", "gamma", cfg.model.gamma);
        c.fetch(m, "model", "omega", cfg.model.omega);
        c.fetch(m, "model", "b", cfg.model.b);
        c.fetch(m, "model", "a", cfg.model.a);
        c.fetch(m, "model", "kappa", cfg.model.kappa);
        cfg.model_present = true;
        try {
            cfg.model.validate();
        } catch (const std::invalid_argument& e) {
            c.add(e.what());
        }
    } else if (root.contains("model")) {
        c.add("config.model: must be an object");
    }

    if (root.contains("ladder") && root["ladder"].is_object()) {
        const auto& l = root["ladder"];
        c.check_keys(l, "ladder", {"n", "j", "f"});
        c.fetch(l, "ladder", "n", cfg.ladder.n);
        c.fetch(l, "ladder", "j", cfg.ladder.j);
        c.fetch(l, "ladder", "f", cfg.ladder.f);
        if (cfg.ladder.n < 2) c.add("ladder.n: must be >= 2");
    } else if (root.contains("ladder")) {
        c.add("config.ladder: must be an object");
    }

    if (root.contains("sweep") && root["sweep"].is_object()) {
        const auto& s = root["sweep"];
        c.check_keys(s, "sweep", {"parameter", "lo", "hi", "steps"});
        cfg.sweep.present = true;
        if (!c.fetch(s, "sweep", "parameter", cfg.sweep.parameter))
            c.add("sweep.parameter: required");
        else if (cfg.sweep.parameter != "kappa" && cfg.sweep.parameter != "f")
            c.add("sweep.parameter: must be \"kappa\" or \"f\"");
        c.fetch(s, "sweep", "lo", cfg.sweep.lo);
        c.fetch(s, "sweep", "hi", cfg.sweep.hi);
        if (!c.fetch(s, "sweep", "steps", cfg.sweep.steps))
            c.add("sweep.steps: required");
        else if (cfg.sweep.steps < 2)
            c.add("sweep.steps: must be >= 2");
        if (cfg.sweep.hi <= cfg.sweep.lo)
            c.add("sweep: hi must exceed lo");
    } else if (root.contains("sweep")) {
        c.add("config.sweep: must be an object");
    }

    if (root.contains("evolution") && root["evolution"].is_object()) {
        const auto& e = root["evolution"];
        c.check_keys(e, "evolution",
                     {"t_max", "samples", "generator", "initial"});
        c.fetch(e, "evolution", "t_max", cfg.evolution.t_max);
        c.fetch(e, "evolution", "samples", cfg.evolution.samples);
        c.fetch(e, "evolution", "generator", cfg.evolution.generator);
        c.fetch(e, "evolution", "initial", cfg.evolution.initial);
        if (cfg.evolution.t_max <= 0.0) c.add("evolution.t_max: must be > 0");
        if (cfg.evolution.samples < 2) c.add("evolution.samples: must be >= 2");
        if (cfg.evolution.generator != "lossy" &&
            cfg.evolution.generator != "effective")
            c.add("evolution.generator: must be \"lossy\" or \"effective\"");
        if (cfg.evolution.initial != "center" &&
            cfg.evolution.initial != "uniform")
            c.add("evolution.initial: must be \"center\" or \"uniform\"");
    } else if (root.contains("evolution")) {
        c.add("config.evolution: must be an object");
    }

    if (root.contains("propagation") && root["propagation"].is_object()) {
        const auto& p = root["propagation"];
        c.check_keys(p, "propagation", {"t_max", "samples", "radius", "source"});
        c.fetch(p, "propagation", "t_max", cfg.propagation.t_max);
        c.fetch(p, "propagation", "samples", cfg.propagation.samples);
        c.fetch(p, "propagation", "radius", cfg.propagation.radius);
        c.fetch(p, "propagation", "source", cfg.propagation.source);
        if (cfg.propagation.t_max <= 0.0) c.add("propagation.t_max: must be > 0");
        if (cfg.propagation.samples < 2)
            c.add("propagation.samples: must be >= 2");
        if (cfg.propagation.radius < 0) c.add("propagation.radius: must be >= 0");
    } else if (root.contains("propagation")) {
        c.add("config.propagation: must be an object");
    }

    if (root.contains("scan") && root["scan"].is_object()) {
        const auto& s = root["scan"];
        c.check_keys(s, "scan", {"n_list", "ratio_lo", "ratio_hi"});
        c.fetch(s, "scan", "n_list", cfg.scan.n_list);
        c.fetch(s, "scan", "ratio_lo", cfg.scan.ratio_lo);
        c.fetch(s, "scan", "ratio_hi", cfg.scan.ratio_hi);
        if (cfg.scan.n_list.empty()) c.add("scan.n_list: must be nonempty");
        for (int n : cfg.scan.n_list)
            if (n < 3 || n % 2 == 0)
                c.add("scan.n_list: entries must be odd and >= 3");
        if (cfg.scan.ratio_hi <= cfg.scan.ratio_lo)
            c.add("scan: ratio_hi must exceed ratio_lo");
    } else if (root.contains("scan")) {
        c.add("config.scan: must be an object");
    }

    if (root.contains("tolerances") && root["tolerances"].is_object()) {
        const auto& t = root["tolerances"];
        c.check_keys(t, "tolerances",
                     {"coalescence_threshold", "ep_threshold"});
        c.fetch(t, "tolerances", "coalescence_threshold",
                cfg.tolerances.coalescence_threshold);
        c.fetch(t, "tolerances", "ep_threshold", cfg.tolerances.ep_threshold);
    } else if (root.contains("tolerances")) {
        c.add("config.tolerances: must be an object");
    }

    c.fetch(root, "config", "output_path", cfg.output_path);
    if (cfg.output_path.empty()) cfg.output_path = cfg.mode + ".csv";

    // Mode-specific requirements, checked only once the mode itself is known.
    if (cfg.mode == "spectrum-sweep") {
        if (!cfg.sweep.present) c.add("spectrum-sweep: requires a sweep block");
        else if (cfg.sweep.parameter == "kappa" && !cfg.model_present)
            c.add("spectrum-sweep over kappa: requires a continuum model or preset");
    } else if (cfg.mode == "fidelity" || cfg.mode == "effective-couplings") {
        if (!cfg.model_present)
            c.add(cfg.mode + ": requires a continuum model or preset");
    } else if (cfg.mode == "propagator") {
        if (cfg.ladder.f == 0.0)
            c.add("propagator: ladder.f must be nonzero");
    }

    if (!c.violations.empty()) {
        std::ostringstream os;
        os << "invalid config (" << c.violations.size() << " violation"
           << (c.violations.size() == 1 ? "" : "s") << "):";
        for (const auto& v : c.violations) os << "\n  - " << v;
        throw ConfigError(os.str());
    }
    return cfg;
}

std::string emit_config(const RunConfig& cfg) {
    ordered_json root;
    root["mode"] = cfg.mode;
    if (!cfg.preset.empty()) root["preset"] = cfg.preset;
    if (cfg.model_present) {
        root["model"] = {{"L", cfg.model.L},         {"n_grid", cfg.model.n_grid},
                         {"gamma", cfg.model.gamma}, {"omega", cfg.model.omega},
                         {"b", cfg.model.b},         {"a", cfg.model.a},
                         {"kappa", cfg.model.kappa}};
    }
    root["ladder"] = {
        {"n", cfg.ladder.n}, {"j", cfg.ladder.j}, {"f", cfg.ladder.f}};
    if (cfg.sweep.present) {
        root["sweep"] = {{"parameter", cfg.sweep.parameter},
                         {"lo", cfg.sweep.lo},
                         {"hi", cfg.sweep.hi},
                         {"steps", cfg.sweep.steps}};
    }
    root["evolution"] = {{"t_max", cfg.evolution.t_max},
                         {"samples", cfg.evolution.samples},
                         {"generator", cfg.evolution.generator},
                         {"initial", cfg.evolution.initial}};
    root["propagation"] = {{"t_max", cfg.propagation.t_max},
                           {"samples", cfg.propagation.samples},
                           {"radius", cfg.propagation.radius},
                           {"source", cfg.propagation.source}};
    root["scan"] = {{"n_list", cfg.scan.n_list},
                    {"ratio_lo", cfg.scan.ratio_lo},
                    {"ratio_hi", cfg.scan.ratio_hi}};
    root["tolerances"] = {
        {"coalescence_threshold", cfg.tolerances.coalescence_threshold},
        {"ep_threshold", cfg.tolerances.ep_threshold}};
    root["output_path"] = cfg.output_path;
    return root.dump(2) + "\n";
}

} // namespace cli
