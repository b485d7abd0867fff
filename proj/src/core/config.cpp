#include "core/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "core/text.hpp"

namespace csf {

using nlohmann::json;

double DiagnosticsConfig::tolerance(const std::string &key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
}

namespace {

[[noreturn]] void bad(const std::string &message) { fail(ErrorKind::Config, message); }

void check_keys(const json &obj, const std::string &context,
                const std::set<std::string> &allowed) {
    if (!obj.is_object()) bad(context + " must be a JSON object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (allowed.find(it.key()) == allowed.end())
            bad("unknown key \"" + it.key() + "\" in " + context);
}

double get_number(const json &obj, const std::string &context, const std::string &key) {
    if (!obj.contains(key)) bad(context + " is missing \"" + key + "\"");
    const json &v = obj.at(key);
    if (!v.is_number()) bad(context + "." + key + " must be a number");
    return v.get<double>();
}

double get_number_or(const json &obj, const std::string &context, const std::string &key,
                     double fallback) {
    return obj.contains(key) ? get_number(obj, context, key) : fallback;
}

int get_int(const json &obj, const std::string &context, const std::string &key) {
    if (!obj.contains(key)) bad(context + " is missing \"" + key + "\"");
    const json &v = obj.at(key);
    if (!v.is_number_integer()) bad(context + "." + key + " must be an integer");
    return v.get<int>();
}

int get_int_or(const json &obj, const std::string &context, const std::string &key,
               int fallback) {
    return obj.contains(key) ? get_int(obj, context, key) : fallback;
}

std::string get_string(const json &obj, const std::string &context, const std::string &key) {
    if (!obj.contains(key)) bad(context + " is missing \"" + key + "\"");
    const json &v = obj.at(key);
    if (!v.is_string()) bad(context + "." + key + " must be a string");
    return v.get<std::string>();
}

std::vector<double> get_number_array(const json &obj, const std::string &context,
                                     const std::string &key) {
    if (!obj.contains(key)) bad(context + " is missing \"" + key + "\"");
    const json &v = obj.at(key);
    if (!v.is_array()) bad(context + "." + key + " must be an array");
    std::vector<double> out;
    for (const json &e : v) {
        if (!e.is_number()) bad(context + "." + key + " must contain numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> get_int_array(const json &obj, const std::string &context,
                               const std::string &key) {
    if (!obj.contains(key)) bad(context + " is missing \"" + key + "\"");
    const json &v = obj.at(key);
    if (!v.is_array()) bad(context + "." + key + " must be an array");
    std::vector<int> out;
    for (const json &e : v) {
        if (!e.is_number_integer()) bad(context + "." + key + " must contain integers");
        out.push_back(e.get<int>());
    }
    return out;
}

ManifoldConfig parse_manifold(const json &obj) {
    ManifoldConfig m;
    m.kind = get_string(obj, "manifold", "kind");
    if (m.kind == "euclidean") {
        check_keys(obj, "manifold", {"kind", "dim"});
        m.dim = get_int(obj, "manifold", "dim");
    } else if (m.kind == "flat_torus") {
        check_keys(obj, "manifold", {"kind", "periods"});
        m.periods = get_number_array(obj, "manifold", "periods");
        m.dim = static_cast<int>(m.periods.size());
    } else if (m.kind == "cylinder_sphere") {
        check_keys(obj, "manifold", {"kind", "sphere_dim", "sphere_radius", "pole_margin"});
        m.sphere_dim = get_int(obj, "manifold", "sphere_dim");
        m.sphere_radius = get_number(obj, "manifold", "sphere_radius");
        m.pole_margin =
            get_number_or(obj, "manifold", "pole_margin", ManifoldModel::kDefaultPoleMargin);
        m.dim = 1 + m.sphere_dim;
    } else {
        bad("manifold.kind must be euclidean, flat_torus or cylinder_sphere");
    }
    return m;
}

InitialCurveConfig parse_initial_curve(const json &obj, const ManifoldConfig &manifold) {
    check_keys(obj, "initial_curve", {"preset", "parameters", "N", "perturbation"});
    InitialCurveConfig c;
    c.preset = get_string(obj, "initial_curve", "preset");
    c.n_nodes = get_int(obj, "initial_curve", "N");
    if (!obj.contains("parameters")) bad("initial_curve is missing \"parameters\"");
    const json &params = obj.at("parameters");

    if (c.preset == "circle") {
        check_keys(params, "initial_curve.parameters", {"radius", "center"});
        c.radius = get_number(params, "parameters", "radius");
        if (params.contains("center"))
            c.center = get_number_array(params, "parameters", "center");
        else
            c.center.assign(static_cast<size_t>(manifold.dim), 0.0);
    } else if (c.preset == "winding") {
        check_keys(params, "initial_curve.parameters", {"p", "q", "amplitude", "frequency"});
        c.p = get_int(params, "parameters", "p");
        c.q = get_int(params, "parameters", "q");
        c.amplitude = get_number_or(params, "parameters", "amplitude", 0.0);
        c.frequency = get_int_or(params, "parameters", "frequency", 1);
    } else if (c.preset == "sphere_band") {
        check_keys(params, "initial_curve.parameters",
                   {"amplitude", "frequency", "phi_amplitude", "phi_frequency", "phi0"});
        c.amplitude = get_number(params, "parameters", "amplitude");
        c.frequency = get_int(params, "parameters", "frequency");
        c.phi_amplitude = get_number_or(params, "parameters", "phi_amplitude", 0.0);
        c.phi_frequency = get_int_or(params, "parameters", "phi_frequency", c.frequency);
        c.phi0 = get_number_or(params, "parameters", "phi0", 0.0);
    } else if (c.preset == "periodic_graph") {
        check_keys(params, "initial_curve.parameters", {"amplitudes", "frequencies"});
        c.amplitudes = get_number_array(params, "parameters", "amplitudes");
        c.frequencies = get_int_array(params, "parameters", "frequencies");
    } else {
        bad("initial_curve.preset must be circle, winding, sphere_band or periodic_graph");
    }

    if (obj.contains("perturbation")) {
        const json &p = obj.at("perturbation");
        check_keys(p, "initial_curve.perturbation", {"amplitude", "frequency", "seed"});
        PerturbationConfig pc;
        pc.amplitude = get_number(p, "perturbation", "amplitude");
        pc.frequency = get_int(p, "perturbation", "frequency");
        if (!p.contains("seed")) bad("perturbation is missing \"seed\"");
        if (!p.at("seed").is_number_unsigned() && !p.at("seed").is_number_integer())
            bad("perturbation.seed must be an integer");
        pc.seed = p.at("seed").get<std::uint64_t>();
        c.perturbation = pc;
    }
    return c;
}

FlowConfigEq parse_flow(const json &obj) {
    check_keys(obj, "flow",
               {"t_end", "dt_max", "cfl_factor", "resample_every", "sample_every", "m_max",
                "blowup_threshold", "scheme"});
    FlowConfigEq f;
    f.t_end = get_number(obj, "flow", "t_end");
    f.dt_max = get_number_or(obj, "flow", "dt_max", 1e-2);
    f.cfl_factor = get_number_or(obj, "flow", "cfl_factor", 0.5);
    f.resample_every = get_int_or(obj, "flow", "resample_every", 10);
    f.sample_every = get_number_or(obj, "flow", "sample_every", f.t_end / 100.0);
    f.m_max = get_int_or(obj, "flow", "m_max", 3);
    f.blowup_threshold = get_number_or(obj, "flow", "blowup_threshold", 1e6);
    f.scheme = scheme_from_string(obj.contains("scheme") ? get_string(obj, "flow", "scheme")
                                                         : std::string("rk2"));
    f.validate();
    return f;
}

DiagnosticsConfig parse_diagnostics(const json &obj) {
    check_keys(obj, "diagnostics", {"forms", "checks", "tolerances"});
    DiagnosticsConfig d;
    if (obj.contains("forms")) {
        for (const json &e : obj.at("forms")) {
            if (!e.is_string()) bad("diagnostics.forms must contain strings");
            d.forms.push_back(e.get<std::string>());
        }
    }
    static const std::set<std::string> known_checks = {"mono_min_omega", "a2mu2", "interp",
                                                       "convergence"};
    if (obj.contains("checks")) {
        for (const json &e : obj.at("checks")) {
            if (!e.is_string()) bad("diagnostics.checks must contain strings");
            std::string name = e.get<std::string>();
            if (known_checks.find(name) == known_checks.end())
                bad("unknown check \"" + name + "\"");
            d.checks.push_back(name);
        }
    }
    static const std::set<std::string> known_tols = {"tol_mono",  "tol_exp",      "tol_interp",
                                                     "conv_tol_A", "conv_tol_gradA", "eps_pos",
                                                     "length_floor"};
    if (obj.contains("tolerances")) {
        const json &t = obj.at("tolerances");
        if (!t.is_object()) bad("diagnostics.tolerances must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (known_tols.find(it.key()) == known_tols.end())
                bad("unknown tolerance \"" + it.key() + "\"");
            if (!it.value().is_number()) bad("tolerances must be numbers");
            d.tolerances[it.key()] = it.value().get<double>();
        }
    }
    return d;
}

OutputConfig parse_output(const json &obj) {
    check_keys(obj, "output", {"directory", "snapshot_every"});
    OutputConfig o;
    if (obj.contains("directory")) o.directory = get_string(obj, "output", "directory");
    o.snapshot_every = get_int_or(obj, "output", "snapshot_every", 10);
    if (o.snapshot_every < 0) bad("output.snapshot_every must be >= 0");
    return o;
}

} // namespace

RunConfig parse_config_text(const std::string &json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception &e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    check_keys(root, "config", {"manifold", "initial_curve", "flow", "diagnostics", "output"});
    if (!root.contains("manifold")) bad("config is missing \"manifold\"");
    if (!root.contains("initial_curve")) bad("config is missing \"initial_curve\"");
    if (!root.contains("flow")) bad("config is missing \"flow\"");

    RunConfig config;
    config.manifold = parse_manifold(root.at("manifold"));
    config.initial_curve = parse_initial_curve(root.at("initial_curve"), config.manifold);
    config.flow = parse_flow(root.at("flow"));
    if (root.contains("diagnostics"))
        config.diagnostics = parse_diagnostics(root.at("diagnostics"));
    if (root.contains("output")) config.output = parse_output(root.at("output"));

    // Cross-validation: the model must exist and the names must resolve.
    ModelPtr model = make_model(config.manifold);
    resolve_forms(*model, config.diagnostics);
    if (config.initial_curve.n_nodes < DiscreteCurve::kMinNodes)
        bad("initial_curve.N must be >= " + format_int(DiscreteCurve::kMinNodes));
    return config;
}

RunConfig parse_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

InitialCurveConfig parse_initial_curve_text(const std::string &json_text, int dim) {
    json obj;
    try {
        obj = json::parse(json_text);
    } catch (const json::exception &e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    ManifoldConfig dummy;
    dummy.dim = dim;
    return parse_initial_curve(obj, dummy);
}

FlowConfigEq parse_flow_text(const std::string &json_text) {
    json obj;
    try {
        obj = json::parse(json_text);
    } catch (const json::exception &e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    return parse_flow(obj);
}

std::string serialize_config(const RunConfig &config) {
    json root;
    json &m = root["manifold"];
    m["kind"] = config.manifold.kind;
    if (config.manifold.kind == "euclidean") {
        m["dim"] = config.manifold.dim;
    } else if (config.manifold.kind == "flat_torus") {
        m["periods"] = config.manifold.periods;
    } else {
        m["sphere_dim"] = config.manifold.sphere_dim;
        m["sphere_radius"] = config.manifold.sphere_radius;
        m["pole_margin"] = config.manifold.pole_margin;
    }

    json &ic = root["initial_curve"];
    const InitialCurveConfig &c = config.initial_curve;
    ic["preset"] = c.preset;
    ic["N"] = c.n_nodes;
    json &params = ic["parameters"];
    if (c.preset == "circle") {
        params["radius"] = c.radius;
        params["center"] = c.center;
    } else if (c.preset == "winding") {
        params["p"] = c.p;
        params["q"] = c.q;
        params["amplitude"] = c.amplitude;
        params["frequency"] = c.frequency;
    } else if (c.preset == "sphere_band") {
        params["amplitude"] = c.amplitude;
        params["frequency"] = c.frequency;
        params["phi_amplitude"] = c.phi_amplitude;
        params["phi_frequency"] = c.phi_frequency;
        params["phi0"] = c.phi0;
    } else {
        params["amplitudes"] = c.amplitudes;
        params["frequencies"] = c.frequencies;
    }
    if (c.perturbation) {
        json &p = ic["perturbation"];
        p["amplitude"] = c.perturbation->amplitude;
        p["frequency"] = c.perturbation->frequency;
        p["seed"] = c.perturbation->seed;
    }

    json &f = root["flow"];
    f["t_end"] = config.flow.t_end;
    f["dt_max"] = config.flow.dt_max;
    f["cfl_factor"] = config.flow.cfl_factor;
    f["resample_every"] = config.flow.resample_every;
    f["sample_every"] = config.flow.sample_every;
    f["m_max"] = config.flow.m_max;
    f["blowup_threshold"] = config.flow.blowup_threshold;
    f["scheme"] = to_string(config.flow.scheme);

    json &d = root["diagnostics"];
    d["forms"] = config.diagnostics.forms;
    d["checks"] = config.diagnostics.checks;
    d["tolerances"] = config.diagnostics.tolerances;

    json &o = root["output"];
    o["directory"] = config.output.directory;
    o["snapshot_every"] = config.output.snapshot_every;

    return root.dump(2) + "\n";
}

ModelPtr make_model(const ManifoldConfig &config) {
    if (config.kind == "euclidean")
        return std::make_shared<ManifoldModel>(ManifoldModel::euclidean(config.dim));
    if (config.kind == "flat_torus")
        return std::make_shared<ManifoldModel>(ManifoldModel::flat_torus(config.periods));
    if (config.kind == "cylinder_sphere")
        return std::make_shared<ManifoldModel>(ManifoldModel::cylinder_sphere(
            config.sphere_dim, config.sphere_radius, config.pole_margin));
    fail(ErrorKind::Config, "unknown manifold kind: " + config.kind);
}

std::vector<int> resolve_forms(const ManifoldModel &model, const DiagnosticsConfig &config) {
    std::vector<int> out;
    if (config.forms.empty()) {
        out.push_back(0);
        return out;
    }
    for (const std::string &name : config.forms) {
        int idx = model.parallel_form_index(name);
        if (idx < 0)
            fail(ErrorKind::Config, "form \"" + name + "\" is not declared on this model");
        out.push_back(idx);
    }
    return out;
}

} // namespace csf
