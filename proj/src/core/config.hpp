#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/flow.hpp"
#include "core/manifold.hpp"

namespace csf {

struct ManifoldConfig {
    std::string kind; // euclidean | flat_torus | cylinder_sphere
    int dim = 0;
    std::vector<double> periods;
    int sphere_dim = 0;
    double sphere_radius = 0.0;
    double pole_margin = ManifoldModel::kDefaultPoleMargin;

    bool operator==(const ManifoldConfig &) const = default;
};

struct PerturbationConfig {
    double amplitude = 0.0;
    int frequency = 1;
    std::uint64_t seed = 0;

    bool operator==(const PerturbationConfig &) const = default;
};

struct InitialCurveConfig {
    std::string preset; // circle | winding | sphere_band | periodic_graph
    int n_nodes = 0;
    // circle
    double radius = 1.0;
    std::vector<double> center;
    // winding / sphere_band
    int p = 1;
    int q = 0;
    double amplitude = 0.0;
    int frequency = 1;
    double phi_amplitude = 0.0;
    int phi_frequency = 1;
    double phi0 = 0.0;
    // periodic_graph
    std::vector<double> amplitudes;
    std::vector<int> frequencies;

    std::optional<PerturbationConfig> perturbation;

    bool operator==(const InitialCurveConfig &) const = default;
};

struct DiagnosticsConfig {
    std::vector<std::string> forms;  // first entry is the primary form
    std::vector<std::string> checks; // mono_min_omega | a2mu2 | interp | convergence
    std::map<std::string, double> tolerances;

    double tolerance(const std::string &key, double fallback) const;

    bool operator==(const DiagnosticsConfig &) const = default;
};

struct OutputConfig {
    std::string directory = "out";
    int snapshot_every = 10; // in samples; 0 = final snapshot only

    bool operator==(const OutputConfig &) const = default;
};

struct FlowConfigEq : FlowConfig {
    bool operator==(const FlowConfigEq &other) const {
        return t_end == other.t_end && dt_max == other.dt_max &&
               cfl_factor == other.cfl_factor && resample_every == other.resample_every &&
               sample_every == other.sample_every && m_max == other.m_max &&
               blowup_threshold == other.blowup_threshold && scheme == other.scheme;
    }
};

struct RunConfig {
    ManifoldConfig manifold;
    InitialCurveConfig initial_curve;
    FlowConfigEq flow;
    DiagnosticsConfig diagnostics;
    OutputConfig output;

    bool operator==(const RunConfig &) const = default;
};

// Strict parsing: unknown keys anywhere are configuration errors.
RunConfig parse_config_text(const std::string &json_text);
RunConfig parse_config_file(const std::string &path);
std::string serialize_config(const RunConfig &config);

// Block-level parsers for embedding the library without a full run
// configuration.
InitialCurveConfig parse_initial_curve_text(const std::string &json_text, int dim);
FlowConfigEq parse_flow_text(const std::string &json_text);

ModelPtr make_model(const ManifoldConfig &config);

// Resolves form names against the model; throws on unknown names.  An empty
// list resolves to the model's first declared form.
std::vector<int> resolve_forms(const ManifoldModel &model, const DiagnosticsConfig &config);

} // namespace csf
