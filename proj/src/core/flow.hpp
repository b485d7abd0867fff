#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "core/curve.hpp"

namespace csf {

enum class Scheme { Euler, Rk2 };

const char *to_string(Scheme scheme);
Scheme scheme_from_string(const std::string &name);

struct FlowConfig {
    double t_end = 0.0;
    double dt_max = 1e-2;
    double cfl_factor = 0.5;
    int resample_every = 10;
    double sample_every = 0.0;
    int m_max = 3;
    double blowup_threshold = 1e6;
    Scheme scheme = Scheme::Rk2;

    void validate() const;
};

struct FlowState {
    double t = 0.0;
    std::int64_t step = 0;
    DiscreteCurve curve;
    CurveGeometry geometry; // always consistent with curve, m_max >= 0

    FlowState(DiscreteCurve c, CurveGeometry g)
        : curve(std::move(c)), geometry(std::move(g)) {}
};

FlowState make_flow_state(DiscreteCurve curve);

// Parabolic step bound: min(dt_max, cfl * (min ds)^2 / 2, time to the next
// sample boundary or t_end).  The boundary remainder is split into equal
// substeps so no step degenerates as a boundary is approached.
double stable_dt(const FlowState &state, const FlowConfig &config);

// One explicit step of size dt (no resampling): x <- x + dt * H, wrapped,
// geometry recomputed.
FlowState flow_substep(const FlowState &state, const FlowConfig &config, double dt);

// stable_dt + substep + cadenced resampling; matches one loop iteration of
// advance without sampling hooks.
FlowState flow_step(const FlowState &state, const FlowConfig &config);

bool detect_blowup(const FlowState &state, const FlowConfig &config);

enum class Termination { Completed, Blowup, Error };

const char *to_string(Termination termination);

struct AdvanceResult {
    Termination termination = Termination::Completed;
    ErrorKind error_kind = ErrorKind::Internal;
    std::string error_message;
};

// Called whenever the flow lands on a multiple of sample_every.  prev and
// next are exactly one substep apart with no resampling in between; at t = 0
// prev == next and dt == 0.
using SampleHook =
    std::function<void(const FlowState &prev, const FlowState &next, double dt)>;

AdvanceResult advance(FlowState &state, const FlowConfig &config, const SampleHook &hook);

} // namespace csf
