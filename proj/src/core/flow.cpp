#include "core/flow.hpp"

#include <cmath>

#include "core/log.hpp"
#include "core/text.hpp"

namespace csf {

const char *to_string(Scheme scheme) {
    return scheme == Scheme::Euler ? "euler" : "rk2";
}

Scheme scheme_from_string(const std::string &name) {
    if (name == "euler") return Scheme::Euler;
    if (name == "rk2") return Scheme::Rk2;
    fail(ErrorKind::Config, "unknown scheme: " + name);
}

void FlowConfig::validate() const {
    if (!(t_end > 0.0)) fail(ErrorKind::Config, "t_end must be positive");
    if (!(dt_max > 0.0)) fail(ErrorKind::Config, "dt_max must be positive");
    if (!(cfl_factor > 0.0) || cfl_factor > 1.0)
        fail(ErrorKind::Config, "cfl_factor must be in (0, 1]");
    if (resample_every < 1) fail(ErrorKind::Config, "resample_every must be >= 1");
    if (!(sample_every > 0.0)) fail(ErrorKind::Config, "sample_every must be positive");
    if (m_max < 0) fail(ErrorKind::Config, "m_max must be >= 0");
    if (!(blowup_threshold > 0.0)) fail(ErrorKind::Config, "blowup_threshold must be positive");
}

FlowState make_flow_state(DiscreteCurve curve) {
    CurveGeometry geometry = compute_geometry(curve, 0);
    return FlowState(std::move(curve), std::move(geometry));
}

namespace {

// Next sampling boundary strictly after t.
double next_boundary(double t, const FlowConfig &config) {
    double k = std::floor(t / config.sample_every) + 1.0;
    double boundary = k * config.sample_every;
    if (boundary - t < 1e-12 * config.sample_every) boundary += config.sample_every;
    return std::min(boundary, config.t_end);
}

} // namespace

double stable_dt(const FlowState &state, const FlowConfig &config) {
    double min_ds = state.geometry.min_edge_length();
    if (!(min_ds > DiscreteCurve::kDegenerateEdge))
        fail(ErrorKind::DegenerateEdge, "minimum edge length below degeneracy threshold");
    double dt_cfl = config.cfl_factor * min_ds * min_ds * 0.5;
    double dt_cap = std::min(config.dt_max, dt_cfl);
    double remaining = next_boundary(state.t, config) - state.t;
    if (remaining <= dt_cap) return remaining;
    double n = std::ceil(remaining / dt_cap - 1e-12);
    return remaining / n;
}

namespace {

std::vector<double> displaced_coords(const DiscreteCurve &curve,
                                     const std::vector<double> &velocity, double dt) {
    const ManifoldModel &model = curve.model();
    const int dim = curve.dim();
    std::vector<double> out(curve.coords());
    for (size_t idx = 0; idx < out.size(); ++idx) out[idx] += dt * velocity[idx];
    for (int i = 0; i < curve.node_count(); ++i)
        model.canonicalize(out.data() + static_cast<size_t>(i) * static_cast<size_t>(dim));
    for (double c : out)
        if (!std::isfinite(c)) fail(ErrorKind::NonFinite, "non-finite coordinate after update");
    return out;
}

} // namespace

FlowState flow_substep(const FlowState &state, const FlowConfig &config, double dt) {
    if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
    std::vector<double> coords;
    if (config.scheme == Scheme::Euler) {
        coords = displaced_coords(state.curve, state.geometry.curvature, dt);
    } else {
        DiscreteCurve half(state.curve.model_ptr(),
                           displaced_coords(state.curve, state.geometry.curvature, 0.5 * dt));
        CurveGeometry half_geom = compute_geometry(half, 0);
        coords = displaced_coords(state.curve, half_geom.curvature, dt);
    }
    DiscreteCurve curve(state.curve.model_ptr(), std::move(coords));
    CurveGeometry geometry = compute_geometry(curve, 0);
    FlowState next(std::move(curve), std::move(geometry));
    next.t = state.t + dt;
    next.step = state.step + 1;
    return next;
}

FlowState flow_step(const FlowState &state, const FlowConfig &config) {
    double dt = stable_dt(state, config);
    FlowState next = flow_substep(state, config, dt);
    if (next.step % config.resample_every == 0) {
        next.curve = resample_uniform(next.curve);
        next.geometry = compute_geometry(next.curve, 0);
    }
    return next;
}

bool detect_blowup(const FlowState &state, const FlowConfig &config) {
    return state.geometry.max_a2() > config.blowup_threshold;
}

AdvanceResult advance(FlowState &state, const FlowConfig &config, const SampleHook &hook) {
    config.validate();
    AdvanceResult result;
    try {
        if (hook && state.t == 0.0) hook(state, state, 0.0);
        if (detect_blowup(state, config)) {
            result.termination = Termination::Blowup;
            return result;
        }
        const double t_eps = 1e-12 * config.t_end;
        while (state.t < config.t_end - t_eps) {
            double boundary = next_boundary(state.t, config);
            double dt = stable_dt(state, config);
            bool lands = state.t + dt >= boundary - 1e-12 * config.sample_every;
            FlowState next = flow_substep(state, config, dt);
            if (lands) {
                next.t = boundary; // keep the sample grid exactly uniform
                if (hook) hook(state, next, dt);
            }
            state = std::move(next);
            if (detect_blowup(state, config)) {
                result.termination = Termination::Blowup;
                return result;
            }
            if (state.step % config.resample_every == 0) {
                state.curve = resample_uniform(state.curve);
                state.geometry = compute_geometry(state.curve, 0);
            }
        }
        result.termination = Termination::Completed;
    } catch (const Error &e) {
        log_error(std::string("flow terminated: ") + to_string(e.kind()) + ": " + e.what());
        result.termination = Termination::Error;
        result.error_kind = e.kind();
        result.error_message = e.what();
    }
    return result;
}

const char *to_string(Termination termination) {
    switch (termination) {
    case Termination::Completed: return "completed";
    case Termination::Blowup: return "blowup";
    case Termination::Error: return "error";
    }
    return "unknown";
}

} // namespace csf
