#include "csf/csf.h"

#include <cstring>
#include <fstream>
#include <string>

#include "core/config.hpp"
#include "core/curve.hpp"
#include "core/diagnostics.hpp"
#include "core/flow.hpp"
#include "core/log.hpp"
#include "core/manifold.hpp"
#include "core/presets.hpp"
#include "core/runner.hpp"

struct csf_model {
    csf::ModelPtr model;
};

struct csf_curve {
    csf::DiscreteCurve curve;
};

struct csf_flow {
    csf::FlowState state;
    csf::FlowConfig config;
};

namespace {

thread_local std::string t_last_error;

csf_status status_for(csf::ErrorKind kind) {
    using csf::ErrorKind;
    switch (kind) {
    case ErrorKind::InvalidArgument: return CSF_ERR_INVALID_ARGUMENT;
    case ErrorKind::Config: return CSF_ERR_CONFIG;
    case ErrorKind::PoleProximity: return CSF_ERR_POLE_PROXIMITY;
    case ErrorKind::DegenerateEdge: return CSF_ERR_DEGENERATE_EDGE;
    case ErrorKind::NonFinite: return CSF_ERR_NONFINITE;
    case ErrorKind::NonPositiveOmega: return CSF_ERR_NONPOSITIVE_OMEGA;
    case ErrorKind::ShapeMismatch: return CSF_ERR_SHAPE_MISMATCH;
    case ErrorKind::InsufficientSamples: return CSF_ERR_INSUFFICIENT_SAMPLES;
    case ErrorKind::Io: return CSF_ERR_IO;
    case ErrorKind::Internal: return CSF_ERR_INTERNAL;
    }
    return CSF_ERR_INTERNAL;
}

csf_status fail_status(csf_status status, const char *message) {
    t_last_error = message;
    return status;
}

template <typename Fn>
csf_status guarded(Fn &&fn) {
    try {
        fn();
        return CSF_OK;
    } catch (const csf::Error &e) {
        t_last_error = e.what();
        return status_for(e.kind());
    } catch (const std::exception &e) {
        t_last_error = e.what();
        return CSF_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return CSF_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

const char *csf_version(void) { return "1.0.0"; }

const char *csf_status_string(csf_status status) {
    switch (status) {
    case CSF_OK: return "ok";
    case CSF_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CSF_ERR_CONFIG: return "config_error";
    case CSF_ERR_POLE_PROXIMITY: return "pole_proximity";
    case CSF_ERR_DEGENERATE_EDGE: return "degenerate_edge";
    case CSF_ERR_NONFINITE: return "non_finite";
    case CSF_ERR_NONPOSITIVE_OMEGA: return "non_positive_omega";
    case CSF_ERR_SHAPE_MISMATCH: return "shape_mismatch";
    case CSF_ERR_INSUFFICIENT_SAMPLES: return "insufficient_samples";
    case CSF_ERR_IO: return "io_error";
    case CSF_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char *csf_last_error_message(void) { return t_last_error.c_str(); }

void csf_set_log_level(int level) {
    if (level <= 0)
        csf::set_log_level(csf::LogLevel::Error);
    else if (level == 1)
        csf::set_log_level(csf::LogLevel::Info);
    else
        csf::set_log_level(csf::LogLevel::Debug);
}

/* ---- models ------------------------------------------------------------- */

csf_status csf_model_create_euclidean(int dim, csf_model **out) {
    if (out == nullptr) return fail_status(CSF_ERR_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        *out = new csf_model{
            std::make_shared<csf::ManifoldModel>(csf::ManifoldModel::euclidean(dim))};
    });
}

csf_status csf_model_create_flat_torus(const double *periods, int dim, csf_model **out) {
    if (out == nullptr || periods == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new csf_model{std::make_shared<csf::ManifoldModel>(
            csf::ManifoldModel::flat_torus(std::vector<double>(periods, periods + dim)))};
    });
}

csf_status csf_model_create_cylinder_sphere(int sphere_dim, double sphere_radius,
                                            double pole_margin, csf_model **out) {
    if (out == nullptr) return fail_status(CSF_ERR_INVALID_ARGUMENT, "out is null");
    return guarded([&] {
        double margin = pole_margin > 0.0 ? pole_margin : csf::ManifoldModel::kDefaultPoleMargin;
        *out = new csf_model{std::make_shared<csf::ManifoldModel>(
            csf::ManifoldModel::cylinder_sphere(sphere_dim, sphere_radius, margin))};
    });
}

void csf_model_free(csf_model *model) { delete model; }

int csf_model_dim(const csf_model *model) { return model ? model->model->dim() : 0; }

double csf_model_period(const csf_model *model, int coordinate) {
    if (model == nullptr || coordinate < 0 || coordinate >= model->model->dim()) return 0.0;
    return model->model->period(coordinate);
}

double csf_model_curvature_bound(const csf_model *model) {
    return model ? model->model->curvature_bound() : 0.0;
}

csf_status csf_model_metric(const csf_model *model, const double *point, double *out_matrix) {
    if (model == nullptr || point == nullptr || out_matrix == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { model->model->metric(point, out_matrix); });
}

csf_status csf_model_christoffel(const csf_model *model, const double *point, double *out) {
    if (model == nullptr || point == nullptr || out == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { model->model->christoffel(point, out); });
}

csf_status csf_model_riemann(const csf_model *model, const double *point, const double *x,
                             const double *y, const double *z, const double *w,
                             double *out_value) {
    if (model == nullptr || point == nullptr || x == nullptr || y == nullptr ||
        z == nullptr || w == nullptr || out_value == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out_value = model->model->riemann(point, x, y, z, w); });
}

int csf_model_parallel_form_count(const csf_model *model) {
    return model ? model->model->parallel_form_count() : 0;
}

csf_status csf_model_parallel_form(const csf_model *model, int index, const double *point,
                                   double *out_components, char *name_buffer,
                                   size_t name_buffer_size) {
    if (model == nullptr || point == nullptr || out_components == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        model->model->parallel_form(index, point, out_components);
        if (name_buffer != nullptr && name_buffer_size > 0) {
            const std::string &name = model->model->parallel_form_name(index);
            std::strncpy(name_buffer, name.c_str(), name_buffer_size - 1);
            name_buffer[name_buffer_size - 1] = '\0';
        }
    });
}

csf_status csf_model_check_parallel(const csf_model *model, int form_index,
                                    const double *point, double h, double *out_residual) {
    if (model == nullptr || point == nullptr || out_residual == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out_residual = model->model->check_parallel(form_index, point, h); });
}

/* ---- curves ------------------------------------------------------------- */

csf_status csf_curve_create(const csf_model *model, const double *coords, int node_count,
                            csf_curve **out) {
    if (model == nullptr || coords == nullptr || out == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        size_t total = static_cast<size_t>(node_count) * static_cast<size_t>(model->model->dim());
        *out = new csf_curve{
            csf::DiscreteCurve(model->model, std::vector<double>(coords, coords + total))};
    });
}

csf_status csf_curve_from_config(const csf_model *model, const char *initial_curve_json,
                                 csf_curve **out) {
    if (model == nullptr || initial_curve_json == nullptr || out == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        csf::InitialCurveConfig config =
            csf::parse_initial_curve_text(initial_curve_json, model->model->dim());
        *out = new csf_curve{csf::make_initial_curve(model->model, config)};
    });
}

void csf_curve_free(csf_curve *curve) { delete curve; }

int csf_curve_node_count(const csf_curve *curve) {
    return curve ? curve->curve.node_count() : 0;
}

csf_status csf_curve_coords(const csf_curve *curve, double *out) {
    if (curve == nullptr || out == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    const std::vector<double> &c = curve->curve.coords();
    std::memcpy(out, c.data(), c.size() * sizeof(double));
    return CSF_OK;
}

csf_status csf_curve_resample_uniform(const csf_curve *curve, csf_curve **out) {
    if (curve == nullptr || out == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new csf_curve{csf::resample_uniform(curve->curve)}; });
}

csf_status csf_curve_write_csv(const csf_curve *curve, const char *path) {
    if (curve == nullptr || path == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ofstream out(path, std::ios::binary);
        if (!out) csf::fail(csf::ErrorKind::Io, std::string("cannot open: ") + path);
        csf::write_curve_csv(curve->curve, out);
    });
}

csf_status csf_curve_read_csv(const csf_model *model, const char *path, csf_curve **out) {
    if (model == nullptr || path == nullptr || out == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) csf::fail(csf::ErrorKind::Io, std::string("cannot open: ") + path);
        *out = new csf_curve{csf::read_curve_csv(model->model, in)};
    });
}

csf_status csf_curve_geometry(const csf_curve *curve, int m_max, double *out_length,
                              double *out_edge_lengths, double *out_tangents,
                              double *out_curvature, double *out_a_norms) {
    if (curve == nullptr) return fail_status(CSF_ERR_INVALID_ARGUMENT, "curve is null");
    return guarded([&] {
        csf::CurveGeometry g = csf::compute_geometry(curve->curve, m_max);
        size_t n = static_cast<size_t>(g.node_count);
        size_t nd = n * static_cast<size_t>(g.dim);
        if (out_length != nullptr) *out_length = g.length;
        if (out_edge_lengths != nullptr)
            std::memcpy(out_edge_lengths, g.edge_lengths.data(), n * sizeof(double));
        if (out_tangents != nullptr)
            std::memcpy(out_tangents, g.tangents.data(), nd * sizeof(double));
        if (out_curvature != nullptr)
            std::memcpy(out_curvature, g.curvature.data(), nd * sizeof(double));
        if (out_a_norms != nullptr)
            for (int m = 0; m <= m_max; ++m)
                std::memcpy(out_a_norms + static_cast<size_t>(m) * n,
                            g.a_norms[static_cast<size_t>(m)].data(), n * sizeof(double));
    });
}

csf_status csf_curve_integrate_scalar(const csf_curve *curve, const double *field,
                                      double *out_value) {
    if (curve == nullptr || field == nullptr || out_value == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        csf::CurveGeometry g = csf::compute_geometry(curve->curve, 0);
        *out_value = csf::integrate_scalar(
            g, std::span<const double>(field, static_cast<size_t>(g.node_count)));
    });
}

csf_status csf_curve_omega_range(const csf_curve *curve, int form_index, double *out_min,
                                 double *out_max) {
    if (curve == nullptr || out_min == nullptr || out_max == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        csf::CurveGeometry g = csf::compute_geometry(curve->curve, 0);
        csf::OmegaValues omega = csf::omega_t(curve->curve.model(), g, form_index);
        *out_min = omega.min;
        *out_max = omega.max;
    });
}

/* ---- flow --------------------------------------------------------------- */

csf_status csf_flow_create(const csf_curve *initial, const char *flow_config_json,
                           csf_flow **out) {
    if (initial == nullptr || flow_config_json == nullptr || out == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        csf::FlowConfig config = csf::parse_flow_text(flow_config_json);
        *out = new csf_flow{csf::make_flow_state(initial->curve), config};
    });
}

void csf_flow_free(csf_flow *flow) { delete flow; }

double csf_flow_time(const csf_flow *flow) { return flow ? flow->state.t : 0.0; }

int64_t csf_flow_step_count(const csf_flow *flow) { return flow ? flow->state.step : 0; }

csf_status csf_flow_stable_dt(const csf_flow *flow, double *out_dt) {
    if (flow == nullptr || out_dt == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out_dt = csf::stable_dt(flow->state, flow->config); });
}

csf_status csf_flow_step(csf_flow *flow) {
    if (flow == nullptr) return fail_status(CSF_ERR_INVALID_ARGUMENT, "flow is null");
    return guarded([&] { flow->state = csf::flow_step(flow->state, flow->config); });
}

csf_status csf_flow_advance(csf_flow *flow, csf_termination *out_termination) {
    if (flow == nullptr || out_termination == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    csf::AdvanceResult result = csf::advance(flow->state, flow->config, nullptr);
    switch (result.termination) {
    case csf::Termination::Completed: *out_termination = CSF_TERM_COMPLETED; break;
    case csf::Termination::Blowup: *out_termination = CSF_TERM_BLOWUP; break;
    case csf::Termination::Error:
        *out_termination = CSF_TERM_ERROR;
        t_last_error = result.error_message;
        return status_for(result.error_kind);
    }
    return CSF_OK;
}

csf_status csf_flow_current_curve(const csf_flow *flow, csf_curve **out) {
    if (flow == nullptr || out == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { *out = new csf_curve{flow->state.curve}; });
}

csf_status csf_flow_max_a2(const csf_flow *flow, double *out_value) {
    if (flow == nullptr || out_value == nullptr)
        return fail_status(CSF_ERR_INVALID_ARGUMENT, "null argument");
    *out_value = flow->state.geometry.max_a2();
    return CSF_OK;
}

/* ---- experiments --------------------------------------------------------- */

int csf_run_experiment_file(const char *config_path, const char *out_dir) {
    if (config_path == nullptr) return csf::kExitConfig;
    return csf::run_experiment_file(config_path, out_dir ? out_dir : "");
}

int csf_run_experiment_text(const char *config_json, const char *out_dir) {
    if (config_json == nullptr) return csf::kExitConfig;
    return csf::run_experiment_text(config_json, out_dir ? out_dir : "");
}

int csf_validate_config_file(const char *config_path) {
    if (config_path == nullptr) return csf::kExitConfig;
    return csf::validate_config_file(config_path);
}

int csf_validate_config_text(const char *config_json) {
    if (config_json == nullptr) return csf::kExitConfig;
    return csf::validate_config_text(config_json);
}

} // extern "C"
