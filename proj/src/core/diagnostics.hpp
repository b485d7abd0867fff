#pragma once

#include <optional>
#include <vector>

#include "core/flow.hpp"

namespace csf {

inline constexpr double kEpsPositiveOmega = 1e-8;

// One sampled row of the run time series.  mu-derived entries are NaN when
// min Omega(T) drops below the positivity floor.
struct DiagnosticsRecord {
    double t = 0.0;
    double length = 0.0;
    double min_omega_t = 0.0;
    double max_omega_t = 0.0;
    double max_mu = 0.0;
    double max_a2 = 0.0;
    std::vector<double> max_grad_a2; // m = 1..m_max
    double int_a2 = 0.0;
    std::vector<double> int_grad_a2; // m = 1..m_max
    double residual_ep = 0.0;
    double residual_eqsf = 0.0;
    double residual_length = 0.0;
    double residual_gf = 0.0;
    double bound_a2mu2 = 0.0; // max_i |A|^2 mu^2
    double interp_ta = 0.0;   // min normalized margin over m
    double interp_tb = 0.0;

    static std::string csv_header(int m_max);
    std::string csv_row() const;
};

// Omega(T) per node for a declared parallel form, plus extrema.
struct OmegaValues {
    std::vector<double> values;
    double min = 0.0;
    double max = 0.0;
};

OmegaValues omega_t(const ManifoldModel &model, const CurveGeometry &geometry,
                    int form_index);

// mu = 1/Omega(T); throws NonPositiveOmega when min Omega(T) <= eps_pos.
std::vector<double> mu(const ManifoldModel &model, const CurveGeometry &geometry,
                       int form_index, double eps_pos = kEpsPositiveOmega);

// Non-uniform centered first/second arc-length differences of a node field.
std::vector<double> arc_first_diff(const CurveGeometry &geometry,
                                   const std::vector<double> &field);
std::vector<double> arc_second_diff(const CurveGeometry &geometry,
                                    const std::vector<double> &field);

// Max-node residual of d/dt Omega(T) = Lap Omega(T) + |A|^2 Omega(T) across
// one step pair.  For rk2 the right side is the prev/next average.
double residual_form_evolution(const ManifoldModel &model, const CurveGeometry &prev,
                               const CurveGeometry &next, double dt, Scheme scheme,
                               int form_index);

// Max-node residual of
// d/dt |A|^2 = Lap |A|^2 - 2|grad A|^2 + 2|A|^4 + 2 R(T,H,T,H).
// Geometries need m_max >= 1.
double residual_a2_evolution(const DiscreteCurve &prev_curve, const CurveGeometry &prev,
                             const DiscreteCurve &next_curve, const CurveGeometry &next,
                             double dt, Scheme scheme);

// Max-node residual of (d/dt - Lap) mu = -|A|^2 mu - 2 mu^{-1} (d mu/ds)^2.
double residual_mu_evolution(const ManifoldModel &model, const CurveGeometry &prev,
                             const CurveGeometry &next, double dt, Scheme scheme,
                             int form_index, double eps_pos = kEpsPositiveOmega);

// Per-sample residual of dL/dt = -int |A|^2 ds from the sampled series;
// centered differences at interior samples, 0 at the ends.  Needs >= 3
// samples.
std::vector<double> residual_length_series(const std::vector<double> &times,
                                           const std::vector<double> &lengths,
                                           const std::vector<double> &int_a2);

// Worst sample-to-sample decrease of min Omega(T) (positive = a drop).
double worst_min_omega_decrease(const std::vector<DiagnosticsRecord> &records);

struct A2Mu2Check {
    bool ok = true;
    double worst_step_increase = 0.0; // flat models: max (next - prev)
    double worst_bound_ratio = 0.0;   // max value / (e^{2 C0 t} * initial)
};

A2Mu2Check check_a2mu2(const std::vector<DiagnosticsRecord> &records, double c0,
                       double tol_exp = 1e-2, double tol_flat = 1e-8);

struct InterpMargins {
    double ta = 0.0; // min over m of normalized (a*I_m + 2*I_{m+1} - max_m)
    double tb = 0.0; // min over m of normalized (I_{m-1}*I_{m+1} - I_m^2)
};

// Evaluated on an internally uniformized copy of the curve with constant-step
// stencils and weights, so the discrete integration-by-parts chain behind the
// inequalities holds exactly on flat models.
InterpMargins interpolation_checks(const DiscreteCurve &curve, int m_max);

struct ConvergenceVerdict {
    int m = 0;
    double final_value = 0.0; // max |grad^m A| at the last sample
    bool decreasing = false;  // over the last quarter of the series
    bool converged = false;
};

std::vector<ConvergenceVerdict> convergence_report(
    const std::vector<DiagnosticsRecord> &records, int m_max, double conv_tol_a = 1e-3,
    double conv_tol_grad = 1e-2, double length_floor = 1e-6);

} // namespace csf
