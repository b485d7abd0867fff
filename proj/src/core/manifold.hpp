#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace csf {

enum class ModelKind { Euclidean, FlatTorus, CylinderSphere };

const char *to_string(ModelKind kind);

// A chart point is a plain array of doubles of length dim(); angular
// coordinates are in radians and periodic ones live in [0, period).
using Point = std::vector<double>;

// A covector field evaluated pointwise: writes dim() components.
using CovectorField = std::function<void(const double *point, double *components)>;

// Ambient geometry in a single explicit chart.  Three fixed families:
//   euclidean(n)                   - R^n, identity metric
//   flat_torus(periods)            - quotient of R^n, coordinates in length units
//   cylinder_sphere(k, r)          - S^1 x S^k_r, chart (u, theta_1..theta_k)
//                                    with u and theta_k periodic of period 2*pi
//                                    and theta_1..theta_{k-1} polar in (0, pi)
//
// All metrics here are diagonal in their chart; the dense accessors exist for
// the public surface and tests, the diagonal/contraction paths are what the
// solvers use.
class ManifoldModel {
public:
    static constexpr double kDefaultPoleMargin = 0.05;

    static ManifoldModel euclidean(int dim);
    static ManifoldModel flat_torus(std::vector<double> periods);
    static ManifoldModel cylinder_sphere(int sphere_dim, double sphere_radius,
                                         double pole_margin = kDefaultPoleMargin);

    ModelKind kind() const { return kind_; }
    int dim() const { return dim_; }
    bool is_flat() const { return kind_ != ModelKind::CylinderSphere || sphere_dim_ < 2; }
    double sphere_radius() const { return sphere_radius_; }
    int sphere_dim() const { return sphere_dim_; }
    double pole_margin() const { return pole_margin_; }
    const std::vector<double> &periods() const { return periods_; }

    // max |R(T,H,T,H)| / |H|^2 over unit tangents; 0 for flat models.
    double curvature_bound() const;

    // Periodic structure: period(i) > 0 for periodic coordinates, 0 otherwise.
    double period(int i) const { return periods_[static_cast<size_t>(i)]; }
    double wrap_coord(int i, double x) const;
    double wrap_diff(int i, double d) const; // minimal representative in [-P/2, P/2]
    void canonicalize(double *coords) const;

    // Throws PoleProximity if a polar angle is within pole_margin of {0, pi}.
    void check_chart(const double *p) const;

    void metric(const double *p, double *out) const;      // dim x dim, row-major
    void metric_diag(const double *p, double *out) const; // dim entries
    double inner(const double *p, const double *x, const double *y) const;

    void christoffel(const double *p, double *out) const; // out[(k*dim+i)*dim+j] = Gamma^k_ij
    // w^k = Gamma^k_ab u^a v^b
    void christoffel_contract(const double *p, const double *u, const double *v,
                              double *out) const;

    double riemann(const double *p, const double *x, const double *y,
                   const double *z, const double *w) const;

    int parallel_form_count() const { return static_cast<int>(form_names_.size()); }
    const std::string &parallel_form_name(int index) const;
    int parallel_form_index(const std::string &name) const; // -1 if absent
    void parallel_form(int index, const double *p, double *out) const;

    // max_{i,j} |d_i Omega_j - Gamma^k_ij Omega_k| at p, with d_i by central
    // differences of step h.
    double check_parallel(const CovectorField &form, const double *p, double h) const;
    double check_parallel(int form_index, const double *p, double h) const;

private:
    ManifoldModel() = default;

    bool polar_in_margin(const double *p) const;

    ModelKind kind_ = ModelKind::Euclidean;
    int dim_ = 0;
    std::vector<double> periods_; // per coordinate; 0 marks non-periodic
    int sphere_dim_ = 0;
    double sphere_radius_ = 0.0;
    double pole_margin_ = kDefaultPoleMargin;
    std::vector<std::string> form_names_;
};

using ModelPtr = std::shared_ptr<const ManifoldModel>;

} // namespace csf
