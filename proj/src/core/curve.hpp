#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "core/manifold.hpp"

namespace csf {

// Closed polyline in chart coordinates, cyclically ordered.
class DiscreteCurve {
public:
    static constexpr int kMinNodes = 16;
    static constexpr double kDegenerateEdge = 1e-10;

    DiscreteCurve(ModelPtr model, std::vector<double> coords);

    const ManifoldModel &model() const { return *model_; }
    const ModelPtr &model_ptr() const { return model_; }
    int node_count() const { return node_count_; }
    int dim() const { return model_->dim(); }
    const std::vector<double> &coords() const { return coords_; }
    const double *node(int i) const {
        return coords_.data() + static_cast<size_t>(i) * static_cast<size_t>(dim());
    }

private:
    ModelPtr model_;
    std::vector<double> coords_; // node_count * dim, canonically wrapped
    int node_count_ = 0;
};

// Per-node derived quantities.  grad_fields[m] holds the normal-bundle chain
// starting at the curvature vector (grad_fields[0] aliases curvature);
// a_norms[m][i] = |grad_fields[m]|_g^2 at node i.
struct CurveGeometry {
    int node_count = 0;
    int dim = 0;
    int m_max = 0;
    double length = 0.0;
    double max_tangential_defect = 0.0; // max |<H_raw, T>| before projection

    std::vector<double> edge_lengths; // N, edge i -> i+1
    std::vector<double> node_weights; // N, (ds_{i-1} + ds_i)/2
    std::vector<double> metric_diag;  // N*dim, metric diagonal at each node
    std::vector<double> tangents;     // N*dim, unit
    std::vector<double> curvature;    // N*dim, normal by construction
    std::vector<std::vector<double>> grad_fields; // (m_max+1) x N*dim
    std::vector<std::vector<double>> a_norms;     // (m_max+1) x N

    double max_a2() const;
    double max_a_norm(int m) const;
    double min_edge_length() const;
};

// Tangent, curvature vector and |grad^m A|^2 chain up to m_max.
CurveGeometry compute_geometry(const DiscreteCurve &curve, int m_max);

// Extends the normal-bundle chain of an existing geometry up to m_max.
void higher_a(const DiscreteCurve &curve, CurveGeometry &geometry, int m_max);

// Trapezoidal integral of a per-node field over the closed curve.
double integrate_scalar(const CurveGeometry &geometry, std::span<const double> field);

// Same trace, equal arc-length spacing; periodic cubic interpolation on
// unwrapped coordinates.
DiscreteCurve resample_uniform(const DiscreteCurve &curve);

void write_curve_csv(const DiscreteCurve &curve, std::ostream &out);
DiscreteCurve read_curve_csv(ModelPtr model, std::istream &in);

} // namespace csf
