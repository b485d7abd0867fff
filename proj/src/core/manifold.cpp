#include "core/manifold.hpp"

#include <cmath>
#include <cstring>

#include "core/text.hpp"

namespace csf {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

const char *to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::Euclidean: return "euclidean";
    case ModelKind::FlatTorus: return "flat_torus";
    case ModelKind::CylinderSphere: return "cylinder_sphere";
    }
    return "unknown";
}

ManifoldModel ManifoldModel::euclidean(int dim) {
    if (dim < 1) fail(ErrorKind::Config, "euclidean dimension must be >= 1");
    ManifoldModel m;
    m.kind_ = ModelKind::Euclidean;
    m.dim_ = dim;
    m.periods_.assign(static_cast<size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) m.form_names_.push_back("dx" + format_int(i));
    return m;
}

ManifoldModel ManifoldModel::flat_torus(std::vector<double> periods) {
    if (periods.empty()) fail(ErrorKind::Config, "flat_torus needs at least one period");
    for (double p : periods)
        if (!(p > 0.0)) fail(ErrorKind::Config, "flat_torus periods must be positive");
    ManifoldModel m;
    m.kind_ = ModelKind::FlatTorus;
    m.dim_ = static_cast<int>(periods.size());
    m.periods_ = std::move(periods);
    static const char *short_names[3] = {"du", "dv", "dw"};
    for (int i = 0; i < m.dim_; ++i)
        m.form_names_.push_back(i < 3 ? short_names[i] : "dx" + format_int(i));
    return m;
}

ManifoldModel ManifoldModel::cylinder_sphere(int sphere_dim, double sphere_radius,
                                             double pole_margin) {
    if (sphere_dim < 1) fail(ErrorKind::Config, "sphere dimension must be >= 1");
    if (!(sphere_radius > 0.0)) fail(ErrorKind::Config, "sphere radius must be positive");
    if (!(pole_margin > 0.0) || pole_margin >= 1.5)
        fail(ErrorKind::Config, "pole margin must be in (0, 1.5)");
    ManifoldModel m;
    m.kind_ = ModelKind::CylinderSphere;
    m.dim_ = 1 + sphere_dim;
    m.sphere_dim_ = sphere_dim;
    m.sphere_radius_ = sphere_radius;
    m.pole_margin_ = pole_margin;
    m.periods_.assign(static_cast<size_t>(m.dim_), 0.0);
    m.periods_[0] = kTwoPi;                                // u
    m.periods_[static_cast<size_t>(m.dim_ - 1)] = kTwoPi;  // azimuthal angle
    if (sphere_dim == 1) m.periods_[1] = kTwoPi;
    m.form_names_.push_back("du");
    return m;
}

double ManifoldModel::curvature_bound() const {
    if (is_flat()) return 0.0;
    return 1.0 / (sphere_radius_ * sphere_radius_);
}

double ManifoldModel::wrap_coord(int i, double x) const {
    double period = periods_[static_cast<size_t>(i)];
    if (period <= 0.0) return x;
    double w = std::fmod(x, period);
    if (w < 0.0) w += period;
    if (w >= period) w = 0.0;
    return w;
}

double ManifoldModel::wrap_diff(int i, double d) const {
    double period = periods_[static_cast<size_t>(i)];
    if (period <= 0.0) return d;
    return d - period * std::round(d / period);
}

void ManifoldModel::canonicalize(double *coords) const {
    for (int i = 0; i < dim_; ++i) coords[i] = wrap_coord(i, coords[i]);
}

bool ManifoldModel::polar_in_margin(const double *p) const {
    if (kind_ != ModelKind::CylinderSphere || sphere_dim_ < 2) return false;
    constexpr double kPi = 3.1415926535897932384626433832795;
    for (int i = 1; i < sphere_dim_; ++i) {
        double theta = p[i];
        if (theta < pole_margin_ || theta > kPi - pole_margin_) return true;
    }
    return false;
}

void ManifoldModel::check_chart(const double *p) const {
    if (polar_in_margin(p))
        fail(ErrorKind::PoleProximity, "polar angle within margin of a chart pole");
}

void ManifoldModel::metric_diag(const double *p, double *out) const {
    check_chart(p);
    if (kind_ != ModelKind::CylinderSphere) {
        for (int i = 0; i < dim_; ++i) out[i] = 1.0;
        return;
    }
    out[0] = 1.0;
    double prod = sphere_radius_ * sphere_radius_;
    for (int i = 1; i <= sphere_dim_; ++i) {
        out[i] = prod;
        if (i < sphere_dim_) {
            double s = std::sin(p[i]);
            prod *= s * s;
        }
    }
}

void ManifoldModel::metric(const double *p, double *out) const {
    std::vector<double> diag(static_cast<size_t>(dim_));
    metric_diag(p, diag.data());
    std::memset(out, 0, sizeof(double) * static_cast<size_t>(dim_) * static_cast<size_t>(dim_));
    for (int i = 0; i < dim_; ++i) out[i * dim_ + i] = diag[static_cast<size_t>(i)];
}

double ManifoldModel::inner(const double *p, const double *x, const double *y) const {
    if (kind_ != ModelKind::CylinderSphere) {
        double acc = 0.0;
        for (int i = 0; i < dim_; ++i) acc += x[i] * y[i];
        return acc;
    }
    check_chart(p);
    double acc = x[0] * y[0];
    double prod = sphere_radius_ * sphere_radius_;
    for (int i = 1; i <= sphere_dim_; ++i) {
        acc += prod * x[i] * y[i];
        if (i < sphere_dim_) {
            double s = std::sin(p[i]);
            prod *= s * s;
        }
    }
    return acc;
}

void ManifoldModel::christoffel(const double *p, double *out) const {
    check_chart(p);
    const size_t n = static_cast<size_t>(dim_);
    std::memset(out, 0, sizeof(double) * n * n * n);
    if (is_flat()) return;

    std::vector<double> diag(n);
    metric_diag(p, diag.data());
    auto at = [&](int k, int i, int j) -> double & {
        return out[(static_cast<size_t>(k) * n + static_cast<size_t>(i)) * n +
                   static_cast<size_t>(j)];
    };
    // Sphere block: indices 1..sphere_dim; polar angles are 1..sphere_dim-1.
    for (int a = 1; a < sphere_dim_; ++a) {
        double cot = std::cos(p[a]) / std::sin(p[a]);
        for (int c = a + 1; c <= sphere_dim_; ++c) {
            at(c, a, c) = cot;
            at(c, c, a) = cot;
            at(a, c, c) = -(diag[static_cast<size_t>(c)] / diag[static_cast<size_t>(a)]) * cot;
        }
    }
}

void ManifoldModel::christoffel_contract(const double *p, const double *u,
                                         const double *v, double *out) const {
    for (int i = 0; i < dim_; ++i) out[i] = 0.0;
    if (is_flat()) return;
    check_chart(p);
    std::vector<double> diag(static_cast<size_t>(dim_));
    metric_diag(p, diag.data());
    for (int a = 1; a < sphere_dim_; ++a) {
        double cot = std::cos(p[a]) / std::sin(p[a]);
        for (int c = a + 1; c <= sphere_dim_; ++c) {
            out[c] += cot * (u[a] * v[c] + u[c] * v[a]);
            out[a] -= (diag[static_cast<size_t>(c)] / diag[static_cast<size_t>(a)]) * cot *
                      u[c] * v[c];
        }
    }
}

double ManifoldModel::riemann(const double *p, const double *x, const double *y,
                              const double *z, const double *w) const {
    if (is_flat()) return 0.0;
    check_chart(p);
    // Constant curvature 1/r^2 on the sphere block, flat in u:
    // R(X,Y,Z,W) = kappa * (<X,Z><Y,W> - <Y,Z><X,W>) restricted to the block.
    std::vector<double> diag(static_cast<size_t>(dim_));
    metric_diag(p, diag.data());
    auto sphere_inner = [&](const double *a, const double *b) {
        double acc = 0.0;
        for (int i = 1; i <= sphere_dim_; ++i) acc += diag[static_cast<size_t>(i)] * a[i] * b[i];
        return acc;
    };
    double kappa = 1.0 / (sphere_radius_ * sphere_radius_);
    return kappa * (sphere_inner(x, z) * sphere_inner(y, w) -
                    sphere_inner(y, z) * sphere_inner(x, w));
}

const std::string &ManifoldModel::parallel_form_name(int index) const {
    if (index < 0 || index >= parallel_form_count())
        fail(ErrorKind::InvalidArgument, "parallel form index out of range");
    return form_names_[static_cast<size_t>(index)];
}

int ManifoldModel::parallel_form_index(const std::string &name) const {
    for (size_t i = 0; i < form_names_.size(); ++i)
        if (form_names_[i] == name) return static_cast<int>(i);
    return -1;
}

void ManifoldModel::parallel_form(int index, const double *, double *out) const {
    if (index < 0 || index >= parallel_form_count())
        fail(ErrorKind::InvalidArgument, "parallel form index out of range");
    // All declared forms are constant coordinate forms in these charts.
    for (int i = 0; i < dim_; ++i) out[i] = 0.0;
    out[index] = 1.0;
}

double ManifoldModel::check_parallel(const CovectorField &form, const double *p,
                                     double h) const {
    if (!(h > 0.0)) fail(ErrorKind::InvalidArgument, "check_parallel requires h > 0");
    check_chart(p);
    const size_t n = static_cast<size_t>(dim_);
    std::vector<double> gamma(n * n * n);
    christoffel(p, gamma.data());
    std::vector<double> omega(n), plus(n), minus(n), probe(p, p + dim_);
    form(p, omega.data());

    double max_res = 0.0;
    for (int i = 0; i < dim_; ++i) {
        probe[static_cast<size_t>(i)] = p[i] + h;
        form(probe.data(), plus.data());
        probe[static_cast<size_t>(i)] = p[i] - h;
        form(probe.data(), minus.data());
        probe[static_cast<size_t>(i)] = p[i];
        for (int j = 0; j < dim_; ++j) {
            double d_ij = (plus[static_cast<size_t>(j)] - minus[static_cast<size_t>(j)]) / (2.0 * h);
            double correction = 0.0;
            for (int k = 0; k < dim_; ++k)
                correction += gamma[(static_cast<size_t>(k) * n + static_cast<size_t>(i)) * n +
                                    static_cast<size_t>(j)] *
                              omega[static_cast<size_t>(k)];
            max_res = std::max(max_res, std::abs(d_ij - correction));
        }
    }
    return max_res;
}

double ManifoldModel::check_parallel(int form_index, const double *p, double h) const {
    if (form_index < 0 || form_index >= parallel_form_count())
        fail(ErrorKind::InvalidArgument, "parallel form index out of range");
    int dim = dim_;
    return check_parallel(
        [form_index, dim](const double *, double *out) {
            for (int i = 0; i < dim; ++i) out[i] = 0.0;
            out[form_index] = 1.0;
        },
        p, h);
}

} // namespace csf
