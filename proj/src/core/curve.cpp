#include "core/curve.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "core/text.hpp"

namespace csf {

DiscreteCurve::DiscreteCurve(ModelPtr model, std::vector<double> coords)
    : model_(std::move(model)), coords_(std::move(coords)) {
    if (!model_) fail(ErrorKind::InvalidArgument, "curve needs a model");
    const int dim = model_->dim();
    if (coords_.size() % static_cast<size_t>(dim) != 0)
        fail(ErrorKind::InvalidArgument, "coordinate array length not a multiple of dim");
    node_count_ = static_cast<int>(coords_.size() / static_cast<size_t>(dim));
    if (node_count_ < kMinNodes)
        fail(ErrorKind::Config,
             "curve needs at least " + format_int(kMinNodes) + " nodes, got " +
                 format_int(node_count_));
    for (double c : coords_)
        if (!std::isfinite(c)) fail(ErrorKind::NonFinite, "curve coordinates must be finite");
    for (int i = 0; i < node_count_; ++i)
        model_->canonicalize(coords_.data() + static_cast<size_t>(i) * static_cast<size_t>(dim));
    // Periodic wrapping must stay unambiguous between neighbours.
    for (int i = 0; i < node_count_; ++i) {
        const double *a = node(i);
        const double *b = node((i + 1) % node_count_);
        for (int c = 0; c < dim; ++c) {
            double period = model_->period(c);
            if (period <= 0.0) continue;
            double d = std::abs(model_->wrap_diff(c, b[c] - a[c]));
            if (d >= 0.5 * period * (1.0 - 1e-12))
                fail(ErrorKind::Config,
                     "consecutive nodes further apart than half a period in coordinate " +
                         format_int(c));
        }
    }
}

double CurveGeometry::max_a2() const { return max_a_norm(0); }

double CurveGeometry::max_a_norm(int m) const {
    const auto &v = a_norms[static_cast<size_t>(m)];
    double best = 0.0;
    for (double x : v) best = std::max(best, x);
    return best;
}

double CurveGeometry::min_edge_length() const {
    double best = edge_lengths.empty() ? 0.0 : edge_lengths[0];
    for (double x : edge_lengths) best = std::min(best, x);
    return best;
}

namespace {

struct Stencil {
    // Coefficients of the 3-point non-uniform first and second difference,
    // exact for quadratics in arc length:  a = ds_{i-1}, b = ds_i.
    double c_plus, c_minus;   // f' ~ c_plus*(f_{i+1}-f_i) + c_minus*(f_i-f_{i-1})
    double d_plus, d_minus;   // f'' ~ d_plus*(f_{i+1}-f_i) - d_minus*(f_i-f_{i-1})
    Stencil(double a, double b) {
        double sum = a + b;
        c_plus = a / (b * sum);
        c_minus = b / (a * sum);
        d_plus = 2.0 / (b * sum);
        d_minus = 2.0 / (a * sum);
    }
};

} // namespace

CurveGeometry compute_geometry(const DiscreteCurve &curve, int m_max) {
    if (m_max < 0) fail(ErrorKind::InvalidArgument, "m_max must be >= 0");
    const ManifoldModel &model = curve.model();
    const int N = curve.node_count();
    const int dim = curve.dim();
    const size_t nd = static_cast<size_t>(N) * static_cast<size_t>(dim);
    const bool flat = model.is_flat();

    CurveGeometry g;
    g.node_count = N;
    g.dim = dim;
    g.m_max = 0;
    g.edge_lengths.resize(static_cast<size_t>(N));
    g.node_weights.resize(static_cast<size_t>(N));
    g.metric_diag.resize(nd);
    g.tangents.resize(nd);
    g.curvature.resize(nd);

    // Wrapped forward differences and edge lengths (metric at edge midpoint).
    std::vector<double> diffs(nd);
    std::vector<double> mid(static_cast<size_t>(dim)), diag(static_cast<size_t>(dim));
    for (int i = 0; i < N; ++i) {
        const double *a = curve.node(i);
        const double *b = curve.node((i + 1) % N);
        double *d = diffs.data() + static_cast<size_t>(i) * static_cast<size_t>(dim);
        double len2 = 0.0;
        if (flat) {
            for (int c = 0; c < dim; ++c) {
                d[c] = model.wrap_diff(c, b[c] - a[c]);
                len2 += d[c] * d[c];
            }
        } else {
            for (int c = 0; c < dim; ++c) {
                d[c] = model.wrap_diff(c, b[c] - a[c]);
                mid[static_cast<size_t>(c)] = model.wrap_coord(c, a[c] + 0.5 * d[c]);
            }
            model.metric_diag(mid.data(), diag.data());
            for (int c = 0; c < dim; ++c) len2 += diag[static_cast<size_t>(c)] * d[c] * d[c];
        }
        double len = std::sqrt(len2);
        if (!(len > DiscreteCurve::kDegenerateEdge))
            fail(ErrorKind::DegenerateEdge,
                 "edge " + format_int(i) + " has length " + format_double(len));
        g.edge_lengths[static_cast<size_t>(i)] = len;
    }

    std::vector<double> gamma_term(static_cast<size_t>(dim));
    double length = 0.0;
    for (int i = 0; i < N; ++i) {
        const size_t row = static_cast<size_t>(i) * static_cast<size_t>(dim);
        const int prev = (i + N - 1) % N;
        const double a = g.edge_lengths[static_cast<size_t>(prev)];
        const double b = g.edge_lengths[static_cast<size_t>(i)];
        const double *dp = diffs.data() + static_cast<size_t>(prev) * static_cast<size_t>(dim);
        const double *dn = diffs.data() + row;
        const Stencil st(a, b);

        double w = 0.5 * (a + b);
        g.node_weights[static_cast<size_t>(i)] = w;
        length += w;

        const double *p = curve.node(i);
        double *md = g.metric_diag.data() + row;
        model.metric_diag(p, md);

        double *T = g.tangents.data() + row;
        double tnorm2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            T[c] = st.c_plus * dn[c] + st.c_minus * dp[c];
            tnorm2 += md[c] * T[c] * T[c];
        }
        double inv_tnorm = 1.0 / std::sqrt(tnorm2);
        for (int c = 0; c < dim; ++c) T[c] *= inv_tnorm;

        double *H = g.curvature.data() + row;
        if (flat) {
            for (int c = 0; c < dim; ++c) H[c] = st.d_plus * dn[c] - st.d_minus * dp[c];
        } else {
            model.christoffel_contract(p, T, T, gamma_term.data());
            for (int c = 0; c < dim; ++c)
                H[c] = st.d_plus * dn[c] - st.d_minus * dp[c] + gamma_term[static_cast<size_t>(c)];
        }
        // Enforce normality; the raw tangential component is O(ds^2).
        double ht = 0.0;
        for (int c = 0; c < dim; ++c) ht += md[c] * H[c] * T[c];
        for (int c = 0; c < dim; ++c) H[c] -= ht * T[c];
        g.max_tangential_defect = std::max(g.max_tangential_defect, std::abs(ht));
    }
    g.length = length;

    g.grad_fields.resize(1);
    g.grad_fields[0] = g.curvature;
    g.a_norms.resize(1);
    g.a_norms[0].resize(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        const size_t row = static_cast<size_t>(i) * static_cast<size_t>(dim);
        const double *md = g.metric_diag.data() + row;
        const double *H = g.curvature.data() + row;
        double n2 = 0.0;
        for (int c = 0; c < dim; ++c) n2 += md[c] * H[c] * H[c];
        g.a_norms[0][static_cast<size_t>(i)] = n2;
    }

    higher_a(curve, g, m_max);
    return g;
}

void higher_a(const DiscreteCurve &curve, CurveGeometry &g, int m_max) {
    if (m_max <= g.m_max) return;
    const ManifoldModel &model = curve.model();
    const int N = g.node_count;
    const int dim = g.dim;
    const size_t nd = static_cast<size_t>(N) * static_cast<size_t>(dim);
    const bool flat = model.is_flat();

    g.grad_fields.resize(static_cast<size_t>(m_max) + 1);
    g.a_norms.resize(static_cast<size_t>(m_max) + 1);
    std::vector<double> gamma_term(static_cast<size_t>(dim));

    for (int m = g.m_max + 1; m <= m_max; ++m) {
        const std::vector<double> &prev_field = g.grad_fields[static_cast<size_t>(m - 1)];
        std::vector<double> field(nd);
        std::vector<double> norms(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i) {
            const size_t row = static_cast<size_t>(i) * static_cast<size_t>(dim);
            const int up = (i + 1) % N;
            const int dn = (i + N - 1) % N;
            const double a = g.edge_lengths[static_cast<size_t>(dn)];
            const double b = g.edge_lengths[static_cast<size_t>(i)];
            const Stencil st(a, b);
            const double *f0 = prev_field.data() + row;
            const double *fp = prev_field.data() + static_cast<size_t>(up) * static_cast<size_t>(dim);
            const double *fm = prev_field.data() + static_cast<size_t>(dn) * static_cast<size_t>(dim);
            const double *T = g.tangents.data() + row;
            const double *md = g.metric_diag.data() + row;
            double *out = field.data() + row;

            if (!flat) model.christoffel_contract(curve.node(i), T, f0, gamma_term.data());
            double dot_t = 0.0;
            for (int c = 0; c < dim; ++c) {
                double deriv = st.c_plus * (fp[c] - f0[c]) + st.c_minus * (f0[c] - fm[c]);
                if (!flat) deriv += gamma_term[static_cast<size_t>(c)];
                out[c] = deriv;
                dot_t += md[c] * deriv * T[c];
            }
            double n2 = 0.0;
            for (int c = 0; c < dim; ++c) {
                out[c] -= dot_t * T[c];
                n2 += md[c] * out[c] * out[c];
            }
            norms[static_cast<size_t>(i)] = n2;
        }
        g.grad_fields[static_cast<size_t>(m)] = std::move(field);
        g.a_norms[static_cast<size_t>(m)] = std::move(norms);
    }
    g.m_max = m_max;
}

double integrate_scalar(const CurveGeometry &geometry, std::span<const double> field) {
    if (field.size() != static_cast<size_t>(geometry.node_count))
        fail(ErrorKind::ShapeMismatch, "field length does not match node count");
    double acc = 0.0;
    for (int i = 0; i < geometry.node_count; ++i)
        acc += field[static_cast<size_t>(i)] * geometry.node_weights[static_cast<size_t>(i)];
    return acc;
}

DiscreteCurve resample_uniform(const DiscreteCurve &curve) {
    const ManifoldModel &model = curve.model();
    const int N = curve.node_count();
    const int dim = curve.dim();

    // Cumulative arc length and unwrapped coordinates along the curve.
    std::vector<double> s(static_cast<size_t>(N) + 1, 0.0);
    std::vector<double> y(static_cast<size_t>(N + 1) * static_cast<size_t>(dim));
    std::vector<double> mid(static_cast<size_t>(dim)), diag(static_cast<size_t>(dim));
    const bool flat = model.is_flat();
    for (int c = 0; c < dim; ++c) y[static_cast<size_t>(c)] = curve.node(0)[c];
    for (int i = 0; i < N; ++i) {
        const double *a = curve.node(i);
        const double *b = curve.node((i + 1) % N);
        const double *yi = y.data() + static_cast<size_t>(i) * static_cast<size_t>(dim);
        double *yn = y.data() + static_cast<size_t>(i + 1) * static_cast<size_t>(dim);
        double len2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            double d = model.wrap_diff(c, b[c] - a[c]);
            yn[c] = yi[c] + d;
            if (flat) {
                len2 += d * d;
            } else {
                mid[static_cast<size_t>(c)] = model.wrap_coord(c, a[c] + 0.5 * d);
            }
        }
        if (!flat) {
            model.metric_diag(mid.data(), diag.data());
            for (int c = 0; c < dim; ++c) {
                double d = yn[c] - yi[c];
                len2 += diag[static_cast<size_t>(c)] * d * d;
            }
        }
        double len = std::sqrt(len2);
        if (!(len > DiscreteCurve::kDegenerateEdge))
            fail(ErrorKind::DegenerateEdge, "degenerate edge during resampling");
        s[static_cast<size_t>(i) + 1] = s[static_cast<size_t>(i)] + len;
    }
    const double L = s[static_cast<size_t>(N)];

    // Winding offsets per coordinate; snapped so the de-ramped profile closes
    // exactly.
    std::vector<double> winding(static_cast<size_t>(dim), 0.0);
    for (int c = 0; c < dim; ++c) {
        double w = y[static_cast<size_t>(N) * static_cast<size_t>(dim) + static_cast<size_t>(c)] -
                   y[static_cast<size_t>(c)];
        double period = model.period(c);
        winding[static_cast<size_t>(c)] = period > 0.0 ? period * std::round(w / period) : 0.0;
    }
    // z = y - ramp is periodic: z(s + L) = z(s).
    auto s_value = [&](int idx) -> double {
        int base = ((idx % N) + N) % N;
        double turns = static_cast<double>((idx - base) / N);
        return s[static_cast<size_t>(base)] + turns * L;
    };
    auto node_z = [&](int idx, int c) -> double {
        int base = ((idx % N) + N) % N;
        return y[static_cast<size_t>(base) * static_cast<size_t>(dim) + static_cast<size_t>(c)] -
               (s[static_cast<size_t>(base)] / L) * winding[static_cast<size_t>(c)];
    };

    std::vector<double> out(static_cast<size_t>(N) * static_cast<size_t>(dim));
    int k = 0;
    for (int j = 0; j < N; ++j) {
        double target = (static_cast<double>(j) * L) / static_cast<double>(N);
        while (k + 1 < N && s[static_cast<size_t>(k) + 1] <= target) ++k;
        // Cubic Lagrange through nodes k-1..k+2 in (s, z).
        double xs[4], ws[4];
        for (int m = 0; m < 4; ++m) xs[m] = s_value(k - 1 + m);
        for (int c = 0; c < dim; ++c) {
            for (int m = 0; m < 4; ++m) ws[m] = node_z(k - 1 + m, c);
            double acc = 0.0;
            for (int m = 0; m < 4; ++m) {
                double num = 1.0, den = 1.0;
                for (int l = 0; l < 4; ++l) {
                    if (l == m) continue;
                    num *= target - xs[l];
                    den *= xs[m] - xs[l];
                }
                acc += ws[m] * num / den;
            }
            double value = acc + (target / L) * winding[static_cast<size_t>(c)];
            out[static_cast<size_t>(j) * static_cast<size_t>(dim) + static_cast<size_t>(c)] =
                model.wrap_coord(c, value);
        }
    }
    return DiscreteCurve(curve.model_ptr(), std::move(out));
}

void write_curve_csv(const DiscreteCurve &curve, std::ostream &out) {
    const int dim = curve.dim();
    out << "index";
    for (int c = 0; c < dim; ++c) out << ",coord_" << c;
    out << "\n";
    for (int i = 0; i < curve.node_count(); ++i) {
        out << i;
        const double *p = curve.node(i);
        for (int c = 0; c < dim; ++c) out << ',' << format_double(p[c]);
        out << "\n";
    }
}

DiscreteCurve read_curve_csv(ModelPtr model, std::istream &in) {
    if (!model) fail(ErrorKind::InvalidArgument, "read_curve_csv needs a model");
    const int dim = model->dim();
    std::string line;
    if (!std::getline(in, line)) fail(ErrorKind::Io, "empty curve file");
    {
        std::string expected = "index";
        for (int c = 0; c < dim; ++c) expected += ",coord_" + format_int(c);
        if (line != expected)
            fail(ErrorKind::Io, "unexpected curve CSV header: " + line);
    }
    std::vector<double> coords;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        if (!std::getline(row, cell, ',')) fail(ErrorKind::Io, "malformed curve CSV row");
        for (int c = 0; c < dim; ++c) {
            if (!std::getline(row, cell, ','))
                fail(ErrorKind::Io, "curve CSV row has too few columns");
            coords.push_back(std::stod(cell));
        }
    }
    return DiscreteCurve(std::move(model), std::move(coords));
}

} // namespace csf
