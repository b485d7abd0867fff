#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/text.hpp"

namespace csf {

std::string DiagnosticsRecord::csv_header(int m_max) {
    std::string h = "t,length,min_omega_T,max_omega_T,max_mu,max_A2";
    for (int m = 1; m <= m_max; ++m) h += ",max_gradA2_" + format_int(m);
    h += ",int_A2";
    for (int m = 1; m <= m_max; ++m) h += ",int_gradA2_" + format_int(m);
    h += ",residual_EP,residual_EQSF,residual_length,residual_GF,bound_A2mu2,interp_Ta,interp_Tb";
    return h;
}

std::string DiagnosticsRecord::csv_row() const {
    std::string r = format_double(t);
    auto push = [&r](double v) { r += ',' + format_double(v); };
    push(length);
    push(min_omega_t);
    push(max_omega_t);
    push(max_mu);
    push(max_a2);
    for (double v : max_grad_a2) push(v);
    push(int_a2);
    for (double v : int_grad_a2) push(v);
    push(residual_ep);
    push(residual_eqsf);
    push(residual_length);
    push(residual_gf);
    push(bound_a2mu2);
    push(interp_ta);
    push(interp_tb);
    return r;
}

OmegaValues omega_t(const ManifoldModel &model, const CurveGeometry &geometry,
                    int form_index) {
    const int N = geometry.node_count;
    const int dim = geometry.dim;
    std::vector<double> comps(static_cast<size_t>(dim));
    // Declared forms have constant components in these charts.
    std::vector<double> origin(static_cast<size_t>(dim), 0.0);
    model.parallel_form(form_index, origin.data(), comps.data());

    OmegaValues out;
    out.values.resize(static_cast<size_t>(N));
    out.min = std::numeric_limits<double>::infinity();
    out.max = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
        const double *T = geometry.tangents.data() + static_cast<size_t>(i) * static_cast<size_t>(dim);
        double v = 0.0;
        for (int c = 0; c < dim; ++c) v += comps[static_cast<size_t>(c)] * T[c];
        out.values[static_cast<size_t>(i)] = v;
        out.min = std::min(out.min, v);
        out.max = std::max(out.max, v);
    }
    return out;
}

std::vector<double> mu(const ManifoldModel &model, const CurveGeometry &geometry,
                       int form_index, double eps_pos) {
    OmegaValues omega = omega_t(model, geometry, form_index);
    if (!(omega.min > eps_pos))
        fail(ErrorKind::NonPositiveOmega,
             "min Omega(T) = " + format_double(omega.min) + " is not positive");
    std::vector<double> out(omega.values.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = 1.0 / omega.values[i];
    return out;
}

std::vector<double> arc_first_diff(const CurveGeometry &geometry,
                                   const std::vector<double> &field) {
    const int N = geometry.node_count;
    if (field.size() != static_cast<size_t>(N))
        fail(ErrorKind::ShapeMismatch, "field length does not match node count");
    std::vector<double> out(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        int up = (i + 1) % N, dn = (i + N - 1) % N;
        double a = geometry.edge_lengths[static_cast<size_t>(dn)];
        double b = geometry.edge_lengths[static_cast<size_t>(i)];
        double sum = a + b;
        out[static_cast<size_t>(i)] =
            (a / (b * sum)) * (field[static_cast<size_t>(up)] - field[static_cast<size_t>(i)]) +
            (b / (a * sum)) * (field[static_cast<size_t>(i)] - field[static_cast<size_t>(dn)]);
    }
    return out;
}

std::vector<double> arc_second_diff(const CurveGeometry &geometry,
                                    const std::vector<double> &field) {
    const int N = geometry.node_count;
    if (field.size() != static_cast<size_t>(N))
        fail(ErrorKind::ShapeMismatch, "field length does not match node count");
    std::vector<double> out(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
        int up = (i + 1) % N, dn = (i + N - 1) % N;
        double a = geometry.edge_lengths[static_cast<size_t>(dn)];
        double b = geometry.edge_lengths[static_cast<size_t>(i)];
        double sum = a + b;
        out[static_cast<size_t>(i)] =
            (2.0 / (b * sum)) * (field[static_cast<size_t>(up)] - field[static_cast<size_t>(i)]) -
            (2.0 / (a * sum)) * (field[static_cast<size_t>(i)] - field[static_cast<size_t>(dn)]);
    }
    return out;
}

namespace {

void require_same_shape(const CurveGeometry &a, const CurveGeometry &b) {
    if (a.node_count != b.node_count || a.dim != b.dim)
        fail(ErrorKind::ShapeMismatch, "step pair has mismatched node counts");
}

} // namespace

double residual_form_evolution(const ManifoldModel &model, const CurveGeometry &prev,
                               const CurveGeometry &next, double dt, Scheme scheme,
                               int form_index) {
    require_same_shape(prev, next);
    if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
    OmegaValues op = omega_t(model, prev, form_index);
    OmegaValues on = omega_t(model, next, form_index);

    auto rhs = [&](const CurveGeometry &g, const OmegaValues &o) {
        std::vector<double> r = arc_second_diff(g, o.values);
        for (size_t i = 0; i < r.size(); ++i) r[i] += g.a_norms[0][i] * o.values[i];
        return r;
    };
    std::vector<double> rp = rhs(prev, op);
    double res = 0.0;
    if (scheme == Scheme::Euler) {
        for (size_t i = 0; i < rp.size(); ++i) {
            double lhs = (on.values[i] - op.values[i]) / dt;
            res = std::max(res, std::abs(lhs - rp[i]));
        }
    } else {
        std::vector<double> rn = rhs(next, on);
        for (size_t i = 0; i < rp.size(); ++i) {
            double lhs = (on.values[i] - op.values[i]) / dt;
            res = std::max(res, std::abs(lhs - 0.5 * (rp[i] + rn[i])));
        }
    }
    return res;
}

double residual_a2_evolution(const DiscreteCurve &prev_curve, const CurveGeometry &prev,
                             const DiscreteCurve &next_curve, const CurveGeometry &next,
                             double dt, Scheme scheme) {
    require_same_shape(prev, next);
    if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
    if (prev.m_max < 1 || next.m_max < 1)
        fail(ErrorKind::InvalidArgument, "residual needs |grad A|^2, compute with m_max >= 1");
    const ManifoldModel &model = prev_curve.model();
    const int dim = prev.dim;

    auto rhs = [&](const DiscreteCurve &curve, const CurveGeometry &g) {
        std::vector<double> r = arc_second_diff(g, g.a_norms[0]);
        for (int i = 0; i < g.node_count; ++i) {
            const size_t si = static_cast<size_t>(i);
            const double a2 = g.a_norms[0][si];
            double curv = 0.0;
            if (!model.is_flat()) {
                const double *T = g.tangents.data() + si * static_cast<size_t>(dim);
                const double *H = g.curvature.data() + si * static_cast<size_t>(dim);
                curv = model.riemann(curve.node(i), T, H, T, H);
            }
            r[si] += -2.0 * g.a_norms[1][si] + 2.0 * a2 * a2 + 2.0 * curv;
        }
        return r;
    };
    std::vector<double> rp = rhs(prev_curve, prev);
    double res = 0.0;
    if (scheme == Scheme::Euler) {
        for (size_t i = 0; i < rp.size(); ++i) {
            double lhs = (next.a_norms[0][i] - prev.a_norms[0][i]) / dt;
            res = std::max(res, std::abs(lhs - rp[i]));
        }
    } else {
        std::vector<double> rn = rhs(next_curve, next);
        for (size_t i = 0; i < rp.size(); ++i) {
            double lhs = (next.a_norms[0][i] - prev.a_norms[0][i]) / dt;
            res = std::max(res, std::abs(lhs - 0.5 * (rp[i] + rn[i])));
        }
    }
    return res;
}

double residual_mu_evolution(const ManifoldModel &model, const CurveGeometry &prev,
                             const CurveGeometry &next, double dt, Scheme scheme,
                             int form_index, double eps_pos) {
    require_same_shape(prev, next);
    if (!(dt > 0.0)) fail(ErrorKind::InvalidArgument, "dt must be positive");
    std::vector<double> mp = mu(model, prev, form_index, eps_pos);
    std::vector<double> mn = mu(model, next, form_index, eps_pos);

    auto rhs = [&](const CurveGeometry &g, const std::vector<double> &m) {
        std::vector<double> lap = arc_second_diff(g, m);
        std::vector<double> ds = arc_first_diff(g, m);
        std::vector<double> r(m.size());
        for (size_t i = 0; i < m.size(); ++i)
            r[i] = lap[i] - g.a_norms[0][i] * m[i] - 2.0 / m[i] * ds[i] * ds[i];
        return r;
    };
    std::vector<double> rp = rhs(prev, mp);
    double res = 0.0;
    if (scheme == Scheme::Euler) {
        for (size_t i = 0; i < rp.size(); ++i) {
            double lhs = (mn[i] - mp[i]) / dt;
            res = std::max(res, std::abs(lhs - rp[i]));
        }
    } else {
        std::vector<double> rn = rhs(next, mn);
        for (size_t i = 0; i < rp.size(); ++i) {
            double lhs = (mn[i] - mp[i]) / dt;
            res = std::max(res, std::abs(lhs - 0.5 * (rp[i] + rn[i])));
        }
    }
    return res;
}

std::vector<double> residual_length_series(const std::vector<double> &times,
                                           const std::vector<double> &lengths,
                                           const std::vector<double> &int_a2) {
    const size_t K = times.size();
    if (lengths.size() != K || int_a2.size() != K)
        fail(ErrorKind::ShapeMismatch, "series lengths differ");
    if (K < 3) fail(ErrorKind::InsufficientSamples, "need at least 3 samples");
    std::vector<double> out(K, 0.0);
    for (size_t k = 1; k + 1 < K; ++k) {
        double a = times[k] - times[k - 1];
        double b = times[k + 1] - times[k];
        double sum = a + b;
        double dldt = (a / (b * sum)) * (lengths[k + 1] - lengths[k]) +
                      (b / (a * sum)) * (lengths[k] - lengths[k - 1]);
        out[k] = std::abs(dldt + int_a2[k]);
    }
    return out;
}

double worst_min_omega_decrease(const std::vector<DiagnosticsRecord> &records) {
    double worst = 0.0;
    for (size_t k = 1; k < records.size(); ++k)
        worst = std::max(worst, records[k - 1].min_omega_t - records[k].min_omega_t);
    return worst;
}

A2Mu2Check check_a2mu2(const std::vector<DiagnosticsRecord> &records, double c0,
                       double tol_exp, double tol_flat) {
    A2Mu2Check out;
    if (records.empty()) return out;
    const double initial = records.front().bound_a2mu2;
    for (size_t k = 0; k < records.size(); ++k) {
        double v = records[k].bound_a2mu2;
        if (!std::isfinite(v)) {
            out.ok = false;
            continue;
        }
        if (c0 == 0.0) {
            if (k > 0) {
                double inc = v - records[k - 1].bound_a2mu2;
                out.worst_step_increase = std::max(out.worst_step_increase, inc);
                if (inc > tol_flat) out.ok = false;
            }
        } else {
            double bound = std::exp(2.0 * c0 * records[k].t) * initial;
            double ratio = bound > 0.0 ? v / bound : (v > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
            out.worst_bound_ratio = std::max(out.worst_bound_ratio, ratio);
            if (ratio > 1.0 + tol_exp) out.ok = false;
        }
    }
    return out;
}

namespace {

// Normal-bundle chain with constant-step stencils and weights on a
// uniformly resampled copy; integration by parts is then exact on flat
// models, which keeps the inequality margins meaningful at their tolerance.
struct UniformChain {
    double h = 0.0;
    double length = 0.0;
    std::vector<double> integrals;    // m = 0..m_max
    std::vector<double> maxima;       // m = 0..m_max
    std::vector<double> noise_floors; // pointwise |grad^m A|^2 resolvable floor
};

UniformChain uniform_chain(const DiscreteCurve &input, int m_max) {
    DiscreteCurve curve = resample_uniform(input);
    const ManifoldModel &model = curve.model();
    const int N = curve.node_count();
    const int dim = curve.dim();
    const size_t nd = static_cast<size_t>(N) * static_cast<size_t>(dim);
    const bool flat = model.is_flat();

    std::vector<double> diffs(nd);
    std::vector<double> mid(static_cast<size_t>(dim)), diag_mid(static_cast<size_t>(dim));
    double length = 0.0;
    for (int i = 0; i < N; ++i) {
        const double *a = curve.node(i);
        const double *b = curve.node((i + 1) % N);
        double *d = diffs.data() + static_cast<size_t>(i) * static_cast<size_t>(dim);
        double len2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            d[c] = model.wrap_diff(c, b[c] - a[c]);
            if (!flat) mid[static_cast<size_t>(c)] = model.wrap_coord(c, a[c] + 0.5 * d[c]);
        }
        if (flat) {
            for (int c = 0; c < dim; ++c) len2 += d[c] * d[c];
        } else {
            model.metric_diag(mid.data(), diag_mid.data());
            for (int c = 0; c < dim; ++c) len2 += diag_mid[static_cast<size_t>(c)] * d[c] * d[c];
        }
        length += std::sqrt(len2);
    }
    const double h = length / static_cast<double>(N);

    std::vector<double> metric(nd), tangents(nd), field(nd);
    std::vector<double> gamma_term(static_cast<size_t>(dim));
    for (int i = 0; i < N; ++i) {
        const size_t row = static_cast<size_t>(i) * static_cast<size_t>(dim);
        const int dn = (i + N - 1) % N;
        const double *dp = diffs.data() + static_cast<size_t>(dn) * static_cast<size_t>(dim);
        const double *dc = diffs.data() + row;
        double *md = metric.data() + row;
        model.metric_diag(curve.node(i), md);
        double *T = tangents.data() + row;
        double n2 = 0.0;
        for (int c = 0; c < dim; ++c) {
            T[c] = (dc[c] + dp[c]) / (2.0 * h);
            n2 += md[c] * T[c] * T[c];
        }
        double inv = 1.0 / std::sqrt(n2);
        for (int c = 0; c < dim; ++c) T[c] *= inv;

        double *H = field.data() + row;
        if (!flat) model.christoffel_contract(curve.node(i), T, T, gamma_term.data());
        double ht = 0.0;
        for (int c = 0; c < dim; ++c) {
            H[c] = (dc[c] - dp[c]) / (h * h);
            if (!flat) H[c] += gamma_term[static_cast<size_t>(c)];
            ht += md[c] * H[c] * T[c];
        }
        for (int c = 0; c < dim; ++c) H[c] -= ht * T[c];
    }

    UniformChain out;
    out.h = h;
    out.length = length;
    out.integrals.resize(static_cast<size_t>(m_max) + 1);
    out.maxima.resize(static_cast<size_t>(m_max) + 1);

    // Pointwise level below which the difference stencils only see rounding:
    // the curvature assembly cancels O(coordinate) terms against h^2, and
    // every further derivative divides by h again.
    out.noise_floors.resize(static_cast<size_t>(m_max) + 1);
    {
        double cmax = 1.0, gmax = 1.0;
        for (int i = 0; i < N; ++i) {
            for (int c = 0; c < dim; ++c)
                cmax = std::max(cmax, std::abs(curve.node(i)[c]));
            const double *md = metric.data() + static_cast<size_t>(i) * static_cast<size_t>(dim);
            for (int c = 0; c < dim; ++c) gmax = std::max(gmax, md[c]);
        }
        cmax = std::max(cmax, length);
        constexpr double kEps = 2.220446049250313e-16;
        double level = 32.0 * kEps * cmax / (h * h);
        for (int m = 0; m <= m_max; ++m) {
            out.noise_floors[static_cast<size_t>(m)] = gmax * level * level;
            level /= h;
        }
    }

    std::vector<double> next(nd);
    for (int m = 0; m <= m_max; ++m) {
        double integral = 0.0, maximum = 0.0;
        for (int i = 0; i < N; ++i) {
            const size_t row = static_cast<size_t>(i) * static_cast<size_t>(dim);
            const double *md = metric.data() + row;
            const double *F = field.data() + row;
            double n2 = 0.0;
            for (int c = 0; c < dim; ++c) n2 += md[c] * F[c] * F[c];
            integral += n2;
            maximum = std::max(maximum, n2);
        }
        out.integrals[static_cast<size_t>(m)] = integral * h;
        out.maxima[static_cast<size_t>(m)] = maximum;
        if (m == m_max) break;
        for (int i = 0; i < N; ++i) {
            const size_t row = static_cast<size_t>(i) * static_cast<size_t>(dim);
            const int up = (i + 1) % N, dn = (i + N - 1) % N;
            const double *fp = field.data() + static_cast<size_t>(up) * static_cast<size_t>(dim);
            const double *fm = field.data() + static_cast<size_t>(dn) * static_cast<size_t>(dim);
            const double *f0 = field.data() + row;
            const double *T = tangents.data() + row;
            const double *md = metric.data() + row;
            double *o = next.data() + row;
            if (!flat) model.christoffel_contract(curve.node(i), T, f0, gamma_term.data());
            double dot_t = 0.0;
            for (int c = 0; c < dim; ++c) {
                o[c] = (fp[c] - fm[c]) / (2.0 * h);
                if (!flat) o[c] += gamma_term[static_cast<size_t>(c)];
                dot_t += md[c] * o[c] * T[c];
            }
            for (int c = 0; c < dim; ++c) o[c] -= dot_t * T[c];
        }
        std::swap(field, next);
    }
    return out;
}

} // namespace

InterpMargins interpolation_checks(const DiscreteCurve &curve, int m_max) {
    if (m_max < 2) fail(ErrorKind::InvalidArgument, "interpolation checks need m_max >= 2");
    UniformChain chain = uniform_chain(curve, m_max);
    const double a = 1.0 / chain.length + 2.0;
    constexpr double kTiny = 1e-300;

    auto floor_p = [&](int m) { return chain.noise_floors[static_cast<size_t>(m)]; };
    auto floor_i = [&](int m) { return chain.length * floor_p(m); };
    auto resolvable_p = [&](int m) { return chain.maxima[static_cast<size_t>(m)] > floor_p(m); };
    auto resolvable_i = [&](int m) {
        return chain.integrals[static_cast<size_t>(m)] > floor_i(m);
    };

    InterpMargins out;
    out.ta = std::numeric_limits<double>::infinity();
    out.tb = std::numeric_limits<double>::infinity();
    for (int m = 0; m < m_max; ++m) {
        // All-noise levels carry no information; their margin is zero.
        if (!resolvable_p(m) && !resolvable_i(m) && !resolvable_i(m + 1)) {
            out.ta = std::min(out.ta, 0.0);
            continue;
        }
        double lhs = chain.maxima[static_cast<size_t>(m)];
        double r1 = a * chain.integrals[static_cast<size_t>(m)];
        double r2 = 2.0 * chain.integrals[static_cast<size_t>(m) + 1];
        double scale = std::max({lhs, r1, r2, kTiny});
        out.ta = std::min(out.ta, (r1 + r2 - lhs) / scale);
    }
    for (int m = 1; m < m_max; ++m) {
        if (!resolvable_i(m - 1) && !resolvable_i(m) && !resolvable_i(m + 1)) {
            out.tb = std::min(out.tb, 0.0);
            continue;
        }
        double lhs = chain.integrals[static_cast<size_t>(m)] * chain.integrals[static_cast<size_t>(m)];
        double rhs = chain.integrals[static_cast<size_t>(m) - 1] *
                     chain.integrals[static_cast<size_t>(m) + 1];
        double scale = std::max({lhs, rhs, kTiny});
        out.tb = std::min(out.tb, (rhs - lhs) / scale);
    }
    return out;
}

std::vector<ConvergenceVerdict> convergence_report(
    const std::vector<DiagnosticsRecord> &records, int m_max, double conv_tol_a,
    double conv_tol_grad, double length_floor) {
    std::vector<ConvergenceVerdict> out;
    if (records.empty()) return out;
    const DiagnosticsRecord &last = records.back();
    if (!(last.length > length_floor))
        fail(ErrorKind::InvalidArgument, "final length below the configured floor");
    size_t quarter_start = records.size() - std::max<size_t>(records.size() / 4, 1);

    auto value_at = [&](const DiagnosticsRecord &r, int m) {
        double sq = m == 0 ? r.max_a2 : r.max_grad_a2[static_cast<size_t>(m - 1)];
        return std::sqrt(std::max(sq, 0.0));
    };
    for (int m = 0; m <= m_max; ++m) {
        ConvergenceVerdict v;
        v.m = m;
        v.final_value = value_at(last, m);
        double at_quarter = value_at(records[quarter_start], m);
        v.decreasing = v.final_value <= at_quarter + 1e-12;
        double tol = m == 0 ? conv_tol_a : conv_tol_grad;
        v.converged = v.final_value < tol;
        out.push_back(v);
    }
    return out;
}

} // namespace csf
