#include <doctest.h>

#include <cmath>
#include <sstream>

#include "core/curve.hpp"
#include "oracles.hpp"

using namespace csf;
using namespace csf::testing;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

DiscreteCurve unit_circle(int n, double radius = 1.0, double cluster = 0.0) {
    auto model = std::make_shared<ManifoldModel>(ManifoldModel::euclidean(2));
    return curve_from_parametrization(model, n, [=](double theta, double *x) {
        double u = theta + cluster * std::sin(theta);
        x[0] = radius * std::cos(u);
        x[1] = radius * std::sin(u);
    });
}

DiscreteCurve torus_winding(int n, int p, int q, double amp = 0.0, int freq = 1) {
    auto model = std::make_shared<ManifoldModel>(ManifoldModel::flat_torus({1.0, 1.0}));
    return curve_from_parametrization(model, n, [=](double theta, double *x) {
        x[0] = p * theta / kTwoPi;
        x[1] = q * theta / kTwoPi + amp * std::sin(freq * theta);
    });
}

DiscreteCurve ellipse(int n, double a = 2.0, double b = 1.0) {
    auto model = std::make_shared<ManifoldModel>(ManifoldModel::euclidean(2));
    return curve_from_parametrization(model, n, [=](double theta, double *x) {
        x[0] = a * std::cos(theta);
        x[1] = b * std::sin(theta);
    });
}

} // namespace

TEST_CASE("compute_geometry: circle curvature points inward with |H| = 1/r") {
    for (double radius : {1.0, 0.5, 2.5}) {
        DiscreteCurve curve = unit_circle(256, radius);
        CurveGeometry g = compute_geometry(curve, 0);
        for (int i = 0; i < g.node_count; ++i) {
            const double *H = g.curvature.data() + 2 * static_cast<size_t>(i);
            const double *x = curve.node(i);
            double mag = std::hypot(H[0], H[1]);
            CHECK(mag == doctest::Approx(1.0 / radius).epsilon(1e-3));
            // Points toward the center.
            double radial = (H[0] * x[0] + H[1] * x[1]) / (radius * mag);
            CHECK(radial == doctest::Approx(-1.0).epsilon(1e-6));
        }
        CHECK(g.length == doctest::Approx(kTwoPi * radius).epsilon(1e-3));
    }
}

TEST_CASE("compute_geometry: winding lines on the torus are geodesic") {
    DiscreteCurve curve = torus_winding(256, 1, 1);
    CurveGeometry g = compute_geometry(curve, 2);
    for (int i = 0; i < g.node_count; ++i) {
        CHECK(std::abs(g.curvature[2 * static_cast<size_t>(i)]) <= 1e-10);
        CHECK(std::abs(g.curvature[2 * static_cast<size_t>(i) + 1]) <= 1e-10);
        CHECK(g.a_norms[0][static_cast<size_t>(i)] <= 1e-10);
        CHECK(g.a_norms[1][static_cast<size_t>(i)] <= 1e-10);
        CHECK(g.a_norms[2][static_cast<size_t>(i)] <= 1e-10);
    }
    CHECK(g.length == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("compute_geometry: latitude circle on the sphere factor") {
    double theta0 = 1.1;
    auto model = std::make_shared<ManifoldModel>(ManifoldModel::cylinder_sphere(2, 1.0));
    DiscreteCurve curve = curve_from_parametrization(model, 256, [=](double t, double *x) {
        x[0] = 0.3;
        x[1] = theta0;
        x[2] = t;
    });
    CurveGeometry g = compute_geometry(curve, 0);
    double expected = std::abs(std::cos(theta0) / std::sin(theta0));
    for (int i = 0; i < g.node_count; ++i) {
        double h2 = g.a_norms[0][static_cast<size_t>(i)];
        CHECK(std::sqrt(h2) == doctest::Approx(expected).epsilon(1e-3));
    }
}

TEST_CASE("compute_geometry: curvature converges at second order") {
    // Circle nodes (any smooth grading) reproduce 1/r exactly up to rounding:
    // the chord-parameter stencil plus projection recovers the circumcircle.
    for (int n : {128, 256}) {
        DiscreteCurve curve = unit_circle(n, 1.0, 0.3);
        CurveGeometry g = compute_geometry(curve, 0);
        for (double a2 : g.a_norms[0]) CHECK(std::abs(std::sqrt(a2) - 1.0) <= 1e-11);
    }
    // The differencing order shows on varying curvature.
    auto error_at = [](int n) {
        const double a = 2.0, b = 1.0;
        DiscreteCurve curve = ellipse(n, a, b);
        CurveGeometry g = compute_geometry(curve, 0);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            double u = kTwoPi * i / n;
            double s2 = a * a * std::sin(u) * std::sin(u) + b * b * std::cos(u) * std::cos(u);
            double kappa = a * b / (s2 * std::sqrt(s2));
            worst = std::max(worst,
                             std::abs(std::sqrt(g.a_norms[0][static_cast<size_t>(i)]) - kappa));
        }
        return worst;
    };
    double e128 = error_at(128);
    double e256 = error_at(256);
    CHECK(e128 / e256 >= 3.5);
}

TEST_CASE("compute_geometry: tangential defect before projection is O(N^-2)") {
    CurveGeometry g256 = compute_geometry(ellipse(256), 0);
    CurveGeometry g512 = compute_geometry(ellipse(512), 0);
    CHECK(g256.max_tangential_defect / g512.max_tangential_defect >= 3.0);
    CHECK(g512.max_tangential_defect <= 1e-3);

    // After projection normality is exact up to rounding.
    const DiscreteCurve curve = ellipse(512);
    for (int i = 0; i < g512.node_count; ++i) {
        const double *H = g512.curvature.data() + 2 * static_cast<size_t>(i);
        const double *T = g512.tangents.data() + 2 * static_cast<size_t>(i);
        CHECK(std::abs(H[0] * T[0] + H[1] * T[1]) <= 1e-12 * (std::abs(H[0]) + std::abs(H[1])));
    }
}

TEST_CASE("compute_geometry: |A|^2 equals <H,H> bitwise and tangents are unit") {
    DiscreteCurve curve = ellipse(128);
    CurveGeometry g = compute_geometry(curve, 0);
    for (int i = 0; i < g.node_count; ++i) {
        const double *H = g.curvature.data() + 2 * static_cast<size_t>(i);
        const double *T = g.tangents.data() + 2 * static_cast<size_t>(i);
        double h2 = curve.model().inner(curve.node(i), H, H);
        CHECK(g.a_norms[0][static_cast<size_t>(i)] == h2);
        CHECK(curve.model().inner(curve.node(i), T, T) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("higher_a: extending a geometry is consistent") {
    DiscreteCurve curve = ellipse(128);
    CurveGeometry base = compute_geometry(curve, 0);
    std::vector<double> a2 = base.a_norms[0];
    higher_a(curve, base, 0);
    CHECK(base.a_norms[0] == a2);
    higher_a(curve, base, 2);
    CHECK(base.a_norms[0] == a2);
    CHECK(base.m_max == 2);
    CurveGeometry direct = compute_geometry(curve, 2);
    CHECK(base.a_norms[2] == direct.a_norms[2]);
}

TEST_CASE("higher_a: circle has vanishing grad A") {
    DiscreteCurve curve = unit_circle(512);
    CurveGeometry g = compute_geometry(curve, 1);
    for (double v : g.a_norms[1]) CHECK(std::abs(v) <= 1e-6);
}

TEST_CASE("higher_a: plane-curve chain matches the scalar curvature oracle") {
    const int n = 1024;
    const double a = 2.0, b = 1.0;
    DiscreteCurve curve = ellipse(n, a, b);
    CurveGeometry g = compute_geometry(curve, 3);
    std::vector<std::vector<double>> oracle = ellipse_curvature_chain(a, b, n, 3);
    for (int m = 0; m <= 3; ++m) {
        double scale = 0.0;
        for (double v : oracle[static_cast<size_t>(m)]) scale = std::max(scale, v);
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            double got = std::sqrt(g.a_norms[static_cast<size_t>(m)][static_cast<size_t>(i)]);
            worst = std::max(worst,
                             std::abs(got - oracle[static_cast<size_t>(m)][static_cast<size_t>(i)]));
        }
        CHECK(worst <= 1e-2 * scale);
    }
    // dkappa/ds vanishes on the symmetry axis at theta = 0.
    double max_grad = g.max_a_norm(1);
    CHECK(g.a_norms[1][0] <= 1e-3 * max_grad);
}

TEST_CASE("integrate_scalar: unit field reproduces the length exactly") {
    DiscreteCurve curve = ellipse(256);
    CurveGeometry g = compute_geometry(curve, 0);
    std::vector<double> ones(static_cast<size_t>(g.node_count), 1.0);
    CHECK(integrate_scalar(g, ones) == g.length);
}

TEST_CASE("integrate_scalar: total squared curvature of circle and geodesic") {
    for (double radius : {1.0, 0.5}) {
        DiscreteCurve curve = unit_circle(256, radius);
        CurveGeometry g = compute_geometry(curve, 0);
        CHECK(integrate_scalar(g, g.a_norms[0]) ==
              doctest::Approx(kTwoPi / radius).epsilon(1e-3));
    }
    DiscreteCurve line = torus_winding(128, 1, 0);
    CurveGeometry g = compute_geometry(line, 0);
    CHECK(integrate_scalar(g, g.a_norms[0]) <= 1e-12);
}

TEST_CASE("resample_uniform: uniform circle is a fixed point") {
    DiscreteCurve curve = unit_circle(256);
    DiscreteCurve resampled = resample_uniform(curve);
    for (size_t i = 0; i < curve.coords().size(); ++i)
        CHECK(std::abs(resampled.coords()[i] - curve.coords()[i]) <= 1e-12);
}

TEST_CASE("resample_uniform: clustered circle becomes uniform, radius preserved") {
    DiscreteCurve curve = unit_circle(2048, 1.0, 0.2);
    DiscreteCurve resampled = resample_uniform(curve);
    CurveGeometry g = compute_geometry(resampled, 0);
    double mean = g.length / g.node_count;
    for (double ds : g.edge_lengths) CHECK(std::abs(ds - mean) / mean <= 1e-6);
    for (int i = 0; i < resampled.node_count(); ++i) {
        const double *x = resampled.node(i);
        CHECK(std::hypot(x[0], x[1]) == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("resample_uniform: winding curve across the periodic seam stays continuous") {
    DiscreteCurve curve = torus_winding(128, 2, 3, 0.05, 2);
    DiscreteCurve resampled = resample_uniform(curve);
    const ManifoldModel &model = resampled.model();
    for (int i = 0; i < resampled.node_count(); ++i) {
        const double *p = resampled.node(i);
        const double *q = resampled.node((i + 1) % resampled.node_count());
        for (int c = 0; c < 2; ++c) {
            CHECK(p[c] >= 0.0);
            CHECK(p[c] < 1.0);
            CHECK(std::abs(model.wrap_diff(c, q[c] - p[c])) < 0.5);
        }
    }
}

TEST_CASE("curve validation: node floor, degenerate edges, ambiguous wrapping") {
    auto model = std::make_shared<ManifoldModel>(ManifoldModel::euclidean(2));
    std::vector<double> few(2 * 8, 0.0);
    CHECK_THROWS_AS(DiscreteCurve(model, few), Error);

    // Coincident nodes trip the degeneracy check at geometry time.
    std::vector<double> coords;
    for (int j = 0; j < 32; ++j) {
        double t = kTwoPi * j / 32.0;
        coords.push_back(std::cos(t));
        coords.push_back(std::sin(t));
    }
    coords[2] = coords[0];
    coords[3] = coords[1];
    DiscreteCurve degenerate(model, coords);
    try {
        compute_geometry(degenerate, 0);
        CHECK(false);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::DegenerateEdge);
    }

    // Consecutive nodes half a period apart are ambiguous on the torus.
    auto torus = std::make_shared<ManifoldModel>(ManifoldModel::flat_torus({1.0, 1.0}));
    std::vector<double> jumpy;
    for (int j = 0; j < 16; ++j) {
        jumpy.push_back(j % 2 == 0 ? 0.0 : 0.5);
        jumpy.push_back(0.0);
    }
    CHECK_THROWS_AS(DiscreteCurve(torus, jumpy), Error);
}

TEST_CASE("curve csv: snapshot round-trip is bit exact") {
    DiscreteCurve curve = unit_circle(64, 1.37);
    std::stringstream buffer;
    write_curve_csv(curve, buffer);
    std::string first = buffer.str();
    CHECK(first.substr(0, 21) == "index,coord_0,coord_1");
    DiscreteCurve back = read_curve_csv(curve.model_ptr(), buffer);
    REQUIRE(back.node_count() == curve.node_count());
    CHECK(back.coords() == curve.coords());
    std::stringstream second;
    write_curve_csv(back, second);
    CHECK(second.str() == first);
}

TEST_CASE("pole proximity propagates from the model") {
    auto model = std::make_shared<ManifoldModel>(ManifoldModel::cylinder_sphere(2, 1.0, 0.2));
    DiscreteCurve fine = curve_from_parametrization(model, 64, [](double t, double *x) {
        x[0] = t;
        x[1] = 0.25; // inside the chart, outside the margin
        x[2] = 1.0;
    });
    CHECK_NOTHROW(compute_geometry(fine, 0));
    DiscreteCurve bad = curve_from_parametrization(model, 64, [](double t, double *x) {
        x[0] = t;
        x[1] = 0.1; // inside the margin
        x[2] = 1.0;
    });
    try {
        compute_geometry(bad, 0);
        CHECK(false);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::PoleProximity);
    }
}
