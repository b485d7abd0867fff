#include <doctest.h>

#include <cmath>

#include "core/manifold.hpp"
#include "core/presets.hpp"
#include "oracles.hpp"

using namespace csf;
using namespace csf::testing;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

// Deterministic chart points away from poles.
std::vector<std::vector<double>> sample_points(const ManifoldModel &model, int count,
                                               std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<std::vector<double>> out;
    for (int k = 0; k < count; ++k) {
        std::vector<double> p(static_cast<size_t>(model.dim()));
        for (int c = 0; c < model.dim(); ++c) {
            double period = model.period(c);
            if (period > 0.0) {
                p[static_cast<size_t>(c)] = period * rng.next_unit();
            } else if (model.kind() == ModelKind::CylinderSphere) {
                p[static_cast<size_t>(c)] = 0.4 + (kPi - 0.8) * rng.next_unit(); // polar
            } else {
                p[static_cast<size_t>(c)] = 4.0 * rng.next_unit() - 2.0;
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace

TEST_CASE("metric: examples") {
    auto eu = ManifoldModel::euclidean(2);
    double g[4];
    double p[2] = {0.3, -1.7};
    eu.metric(p, g);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
    CHECK(g[3] == 1.0);

    auto cs = ManifoldModel::cylinder_sphere(2, 1.0);
    double q[3] = {0.1, kPi / 2.0, 0.4};
    double gc[9];
    cs.metric(q, gc);
    CHECK(gc[0] == doctest::Approx(1.0));
    CHECK(gc[4] == doctest::Approx(1.0));
    CHECK(gc[8] == doctest::Approx(1.0)); // sin^2(pi/2) = 1
    CHECK(gc[1] == 0.0);
    CHECK(gc[5] == 0.0);

    auto torus = ManifoldModel::flat_torus({1.0, 1.0});
    double pt[2] = {0.25, 0.75};
    double gt[4];
    torus.metric(pt, gt);
    CHECK(gt[0] == 1.0);
    CHECK(gt[3] == 1.0);
}

TEST_CASE("metric: symmetric positive definite at random chart points") {
    std::vector<ManifoldModel> models = {ManifoldModel::euclidean(3),
                                         ManifoldModel::flat_torus({1.0, 2.0, 0.5}),
                                         ManifoldModel::cylinder_sphere(2, 0.7),
                                         ManifoldModel::cylinder_sphere(3, 1.3)};
    for (const auto &model : models) {
        const int dim = model.dim();
        std::vector<double> g(static_cast<size_t>(dim) * static_cast<size_t>(dim));
        for (const auto &p : sample_points(model, 1000, 17)) {
            model.metric(p.data(), g.data());
            for (int r = 0; r < dim; ++r)
                for (int c = 0; c < dim; ++c)
                    CHECK(g[static_cast<size_t>(r * dim + c)] ==
                          g[static_cast<size_t>(c * dim + r)]);
            CHECK(smallest_eigenvalue(g, dim) > 0.0);
        }
    }
}

TEST_CASE("christoffel: flat models vanish, sphere matches the closed form") {
    auto torus = ManifoldModel::flat_torus({1.0, 3.0});
    double g2[8];
    double pt[2] = {0.9, 2.1};
    torus.christoffel(pt, g2);
    for (double v : g2) CHECK(v == 0.0);

    auto eu = ManifoldModel::euclidean(3);
    std::vector<double> g3(27);
    double pe[3] = {1.0, -2.0, 0.5};
    eu.christoffel(pe, g3.data());
    for (double v : g3) CHECK(v == 0.0);

    auto cs = ManifoldModel::cylinder_sphere(2, 1.0);
    const int dim = 3;
    std::vector<double> gamma(27);
    double theta = 1.1;
    double q[3] = {0.3, theta, 5.0};
    cs.christoffel(q, gamma.data());
    auto at = [&](int k, int i, int j) {
        return gamma[(static_cast<size_t>(k) * dim + static_cast<size_t>(i)) * dim +
                     static_cast<size_t>(j)];
    };
    CHECK(at(1, 2, 2) == doctest::Approx(-std::sin(theta) * std::cos(theta)).epsilon(1e-12));
    CHECK(at(2, 1, 2) == doctest::Approx(std::cos(theta) / std::sin(theta)).epsilon(1e-12));
    CHECK(at(2, 2, 1) == at(2, 1, 2));
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) CHECK(at(0, i, j) == 0.0);
}

TEST_CASE("christoffel: symmetry and finite-difference consistency") {
    std::vector<ManifoldModel> models = {ManifoldModel::cylinder_sphere(2, 1.0),
                                         ManifoldModel::cylinder_sphere(3, 0.8),
                                         ManifoldModel::flat_torus({2.0, 1.0})};
    for (const auto &model : models) {
        const int dim = model.dim();
        const size_t n = static_cast<size_t>(dim);
        std::vector<double> gamma(n * n * n);
        for (const auto &p : sample_points(model, 25, 99)) {
            model.christoffel(p.data(), gamma.data());
            for (int k = 0; k < dim; ++k)
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j)
                        CHECK(gamma[(static_cast<size_t>(k) * n + static_cast<size_t>(i)) * n +
                                    static_cast<size_t>(j)] ==
                              gamma[(static_cast<size_t>(k) * n + static_cast<size_t>(j)) * n +
                                    static_cast<size_t>(i)]);
            std::vector<double> fd = fd_christoffel(model, p.data(), 1e-4);
            for (size_t idx = 0; idx < fd.size(); ++idx)
                CHECK(std::abs(gamma[idx] - fd[idx]) <= 1e-6);
        }
    }
}

TEST_CASE("riemann: examples") {
    auto torus = ManifoldModel::flat_torus({1.0, 1.0});
    double p2[2] = {0.2, 0.8};
    double x2[2] = {1.0, 0.5}, y2[2] = {-0.3, 2.0};
    CHECK(torus.riemann(p2, x2, y2, x2, y2) == 0.0);

    // Orthonormal pair tangent to the unit sphere factor.
    auto cs = ManifoldModel::cylinder_sphere(2, 1.0);
    double theta = 1.0;
    double q[3] = {0.5, theta, 2.0};
    double x[3] = {0.0, 1.0, 0.0};
    double y[3] = {0.0, 0.0, 1.0 / std::sin(theta)};
    CHECK(cs.riemann(q, x, y, x, y) == doctest::Approx(1.0).epsilon(1e-12));

    // Antisymmetry forces zero on equal arguments.
    double z[3] = {0.7, 0.3, -0.2};
    CHECK(std::abs(cs.riemann(q, z, z, x, y)) <= 1e-15);
}

TEST_CASE("riemann: antisymmetries, first Bianchi, FD assembly") {
    auto cs = ManifoldModel::cylinder_sphere(2, 0.9);
    SplitMix64 rng(4);
    for (const auto &p : sample_points(cs, 20, 7)) {
        double v[4][3];
        for (auto &row : v)
            for (double &c : row) c = 2.0 * rng.next_unit() - 1.0;
        const double *x = v[0], *y = v[1], *z = v[2], *w = v[3];
        double r = cs.riemann(p.data(), x, y, z, w);
        CHECK(std::abs(cs.riemann(p.data(), y, x, z, w) + r) <= 1e-8);
        CHECK(std::abs(cs.riemann(p.data(), x, y, w, z) + r) <= 1e-8);
        double bianchi = r + cs.riemann(p.data(), y, z, x, w) + cs.riemann(p.data(), z, x, y, w);
        CHECK(std::abs(bianchi) <= 1e-8);
        double fd = fd_riemann(cs, p.data(), x, y, z, w, 1e-4);
        CHECK(std::abs(fd - r) <= 1e-6);
    }
}

TEST_CASE("parallel_forms: declared fields per model") {
    auto cs = ManifoldModel::cylinder_sphere(2, 1.0);
    REQUIRE(cs.parallel_form_count() == 1);
    CHECK(cs.parallel_form_name(0) == "du");
    double comps[3];
    double q[3] = {0.3, 1.2, 4.0};
    cs.parallel_form(0, q, comps);
    CHECK(comps[0] == 1.0);
    CHECK(comps[1] == 0.0);
    CHECK(comps[2] == 0.0);

    auto eu = ManifoldModel::euclidean(2);
    REQUIRE(eu.parallel_form_count() == 2);
    CHECK(eu.parallel_form_name(0) == "dx0");
    CHECK(eu.parallel_form_name(1) == "dx1");

    auto torus = ManifoldModel::flat_torus({1.0, 1.0});
    REQUIRE(torus.parallel_form_count() == 2);
    CHECK(torus.parallel_form_name(0) == "du");
    CHECK(torus.parallel_form_name(1) == "dv");
    CHECK(torus.parallel_form_index("dv") == 1);
    CHECK(torus.parallel_form_index("dq") == -1);
}

TEST_CASE("check_parallel: declared forms pass, a non-parallel field is caught") {
    auto torus = ManifoldModel::flat_torus({1.0, 1.0});
    double pt[2] = {0.3, 0.6};
    CHECK(torus.check_parallel(0, pt, 1e-4) == 0.0);

    auto cs = ManifoldModel::cylinder_sphere(2, 1.0);
    double q[3] = {0.2, 1.0, 3.0};
    CHECK(cs.check_parallel(0, q, 1e-4) <= 1e-7);
    for (const auto &p : sample_points(cs, 100, 23))
        CHECK(cs.check_parallel(0, p.data(), 1e-4) <= 1e-7);

    // Omega = u du is not parallel: the residual detects d_u Omega_u = 1.
    auto u_du = [](const double *p, double *out) {
        out[0] = p[0];
        out[1] = 0.0;
    };
    CHECK(torus.check_parallel(u_du, pt, 1e-4) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("curvature bound: flat models 0, sphere factor 1/r^2") {
    CHECK(ManifoldModel::euclidean(2).curvature_bound() == 0.0);
    CHECK(ManifoldModel::flat_torus({1.0, 1.0}).curvature_bound() == 0.0);
    auto cs = ManifoldModel::cylinder_sphere(2, 2.0);
    CHECK(cs.curvature_bound() == doctest::Approx(0.25).epsilon(1e-14));

    // The bound is attained by an orthonormal sphere-tangent pair and never
    // exceeded on random samples.
    double theta = 1.3;
    double q[3] = {0.1, theta, 0.5};
    double t[3] = {0.0, 1.0 / 2.0, 0.0}; // unit: g_theta = r^2 = 4
    double h[3] = {0.0, 0.0, 1.0 / (2.0 * std::sin(theta))};
    double h2 = cs.inner(q, h, h);
    CHECK(std::abs(cs.riemann(q, t, h, t, h)) / h2 ==
          doctest::Approx(cs.curvature_bound()).epsilon(1e-8));

    SplitMix64 rng(11);
    for (const auto &p : sample_points(cs, 50, 5)) {
        double tv[3], hv[3];
        for (int c = 0; c < 3; ++c) {
            tv[c] = 2.0 * rng.next_unit() - 1.0;
            hv[c] = 2.0 * rng.next_unit() - 1.0;
        }
        double tn = std::sqrt(cs.inner(p.data(), tv, tv));
        for (double &c : tv) c /= tn;
        double ratio = std::abs(cs.riemann(p.data(), tv, hv, tv, hv)) / cs.inner(p.data(), hv, hv);
        CHECK(ratio <= cs.curvature_bound() + 1e-8);
    }
}

TEST_CASE("chart: pole margin and periodic wrapping") {
    auto cs = ManifoldModel::cylinder_sphere(2, 1.0, 0.05);
    double near_pole[3] = {0.0, 0.01, 0.0};
    CHECK_THROWS_AS(cs.check_chart(near_pole), Error);
    double metric_buf[9];
    CHECK_THROWS_AS(cs.metric(near_pole, metric_buf), Error);
    try {
        cs.metric(near_pole, metric_buf);
    } catch (const Error &e) {
        CHECK(e.kind() == ErrorKind::PoleProximity);
    }

    auto torus = ManifoldModel::flat_torus({1.0, 2.0});
    double coords[2] = {1.25, -0.5};
    torus.canonicalize(coords);
    CHECK(coords[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(coords[1] == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(torus.wrap_diff(0, 0.75) == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(torus.wrap_diff(1, 0.75) == doctest::Approx(0.75).epsilon(1e-14));
}
