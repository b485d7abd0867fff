#include "core/presets.hpp"

#include <cmath>

#include "core/diagnostics.hpp"
#include "core/text.hpp"

namespace csf {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

void apply_perturbation(std::vector<double> &coords, int n, int dim,
                        const PerturbationConfig &perturbation) {
    if (perturbation.amplitude == 0.0) return;
    SplitMix64 rng(perturbation.seed);
    double phase = kTwoPi * rng.next_unit();
    for (int j = 0; j < n; ++j) {
        double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        coords[static_cast<size_t>(j) * static_cast<size_t>(dim) + static_cast<size_t>(dim - 1)] +=
            perturbation.amplitude *
            std::sin(static_cast<double>(perturbation.frequency) * theta + phase);
    }
}

void verify_positive_omega(const ModelPtr &model, const DiscreteCurve &curve) {
    CurveGeometry g = compute_geometry(curve, 0);
    OmegaValues omega = omega_t(*model, g, 0);
    if (!(omega.min > 0.0))
        fail(ErrorKind::Config, "preset parameters give min Omega(T) = " +
                                    format_double(omega.min) + ", expected > 0");
}

} // namespace

DiscreteCurve make_initial_curve(const ModelPtr &model, const InitialCurveConfig &config) {
    const int n = config.n_nodes;
    const int dim = model->dim();
    if (n < DiscreteCurve::kMinNodes)
        fail(ErrorKind::Config, "N must be >= " + format_int(DiscreteCurve::kMinNodes));
    std::vector<double> coords(static_cast<size_t>(n) * static_cast<size_t>(dim), 0.0);
    auto at = [&](int j, int c) -> double & {
        return coords[static_cast<size_t>(j) * static_cast<size_t>(dim) + static_cast<size_t>(c)];
    };

    if (config.preset == "circle") {
        if (model->kind() != ModelKind::Euclidean)
            fail(ErrorKind::Config, "circle preset requires a euclidean model");
        if (dim < 2) fail(ErrorKind::Config, "circle preset needs dimension >= 2");
        if (!(config.radius > 0.0)) fail(ErrorKind::Config, "circle radius must be positive");
        std::vector<double> center = config.center;
        if (center.empty()) center.assign(static_cast<size_t>(dim), 0.0);
        if (center.size() != static_cast<size_t>(dim))
            fail(ErrorKind::Config, "circle center has wrong dimension");
        for (int j = 0; j < n; ++j) {
            double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            for (int c = 0; c < dim; ++c) at(j, c) = center[static_cast<size_t>(c)];
            at(j, 0) += config.radius * std::cos(theta);
            at(j, 1) += config.radius * std::sin(theta);
        }
    } else if (config.preset == "winding") {
        if (model->kind() != ModelKind::FlatTorus || dim != 2)
            fail(ErrorKind::Config, "winding preset requires a 2-dimensional flat torus");
        if (config.p < 1) fail(ErrorKind::Config, "winding p must be >= 1");
        if (config.frequency < 1) fail(ErrorKind::Config, "winding frequency must be >= 1");
        const double pu = model->period(0), pv = model->period(1);
        for (int j = 0; j < n; ++j) {
            double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            at(j, 0) = static_cast<double>(config.p) * theta * pu / kTwoPi;
            at(j, 1) = static_cast<double>(config.q) * theta * pv / kTwoPi +
                       config.amplitude * std::sin(static_cast<double>(config.frequency) * theta);
        }
    } else if (config.preset == "sphere_band") {
        if (model->kind() != ModelKind::CylinderSphere || model->sphere_dim() < 2)
            fail(ErrorKind::Config, "sphere_band preset requires cylinder_sphere with sphere_dim >= 2");
        if (config.frequency < 1) fail(ErrorKind::Config, "sphere_band frequency must be >= 1");
        if (std::abs(config.amplitude) >= kPi / 2.0 - model->pole_margin())
            fail(ErrorKind::PoleProximity,
                 "sphere_band amplitude reaches the pole margin");
        for (int j = 0; j < n; ++j) {
            double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            at(j, 0) = theta;
            at(j, 1) = kPi / 2.0 +
                       config.amplitude * std::sin(static_cast<double>(config.frequency) * theta);
            for (int c = 2; c < dim - 1; ++c) at(j, c) = kPi / 2.0;
            at(j, dim - 1) =
                config.phi0 +
                config.phi_amplitude * std::cos(static_cast<double>(config.phi_frequency) * theta);
        }
    } else if (config.preset == "periodic_graph") {
        if (model->kind() != ModelKind::FlatTorus)
            fail(ErrorKind::Config, "periodic_graph preset requires a flat torus");
        const size_t p = config.amplitudes.size();
        if (p == 0 || config.frequencies.size() != p)
            fail(ErrorKind::Config, "periodic_graph needs matching amplitudes and frequencies");
        if (static_cast<size_t>(dim) != 1 + p)
            fail(ErrorKind::Config, "periodic_graph needs a torus of dimension 1 + #graphs");
        for (int f : config.frequencies)
            if (f < 1) fail(ErrorKind::Config, "periodic_graph frequencies must be >= 1");
        const double pu = model->period(0);
        for (int j = 0; j < n; ++j) {
            double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
            at(j, 0) = theta * pu / kTwoPi;
            for (size_t g = 0; g < p; ++g)
                at(j, static_cast<int>(g) + 1) =
                    config.amplitudes[g] *
                    std::sin(static_cast<double>(config.frequencies[g]) * theta);
        }
    } else {
        fail(ErrorKind::Config, "unknown preset: " + config.preset);
    }

    if (config.perturbation) apply_perturbation(coords, n, dim, *config.perturbation);

    DiscreteCurve curve(model, std::move(coords));
    if (config.preset != "circle") verify_positive_omega(model, curve);
    return curve;
}

} // namespace csf
