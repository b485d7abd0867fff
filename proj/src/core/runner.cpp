#include "core/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "core/log.hpp"
#include "core/presets.hpp"
#include "core/text.hpp"

namespace csf {

namespace {

namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void write_text_file(const fs::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open for writing: " + path.string());
    out << content;
    if (!out) fail(ErrorKind::Io, "write failed: " + path.string());
}

void write_curve_file(const DiscreteCurve &curve, const fs::path &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot open for writing: " + path.string());
    write_curve_csv(curve, out);
}

// Polyline projection of the first two chart coordinates.
std::string curve_svg(const DiscreteCurve &curve) {
    const int dim = curve.dim();
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (int i = 0; i < curve.node_count(); ++i) {
        const double *p = curve.node(i);
        double y = dim > 1 ? p[1] : 0.0;
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    double w = std::max(xmax - xmin, 1e-9), h = std::max(ymax - ymin, 1e-9);
    double pad = 0.05 * std::max(w, h);
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" +
                      format_double(xmin - pad) + " " + format_double(ymin - pad) + " " +
                      format_double(w + 2 * pad) + " " + format_double(h + 2 * pad) +
                      "\">\n<polygon fill=\"none\" stroke=\"black\" stroke-width=\"" +
                      format_double(0.004 * std::max(w, h)) + "\" points=\"";
    for (int i = 0; i < curve.node_count(); ++i) {
        const double *p = curve.node(i);
        if (i) svg += ' ';
        svg += format_double(p[0]) + "," + format_double(dim > 1 ? p[1] : 0.0);
    }
    svg += "\"/>\n</svg>\n";
    return svg;
}

struct Sampler {
    const RunConfig &config;
    const ModelPtr &model;
    int primary_form;
    double eps_pos;
    fs::path out_dir;
    std::vector<DiagnosticsRecord> records;
    long long sample_index = 0;

    void operator()(const FlowState &prev, const FlowState &next, double dt) {
        const int m_max = config.flow.m_max;
        CurveGeometry gn = compute_geometry(next.curve, m_max);

        DiagnosticsRecord r;
        r.t = next.t;
        r.length = gn.length;
        OmegaValues omega = omega_t(*model, gn, primary_form);
        r.min_omega_t = omega.min;
        r.max_omega_t = omega.max;
        bool mu_ok = omega.min > eps_pos;
        r.max_mu = mu_ok ? 1.0 / omega.min : kNaN;
        r.max_a2 = gn.max_a2();
        for (int m = 1; m <= m_max; ++m) r.max_grad_a2.push_back(gn.max_a_norm(m));
        r.int_a2 = integrate_scalar(gn, gn.a_norms[0]);
        for (int m = 1; m <= m_max; ++m)
            r.int_grad_a2.push_back(integrate_scalar(gn, gn.a_norms[static_cast<size_t>(m)]));
        if (mu_ok) {
            double worst = 0.0;
            for (size_t i = 0; i < omega.values.size(); ++i) {
                double m_i = 1.0 / omega.values[i];
                worst = std::max(worst, gn.a_norms[0][i] * m_i * m_i);
            }
            r.bound_a2mu2 = worst;
        } else {
            r.bound_a2mu2 = kNaN;
        }

        if (dt > 0.0) {
            CurveGeometry gp = compute_geometry(prev.curve, m_max);
            r.residual_ep = residual_form_evolution(*model, gp, gn, dt, config.flow.scheme,
                                                    primary_form);
            r.residual_eqsf =
                m_max >= 1 ? residual_a2_evolution(prev.curve, gp, next.curve, gn, dt,
                                                   config.flow.scheme)
                           : kNaN;
            bool mu_ok_prev = omega_t(*model, gp, primary_form).min > eps_pos;
            r.residual_gf = (mu_ok && mu_ok_prev)
                                ? residual_mu_evolution(*model, gp, gn, dt, config.flow.scheme,
                                                        primary_form, eps_pos)
                                : kNaN;
        }
        if (m_max >= 2) {
            InterpMargins margins = interpolation_checks(next.curve, m_max);
            r.interp_ta = margins.ta;
            r.interp_tb = margins.tb;
        } else {
            r.interp_ta = kNaN;
            r.interp_tb = kNaN;
        }
        records.push_back(std::move(r));

        if (config.output.snapshot_every > 0 &&
            sample_index % config.output.snapshot_every == 0) {
            char name[32];
            std::snprintf(name, sizeof(name), "curve_%06lld.csv", sample_index);
            write_curve_file(next.curve, out_dir / "snapshots" / name);
        }
        log_debug("sample " + format_int(sample_index) + " t=" + format_double(next.t) +
                  " length=" + format_double(r.length) + " max|A|^2=" + format_double(r.max_a2));
        ++sample_index;
    }
};

std::string diagnostics_csv(const std::vector<DiagnosticsRecord> &records, int m_max) {
    std::string text = DiagnosticsRecord::csv_header(m_max) + "\n";
    for (const DiagnosticsRecord &r : records) text += r.csv_row() + "\n";
    return text;
}

void run_checks(RunSummary &summary, const RunConfig &config, double c0) {
    const DiagnosticsConfig &diag = config.diagnostics;
    const auto &records = summary.records;
    for (const std::string &name : diag.checks) {
        CheckResult check;
        check.name = name;
        if (name == "mono_min_omega") {
            double tol = diag.tolerance("tol_mono", 1e-8);
            if (records.empty() || !(records.front().min_omega_t > 0.0)) {
                check.pass = false;
                check.detail = "initial min Omega(T) is not positive";
            } else {
                check.value = worst_min_omega_decrease(records);
                check.pass = check.value <= tol;
                check.detail = "worst decrease " + format_double(check.value);
            }
        } else if (name == "a2mu2") {
            A2Mu2Check result =
                check_a2mu2(records, c0, diag.tolerance("tol_exp", 1e-2), 1e-8);
            check.pass = result.ok;
            check.value = c0 == 0.0 ? result.worst_step_increase : result.worst_bound_ratio;
            check.detail = c0 == 0.0
                               ? "worst step increase " + format_double(check.value)
                               : "worst bound ratio " + format_double(check.value);
        } else if (name == "interp") {
            // Hard only once the length has settled; early samples are
            // informative.
            double tol = diag.tolerance("tol_interp", 1e-6);
            double worst = std::numeric_limits<double>::infinity();
            bool ok = true;
            for (size_t k = 0; k < records.size(); ++k) {
                double ta = records[k].interp_ta, tb = records[k].interp_tb;
                if (std::isnan(ta) || std::isnan(tb)) continue;
                worst = std::min({worst, ta, tb});
                bool settled = false;
                if (k > 0) {
                    double h = records[k].t - records[k - 1].t;
                    settled = h > 0.0 &&
                              std::abs(records[k].length - records[k - 1].length) / h < 1e-4;
                }
                if (settled && (ta < -tol || tb < -tol)) ok = false;
            }
            check.pass = ok;
            check.value = worst;
            check.detail = "worst normalized margin " + format_double(worst);
        } else if (name == "convergence") {
            try {
                summary.convergence = convergence_report(
                    records, config.flow.m_max, diag.tolerance("conv_tol_A", 1e-3),
                    diag.tolerance("conv_tol_gradA", 1e-2),
                    diag.tolerance("length_floor", 1e-6));
                check.pass = true;
                for (const ConvergenceVerdict &v : summary.convergence) {
                    if (!v.converged) check.pass = false;
                    check.value = std::max(check.value, v.final_value);
                }
                check.detail = "largest final max|grad^m A| " + format_double(check.value);
            } catch (const Error &e) {
                check.pass = false;
                check.detail = e.what();
            }
        }
        summary.checks.push_back(std::move(check));
    }
}

nlohmann::json summary_json(const RunSummary &summary) {
    nlohmann::json j;
    j["termination"] = to_string(summary.termination);
    if (!summary.error.empty()) j["error"] = summary.error;
    j["t_final"] = summary.t_final;
    j["steps"] = summary.steps;
    j["final_length"] = summary.final_length;
    j["final_max_A2"] = summary.final_max_a2;
    j["samples"] = summary.records.size();
    nlohmann::json conv = nlohmann::json::array();
    for (const ConvergenceVerdict &v : summary.convergence) {
        nlohmann::json e;
        e["m"] = v.m;
        e["final_max_grad_A"] = v.final_value;
        e["decreasing"] = v.decreasing;
        e["converged"] = v.converged;
        conv.push_back(e);
    }
    j["convergence"] = conv;
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult &c : summary.checks) {
        nlohmann::json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json();
        e["detail"] = c.detail;
        checks.push_back(e);
    }
    j["checks"] = checks;
    if (!summary.records.empty()) {
        const DiagnosticsRecord &last = summary.records.back();
        j["final_min_omega_T"] = last.min_omega_t;
        double worst_ta = std::numeric_limits<double>::infinity();
        double worst_tb = worst_ta;
        for (const DiagnosticsRecord &r : summary.records) {
            if (!std::isnan(r.interp_ta)) worst_ta = std::min(worst_ta, r.interp_ta);
            if (!std::isnan(r.interp_tb)) worst_tb = std::min(worst_tb, r.interp_tb);
        }
        if (std::isfinite(worst_ta)) j["worst_interp_Ta"] = worst_ta;
        if (std::isfinite(worst_tb)) j["worst_interp_Tb"] = worst_tb;
        j["worst_min_omega_decrease"] = worst_min_omega_decrease(summary.records);
    }
    j["exit_code"] = summary.exit_code;
    return j;
}

int exit_code_for_error(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::InvalidArgument:
        return kExitConfig;
    default:
        return kExitRuntime;
    }
}

} // namespace

RunSummary run_experiment(const RunConfig &config, const std::string &out_dir_override) {
    RunSummary summary;
    fs::path out_dir =
        out_dir_override.empty() ? fs::path(config.output.directory) : fs::path(out_dir_override);
    try {
        ModelPtr model = make_model(config.manifold);
        std::vector<int> forms = resolve_forms(*model, config.diagnostics);
        DiscreteCurve initial = make_initial_curve(model, config.initial_curve);

        fs::create_directories(out_dir);
        if (config.output.snapshot_every > 0) fs::create_directories(out_dir / "snapshots");
        write_text_file(out_dir / "config.json", serialize_config(config));

        Sampler sampler{config, model, forms.front(),
                        config.diagnostics.tolerance("eps_pos", kEpsPositiveOmega), out_dir,
                        {}, 0};
        FlowState state = make_flow_state(std::move(initial));
        log_info("run start: " + config.initial_curve.preset + " on " + config.manifold.kind +
                 ", N=" + format_int(config.initial_curve.n_nodes) +
                 ", t_end=" + format_double(config.flow.t_end));
        AdvanceResult advanced = advance(state, config.flow, std::ref(sampler));

        summary.termination = advanced.termination;
        if (advanced.termination == Termination::Error)
            summary.error = std::string(to_string(advanced.error_kind)) + ": " +
                            advanced.error_message;
        summary.t_final = state.t;
        summary.steps = state.step;
        summary.final_length = state.geometry.length;
        summary.final_max_a2 = state.geometry.max_a2();
        summary.records = std::move(sampler.records);

        // dL/dt residual needs the whole series.
        if (summary.records.size() >= 3) {
            std::vector<double> times, lengths, int_a2;
            for (const DiagnosticsRecord &r : summary.records) {
                times.push_back(r.t);
                lengths.push_back(r.length);
                int_a2.push_back(r.int_a2);
            }
            std::vector<double> res = residual_length_series(times, lengths, int_a2);
            for (size_t k = 0; k < res.size(); ++k) summary.records[k].residual_length = res[k];
        }

        switch (advanced.termination) {
        case Termination::Completed:
            run_checks(summary, config, model->curvature_bound());
            summary.exit_code = kExitOk;
            for (const CheckResult &c : summary.checks)
                if (!c.pass) summary.exit_code = kExitCheckFailure;
            break;
        case Termination::Blowup:
            summary.exit_code = kExitBlowup;
            break;
        case Termination::Error:
            summary.exit_code = exit_code_for_error(advanced.error_kind);
            break;
        }

        write_text_file(out_dir / "diagnostics.csv",
                        diagnostics_csv(summary.records, config.flow.m_max));
        write_curve_file(state.curve, out_dir / "final_curve.csv");
        write_text_file(out_dir / "final_curve.svg", curve_svg(state.curve));
        write_text_file(out_dir / "summary.json", summary_json(summary).dump(2) + "\n");
        log_info("run finished: " + std::string(to_string(summary.termination)) +
                 ", exit " + format_int(summary.exit_code));
    } catch (const Error &e) {
        summary.termination = Termination::Error;
        summary.error = std::string(to_string(e.kind())) + ": " + e.what();
        summary.exit_code = exit_code_for_error(e.kind());
        log_error(summary.error);
    } catch (const std::exception &e) {
        summary.termination = Termination::Error;
        summary.error = std::string("internal_error: ") + e.what();
        summary.exit_code = kExitRuntime;
        log_error(summary.error);
    }
    return summary;
}

int run_experiment_file(const std::string &config_path, const std::string &out_dir_override) {
    RunConfig config;
    try {
        config = parse_config_file(config_path);
    } catch (const Error &e) {
        log_error(std::string(to_string(e.kind())) + ": " + e.what());
        return exit_code_for_error(e.kind());
    }
    return run_experiment(config, out_dir_override).exit_code;
}

int run_experiment_text(const std::string &config_json, const std::string &out_dir_override) {
    RunConfig config;
    try {
        config = parse_config_text(config_json);
    } catch (const Error &e) {
        log_error(std::string(to_string(e.kind())) + ": " + e.what());
        return exit_code_for_error(e.kind());
    }
    return run_experiment(config, out_dir_override).exit_code;
}

namespace {

int validate_parsed(const RunConfig &config) {
    try {
        ModelPtr model = make_model(config.manifold);
        resolve_forms(*model, config.diagnostics);
        make_initial_curve(model, config.initial_curve);
        config.flow.validate();
    } catch (const Error &e) {
        log_error(std::string(to_string(e.kind())) + ": " + e.what());
        return exit_code_for_error(e.kind());
    }
    return kExitOk;
}

} // namespace

int validate_config_file(const std::string &config_path) {
    try {
        return validate_parsed(parse_config_file(config_path));
    } catch (const Error &e) {
        log_error(std::string(to_string(e.kind())) + ": " + e.what());
        return exit_code_for_error(e.kind());
    }
}

int validate_config_text(const std::string &config_json) {
    try {
        return validate_parsed(parse_config_text(config_json));
    } catch (const Error &e) {
        log_error(std::string(to_string(e.kind())) + ": " + e.what());
        return exit_code_for_error(e.kind());
    }
}

} // namespace csf
