// gcsurf - command line driver: metric tables, invariant regions, viscous
// solves, epsilon sweeps, surface realization, and the validation battery.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "gcs/config.hpp"
#include "gcs/diagnostics.hpp"
#include "gcs/immersion.hpp"
#include "gcs/metric.hpp"
#include "gcs/region.hpp"
#include "gcs/solver.hpp"
#include "gcs/util.hpp"
#include "gcs/validate.hpp"

using namespace gcs;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / double(n - 1);
    return v;
}

// RunConfig flags shared by solve/sweep/immerse; a flag given on the command
// line overrides the config-file value.
struct ConfigFlags {
    std::string config_path;
    RunConfig val;
    std::map<std::string, CLI::Option*> opts;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value configuration file");
        opts["metric"] = cmd->add_option("--metric", val.metric,
                                         "catenoid | helicoid | tabulated:PATH");
        opts["beta"] = cmd->add_option("--beta", val.beta, "catenoid index (>= sqrt 2)");
        opts["a"] = cmd->add_option("--a", val.a, "helicoid exponent (<= -2)");
        opts["c"] = cmd->add_option("--c", val.c, "shape constant of the metric family");
        opts["k0"] = cmd->add_option("--k0", val.k0, "curvature amplitude (derived if < 0)");
        opts["eps"] = cmd->add_option("--eps", val.eps, "artificial viscosity");
        opts["nx"] = cmd->add_option("--nx", val.nx, "grid nodes per period");
        opts["y0"] = cmd->add_option("--y0", val.y0, "strip depth, y in [-y0, 0]");
        opts["delta"] = cmd->add_option("--delta", val.delta,
                                        "region corner height (default: half admissible)");
        opts["init"] = cmd->add_option("--init", val.init,
                                       "stationary | perturb:AMP | random | file:PATH");
        opts["out"] = cmd->add_option("--out", val.out_prefix, "output prefix");
        opts["levels"] = cmd->add_option("--levels", val.levels, "stored snapshot count");
        opts["seed"] = cmd->add_option("--seed", val.seed, "random seed");
        opts["x_period"] = cmd->add_option("--x-period", val.x_period, "periodic x length");
        opts["cfl_advect"] = cmd->add_option("--cfl-advect", val.cfl_advect, "advective CFL");
        opts["cfl_source"] = cmd->add_option("--cfl-source", val.cfl_source, "source CFL");
        opts["mollifier_width"] = cmd->add_option("--mollifier-width", val.mollifier_width,
                                                  "initial-data mollifier radius");
        opts["v_floor"] = cmd->add_option("--v-floor", val.v_floor, "positivity floor for v");
        opts["scheme"] = cmd->add_option("--scheme", val.scheme, "semi-implicit | explicit");
    }

    RunConfig resolve() const {
        RunConfig rc = config_path.empty() ? RunConfig{} : parse_config_file(config_path);
        if (opts.at("metric")->count()) rc.metric = val.metric;
        if (opts.at("beta")->count()) rc.beta = val.beta;
        if (opts.at("a")->count()) rc.a = val.a;
        if (opts.at("c")->count()) rc.c = val.c;
        if (opts.at("k0")->count()) rc.k0 = val.k0;
        if (opts.at("eps")->count()) rc.eps = val.eps;
        if (opts.at("nx")->count()) rc.nx = val.nx;
        if (opts.at("y0")->count()) rc.y0 = val.y0;
        if (opts.at("delta")->count()) rc.delta = val.delta;
        if (opts.at("init")->count()) rc.init = val.init;
        if (opts.at("out")->count()) rc.out_prefix = val.out_prefix;
        if (opts.at("levels")->count()) rc.levels = val.levels;
        if (opts.at("seed")->count()) rc.seed = val.seed;
        if (opts.at("x_period")->count()) rc.x_period = val.x_period;
        if (opts.at("cfl_advect")->count()) rc.cfl_advect = val.cfl_advect;
        if (opts.at("cfl_source")->count()) rc.cfl_source = val.cfl_source;
        if (opts.at("mollifier_width")->count()) rc.mollifier_width = val.mollifier_width;
        if (opts.at("v_floor")->count()) rc.v_floor = val.v_floor;
        if (opts.at("scheme")->count()) rc.scheme = val.scheme;
        rc.validate();
        return rc;
    }
};

void write_step_log(const std::string& path, const Trajectory& traj,
                    const std::vector<std::string>& header) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    for (const auto& line : header) out << "# " << line << "\n";
    out << "y,dy,maxlam,violation\n";
    for (const auto& e : traj.step_log)
        out << fmt17(e.y) << ',' << fmt17(e.dy) << ',' << fmt17(e.max_lambda) << ','
            << fmt17(e.region_violation) << "\n";
}

int cmd_solve(const ConfigFlags& flags, bool dry_run) {
    RunConfig rc = flags.resolve();
    if (dry_run) {
        for (const auto& line : rc.header_lines()) std::cout << line << "\n";
        return 0;
    }
    Metric metric = rc.build_metric();
    InvariantRegion region = rc.build_region_for_metric();
    std::vector<double> u0, v0;
    rc.initial_data(metric, region, u0, v0);
    SolverConfig sc = rc.solver_config();

    Trajectory traj = run(u0, v0, metric, sc, linspace(-rc.y0, 0.0, rc.levels), &region);
    if (traj.initial_outside_region)
        std::cerr << "warning: initial data starts outside the invariant region\n";

    auto header = rc.header_lines();
    header.push_back("mollifier_width_effective=" + fmt17(sc.effective_mollifier_width()));
    for (size_t k = 0; k < traj.levels.size(); ++k)
        traj.levels[k].save(rc.out_prefix + "_level" + std::to_string(k) + ".txt", header);
    write_step_log(rc.out_prefix + "_log.csv", traj, header);
    std::cout << "wrote " << traj.levels.size() << " levels and step log to " << rc.out_prefix
              << "_*\n";
    return 0;
}

int cmd_sweep(const ConfigFlags& flags, const std::string& eps_list_str, double phi_xc,
              double phi_xw, double phi_yc, double phi_yw) {
    RunConfig rc = flags.resolve();
    std::vector<double> eps_list;
    {
        std::istringstream is(eps_list_str);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) eps_list.push_back(std::stod(tok));
    }
    if (eps_list.empty()) throw ParseError("sweep: empty --eps-list");

    Metric metric = rc.build_metric();
    InvariantRegion region = rc.build_region_for_metric();
    TestFunction bump;
    bump.x_center = phi_xc;
    bump.x_halfwidth = phi_xw;
    bump.y_center = phi_yc;
    bump.y_halfwidth = phi_yw;
    bump.x_period = rc.x_period;

    struct Row {
        double eps, dissipation, bound, visc, r1, r2;
    };
    std::vector<Row> rows(eps_list.size());
    std::vector<double> u0, v0;
    rc.initial_data(metric, region, u0, v0);

    // one worker per epsilon; each writes only its own slot
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(eps_list.size());
    for (size_t k = 0; k < eps_list.size(); ++k) {
        workers.emplace_back([&, k]() {
            try {
                RunConfig rck = rc;
                rck.eps = eps_list[k];
                SolverConfig sc = rck.solver_config();
                Trajectory traj =
                    run(u0, v0, metric, sc, linspace(-rck.y0, 0.0, rck.levels), &region);
                EntropyReport rep = dissipation(traj, metric, bump, rck.eps);
                auto [r1, r2] = codazzi_weak_residual(traj, metric, bump);
                rows[k] = {rck.eps, rep.dissipation, rep.bound_estimate,
                           weak_viscous_residual(traj, bump, rck.eps), r1, r2};
            } catch (...) {
                errors[k] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<double> lx, ly;
    for (const auto& r : rows) {
        lx.push_back(std::log(r.eps));
        ly.push_back(std::log(r.visc));
    }
    const double slope = fit_slope(lx, ly);

    const std::string path = rc.out_prefix + "_sweep.csv";
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    for (const auto& line : rc.header_lines()) out << "# " << line << "\n";
    out << "# phi: x_center=" << fmt17(phi_xc) << " x_halfwidth=" << fmt17(phi_xw)
        << " y_center=" << fmt17(phi_yc) << " y_halfwidth=" << fmt17(phi_yw) << "\n";
    out << "# mollifier_width_effective=" << fmt17(rc.solver_config().effective_mollifier_width())
        << "\n";
    out << "eps,dissipation,bound_estimate,visc_residual,r1,r2\n";
    for (const auto& r : rows)
        out << fmt17(r.eps) << ',' << fmt17(r.dissipation) << ',' << fmt17(r.bound) << ','
            << fmt17(r.visc) << ',' << fmt17(r.r1) << ',' << fmt17(r.r2) << "\n";
    out << "# visc_residual_slope=" << fmt17(slope) << "\n";
    std::cout << "sweep: " << rows.size() << " runs, visc_residual slope " << fmt17(slope)
              << ", wrote " << path << "\n";
    return 0;
}

int cmd_immerse(const ConfigFlags& flags, const std::string& from, std::string out_path,
                bool obj_given, int mesh_n) {
    // --out doubles as the OBJ path here (no prefix outputs in this mode)
    if (!obj_given && flags.opts.at("out")->count()) out_path = flags.val.out_prefix;
    if (from == "exact-catenoid" || from == "exact-helicoid") {
        RunConfig rc = flags.resolve();
        ImmersionGrid grid{mesh_n, mesh_n, 0.0, 2 * 3.141592653589793, -rc.y0, 0.0};
        SurfaceMesh mesh;
        if (from == "exact-catenoid") {
            ExactCatenoidForms cat;
            cat.c_shape = rc.c;
            cat.beta = rc.beta;
            mesh = frame_integrate(cat, grid, cat.exact_frame(0.0, -rc.y0),
                                   cat.exact_position(0.0, -rc.y0));
        } else {
            ExactHelicoidForms hel;
            hel.c = rc.c;
            mesh = frame_integrate(hel, grid, hel.exact_frame(0.0, -rc.y0),
                                   hel.exact_position(0.0, -rc.y0));
        }
        export_obj(mesh, out_path, rc.header_lines());
        std::cout << "wrote " << out_path << " (max frame correction "
                  << fmt17(mesh.max_gram_correction) << ")\n";
        return 0;
    }
    if (from.rfind("run:", 0) == 0) {
        RunConfig rc = flags.resolve();
        const std::string prefix = from.substr(4);
        Trajectory traj;
        for (int k = 0;; ++k) {
            const std::string path = prefix + "_level" + std::to_string(k) + ".txt";
            if (!std::filesystem::exists(path)) break;
            traj.levels.push_back(StateField::load(path));
        }
        if (traj.levels.empty())
            throw ParseError("immerse: no level files found for prefix " + prefix);
        Metric metric = rc.build_metric();
        SurfaceMesh mesh = realize_from_solution(traj, metric);
        export_obj(mesh, out_path, rc.header_lines());
        std::cout << "wrote " << out_path << " (max frame correction "
                  << fmt17(mesh.max_gram_correction) << ")\n";
        return 0;
    }
    throw ParseError("immerse: --from must be exact-catenoid, exact-helicoid or run:PREFIX");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gcsurf: negatively curved metrics, viscous Gauss-Codazzi solves, "
                 "and surface realization"};
    app.require_subcommand(1);

    // metric
    auto* metric_cmd = app.add_subcommand("metric", "evaluate or generate a metric table");
    std::string m_family = "catenoid", m_out = "metric.txt";
    double m_c = 1.0, m_beta = 1.4142135623730951, m_a = -2.0, m_k0 = -1.0, m_y0 = 1.0;
    double m_w0 = std::numeric_limits<double>::quiet_NaN(), m_w0p = 0.0, m_step = -1.0;
    int m_samples = 4096;
    bool m_generate = false;
    metric_cmd->add_option("--family", m_family, "catenoid | helicoid");
    metric_cmd->add_option("--c", m_c, "shape constant (closed form) / metric constant (ODE)");
    metric_cmd->add_option("--beta", m_beta, "catenoid index");
    metric_cmd->add_option("--a", m_a, "helicoid exponent");
    metric_cmd->add_option("--k0", m_k0, "curvature amplitude for --generate");
    metric_cmd->add_option("--y0", m_y0, "strip depth");
    metric_cmd->add_option("--samples", m_samples, "table rows");
    metric_cmd->add_flag("--generate", m_generate, "integrate the curvature ODE");
    metric_cmd->add_option("--w0", m_w0, "ODE initial w(0)");
    metric_cmd->add_option("--w0p", m_w0p, "ODE initial w'(0) (<= 0)");
    metric_cmd->add_option("--step", m_step, "ODE step (default y0/4096)");
    metric_cmd->add_option("--out", m_out, "output table path");

    // region
    auto* region_cmd = app.add_subcommand("region", "print an invariant-region square");
    std::string r_family = "catenoid";
    double r_alpha = -1.0, r_c = 1.0, r_a = -2.0, r_delta = -1.0;
    region_cmd->add_option("--family", r_family, "catenoid | helicoid");
    region_cmd->add_option("--alpha", r_alpha, "catenoid alpha (<= -1)");
    region_cmd->add_option("--c", r_c, "catenoid metric constant");
    region_cmd->add_option("--a", r_a, "helicoid exponent (<= -2)");
    region_cmd->add_option("--delta", r_delta, "corner height (default: half admissible)");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "integrate the viscous system");
    ConfigFlags solve_flags;
    solve_flags.attach(solve_cmd);
    bool dry_run = false;
    solve_cmd->add_flag("--dry-run", dry_run, "print the resolved config and exit");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "epsilon sweep with entropy diagnostics");
    ConfigFlags sweep_flags;
    sweep_flags.attach(sweep_cmd);
    std::string eps_list = "1e-1,3e-2,1e-2,3e-3,1e-3";
    double phi_xc = 3.141592653589793, phi_xw = 2.2, phi_yc = -0.5, phi_yw = 0.38;
    sweep_cmd->add_option("--eps-list", eps_list, "comma-separated viscosities");
    sweep_cmd->add_option("--phi-xc", phi_xc, "test function x center");
    sweep_cmd->add_option("--phi-xw", phi_xw, "test function x halfwidth");
    sweep_cmd->add_option("--phi-yc", phi_yc, "test function y center");
    sweep_cmd->add_option("--phi-yw", phi_yw, "test function y halfwidth");

    // immerse
    auto* immerse_cmd = app.add_subcommand("immerse", "realize a surface mesh in R^3");
    ConfigFlags immerse_flags;
    immerse_flags.attach(immerse_cmd);
    std::string i_from = "exact-catenoid", i_out = "surface.obj";
    int i_n = 256;
    immerse_cmd->add_option("--from", i_from, "exact-catenoid | exact-helicoid | run:PREFIX");
    immerse_cmd->add_option("--mesh-n", i_n, "mesh resolution per direction (exact surfaces)");
    auto* obj_opt = immerse_cmd->add_option("--obj", i_out, "output OBJ path (alias of --out)");

    // validate
    auto* validate_cmd = app.add_subcommand("validate", "run the acceptance battery");
    bool quick = false;
    validate_cmd->add_flag("--quick", quick, "reduced sizes, skips the 256^2 immersion");

    CLI11_PARSE(app, argc, argv);

    try {
        if (metric_cmd->parsed()) {
            MetricTable table;
            if (m_family == "catenoid") {
                if (m_generate) {
                    MetricSpec spec;
                    spec.family = MetricFamily::CatenoidType;
                    spec.c_metric = m_c;
                    spec.k0 = m_k0 > 0 ? m_k0 : 1.0;
                    spec.beta = m_beta;
                    spec.y_min = -m_y0;
                    spec.y_max = 0;
                    const double w0 = std::isnan(m_w0) ? 0.0 : m_w0;
                    table = generate_metric_ode(spec, w0, m_w0p,
                                                m_step > 0 ? m_step : m_y0 / 4096.0);
                } else {
                    MetricSpec spec = MetricSpec::catenoid(m_c, m_beta, m_y0);
                    table.spec = spec;
                    for (int i = 0; i < m_samples; ++i) {
                        const double y = -m_y0 + m_y0 * i / double(m_samples - 1);
                        MetricSample s = eval_catenoid_example(y, m_c, m_beta);
                        table.y.push_back(y);
                        table.E.push_back(s.E);
                        table.Ey.push_back(s.Ey);
                        table.G.push_back(s.G);
                        table.K.push_back(s.K);
                        table.gamma.push_back(s.gamma);
                    }
                }
            } else if (m_family == "helicoid") {
                if (m_generate) {
                    MetricSpec spec = MetricSpec::helicoid_general(m_k0 > 0 ? m_k0 : m_c * m_c,
                                                                   m_a, m_y0);
                    const double w0 = std::isnan(m_w0) ? m_c : m_w0;
                    table = generate_metric_ode(spec, w0, m_w0p,
                                                m_step > 0 ? m_step : m_y0 / 4096.0);
                } else {
                    MetricSpec spec = MetricSpec::helicoid(m_c, m_y0);
                    table.spec = spec;
                    for (int i = 0; i < m_samples; ++i) {
                        const double y = -m_y0 + m_y0 * i / double(m_samples - 1);
                        MetricSample s = eval_helicoid_example(y, m_c);
                        table.y.push_back(y);
                        table.E.push_back(s.E);
                        table.Ey.push_back(s.Ey);
                        table.G.push_back(s.G);
                        table.K.push_back(s.K);
                        table.gamma.push_back(s.gamma);
                    }
                }
            } else {
                throw ParseError("metric: --family must be catenoid or helicoid");
            }
            std::ostringstream prov;
            prov << "gcsurf metric --family " << m_family << " --c " << fmt17(m_c)
                 << " --beta " << fmt17(m_beta) << " --a " << fmt17(m_a) << " --k0 "
                 << fmt17(m_k0) << " --y0 " << fmt17(m_y0);
            if (m_generate)
                prov << " --generate --w0 " << fmt17(std::isnan(m_w0) ? -1.0 : m_w0)
                     << " --w0p " << fmt17(m_w0p) << " --step " << fmt17(m_step);
            else
                prov << " --samples " << m_samples;
            table.save(m_out, {prov.str()});
            std::cout << "wrote " << table.y.size() << " rows to " << m_out << "\n";
            return 0;
        }
        if (region_cmd->parsed()) {
            RegionParams params = r_family == "helicoid" ? RegionParams::helicoid(r_a)
                                                         : RegionParams::catenoid(r_alpha, r_c);
            const double d = r_delta > 0 ? r_delta : 0.5 * delta_max(params);
            std::cout << build_region(params, d).describe();
            return 0;
        }
        if (solve_cmd->parsed()) return cmd_solve(solve_flags, dry_run);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_flags, eps_list, phi_xc, phi_xw, phi_yc, phi_yw);
        if (immerse_cmd->parsed())
            return cmd_immerse(immerse_flags, i_from, i_out, obj_opt->count() > 0, i_n);
        if (validate_cmd->parsed()) {
            ValidationReport rep = validate_suite(quick, true);
            return rep.all_pass ? 0 : 4;
        }
    } catch (const PositivityLoss& e) {
        std::cerr << "positivity loss: " << e.what() << "\n";
        return 2;
    } catch (const CflViolation& e) {
        std::cerr << "CFL violation: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
