#include "gcs/solver.hpp"

#include <algorithm>
#include <cmath>

#include "gcs/util.hpp"

namespace gcs {

double SolverConfig::effective_mollifier_width() const {
    if (mollifier_width >= 0) return mollifier_width;
    return 2.0 * std::max(dx(), std::sqrt(epsilon));
}

void SolverConfig::validate() const {
    if (!(epsilon > 0)) throw DomainError("solver: epsilon must be positive");
    if (nx < 16) throw DomainError("solver: nx >= 16 required");
    if (!(y0 > 0)) throw DomainError("solver: y0 must be positive");
    if (!(x_period > 0)) throw DomainError("solver: x_period must be positive");
    if (!(cfl_advect > 0) || cfl_advect > 1)
        throw DomainError("solver: cfl_advect must lie in (0, 1]");
    if (!(v_floor > 0)) throw DomainError("solver: v_floor must be positive");
}

void mollify_initial(std::span<const double> u_raw, std::span<const double> v_raw,
                     double width, const GridSpec& grid,
                     std::vector<double>& u_out, std::vector<double>& v_out) {
    const int n = grid.nx;
    for (int i = 0; i < n; ++i)
        if (!(v_raw[i] > 0))
            throw DomainError("mollify_initial: v must be positive everywhere");
    if (width < 0) throw DomainError("mollify_initial: width must be nonnegative");

    u_out.assign(u_raw.begin(), u_raw.end());
    v_out.assign(v_raw.begin(), v_raw.end());
    int m = int(std::floor(width / grid.dx + 1e-12));
    m = std::min(m, n / 2 - 1);
    if (m <= 0) return;

    // bump (1 - (r/W)^2)^2, sampled on nodes and normalized to unit mass
    std::vector<double> kernel(2 * m + 1);
    double total = 0;
    for (int j = -m; j <= m; ++j) {
        double r = j * grid.dx / width;
        double k = (1 - r * r);
        kernel[j + m] = k > 0 ? k * k : 0.0;
        total += kernel[j + m];
    }
    for (double& k : kernel) k /= total;

    for (int i = 0; i < n; ++i) {
        double su = 0, sv = 0;
        for (int j = -m; j <= m; ++j) {
            int idx = wrap_index(i + j, n);
            su += kernel[j + m] * u_raw[idx];
            sv += kernel[j + m] * v_raw[idx];
        }
        u_out[i] = su;
        v_out[i] = sv;
    }
}

// Constant-coefficient cyclic tridiagonal solve, diag b, off-diagonals cc,
// via Thomas + Sherman-Morrison.
static void solve_cyclic_tridiag(double b, double cc, std::span<const double> rhs,
                                 std::vector<double>& x, std::vector<double>& scratch) {
    const int n = int(rhs.size());
    auto thomas = [&](double b0, double bn1, std::span<const double> r, std::vector<double>& out) {
        // tridiag(cc, b, cc) with modified first/last diagonal entries
        std::vector<double>& cp = scratch;
        cp.resize(n);
        out.resize(n);
        double beta = b0;
        out[0] = r[0] / beta;
        cp[0] = cc / beta;
        for (int i = 1; i < n; ++i) {
            double bi = (i == n - 1) ? bn1 : b;
            beta = bi - cc * cp[i - 1];
            cp[i] = cc / beta;
            out[i] = (r[i] - cc * out[i - 1]) / beta;
        }
        for (int i = n - 2; i >= 0; --i) out[i] -= cp[i] * out[i + 1];
    };

    const double gamma = -b;
    std::vector<double> x1, x2, uvec(n, 0.0);
    uvec[0] = gamma;
    uvec[n - 1] = cc;
    thomas(b - gamma, b - cc * cc / gamma, rhs, x1);
    thomas(b - gamma, b - cc * cc / gamma, uvec, x2);
    const double vx1 = x1[0] + (cc / gamma) * x1[n - 1];
    const double vx2 = x2[0] + (cc / gamma) * x2[n - 1];
    const double fact = vx1 / (1.0 + vx2);
    x.resize(n);
    for (int i = 0; i < n; ++i) x[i] = x1[i] - fact * x2[i];
}

StateField step(const StateField& field, const MetricSample& sample,
                const ChristoffelSet& gt, double dy, const SolverConfig& cfg) {
    const int n = field.grid.nx;
    const double dx = field.grid.dx;
    const double eps = cfg.epsilon;
    if (!(sample.E > 0)) throw DomainError("step: metric sample has E <= 0");

    double maxlam = 0;
    for (int i = 0; i < n; ++i) {
        if (!(field.v[i] > cfg.v_floor))
            throw PositivityLoss("step: v at the floor before stepping", field.y, i);
        maxlam = std::max(maxlam, std::max(std::abs(field.u[i] - field.v[i]),
                                           std::abs(field.u[i] + field.v[i])));
    }
    if (dy > cfg.cfl_advect * dx / maxlam * (1 + 1e-12))
        throw CflViolation("step: dy exceeds the advective CFL limit");
    if (cfg.scheme == DiffusionScheme::FullyExplicit &&
        dy > cfg.cfl_advect * dx * dx / (2 * eps) * (1 + 1e-12))
        throw CflViolation("step: dy exceeds the explicit diffusion limit");

    std::vector<double> w(n), z(n), du(n), dv(n);
    for (int i = 0; i < n; ++i) {
        w[i] = field.u[i] + field.v[i];
        z[i] = field.u[i] - field.v[i];
    }

    for (int i = 0; i < n; ++i) {
        const int ip = wrap_index(i + 1, n), im = wrap_index(i - 1, n);
        // upwind the Riemann increments: w rides lambda1 = u-v, z rides lambda2 = u+v
        const double lam1 = z[i], lam2 = w[i];
        const double dwdx = lam1 > 0 ? (w[i] - w[im]) / dx : (w[ip] - w[i]) / dx;
        const double dzdx = lam2 > 0 ? (z[i] - z[im]) / dx : (z[ip] - z[i]) / dx;
        const double incw = -dy * lam1 * dwdx;
        const double incz = -dy * lam2 * dzdx;

        const double ux = (field.u[ip] - field.u[im]) / (2 * dx);
        const double vx = (field.v[ip] - field.v[im]) / (2 * dx);
        auto [f, g] = source_terms(field.u[i], field.v[i], gt);

        du[i] = 0.5 * (incw + incz) + dy * (f - 2 * eps * ux * vx / field.v[i]);
        dv[i] = 0.5 * (incw - incz) + dy * (g - 2 * eps * vx * vx / field.v[i]);
    }

    StateField out;
    out.grid = field.grid;
    out.y = field.y + dy;
    out.u.resize(n);
    out.v.resize(n);

    if (cfg.scheme == DiffusionScheme::SemiImplicit) {
        // Crank-Nicolson in increment form:
        //   (I - (eps dy/2) D2) delta = du_expl + eps dy D2 u
        const double a = eps * dy / (2 * dx * dx);
        std::vector<double> rhs_u(n), rhs_v(n), sol, scratch;
        for (int i = 0; i < n; ++i) {
            const int ip = wrap_index(i + 1, n), im = wrap_index(i - 1, n);
            rhs_u[i] = du[i] + 2 * a * (field.u[ip] - 2 * field.u[i] + field.u[im]);
            rhs_v[i] = dv[i] + 2 * a * (field.v[ip] - 2 * field.v[i] + field.v[im]);
        }
        solve_cyclic_tridiag(1 + 2 * a, -a, rhs_u, sol, scratch);
        for (int i = 0; i < n; ++i) out.u[i] = field.u[i] + sol[i];
        solve_cyclic_tridiag(1 + 2 * a, -a, rhs_v, sol, scratch);
        for (int i = 0; i < n; ++i) out.v[i] = field.v[i] + sol[i];
    } else {
        const double a = eps * dy / (dx * dx);
        for (int i = 0; i < n; ++i) {
            const int ip = wrap_index(i + 1, n), im = wrap_index(i - 1, n);
            out.u[i] = field.u[i] + du[i] + a * (field.u[ip] - 2 * field.u[i] + field.u[im]);
            out.v[i] = field.v[i] + dv[i] + a * (field.v[ip] - 2 * field.v[i] + field.v[im]);
        }
    }

    for (int i = 0; i < n; ++i)
        if (!(out.v[i] > cfg.v_floor))
            throw PositivityLoss("step: v reached the floor at y = " + fmt17(out.y) +
                                     ", node " + std::to_string(i),
                                 out.y, i);
    return out;
}

Trajectory run(std::span<const double> u0_raw, std::span<const double> v0_raw,
               const Metric& metric, const SolverConfig& cfg,
               std::span<const double> output_levels, const InvariantRegion* region) {
    cfg.validate();
    if (int(u0_raw.size()) != cfg.nx || int(v0_raw.size()) != cfg.nx)
        throw DomainError("run: initial data size must match nx");

    GridSpec grid{cfg.nx, cfg.dx(), true, 0.0};
    StateField field;
    field.grid = grid;
    field.y = -cfg.y0;
    mollify_initial(u0_raw, v0_raw, cfg.effective_mollifier_width(), grid, field.u, field.v);

    auto B_of_y = [&metric](double y) { return metric.at(y).B; };

    Trajectory traj;
    traj.y_begin = -cfg.y0;
    traj.y_end = 0.0;
    if (region) {
        traj.initial_outside_region =
            monitor(field, *region, B_of_y).max_violation > 0;
    }

    std::vector<double> levels(output_levels.begin(), output_levels.end());
    std::sort(levels.begin(), levels.end());
    size_t next_level = 0;
    auto store_due = [&](double y) {
        while (next_level < levels.size() && y >= levels[next_level] - 1e-13) {
            traj.levels.push_back(field);
            traj.levels.back().y = y;
            ++next_level;
        }
    };
    store_due(field.y);

    const double dy_cap = cfg.y0 / 64.0;
    while (field.y < -1e-13) {
        const MetricSample sample = metric.at(field.y);
        const ChristoffelSet gt = christoffels(sample, metric.spec());

        double maxlam = 0, maxsrc = 0, maxstate = cfg.v_floor;
        for (int i = 0; i < cfg.nx; ++i) {
            maxlam = std::max(maxlam, std::max(std::abs(field.u[i] - field.v[i]),
                                               std::abs(field.u[i] + field.v[i])));
            auto [f, g] = source_terms(field.u[i], field.v[i], gt);
            maxsrc = std::max(maxsrc, std::max(std::abs(f), std::abs(g)));
            maxstate = std::max(maxstate, std::max(std::abs(field.u[i]), field.v[i]));
        }
        double dy = std::min(cfg.cfl_advect * grid.dx / maxlam, dy_cap);
        if (maxsrc > 0) dy = std::min(dy, cfg.cfl_source * maxstate / maxsrc);
        if (cfg.scheme == DiffusionScheme::FullyExplicit)
            dy = std::min(dy, cfg.cfl_advect * grid.dx * grid.dx / (2 * cfg.epsilon));
        if (!(dy > 1e-12 * cfg.y0))
            throw CflViolation("run: CFL-limited dy underflow at y = " + fmt17(field.y) +
                               " (max |lambda| = " + fmt17(maxlam) + ")");
        const double remaining = -field.y;
        if (next_level < levels.size() && levels[next_level] - field.y < dy)
            dy = levels[next_level] - field.y;
        if (dy > remaining) dy = remaining;

        field = step(field, sample, gt, dy, cfg);

        double violation = 0;
        if (region) violation = monitor(field, *region, B_of_y).max_violation;
        traj.step_log.push_back({field.y, dy, maxlam, violation});
        store_due(field.y);
    }
    return traj;
}

} // namespace gcs
