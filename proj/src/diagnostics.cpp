#include "gcs/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "gcs/util.hpp"

namespace gcs {

// quintic smoothstep: S(0)=0, S(1)=1, S' = S'' = 0 at both ends
static double smoothstep5(double s) { return ((6 * s - 15) * s + 10) * s * s * s; }
static double smoothstep5_d(double s) { return 30 * s * s * (s - 1) * (s - 1); }
static double smoothstep5_dd(double s) { return 60 * s * (2 * s - 1) * (s - 1); }

namespace {
struct Bump1D {
    double b, db, ddb; // value and derivatives w.r.t. the physical coordinate
};

Bump1D bump(double offset, double halfwidth) {
    const double t = offset / halfwidth;
    const double at = std::abs(t);
    Bump1D r{0, 0, 0};
    if (at >= 1.0) return r;
    if (at <= 0.5) {
        r.b = 1.0;
        return r;
    }
    const double s = (at - 0.5) / 0.5;
    const double sgn = t >= 0 ? 1.0 : -1.0;
    const double dsdx = sgn * 2.0 / halfwidth;
    r.b = 1.0 - smoothstep5(s);
    r.db = -smoothstep5_d(s) * dsdx;
    r.ddb = -smoothstep5_dd(s) * dsdx * dsdx;
    return r;
}
} // namespace

double TestFunction::value(double x, double y) const {
    const double ox = std::remainder(x - x_center, x_period);
    return bump(ox, x_halfwidth).b * bump(y - y_center, y_halfwidth).b;
}

double TestFunction::ddx(double x, double y) const {
    const double ox = std::remainder(x - x_center, x_period);
    return bump(ox, x_halfwidth).db * bump(y - y_center, y_halfwidth).b;
}

double TestFunction::d2dx2(double x, double y) const {
    const double ox = std::remainder(x - x_center, x_period);
    return bump(ox, x_halfwidth).ddb * bump(y - y_center, y_halfwidth).b;
}

double TestFunction::ddy(double x, double y) const {
    const double ox = std::remainder(x - x_center, x_period);
    return bump(ox, x_halfwidth).b * bump(y - y_center, y_halfwidth).db;
}

void entropy_pair(const StateField& field, std::vector<double>& eta, std::vector<double>& q) {
    const int n = field.grid.nx;
    eta.resize(n);
    q.resize(n);
    for (int i = 0; i < n; ++i) {
        const double u = field.u[i], v = field.v[i];
        if (!(v > 0)) throw DomainError("entropy_pair: v must be positive");
        eta[i] = (u * u + v * v) / v;      // (Mt^2+1)/Lt
        q[i] = u * (u * u - v * v) / v;    // (-Mt^3+Mt)/Lt^2
    }
}

static void check_support(const Trajectory& traj, const TestFunction& phi) {
    if (traj.levels.size() < 2) throw SupportError("diagnostics: trajectory has too few levels");
    const double ymin = traj.levels.front().y, ymax = traj.levels.back().y;
    if (phi.y_center - phi.y_halfwidth < ymin - 1e-12 ||
        phi.y_center + phi.y_halfwidth > ymax + 1e-12)
        throw SupportError("diagnostics: test function support leaves the strip in y");
    const double period = traj.levels.front().grid.period();
    if (2 * phi.x_halfwidth > period)
        throw SupportError("diagnostics: test function support wider than the x-period");
    int inside = 0;
    for (const auto& lev : traj.levels)
        if (std::abs(lev.y - phi.y_center) < phi.y_halfwidth) ++inside;
    if (inside < 16)
        throw SupportError("diagnostics: fewer than 16 stored levels inside the support");
}

// trapezoid in y over stored levels, exact periodic sum in x
template <class PerLevel>
static double spacetime_integral(const Trajectory& traj, PerLevel&& level_integral) {
    double total = 0;
    for (size_t k = 0; k + 1 < traj.levels.size(); ++k) {
        const double dyk = traj.levels[k + 1].y - traj.levels[k].y;
        total += 0.5 * dyk * (level_integral(traj.levels[k]) + level_integral(traj.levels[k + 1]));
    }
    return total;
}

static double pi_source(double Lt, double Mt, double Nt, const ChristoffelSet& gt) {
    const double c2 = gt.gt222 * Lt - 2 * gt.gt212 * Mt + gt.gt211 * Nt;
    const double c1 = gt.gt122 * Lt - 2 * gt.gt112 * Mt + gt.gt111 * Nt;
    return (Mt * Mt + 1) / (Lt * Lt) * c2 + 2 * Mt / Lt * c1;
}

EntropyReport dissipation(const Trajectory& traj, const Metric& metric,
                          const TestFunction& phi, double eps) {
    check_support(traj, phi);
    EntropyReport rep;

    rep.dissipation = 2 * eps * spacetime_integral(traj, [&](const StateField& lev) {
        const int n = lev.grid.nx;
        const double dx = lev.grid.dx;
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const int ip = wrap_index(i + 1, n), im = wrap_index(i - 1, n);
            const double ux = (lev.u[ip] - lev.u[im]) / (2 * dx);
            const double vx = (lev.v[ip] - lev.v[im]) / (2 * dx);
            s += (vx * vx + ux * ux) / lev.v[i] * phi.value(lev.grid.x(i), lev.y);
        }
        return s * dx;
    });

    std::vector<double> eta, q;
    rep.bound_estimate = spacetime_integral(traj, [&](const StateField& lev) {
        const ChristoffelSet gt = metric.christoffels_at(lev.y);
        entropy_pair(lev, eta, q);
        const int n = lev.grid.nx;
        const double dx = lev.grid.dx;
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const double x = lev.grid.x(i);
            const FundForms ff = from_uv(lev.u[i], lev.v[i]);
            s += eps * eta[i] * phi.d2dx2(x, lev.y) + eta[i] * phi.ddy(x, lev.y) +
                 q[i] * phi.ddx(x, lev.y) +
                 pi_source(ff.Lt, ff.Mt, ff.Nt, gt) * phi.value(x, lev.y);
        }
        return s * dx;
    });

    entropy_pair(traj.levels.back(), rep.eta, rep.q);
    return rep;
}

double weak_viscous_residual(const Trajectory& traj, const TestFunction& phi, double eps) {
    check_support(traj, phi);
    const double val = spacetime_integral(traj, [&](const StateField& lev) {
        const int n = lev.grid.nx;
        const double dx = lev.grid.dx;
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const int ip = wrap_index(i + 1, n), im = wrap_index(i - 1, n);
            const double Ltx = (1.0 / lev.v[ip] - 1.0 / lev.v[im]) / (2 * dx);
            s += Ltx * phi.ddx(lev.grid.x(i), lev.y);
        }
        return s * dx;
    });
    return std::abs(eps * val);
}

static std::pair<double, double> codazzi_residuals(const Trajectory& traj, const Metric& metric,
                                                   const TestFunction& phi, bool physical) {
    check_support(traj, phi);
    const double r1 = spacetime_integral(traj, [&](const StateField& lev) {
        const MetricSample m = metric.at(lev.y);
        const ChristoffelSet G = christoffels(m, metric.spec());
        const double scale = physical ? m.gamma : 1.0;
        const double c222 = physical ? G.g222 : G.gt222;
        const double c212 = physical ? G.g212 : G.gt212;
        const double c211 = physical ? G.g211 : G.gt211;
        const int n = lev.grid.nx;
        const double dx = lev.grid.dx;
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const double x = lev.grid.x(i);
            const FundForms ff = from_uv(lev.u[i], lev.v[i]);
            const double rhs = c222 * ff.Lt - 2 * c212 * ff.Mt + c211 * ff.Nt;
            s += scale * (-ff.Mt * phi.ddx(x, lev.y) + ff.Lt * phi.ddy(x, lev.y) -
                          rhs * phi.value(x, lev.y));
        }
        return s * dx;
    });
    const double r2 = spacetime_integral(traj, [&](const StateField& lev) {
        const MetricSample m = metric.at(lev.y);
        const ChristoffelSet G = christoffels(m, metric.spec());
        const double scale = physical ? m.gamma : 1.0;
        const double c122 = physical ? G.g122 : G.gt122;
        const double c112 = physical ? G.g112 : G.gt112;
        const double c111 = physical ? G.g111 : G.gt111;
        const int n = lev.grid.nx;
        const double dx = lev.grid.dx;
        double s = 0;
        for (int i = 0; i < n; ++i) {
            const double x = lev.grid.x(i);
            const FundForms ff = from_uv(lev.u[i], lev.v[i]);
            const double rhs = -c122 * ff.Lt + 2 * c112 * ff.Mt - c111 * ff.Nt;
            s += scale * (-ff.Nt * phi.ddx(x, lev.y) + ff.Mt * phi.ddy(x, lev.y) -
                          rhs * phi.value(x, lev.y));
        }
        return s * dx;
    });
    return {r1, r2};
}

std::pair<double, double> codazzi_weak_residual(const Trajectory& traj, const Metric& metric,
                                                const TestFunction& phi) {
    return codazzi_residuals(traj, metric, phi, false);
}

std::pair<double, double> codazzi_weak_residual_physical(const Trajectory& traj,
                                                         const Metric& metric,
                                                         const TestFunction& phi) {
    return codazzi_residuals(traj, metric, phi, true);
}

double gauss_residual_field(const StateField& field) {
    double worst = 0;
    for (int i = 0; i < field.grid.nx; ++i) {
        const FundForms ff = from_uv(field.u[i], field.v[i]);
        worst = std::max(worst, std::abs(ff.Lt * ff.Nt - ff.Mt * ff.Mt + 1.0));
    }
    return worst;
}

} // namespace gcs
