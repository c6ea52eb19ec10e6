#include "gcs/region.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gcs/util.hpp"

namespace gcs {

std::pair<double, double> phi(double u, double v, double alpha, double c) {
    const double q = (u * u - v * v);
    const double lin = c * (2 * alpha + 1) * v;
    return {c * u - lin + q * (u + v), c * u + lin + q * (u - v)};
}

std::pair<double, double> psi(double ut, double vt, double a) {
    const double q = (ut * ut - vt * vt);
    return {ut - (a + 1) * vt + q * (ut + vt), ut + (a + 1) * vt + q * (ut - vt)};
}

RegionParams RegionParams::catenoid(double alpha, double c) {
    RegionParams p;
    p.family = RegionFamily::CatenoidAlpha;
    p.alpha = alpha;
    p.c = c;
    return p;
}

RegionParams RegionParams::helicoid(double a) {
    RegionParams p;
    p.family = RegionFamily::HelicoidScaled;
    p.a = a;
    return p;
}

double delta_max(const RegionParams& params) {
    if (params.family == RegionFamily::CatenoidAlpha) {
        if (!(params.c > 0) || params.alpha > -1)
            throw DomainError("region: catenoid family needs c > 0, alpha <= -1");
        return std::sqrt(-2 * params.c * params.alpha - params.c);
    }
    if (params.a > -2) throw DomainError("region: helicoid family needs a <= -2");
    return std::sqrt(-params.a - 1);
}

// Both families reduce to one corner formula: the helicoid case is the
// catenoid one at c = 1, alpha = a/2.
static double corner_u0(double alpha, double c, double delta) {
    const double disc = c * c * alpha * alpha - 4 * c * alpha * delta * delta -
                        4 * c * delta * delta;
    return -(c * alpha + 2 * delta * delta - std::sqrt(disc)) / (4 * delta);
}

InvariantRegion build_region(const RegionParams& params, double delta) {
    const double dm = delta_max(params);
    if (!(delta > 0) || !(delta < dm))
        throw DeltaOutOfRange("region: delta must lie in (0, " + fmt17(dm) + "), got " +
                              fmt17(delta));

    InvariantRegion r;
    r.params = params;
    r.delta = delta;
    r.scaled = params.family == RegionFamily::HelicoidScaled;

    double alpha, c;
    if (params.family == RegionFamily::CatenoidAlpha) {
        alpha = params.alpha;
        c = params.c;
        r.u0 = (alpha == -1.0) ? (c - delta * delta) / (2 * delta) : corner_u0(alpha, c, delta);
    } else {
        alpha = 0.5 * params.a;
        c = 1.0;
        r.u0 = (params.a == -2.0) ? (1 - delta * delta) / (2 * delta)
                                  : corner_u0(alpha, c, delta);
    }
    r.bounds = {-r.u0, r.u0, delta, 2 * r.u0 + delta};

    // The closed form must place the corners on the sign curves.
    auto [p1a, p2a] = phi(r.u0, r.u0 + delta, alpha, c);
    auto [p1b, p2b] = phi(-r.u0, r.u0 + delta, alpha, c);
    const double scale = std::max({1.0, c * (r.u0 + delta),
                                   (r.u0 + delta) * (r.u0 + delta) * (r.u0 + delta)});
    if (std::abs(p1a) > 1e-10 * scale || std::abs(p2b) > 1e-10 * scale)
        throw CornerInconsistency("region: closed-form u0 = " + fmt17(r.u0) +
                                  " does not satisfy the corner root condition");
    (void)p2a;
    (void)p1b;
    return r;
}

bool contains(const InvariantRegion& region, double u, double v, double B) {
    if (region.scaled) {
        if (!(B > 0)) throw DomainError("region contains: scaled region needs B > 0");
        u *= B;
        v *= B;
    }
    const double w = u + v, z = u - v;
    return w >= region.w_min() && w <= region.w_max() && z >= region.z_min() &&
           z <= region.z_max();
}

MonitorResult monitor(const StateField& field, const InvariantRegion& region,
                      const std::function<double(double)>& B_of_y) {
    double B = 1.0;
    if (region.scaled) {
        if (!B_of_y) throw DomainError("region monitor: scaled region needs B(y)");
        B = B_of_y(field.y);
        if (!(B > 0)) throw DomainError("region monitor: B(y) must be positive");
    }
    MonitorResult res;
    for (int i = 0; i < field.grid.nx; ++i) {
        const double u = B * field.u[i], v = B * field.v[i];
        const double w = u + v, z = u - v;
        double d = 0;
        d = std::max(d, region.w_min() - w);
        d = std::max(d, w - region.w_max());
        d = std::max(d, region.z_min() - z);
        d = std::max(d, z - region.z_max());
        if (d > res.max_violation) {
            res.max_violation = d;
            res.worst_index = i;
        }
    }
    return res;
}

std::string InvariantRegion::describe() const {
    std::ostringstream os;
    const char* fam = params.family == RegionFamily::CatenoidAlpha ? "catenoid-alpha"
                                                                   : "helicoid-scaled";
    os << "family " << fam;
    if (params.family == RegionFamily::CatenoidAlpha)
        os << " alpha=" << fmt17(params.alpha) << " c=" << fmt17(params.c);
    else
        os << " a=" << fmt17(params.a);
    os << (scaled ? "  (bounds in scaled variables Bu, Bv)" : "") << "\n";
    os << "delta = " << fmt17(delta) << "  u0 = " << fmt17(u0) << "\n";
    os << "A = (" << fmt17(u0) << ", " << fmt17(u0 + delta) << ")\n";
    os << "C = (0, " << fmt17(delta) << ")\n";
    os << "B = (" << fmt17(-u0) << ", " << fmt17(u0 + delta) << ")\n";
    os << "D = (0, " << fmt17(2 * u0 + delta) << ")\n";
    os << "w in [" << fmt17(w_min()) << ", " << fmt17(w_max()) << "]\n";
    os << "z in [" << fmt17(z_min()) << ", " << fmt17(z_max()) << "]\n";
    os << "u in [" << fmt17(bounds.u_min) << ", " << fmt17(bounds.u_max) << "]  v in ["
       << fmt17(bounds.v_min) << ", " << fmt17(bounds.v_max) << "]\n";
    return os.str();
}

} // namespace gcs
