#ifndef GCS_REGION_HPP
#define GCS_REGION_HPP

#include <functional>
#include <string>
#include <utility>

#include "gcs/state.hpp"

namespace gcs {

// Sign-determining cubics for the source combinations f+g and f-g.
//   phi1 = c u - c(2a+1) v + (u^2-v^2)(u+v)
//   phi2 = c u + c(2a+1) v + (u^2-v^2)(u-v)
// For alpha = -1 both factor through (u^2 - v^2 + c).
std::pair<double, double> phi(double u, double v, double alpha, double c);

// psi(ut,vt;a) = phi(ut,vt; alpha=a/2, c=1) in the scaled variables.
std::pair<double, double> psi(double ut, double vt, double a);

enum class RegionFamily { CatenoidAlpha, HelicoidScaled };

struct RegionParams {
    RegionFamily family = RegionFamily::CatenoidAlpha;
    double alpha = -1.0; // CatenoidAlpha
    double c = 1.0;      // CatenoidAlpha
    double a = -2.0;     // HelicoidScaled

    static RegionParams catenoid(double alpha, double c);
    static RegionParams helicoid(double a);
};

// Upper end of the admissible interval for delta:
// sqrt(-2 c alpha - c) (catenoid) or sqrt(-a - 1) (helicoid).
double delta_max(const RegionParams& params);

// The ACBD square. In Riemann-invariant coordinates it is axis-parallel:
//   delta <= w <= 2 u0 + delta,   -(2 u0 + delta) <= z <= -delta,
// with corners C=(0,delta), A=(u0,u0+delta), B=(-u0,u0+delta), D=(0,2u0+delta)
// in the (u,v) (or scaled (Bu,Bv)) plane.
struct InvariantRegion {
    RegionParams params;
    double delta = 0;
    double u0 = 0;
    struct { double u_min, u_max, v_min, v_max; } bounds{};
    bool scaled = false; // true for HelicoidScaled: bounds apply to (Bu, Bv)

    double w_min() const { return delta; }
    double w_max() const { return 2 * u0 + delta; }
    double z_min() const { return -(2 * u0 + delta); }
    double z_max() const { return -delta; }

    std::string describe() const; // corners and (w,z) bounds, full precision
};

// Closed-form corner abscissa:
//   u0 = -(c alpha + 2 delta^2 - sqrt(c^2 alpha^2 - 4 c alpha delta^2 - 4 c delta^2))/(4 delta)
// which reduces to (c - delta^2)/(2 delta) at alpha = -1. Verifies the corner
// roots phi1(u0, u0+delta) = 0 = phi2(-u0, u0+delta) before returning.
InvariantRegion build_region(const RegionParams& params, double delta);

// Closed square membership in (w,z); B scales (u,v) first when region.scaled.
bool contains(const InvariantRegion& region, double u, double v, double B = 1.0);

struct MonitorResult {
    double max_violation = 0;
    int worst_index = -1;
};

// Max over the grid of the per-coordinate deficit outside the (w,z) square.
MonitorResult monitor(const StateField& field, const InvariantRegion& region,
                      const std::function<double(double)>& B_of_y = {});

} // namespace gcs

#endif
