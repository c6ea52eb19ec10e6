#ifndef GCS_DIAGNOSTICS_HPP
#define GCS_DIAGNOSTICS_HPP

#include <utility>
#include <vector>

#include "gcs/metric.hpp"
#include "gcs/solver.hpp"
#include "gcs/state.hpp"

namespace gcs {

// Tensor-product quintic bump: plateau on |t| <= 1/2, C^2 roll-off to zero at
// |t| = 1, t the halfwidth-normalized offset from the center. x is treated
// periodically (offset wrapped to the nearest period).
struct TestFunction {
    double x_center = 0, x_halfwidth = 1;
    double y_center = 0, y_halfwidth = 1;
    double x_period = 6.283185307179586;

    double value(double x, double y) const;
    double ddx(double x, double y) const;
    double d2dx2(double x, double y) const;
    double ddy(double x, double y) const;
};

struct EntropyReport {
    std::vector<double> eta, q;    // per node, last evaluated level
    double dissipation = 0;        // 2 eps int ((v_x^2 + u_x^2)/v) phi
    double bound_estimate = 0;     // int (eps eta phi_xx + eta phi_y + q phi_x + Pi phi)
};

// eta = (Mt^2+1)/Lt = (u^2+v^2)/v,  q = (-Mt^3+Mt)/Lt^2 = u (u^2-v^2)/v.
void entropy_pair(const StateField& field, std::vector<double>& eta, std::vector<double>& q);

// Space-time trapezoid quadratures over the stored trajectory levels.
// The entropy balance gives dissipation = bound_estimate up to scheme error;
// upwinding only adds dissipation on the left side.
EntropyReport dissipation(const Trajectory& traj, const Metric& metric,
                          const TestFunction& phi, double eps);

// | int int eps Lt_x phi_x |, the weak size of the viscous term eps Lt_xx.
double weak_viscous_residual(const Trajectory& traj, const TestFunction& phi, double eps);

// Distributional residuals of the two Codazzi equations:
//   r1 = int int (-Mt phi_x + Lt phi_y - (~G^2_22 Lt - 2 ~G^2_12 Mt + ~G^2_11 Nt) phi)
//   r2 = int int (-Nt phi_x + Mt phi_y - (-~G^1_22 Lt + 2 ~G^1_12 Mt - ~G^1_11 Nt) phi)
std::pair<double, double> codazzi_weak_residual(const Trajectory& traj, const Metric& metric,
                                                const TestFunction& phi);

// Curvature-rescaled version: (L,M,N) = gamma (Lt,Mt,Nt) against the plain
// Christoffels. Thin gamma-weighted wrapper over the same quadrature.
std::pair<double, double> codazzi_weak_residual_physical(const Trajectory& traj,
                                                         const Metric& metric,
                                                         const TestFunction& phi);

// max |Lt Nt - Mt^2 + 1| over the field; the (u,v) chart satisfies the Gauss
// constraint identically, so this is rounding-level for admissible fields.
double gauss_residual_field(const StateField& field);

} // namespace gcs

#endif
