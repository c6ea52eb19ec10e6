#ifndef GCS_SOLVER_HPP
#define GCS_SOLVER_HPP

#include <optional>
#include <span>
#include <vector>

#include "gcs/metric.hpp"
#include "gcs/region.hpp"
#include "gcs/state.hpp"

namespace gcs {

enum class DiffusionScheme { SemiImplicit, FullyExplicit };

struct SolverConfig {
    double epsilon = 1e-3;
    int nx = 256;
    double x_period = 6.283185307179586; // 2 pi
    double y0 = 1.0;
    double cfl_advect = 0.4;
    double cfl_source = 0.25;
    // Mollifier support radius in x-units; < 0 selects the default 2*max(dx, sqrt(eps)).
    double mollifier_width = -1.0;
    double v_floor = 1e-8;
    DiffusionScheme scheme = DiffusionScheme::SemiImplicit;

    double dx() const { return x_period / nx; }
    double effective_mollifier_width() const;
    void validate() const; // epsilon > 0, nx >= 16, y0 > 0
};

struct StepLogEntry {
    double y = 0, dy = 0, max_lambda = 0, region_violation = 0;
};

struct Trajectory {
    std::vector<StateField> levels;   // snapshots at the requested output y-values
    std::vector<StepLogEntry> step_log;
    bool initial_outside_region = false;
    double y_begin = 0, y_end = 0;
};

// Periodic convolution with a normalized nonnegative bump of the given support
// radius (width 0 or < dx: identity). Preserves pointwise min/max bounds.
void mollify_initial(std::span<const double> u_raw, std::span<const double> v_raw,
                     double width, const GridSpec& grid,
                     std::vector<double>& u_out, std::vector<double>& v_out);

// One level y -> y + dy of
//   u_y + (u u_x - v v_x) = f + eps u_xx - 2 eps u_x v_x / v
//   v_y + (u v_x - v u_x) = g + eps v_xx - 2 eps v_x^2 / v
// Advection is upwinded in Riemann-invariant increments (w at speed u-v, z at
// speed u+v), diffusion is Crank-Nicolson with a cyclic tridiagonal solve
// (SemiImplicit) or an explicit stencil, cross terms and sources are explicit
// with centered gradients.
// Throws CflViolation if dy exceeds the advective (and, FullyExplicit, the
// diffusive) limit; PositivityLoss if any updated v falls to v_floor.
StateField step(const StateField& field, const MetricSample& sample,
                const ChristoffelSet& gt, double dy, const SolverConfig& cfg);

// March from y = -y0 to 0 with adaptive dy under the CFL contract, mollified
// initial data, and a region monitor logged every step. Initial data outside
// the region only flags the trajectory; the run proceeds.
Trajectory run(std::span<const double> u0_raw, std::span<const double> v0_raw,
               const Metric& metric, const SolverConfig& cfg,
               std::span<const double> output_levels,
               const InvariantRegion* region = nullptr);

} // namespace gcs

#endif
