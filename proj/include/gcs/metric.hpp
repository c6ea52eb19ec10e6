#ifndef GCS_METRIC_HPP
#define GCS_METRIC_HPP

#include <span>
#include <string>
#include <vector>

#include "gcs/errors.hpp"

namespace gcs {

enum class MetricFamily { CatenoidType, HelicoidType, Tabulated };

// One-parameter metric family ds^2 = E(y) dx^2 + G(y) dy^2 with K(y) < 0.
//   CatenoidType: G = c_metric * E,  K = -k0 * E^{-beta^2},  beta >= sqrt(2)
//   HelicoidType: G = 1,             K = -k0 * E^{a},        a <= -2
// The closed-form catenoid family E = (c_shape cosh(y/c_shape))^{2/(beta^2-1)}
// carries a second constant c_shape; its metric constant and curvature
// amplitude are then c_metric = 1/(c_shape^2 (beta^2-1)^2), k0 = c_shape^2 (beta^2-1).
struct MetricSpec {
    MetricFamily family = MetricFamily::CatenoidType;
    double c_metric = 1.0;
    double c_shape = 1.0;
    double k0 = 1.0;
    double beta = 1.4142135623730951; // sqrt(2)
    double a = -2.0;
    double y_min = -1.0; // = -y0
    double y_max = 0.0;

    // Exponent p in K = -k0 * E^p.
    double curvature_exponent() const;
    // alpha with K = -k0 * E^{2 alpha} (catenoid bookkeeping): alpha = -beta^2/2.
    double alpha() const { return -0.5 * beta * beta; }
    void validate() const; // throws DomainError on an inadmissible parameter set

    static MetricSpec catenoid(double c_shape, double beta, double y0);
    static MetricSpec helicoid(double c, double y0);           // a = -2, k0 = c^2
    static MetricSpec helicoid_general(double k0, double a, double y0);
};

// Point sample of the metric family: value, y-derivatives, curvature data.
struct MetricSample {
    double y = 0;
    double E = 1, Ey = 0, Eyy = 0;
    double F = 0;
    double G = 1, Gy = 0;
    double K = -1;
    double gamma = 1;        // sqrt(-K)
    double gamma_ratio = 0;  // gamma'/gamma
    double B = 1;            // sqrt(E)
};

// The six Christoffel symbols and their curvature-rescaled companions
//   ~G^2_22 = G^2_22 + gamma'/gamma,  ~G^1_12 = G^1_12 + gamma'/(2 gamma),
// with gamma_x = 0 for y-only curvature.
struct ChristoffelSet {
    double g111 = 0, g211 = 0, g112 = 0, g212 = 0, g122 = 0, g222 = 0;
    double gt111 = 0, gt211 = 0, gt112 = 0, gt212 = 0, gt122 = 0, gt222 = 0;
};

// E = (c cosh(y/c))^{2/(beta^2-1)}, G = E/(c^2(beta^2-1)^2), K = -c^2(beta^2-1) E^{-beta^2}.
MetricSample eval_catenoid_example(double y, double c_shape, double beta);

// E = c^2 + y^2, G = 1, K = -c^2/(c^2+y^2)^2, B = sqrt(c^2+y^2).
MetricSample eval_helicoid_example(double y, double c);

// K from tabulated E(y), G(y) (F = 0, y-only metric):
//   K = (E_y^2/E + E_y G_y/G - 2 E_yy) / (4 E G)
// evaluated with 4th-order centered stencils at the node nearest y.
// Throws GridError with fewer than 5 samples around y.
double gauss_curvature_fd(std::span<const double> E_tab, std::span<const double> G_tab,
                          double y_first, double dy_grid, double y);

ChristoffelSet christoffels(const MetricSample& sample, const MetricSpec& spec);

// Uniform-grid table of a metric family, cubic interpolation off nodes.
struct MetricTable {
    MetricSpec spec;
    std::vector<double> y, E, Ey, G, K, gamma;

    double y_first() const { return y.front(); }
    double dy_grid() const { return y[1] - y[0]; }
    MetricSample sample_at(double yq) const;

    // Plain-text column format, 17 significant digits:
    //   # y E Ey G K gamma
    void save(const std::string& path, const std::vector<std::string>& header_lines = {}) const;
    static MetricTable load(const std::string& path);
};

// Integrates the curvature ODE for E on spec's y-range and tabulates the result.
//   CatenoidType: E = e^w,  w'' = 2 c_metric k0 e^{(1-beta^2) w}
//   HelicoidType: E = w^2,  w'' = k0 w^{2a+1}
// Classical RK4 from y = y_max backward, step h = (y_max-y_min)/n. The table is
// re-verified against gauss_curvature_fd; a mismatch raises ConsistencyError.
MetricTable generate_metric_ode(const MetricSpec& spec, double w0, double w0_prime, double step);

// Quadrature profile y = h(w) = C2 - int_{w_grid[0]}^{w} ds / sqrt(S(s)) with
//   S = C1 - (4 c_metric k0/(beta^2-1)) e^{(1-beta^2) s}   (catenoid)
//   S = C1 + (k0/(a+1)) s^{2a+2}                           (helicoid)
// by composite Simpson. Strictly decreasing in w; invert() recovers w(y).
struct QuadratureProfile {
    std::vector<double> w, y;
    std::vector<double> dydw; // -1/sqrt(S) at nodes, used by the Hermite inverse
    double invert(double yq) const;
};

QuadratureProfile quadrature_profile(const MetricSpec& spec, double C1, double C2,
                                     std::span<const double> w_grid);

// Family metric usable by the solver: closed form where one exists, else a table.
class Metric {
public:
    static Metric closed_form(const MetricSpec& spec);
    static Metric from_table(MetricTable table);

    MetricSample at(double y) const;
    ChristoffelSet christoffels_at(double y) const;
    const MetricSpec& spec() const { return spec_; }
    bool tabulated() const { return tabulated_; }
    const MetricTable& table() const { return table_; }

private:
    MetricSpec spec_;
    MetricTable table_;
    bool tabulated_ = false;
};

} // namespace gcs

#endif
