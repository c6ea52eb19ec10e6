#include "gcs/util.hpp"

#include <algorithm>
#include <cmath>

namespace gcs {

static int clamp_base(int i, int n) {
    // base index for a 4-point stencil [i-1, i, i+1, i+2] kept inside [0, n-1]
    return std::clamp(i, 1, n - 3);
}

double interp_uniform(std::span<const double> f, double x0, double dx, double x) {
    const int n = int(f.size());
    double s = (x - x0) / dx;
    int i = int(std::floor(s));
    i = clamp_base(i, n);
    double t = s - i;
    return catmull_rom(f[i - 1], f[i], f[i + 1], f[i + 2], t);
}

double interp_uniform_deriv(std::span<const double> f, double x0, double dx, double x) {
    const int n = int(f.size());
    double s = (x - x0) / dx;
    int i = int(std::floor(s));
    i = clamp_base(i, n);
    double t = s - i;
    double f0 = f[i - 1], f1 = f[i], f2 = f[i + 1], f3 = f[i + 2];
    double a = -0.5 * f0 + 1.5 * f1 - 1.5 * f2 + 0.5 * f3;
    double b = f0 - 2.5 * f1 + 2.0 * f2 - 0.5 * f3;
    double c = 0.5 * (f2 - f0);
    return ((3 * a * t + 2 * b) * t + c) / dx;
}

double fit_slope(std::span<const double> x, std::span<const double> y) {
    const size_t n = x.size();
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

} // namespace gcs
