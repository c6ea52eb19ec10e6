#ifndef GCS_UTIL_HPP
#define GCS_UTIL_HPP

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

namespace gcs {

// Full-precision, locale-independent double formatting (17 significant digits).
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline int wrap_index(int i, int n) {
    int r = i % n;
    return r < 0 ? r + n : r;
}

// Catmull-Rom interpolation on a uniform grid. t in [0,1] between f1 and f2.
inline double catmull_rom(double f0, double f1, double f2, double f3, double t) {
    double a = -0.5 * f0 + 1.5 * f1 - 1.5 * f2 + 0.5 * f3;
    double b = f0 - 2.5 * f1 + 2.0 * f2 - 0.5 * f3;
    double c = 0.5 * (f2 - f0);
    return ((a * t + b) * t + c) * t + f1;
}

// Cubic interpolation of a uniformly sampled column at arbitrary query point.
// Clamps the stencil at the ends (one-sided cubic there).
double interp_uniform(std::span<const double> f, double x0, double dx, double x);

// Derivative of the same cubic interpolant.
double interp_uniform_deriv(std::span<const double> f, double x0, double dx, double x);

// Deterministic uniform doubles in [0,1) from a splitmix/xorshift-free mt19937_64 stream.
// The bit-to-double conversion is fully specified, so streams are portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    double uniform() {
        // xorshift64* : tiny, reproducible, good enough for sampling test states
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return double((x * 0x2545f4914f6cdd1dull) >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

// Least-squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

} // namespace gcs

#endif
