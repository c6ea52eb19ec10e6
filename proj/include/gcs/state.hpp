#ifndef GCS_STATE_HPP
#define GCS_STATE_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcs/errors.hpp"
#include "gcs/metric.hpp"

namespace gcs {

// Scaled second-fundamental-form entries L, M, N = h_ij/sqrt|g| and their
// curvature-normalized versions Lt = L/gamma etc. The (u,v) chart covers the
// admissible branch Lt > 0:
//   Lt = 1/v,  Mt = -u/v,  Nt = (u^2 - v^2)/v   =>   Lt Nt - Mt^2 = -1.
struct FundForms {
    double L = 0, M = 0, N = 0;
    double Lt = 0, Mt = 0, Nt = 0;
};

FundForms from_uv(double u, double v);                       // DomainError if v <= 0
std::pair<double, double> to_uv(const FundForms& forms);     // DomainError if Lt <= 0
FundForms rescale(FundForms forms, double gamma);            // fills L,M,N = gamma * tilde

// lambda1 = u - v, lambda2 = u + v.
std::pair<double, double> eigenvalues_uv(double u, double v);

// Source polynomials of the (u,v) system, assembled from the tilde Christoffels:
//   f = -~G^1_22 + (~G^2_22 - 2 ~G^1_12) u + (2 ~G^2_12 - ~G^1_11) u^2
//       + ~G^1_11 v^2 + ~G^2_11 (u^2 - v^2) u
//   g = ~G^2_22 v + 2 ~G^2_12 u v + ~G^2_11 (u^2 - v^2) v
std::pair<double, double> source_terms(double u, double v, const ChristoffelSet& gt);

// Periodic uniform x-grid.
struct GridSpec {
    int nx = 0;
    double dx = 0;
    bool periodic = true;
    double x0 = 0;
    double x(int i) const { return x0 + dx * i; }
    double period() const { return dx * nx; }
};

// Grid-sampled (u,v) at a fixed y-level. v > 0 everywhere on the admissible branch.
struct StateField {
    GridSpec grid;
    double y = 0;
    std::vector<double> u, v;

    // Text format:
    //   # y Nx dx periodic
    //   # <y> <Nx> <dx> <0|1>
    //   rows: i x u v
    void save(const std::string& path, const std::vector<std::string>& header_lines = {}) const;
    static StateField load(const std::string& path);
};

// Riemann invariants w = u + v, z = u - v; the scaled variant uses (Bu, Bv).
struct RiemannPair {
    std::vector<double> w, z;
    bool scaled = false;
};

RiemannPair riemann(std::span<const double> u, std::span<const double> v);
RiemannPair scaled_riemann(std::span<const double> u, std::span<const double> v, double B);
RiemannPair riemann(const StateField& field);
RiemannPair scaled_riemann(const StateField& field, double B);

} // namespace gcs

#endif
