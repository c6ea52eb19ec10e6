#include "gcs/metric.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gcs/util.hpp"

namespace gcs {

static constexpr double kSqrt2 = 1.4142135623730951;

double MetricSpec::curvature_exponent() const {
    return family == MetricFamily::HelicoidType ? a : -beta * beta;
}

void MetricSpec::validate() const {
    if (!(k0 > 0)) throw DomainError("metric: k0 must be positive");
    if (!(y_min < y_max) || y_max > 0)
        throw DomainError("metric: y-range must be [-y0, 0] with y0 > 0");
    switch (family) {
        case MetricFamily::CatenoidType:
            if (beta < kSqrt2) throw DomainError("catenoid metric: beta >= sqrt(2) required");
            if (!(c_metric > 0)) throw DomainError("catenoid metric: c_metric must be positive");
            if (!(c_shape > 0)) throw DomainError("catenoid metric: c_shape must be positive");
            break;
        case MetricFamily::HelicoidType:
            if (a > -2) throw DomainError("helicoid metric: a <= -2 required");
            break;
        case MetricFamily::Tabulated:
            break;
    }
}

MetricSpec MetricSpec::catenoid(double c_shape, double beta, double y0) {
    MetricSpec s;
    s.family = MetricFamily::CatenoidType;
    s.c_shape = c_shape;
    s.beta = beta;
    double b2m1 = beta * beta - 1.0;
    s.c_metric = 1.0 / (c_shape * c_shape * b2m1 * b2m1);
    s.k0 = c_shape * c_shape * b2m1;
    s.y_min = -y0;
    s.y_max = 0;
    s.validate();
    return s;
}

MetricSpec MetricSpec::helicoid(double c, double y0) {
    MetricSpec s;
    s.family = MetricFamily::HelicoidType;
    s.c_shape = c;
    s.c_metric = 1.0;
    s.a = -2.0;
    s.k0 = c * c;
    s.y_min = -y0;
    s.y_max = 0;
    s.validate();
    return s;
}

MetricSpec MetricSpec::helicoid_general(double k0, double a, double y0) {
    MetricSpec s;
    s.family = MetricFamily::HelicoidType;
    s.c_metric = 1.0;
    s.k0 = k0;
    s.a = a;
    s.y_min = -y0;
    s.y_max = 0;
    s.validate();
    return s;
}

MetricSample eval_catenoid_example(double y, double c_shape, double beta) {
    if (beta * beta == 1.0) throw DomainError("catenoid example: beta^2 = 1");
    if (beta < kSqrt2) throw DomainError("catenoid example: beta >= sqrt(2) required");
    if (!(c_shape > 0)) throw DomainError("catenoid example: c_shape must be positive");

    const double b2m1 = beta * beta - 1.0;
    const double m = 2.0 / b2m1;
    const double t = y / c_shape;
    const double th = std::tanh(t);
    const double sh2 = 1.0 / (std::cosh(t) * std::cosh(t));

    MetricSample s;
    s.y = y;
    s.E = std::pow(c_shape * std::cosh(t), m);
    s.Ey = s.E * (m / c_shape) * th;
    s.Eyy = s.E * ((m / c_shape) * (m / c_shape) * th * th + (m / (c_shape * c_shape)) * sh2);
    s.F = 0;
    const double cm = 1.0 / (c_shape * c_shape * b2m1 * b2m1); // G = cm * E
    s.G = cm * s.E;
    s.Gy = cm * s.Ey;
    const double k0 = c_shape * c_shape * b2m1;
    s.K = -k0 * std::pow(s.E, -beta * beta);
    s.gamma = std::sqrt(-s.K);
    s.gamma_ratio = -0.5 * beta * beta * (s.Ey / s.E); // gamma'/gamma = alpha E'/E
    s.B = std::sqrt(s.E);
    return s;
}

MetricSample eval_helicoid_example(double y, double c) {
    if (c == 0) throw DomainError("helicoid example: c must be nonzero");
    MetricSample s;
    s.y = y;
    s.E = c * c + y * y;
    s.Ey = 2 * y;
    s.Eyy = 2;
    s.F = 0;
    s.G = 1;
    s.Gy = 0;
    s.K = -(c * c) / (s.E * s.E);
    s.gamma = std::abs(c) / s.E;
    s.gamma_ratio = -s.Ey / s.E; // a = -2
    s.B = std::sqrt(s.E);
    return s;
}

double gauss_curvature_fd(std::span<const double> E_tab, std::span<const double> G_tab,
                          double y_first, double dy_grid, double y) {
    const int n = int(E_tab.size());
    if (n != int(G_tab.size())) throw GridError("curvature fd: E and G tables differ in size");
    if (n < 5) throw GridError("curvature fd: need at least 5 samples");
    int i = int(std::lround((y - y_first) / dy_grid));
    if (i < 2 || i > n - 3)
        throw GridError("curvature fd: fewer than 5 samples around query point");

    const double h = dy_grid;
    auto d1 = [&](std::span<const double> f) {
        return (-f[i + 2] + 8 * f[i + 1] - 8 * f[i - 1] + f[i - 2]) / (12 * h);
    };
    auto d2 = [&](std::span<const double> f) {
        return (-f[i + 2] + 16 * f[i + 1] - 30 * f[i] + 16 * f[i - 1] - f[i - 2]) / (12 * h * h);
    };
    const double E = E_tab[i], G = G_tab[i];
    if (!(E > 0) || !(G > 0)) throw GridError("curvature fd: metric must be positive");
    const double Ey = d1(E_tab), Gy = d1(G_tab), Eyy = d2(E_tab);
    // F = 0, y-only reduction of K = -(1/(2 sqrt(EG))) d/dy (E_y / sqrt(EG))
    return (Ey * Ey / E + Ey * Gy / G - 2 * Eyy) / (4 * E * G);
}

ChristoffelSet christoffels(const MetricSample& s, const MetricSpec& spec) {
    if (!(s.E > 0)) throw DomainError("christoffels: E must be positive");
    ChristoffelSet c;
    switch (spec.family) {
        case MetricFamily::CatenoidType: // G = c E
            c.g222 = s.Ey / (2 * s.E);
            c.g211 = -s.Ey / (2 * spec.c_metric * s.E);
            c.g112 = s.Ey / (2 * s.E);
            break;
        case MetricFamily::HelicoidType: // G = 1
            c.g222 = 0;
            c.g211 = -s.Ey / 2;
            c.g112 = s.Ey / (2 * s.E);
            break;
        case MetricFamily::Tabulated: // general F = 0, y-only metric
            if (!(s.G > 0)) throw DomainError("christoffels: G must be positive");
            c.g222 = s.Gy / (2 * s.G);
            c.g211 = -s.Ey / (2 * s.G);
            c.g112 = s.Ey / (2 * s.E);
            break;
    }
    // gamma_x = 0 for y-only curvature
    c.gt111 = c.g111;
    c.gt211 = c.g211;
    c.gt112 = c.g112 + 0.5 * s.gamma_ratio;
    c.gt212 = c.g212;
    c.gt122 = c.g122;
    c.gt222 = c.g222 + s.gamma_ratio;
    return c;
}

// ---------------------------------------------------------------------------
// Metric tables
// ---------------------------------------------------------------------------

MetricSample MetricTable::sample_at(double yq) const {
    MetricSample s;
    s.y = yq;
    s.E = interp_uniform(E, y_first(), dy_grid(), yq);
    s.Ey = interp_uniform(Ey, y_first(), dy_grid(), yq);
    s.Eyy = interp_uniform_deriv(Ey, y_first(), dy_grid(), yq);
    s.F = 0;
    const double p = spec.curvature_exponent();
    if (spec.family == MetricFamily::CatenoidType) {
        s.G = spec.c_metric * s.E;
        s.Gy = spec.c_metric * s.Ey;
    } else if (spec.family == MetricFamily::HelicoidType) {
        s.G = 1;
        s.Gy = 0;
    } else {
        s.G = interp_uniform(G, y_first(), dy_grid(), yq);
        s.Gy = interp_uniform_deriv(G, y_first(), dy_grid(), yq);
    }
    if (spec.family == MetricFamily::Tabulated) {
        s.K = interp_uniform(K, y_first(), dy_grid(), yq);
        double Kp = interp_uniform_deriv(K, y_first(), dy_grid(), yq);
        s.gamma = std::sqrt(-s.K);
        s.gamma_ratio = 0.5 * Kp / s.K;
    } else {
        s.K = -spec.k0 * std::pow(s.E, p);
        s.gamma = std::sqrt(-s.K);
        s.gamma_ratio = 0.5 * p * (s.Ey / s.E);
    }
    s.B = std::sqrt(s.E);
    return s;
}

void MetricTable::save(const std::string& path, const std::vector<std::string>& header_lines) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    for (const auto& line : header_lines) out << "# " << line << "\n";
    const char* fam = spec.family == MetricFamily::CatenoidType ? "catenoid"
                      : spec.family == MetricFamily::HelicoidType ? "helicoid"
                                                                  : "tabulated";
    out << "# family=" << fam << " c_metric=" << fmt17(spec.c_metric)
        << " c_shape=" << fmt17(spec.c_shape) << " k0=" << fmt17(spec.k0)
        << " beta=" << fmt17(spec.beta) << " a=" << fmt17(spec.a) << "\n";
    out << "# y E Ey G K gamma\n";
    for (size_t i = 0; i < y.size(); ++i) {
        out << fmt17(y[i]) << ' ' << fmt17(E[i]) << ' ' << fmt17(Ey[i]) << ' '
            << fmt17(G[i]) << ' ' << fmt17(K[i]) << ' ' << fmt17(gamma[i]) << "\n";
    }
}

MetricTable MetricTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open metric table " + path);
    MetricTable t;
    t.spec.family = MetricFamily::Tabulated;
    std::string line;
    bool have_rows = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string tok;
            while (hs >> tok) {
                auto eq = tok.find('=');
                if (eq == std::string::npos) continue;
                std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                try {
                    if (key == "family") {
                        if (val == "catenoid") t.spec.family = MetricFamily::CatenoidType;
                        else if (val == "helicoid") t.spec.family = MetricFamily::HelicoidType;
                    } else if (key == "c_metric") t.spec.c_metric = std::stod(val);
                    else if (key == "c_shape") t.spec.c_shape = std::stod(val);
                    else if (key == "k0") t.spec.k0 = std::stod(val);
                    else if (key == "beta") t.spec.beta = std::stod(val);
                    else if (key == "a") t.spec.a = std::stod(val);
                } catch (const std::exception&) {
                    throw ParseError("metric table " + path + ": bad header token " + tok);
                }
            }
            continue;
        }
        std::istringstream rs(line);
        double yy, ee, eyy, gg, kk, gam;
        if (!(rs >> yy >> ee >> eyy >> gg >> kk >> gam))
            throw ParseError("metric table " + path + ": malformed row: " + line);
        t.y.push_back(yy);
        t.E.push_back(ee);
        t.Ey.push_back(eyy);
        t.G.push_back(gg);
        t.K.push_back(kk);
        t.gamma.push_back(gam);
        have_rows = true;
    }
    if (!have_rows || t.y.size() < 5) throw ParseError("metric table " + path + ": too few rows");
    t.spec.y_min = t.y.front();
    t.spec.y_max = t.y.back();
    return t;
}

MetricTable generate_metric_ode(const MetricSpec& spec, double w0, double w0_prime, double step) {
    spec.validate();
    if (w0_prime > 0)
        throw DomainError("generate_metric_ode: w0' <= 0 required so that E' < 0 on y < 0");
    if (!(step > 0)) throw DomainError("generate_metric_ode: step must be positive");
    const double range = spec.y_max - spec.y_min;
    const long n = std::lround(range / step);
    if (n < 8 || std::abs(n * step - range) > 1e-9 * range)
        throw GridError("generate_metric_ode: step must divide the y-range length");

    const bool cat = spec.family == MetricFamily::CatenoidType;
    if (!cat && spec.family != MetricFamily::HelicoidType)
        throw DomainError("generate_metric_ode: family must be catenoid or helicoid");

    // Curvature ODE in w: K = -k0 E^p with E = e^w (catenoid, G = cE) gives
    //   w'' = 2 c k0 e^{(1+p) w},  p = -beta^2;
    // E = w^2 (helicoid, G = 1) gives  w'' = k0 w^{2a+1}.
    const double p = spec.curvature_exponent();
    auto wpp = [&](double w) -> double {
        if (cat) return 2.0 * spec.c_metric * spec.k0 * std::exp((1.0 + p) * w);
        return spec.k0 * std::pow(w, 2 * spec.a + 1);
    };

    std::vector<double> ys(n + 1), ws(n + 1), wps(n + 1);
    double w = w0, wp = w0_prime;
    ws[n] = w;
    wps[n] = wp;
    ys[n] = spec.y_max;
    const double h = -step; // integrate backward from y_max
    for (long k = n; k > 0; --k) {
        // classical RK4 on (w, w')
        double k1w = wp, k1p = wpp(w);
        double k2w = wp + 0.5 * h * k1p, k2p = wpp(w + 0.5 * h * k1w);
        double k3w = wp + 0.5 * h * k2p, k3p = wpp(w + 0.5 * h * k2w);
        double k4w = wp + h * k3p, k4p = wpp(w + h * k3w);
        w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
        wp += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
        if (!std::isfinite(w) || !std::isfinite(wp) || (cat && std::abs(w) > 700.0) ||
            (!cat && w <= 0))
            throw BlowupError("generate_metric_ode: w left the representable range at y = " +
                              fmt17(spec.y_max + (k - 1) * h));
        ws[k - 1] = w;
        wps[k - 1] = wp;
        ys[k - 1] = spec.y_min + (k - 1) * step;
    }

    MetricTable t;
    t.spec = spec;
    t.y = std::move(ys);
    t.E.resize(n + 1);
    t.Ey.resize(n + 1);
    t.G.resize(n + 1);
    t.K.resize(n + 1);
    t.gamma.resize(n + 1);
    for (long k = 0; k <= n; ++k) {
        if (cat) {
            t.E[k] = std::exp(ws[k]);
            t.Ey[k] = t.E[k] * wps[k];
            t.G[k] = spec.c_metric * t.E[k];
        } else {
            t.E[k] = ws[k] * ws[k];
            t.Ey[k] = 2 * ws[k] * wps[k];
            t.G[k] = 1;
        }
        t.K[k] = -spec.k0 * std::pow(t.E[k], p);
        t.gamma[k] = std::sqrt(-t.K[k]);
    }

    // Independent re-check: the tabulated metric must reproduce K = -k0 E^p.
    for (long k = 2; k <= n - 2; k += std::max<long>(1, n / 64)) {
        double kfd = gauss_curvature_fd(t.E, t.G, t.y.front(), step, t.y[k]);
        if (std::abs(kfd - t.K[k]) > 1e-5 * std::abs(t.K[k]) + 1e-12)
            throw ConsistencyError("generate_metric_ode: tabulated K disagrees with the "
                                   "curvature of the generated metric at y = " + fmt17(t.y[k]));
    }
    return t;
}

QuadratureProfile quadrature_profile(const MetricSpec& spec, double C1, double C2,
                                     std::span<const double> w_grid) {
    spec.validate();
    if (w_grid.size() < 2) throw DomainError("quadrature_profile: need at least 2 grid points");
    const bool cat = spec.family == MetricFamily::CatenoidType;
    const double p = spec.curvature_exponent();
    auto S = [&](double w) -> double {
        if (cat) return C1 - (4.0 * spec.c_metric * spec.k0 / (spec.beta * spec.beta - 1.0)) *
                            std::exp((1.0 + p) * w);
        return C1 + (spec.k0 / (spec.a + 1.0)) * std::pow(w, 2 * spec.a + 2);
    };
    auto F = [&](double w) -> double {
        double s = S(w);
        if (!(s > 0)) throw DomainError("quadrature_profile: integrand nonpositive at w = " + fmt17(w));
        return 1.0 / std::sqrt(s);
    };

    QuadratureProfile prof;
    prof.w.assign(w_grid.begin(), w_grid.end());
    prof.y.resize(w_grid.size());
    prof.dydw.resize(w_grid.size());
    prof.y[0] = C2;
    prof.dydw[0] = -F(w_grid[0]);
    for (size_t j = 0; j + 1 < w_grid.size(); ++j) {
        const double wa = w_grid[j], wb = w_grid[j + 1];
        const double mid = 0.5 * (wa + wb);
        const double seg = (wb - wa) / 6.0 * (F(wa) + 4.0 * F(mid) + F(wb));
        prof.y[j + 1] = prof.y[j] - seg;
        prof.dydw[j + 1] = -F(wb);
    }
    return prof;
}

double QuadratureProfile::invert(double yq) const {
    // y is strictly decreasing in w; locate the bracketing interval, then
    // evaluate the cubic Hermite of w(y) (slopes dw/dy = 1/(dy/dw)).
    const size_t n = y.size();
    size_t lo = 0, hi = n - 1;
    if (yq > y[0] || yq < y[n - 1])
        throw DomainError("quadrature_profile invert: query outside tabulated range");
    while (hi - lo > 1) {
        size_t midx = (lo + hi) / 2;
        if (y[midx] >= yq) lo = midx; else hi = midx;
    }
    const double yA = y[lo], yB = y[hi];
    const double wA = w[lo], wB = w[hi];
    const double mA = 1.0 / dydw[lo], mB = 1.0 / dydw[hi];
    const double dyi = yB - yA;
    double t = (yq - yA) / dyi;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * wA + h10 * dyi * mA + h01 * wB + h11 * dyi * mB;
}

// ---------------------------------------------------------------------------
// Metric wrapper
// ---------------------------------------------------------------------------

Metric Metric::closed_form(const MetricSpec& spec) {
    spec.validate();
    Metric m;
    m.spec_ = spec;
    m.tabulated_ = false;
    if (spec.family == MetricFamily::Tabulated)
        throw DomainError("Metric::closed_form: tabulated specs need from_table");
    if (spec.family == MetricFamily::HelicoidType && spec.a != -2.0)
        throw DomainError("Metric::closed_form: helicoid closed form exists only for a = -2");
    return m;
}

Metric Metric::from_table(MetricTable table) {
    Metric m;
    m.spec_ = table.spec;
    m.table_ = std::move(table);
    m.tabulated_ = true;
    return m;
}

MetricSample Metric::at(double y) const {
    if (tabulated_) return table_.sample_at(y);
    if (spec_.family == MetricFamily::CatenoidType)
        return eval_catenoid_example(y, spec_.c_shape, spec_.beta);
    return eval_helicoid_example(y, spec_.c_shape);
}

ChristoffelSet Metric::christoffels_at(double y) const {
    return christoffels(at(y), spec_);
}

} // namespace gcs
