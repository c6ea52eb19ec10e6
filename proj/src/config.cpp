#include "gcs/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gcs/util.hpp"

namespace gcs {

void RunConfig::apply(const std::string& key, const std::string& value) {
    auto num = [&]() {
        try {
            size_t pos = 0;
            double v = std::stod(value, &pos);
            if (pos != value.size()) throw std::invalid_argument(value);
            return v;
        } catch (const std::exception&) {
            throw ParseError("config: key '" + key + "' needs a numeric value, got '" + value + "'");
        }
    };
    if (key == "metric") metric = value;
    else if (key == "beta") beta = num();
    else if (key == "a") a = num();
    else if (key == "c") c = num();
    else if (key == "k0") k0 = num();
    else if (key == "eps") eps = num();
    else if (key == "nx") nx = int(num());
    else if (key == "y0") y0 = num();
    else if (key == "delta") delta = num();
    else if (key == "init") init = value;
    else if (key == "out") out_prefix = value;
    else if (key == "levels") levels = int(num());
    else if (key == "seed") seed = std::uint64_t(num());
    else if (key == "x_period") x_period = num();
    else if (key == "cfl_advect") cfl_advect = num();
    else if (key == "cfl_source") cfl_source = num();
    else if (key == "mollifier_width") mollifier_width = num();
    else if (key == "v_floor") v_floor = num();
    else if (key == "scheme") scheme = value;
    else throw ParseError("config: unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string trimmed;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch)) || !trimmed.empty()) trimmed += ch;
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.pop_back();
        if (trimmed.empty()) continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ParseError("config " + path + ":" + std::to_string(lineno) +
                             ": expected key=value, got '" + trimmed + "'");
        try {
            cfg.apply(trimmed.substr(0, eq), trimmed.substr(eq + 1));
        } catch (const ParseError& e) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

static bool is_tabulated(const std::string& metric, std::string& path) {
    if (metric.rfind("tabulated:", 0) == 0) {
        path = metric.substr(10);
        return true;
    }
    return false;
}

void RunConfig::validate() const {
    std::string tab_path;
    if (metric != "catenoid" && metric != "helicoid" && !is_tabulated(metric, tab_path))
        throw AdmissibilityError("config: metric must be catenoid, helicoid or tabulated:PATH");
    if (metric == "catenoid") {
        if (beta < 1.4142135623730951)
            throw AdmissibilityError("config: catenoid needs beta >= sqrt(2)");
        if (!(c > 0)) throw AdmissibilityError("config: catenoid needs c > 0");
    }
    if (metric == "helicoid") {
        if (a > -2) throw AdmissibilityError("config: helicoid needs a <= -2");
        if (c == 0) throw AdmissibilityError("config: helicoid needs c != 0");
    }
    if (!(eps > 0)) throw AdmissibilityError("config: eps must be positive");
    if (nx < 16) throw AdmissibilityError("config: nx >= 16 required");
    if (!(y0 > 0)) throw AdmissibilityError("config: y0 must be positive");
    if (levels < 2) throw AdmissibilityError("config: levels >= 2 required");
    if (scheme != "semi-implicit" && scheme != "explicit")
        throw AdmissibilityError("config: scheme must be semi-implicit or explicit");
    if (delta > 0) {
        RegionParams params = (metric == "helicoid")
                                  ? RegionParams::helicoid(a)
                                  : RegionParams::catenoid(-0.5 * beta * beta,
                                                           1.0 / (c * c * (beta * beta - 1) *
                                                                  (beta * beta - 1)));
        if (metric.rfind("tabulated:", 0) != 0 && delta >= delta_max(params))
            throw AdmissibilityError("config: delta = " + fmt17(delta) +
                                     " outside the admissible interval (0, " +
                                     fmt17(delta_max(params)) + ")");
    }
    const std::string inits[] = {"stationary", "random"};
    bool ok = init == inits[0] || init == inits[1] || init.rfind("perturb:", 0) == 0 ||
              init.rfind("file:", 0) == 0;
    if (!ok) throw AdmissibilityError("config: init must be stationary, perturb:AMP, random or file:PATH");
}

std::vector<std::string> RunConfig::header_lines() const {
    std::vector<std::string> lines;
    lines.push_back("gcsurf run configuration (x-domain is periodic by modeling choice)");
    std::ostringstream os;
    os << "metric=" << metric << " beta=" << fmt17(beta) << " a=" << fmt17(a)
       << " c=" << fmt17(c) << " k0=" << fmt17(k0);
    lines.push_back(os.str());
    os.str("");
    os << "eps=" << fmt17(eps) << " nx=" << nx << " y0=" << fmt17(y0)
       << " delta=" << fmt17(delta) << " levels=" << levels << " seed=" << seed;
    lines.push_back(os.str());
    os.str("");
    os << "init=" << init << " out=" << out_prefix << " scheme=" << scheme;
    lines.push_back(os.str());
    os.str("");
    os << "x_period=" << fmt17(x_period) << " cfl_advect=" << fmt17(cfl_advect)
       << " cfl_source=" << fmt17(cfl_source) << " mollifier_width="
       << fmt17(mollifier_width) << " v_floor=" << fmt17(v_floor);
    lines.push_back(os.str());
    return lines;
}

SolverConfig RunConfig::solver_config() const {
    SolverConfig s;
    s.epsilon = eps;
    s.nx = nx;
    s.x_period = x_period;
    s.y0 = y0;
    s.cfl_advect = cfl_advect;
    s.cfl_source = cfl_source;
    s.mollifier_width = mollifier_width;
    s.v_floor = v_floor;
    s.scheme = scheme == "explicit" ? DiffusionScheme::FullyExplicit
                                    : DiffusionScheme::SemiImplicit;
    return s;
}

Metric RunConfig::build_metric() const {
    std::string tab_path;
    if (is_tabulated(metric, tab_path)) return Metric::from_table(MetricTable::load(tab_path));
    if (metric == "catenoid") return Metric::closed_form(MetricSpec::catenoid(c, beta, y0));
    if (a == -2.0) return Metric::closed_form(MetricSpec::helicoid(c, y0));
    // helicoid with a < -2 has no closed form; generate the table from the ODE
    MetricSpec spec = MetricSpec::helicoid_general(k0 > 0 ? k0 : c * c, a, y0);
    return Metric::from_table(generate_metric_ode(spec, c, 0.0, y0 / 4096.0));
}

double RunConfig::effective_delta() const {
    if (delta > 0) return delta;
    RegionParams params;
    if (metric == "helicoid")
        params = RegionParams::helicoid(a);
    else {
        const double b2m1 = beta * beta - 1;
        params = RegionParams::catenoid(-0.5 * beta * beta, 1.0 / (c * c * b2m1 * b2m1));
    }
    return 0.5 * delta_max(params);
}

InvariantRegion RunConfig::build_region_for_metric() const {
    RegionParams params;
    std::string tab_path;
    if (metric == "helicoid") {
        params = RegionParams::helicoid(a);
    } else if (is_tabulated(metric, tab_path)) {
        MetricTable t = MetricTable::load(tab_path);
        if (t.spec.family == MetricFamily::HelicoidType)
            params = RegionParams::helicoid(t.spec.a);
        else
            params = RegionParams::catenoid(-0.5 * t.spec.beta * t.spec.beta, t.spec.c_metric);
    } else {
        const double b2m1 = beta * beta - 1;
        params = RegionParams::catenoid(-0.5 * beta * beta, 1.0 / (c * c * b2m1 * b2m1));
    }
    const double d = delta > 0 ? delta : 0.5 * delta_max(params);
    return build_region(params, d);
}

void RunConfig::initial_data(const Metric& m, const InvariantRegion& region,
                             std::vector<double>& u0, std::vector<double>& v0) const {
    u0.resize(nx);
    v0.resize(nx);
    const double dx = x_period / nx;
    const double Bstart = region.scaled ? m.at(-y0).B : 1.0;

    if (init == "stationary") {
        // exact fixed point of the catenoid alpha = -1 family; for other
        // families just the region center in (scaled) coordinates
        double uc = 0.0, vc = 0.0;
        if (metric == "catenoid" && std::abs(beta * beta - 2.0) < 1e-12) {
            uc = 0.0;
            vc = 1.0;
        } else {
            uc = 0.0;
            vc = 0.5 * (region.bounds.v_min + region.bounds.v_max) / Bstart;
        }
        for (int i = 0; i < nx; ++i) {
            u0[i] = uc;
            v0[i] = vc;
        }
        return;
    }
    if (init.rfind("perturb:", 0) == 0) {
        double amp = 0.1;
        try {
            amp = std::stod(init.substr(8));
        } catch (const std::exception&) {
            throw ParseError("config: bad perturb amplitude in '" + init + "'");
        }
        for (int i = 0; i < nx; ++i) {
            const double x = i * dx;
            u0[i] = amp * std::sin(x);
            v0[i] = (metric == "catenoid" && std::abs(beta * beta - 2.0) < 1e-12)
                        ? 1.0 + 0.5 * amp * std::cos(x)
                        : (0.5 * (region.bounds.v_min + region.bounds.v_max) / Bstart) *
                              (1.0 + 0.5 * amp * std::cos(x));
        }
        return;
    }
    if (init == "random") {
        // band-limited random Riemann-invariant fields filling the square:
        // center + four Fourier modes with total amplitude 0.9 of the half-side,
        // so every node stays inside and mollification keeps it there
        Rng rng(seed);
        const int kmax = 4;
        const double fill = 0.9;
        const double kx = 6.283185307179586 / x_period; // fundamental wavenumber
        auto field = [&](double lo, double hi, std::vector<double>& out) {
            const double center = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            double amp[kmax], phase[kmax], total = 0;
            for (int k = 0; k < kmax; ++k) {
                amp[k] = rng.uniform();
                phase[k] = rng.uniform(0, 6.283185307179586);
                total += amp[k];
            }
            out.resize(nx);
            for (int i = 0; i < nx; ++i) {
                const double x = i * dx;
                double s = 0;
                for (int k = 0; k < kmax; ++k)
                    s += amp[k] / total * std::sin((k + 1) * kx * x + phase[k]);
                out[i] = center + fill * half * s;
            }
        };
        std::vector<double> w, z;
        field(region.w_min(), region.w_max(), w);
        field(region.z_min(), region.z_max(), z);
        for (int i = 0; i < nx; ++i) {
            u0[i] = 0.5 * (w[i] + z[i]) / Bstart;
            v0[i] = 0.5 * (w[i] - z[i]) / Bstart;
        }
        return;
    }
    if (init.rfind("file:", 0) == 0) {
        StateField f = StateField::load(init.substr(5));
        if (f.grid.nx != nx)
            throw AdmissibilityError("config: init file grid (" + std::to_string(f.grid.nx) +
                                     ") does not match nx");
        u0 = f.u;
        v0 = f.v;
        return;
    }
    throw AdmissibilityError("config: unsupported init '" + init + "'");
}

} // namespace gcs
