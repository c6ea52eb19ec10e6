#include "gcs/state.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "gcs/util.hpp"

namespace gcs {

FundForms from_uv(double u, double v) {
    if (!(v > 0)) throw DomainError("from_uv: v must be positive (admissible branch)");
    FundForms f;
    f.Lt = 1.0 / v;
    f.Mt = -u / v;
    f.Nt = (u * u - v * v) / v;
    f.L = f.M = f.N = std::numeric_limits<double>::quiet_NaN(); // set by rescale
    return f;
}

std::pair<double, double> to_uv(const FundForms& forms) {
    if (!(forms.Lt > 0)) throw DomainError("to_uv: Lt must be positive (admissible branch)");
    return {-forms.Mt / forms.Lt, 1.0 / forms.Lt};
}

FundForms rescale(FundForms forms, double gamma) {
    forms.L = gamma * forms.Lt;
    forms.M = gamma * forms.Mt;
    forms.N = gamma * forms.Nt;
    return forms;
}

std::pair<double, double> eigenvalues_uv(double u, double v) {
    return {u - v, u + v};
}

std::pair<double, double> source_terms(double u, double v, const ChristoffelSet& gt) {
    const double q = (u * u - v * v);
    double f = -gt.gt122 + (gt.gt222 - 2 * gt.gt112) * u + (2 * gt.gt212 - gt.gt111) * u * u +
               gt.gt111 * v * v + gt.gt211 * q * u;
    double g = gt.gt222 * v + 2 * gt.gt212 * u * v + gt.gt211 * q * v;
    return {f, g};
}

RiemannPair riemann(std::span<const double> u, std::span<const double> v) {
    RiemannPair r;
    r.w.resize(u.size());
    r.z.resize(u.size());
    for (size_t i = 0; i < u.size(); ++i) {
        r.w[i] = u[i] + v[i];
        r.z[i] = u[i] - v[i];
    }
    return r;
}

RiemannPair scaled_riemann(std::span<const double> u, std::span<const double> v, double B) {
    if (!(B > 0)) throw DomainError("scaled_riemann: B must be positive");
    RiemannPair r;
    r.scaled = true;
    r.w.resize(u.size());
    r.z.resize(u.size());
    for (size_t i = 0; i < u.size(); ++i) {
        r.w[i] = B * u[i] + B * v[i];
        r.z[i] = B * u[i] - B * v[i];
    }
    return r;
}

RiemannPair riemann(const StateField& field) { return riemann(field.u, field.v); }

RiemannPair scaled_riemann(const StateField& field, double B) {
    return scaled_riemann(field.u, field.v, B);
}

void StateField::save(const std::string& path, const std::vector<std::string>& header_lines) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    for (const auto& line : header_lines) out << "# " << line << "\n";
    out << "# y Nx dx periodic\n";
    out << "# " << fmt17(y) << ' ' << grid.nx << ' ' << fmt17(grid.dx) << ' '
        << (grid.periodic ? 1 : 0) << "\n";
    out << "# i x u v\n";
    for (int i = 0; i < grid.nx; ++i) {
        out << i << ' ' << fmt17(grid.x(i)) << ' ' << fmt17(u[i]) << ' ' << fmt17(v[i]) << "\n";
    }
}

StateField StateField::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state field " + path);
    StateField f;
    std::string line;
    bool expect_meta = false, have_meta = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (body.find("y Nx dx periodic") != std::string::npos) {
                expect_meta = true;
                continue;
            }
            if (expect_meta) {
                std::istringstream ms(body);
                int per = 0;
                if (!(ms >> f.y >> f.grid.nx >> f.grid.dx >> per))
                    throw ParseError("state field " + path + ": malformed metadata line");
                f.grid.periodic = per != 0;
                expect_meta = false;
                have_meta = true;
            }
            continue;
        }
        std::istringstream rs(line);
        int i;
        double x, uu, vv;
        if (!(rs >> i >> x >> uu >> vv))
            throw ParseError("state field " + path + ": malformed row: " + line);
        if (f.u.empty()) f.grid.x0 = x;
        f.u.push_back(uu);
        f.v.push_back(vv);
    }
    if (!have_meta) throw ParseError("state field " + path + ": missing metadata header");
    if (int(f.u.size()) != f.grid.nx)
        throw ParseError("state field " + path + ": row count does not match Nx");
    return f;
}

} // namespace gcs
