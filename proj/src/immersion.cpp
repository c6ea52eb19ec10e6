#include "gcs/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "gcs/state.hpp"
#include "gcs/util.hpp"

namespace gcs {

// ---------------------------------------------------------------------------
// Exact reference surfaces
// ---------------------------------------------------------------------------

MetricSample ExactCatenoidForms::metric_at(double y) const {
    return eval_catenoid_example(y, c_shape, beta);
}

ChristoffelSet ExactCatenoidForms::christoffels_at(double y) const {
    MetricSpec spec = MetricSpec::catenoid(c_shape, beta, std::max(1.0, -y + 1.0));
    return christoffels(metric_at(y), spec);
}

void ExactCatenoidForms::second_form_at(double, double y, double& h11, double& h12,
                                        double& h22) const {
    // r = (rho sin x, rho cos x, r3(y)), rho = (c cosh(y/c))^{1/(b^2-1)}:
    // h11 = rho / (c (b^2-1) cosh(y/c)),  h12 = 0,  h22 = -h11 / (c^2 (b^2-1)^2) * q
    // For b = sqrt(2), c = 1 this is h = (1, 0, -1). General closed form below.
    const double b2m1 = beta * beta - 1.0;
    const double t = y / c_shape;
    const double rho = std::pow(c_shape * std::cosh(t), 1.0 / b2m1);
    const double rp = rho * std::tanh(t) / (c_shape * b2m1);                 // drho/dy
    const double rpp = rho / (c_shape * c_shape * b2m1) *
                       (1.0 + (1.0 / b2m1 - 1.0) * std::tanh(t) * std::tanh(t)); // d2rho/dy2
    const double g = rho / (c_shape * b2m1 * std::cosh(t));                  // dr3/dy
    const double gp = rp / (c_shape * b2m1 * std::cosh(t)) -
                      rho * std::sinh(t) / (c_shape * c_shape * b2m1 * std::cosh(t) * std::cosh(t));
    const double norm = std::sqrt(rp * rp + g * g); // |(g, -rp)| scaling of the normal
    h11 = rho * g / norm;
    h12 = 0.0;
    h22 = (rp * gp - rpp * g) / norm;
}

Frame ExactCatenoidForms::exact_frame(double x, double y) const {
    const double b2m1 = beta * beta - 1.0;
    const double t = y / c_shape;
    const double rho = std::pow(c_shape * std::cosh(t), 1.0 / b2m1);
    const double rp = rho * std::tanh(t) / (c_shape * b2m1);
    const double g = rho / (c_shape * b2m1 * std::cosh(t));
    Frame f;
    f.rx = {rho * std::cos(x), -rho * std::sin(x), 0.0};
    f.ry = {rp * std::sin(x), rp * std::cos(x), g};
    const Vec3 cr = f.rx.cross(f.ry);
    const double n = cr.norm();
    f.n = cr * (1.0 / n);
    return f;
}

Vec3 ExactCatenoidForms::exact_position(double x, double y) const {
    const double b2m1 = beta * beta - 1.0;
    const double rho = std::pow(c_shape * std::cosh(y / c_shape), 1.0 / b2m1);
    // r3'(y) = rho / (c (b^2-1) cosh(y/c)) = (c cosh(y/c))^{(2-b^2)/(b^2-1)} / (b^2-1),
    // the root of G - rho'^2; r3(0) = 0. Composite Simpson.
    const int m = 512;
    const double h = y / m;
    auto f3 = [&](double t) {
        return std::pow(c_shape * std::cosh(t / c_shape), (2.0 - beta * beta) / b2m1) / b2m1;
    };
    double r3 = 0;
    for (int k = 0; k < m; ++k) {
        const double a = k * h, b = (k + 1) * h;
        r3 += (b - a) / 6.0 * (f3(a) + 4.0 * f3(0.5 * (a + b)) + f3(b));
    }
    return {rho * std::sin(x), rho * std::cos(x), r3};
}

MetricSample ExactHelicoidForms::metric_at(double y) const {
    return eval_helicoid_example(y, c);
}

ChristoffelSet ExactHelicoidForms::christoffels_at(double y) const {
    MetricSpec spec = MetricSpec::helicoid(c, std::max(1.0, -y + 1.0));
    return christoffels(metric_at(y), spec);
}

void ExactHelicoidForms::second_form_at(double, double y, double& h11, double& h12,
                                        double& h22) const {
    h11 = 0.0;
    h12 = -c / std::sqrt(c * c + y * y);
    h22 = 0.0;
}

Frame ExactHelicoidForms::exact_frame(double x, double y) const {
    // r = (y sin x, y cos x, c x)
    Frame f;
    f.rx = {y * std::cos(x), -y * std::sin(x), c};
    f.ry = {std::sin(x), std::cos(x), 0.0};
    const Vec3 cr = f.rx.cross(f.ry);
    f.n = cr * (1.0 / cr.norm());
    return f;
}

Vec3 ExactHelicoidForms::exact_position(double x, double y) const {
    return {y * std::sin(x), y * std::cos(x), c * x};
}

// ---------------------------------------------------------------------------
// Forms sampled from a solver trajectory
// ---------------------------------------------------------------------------

GridForms::GridForms(const Trajectory& traj, const Metric& metric) : metric_(&metric) {
    if (traj.levels.size() < 4)
        throw GridError("GridForms: need at least 4 stored levels for cubic interpolation");
    const double d0 = traj.levels[1].y - traj.levels[0].y;
    for (size_t k = 0; k + 1 < traj.levels.size(); ++k)
        if (std::abs(traj.levels[k + 1].y - traj.levels[k].y - d0) > 1e-9 * std::abs(d0))
            throw GridError("GridForms: stored levels must be uniformly spaced");
    const GridSpec& g = traj.levels.front().grid;
    x_period = g.period();
    xs.resize(g.nx);
    for (int i = 0; i < g.nx; ++i) xs[i] = g.x(i);
    for (const auto& lev : traj.levels) {
        ys.push_back(lev.y);
        const MetricSample m = metric.at(lev.y);
        const double root_g = std::sqrt(m.E * m.G - m.F * m.F);
        std::vector<double> a(g.nx), b(g.nx), c(g.nx);
        for (int i = 0; i < g.nx; ++i) {
            const FundForms ff = rescale(from_uv(lev.u[i], lev.v[i]), m.gamma);
            a[i] = root_g * ff.L;
            b[i] = root_g * ff.M;
            c[i] = root_g * ff.N;
        }
        h11g.push_back(std::move(a));
        h12g.push_back(std::move(b));
        h22g.push_back(std::move(c));
    }
}

MetricSample GridForms::metric_at(double y) const { return metric_->at(y); }

ChristoffelSet GridForms::christoffels_at(double y) const { return metric_->christoffels_at(y); }

// bicubic: periodic Catmull-Rom across x nodes, Catmull-Rom across levels in y
void GridForms::second_form_at(double x, double y, double& h11, double& h12, double& h22) const {
    const int nx = int(xs.size());
    const int ny = int(ys.size());
    const double dx = x_period / nx;
    const double dyl = ys[1] - ys[0];

    const double sx = (x - xs[0]) / dx;
    const int ix = int(std::floor(sx));
    const double tx = sx - ix;
    int jy = int(std::floor((y - ys[0]) / dyl));
    jy = std::clamp(jy, 1, ny - 3);
    const double ty = (y - ys[jy]) / dyl;

    auto sample = [&](const std::vector<std::vector<double>>& f) {
        double col[4];
        for (int k = 0; k < 4; ++k) {
            const std::vector<double>& row = f[jy - 1 + k];
            const double f0 = row[wrap_index(ix - 1, nx)];
            const double f1 = row[wrap_index(ix, nx)];
            const double f2 = row[wrap_index(ix + 1, nx)];
            const double f3 = row[wrap_index(ix + 2, nx)];
            col[k] = catmull_rom(f0, f1, f2, f3, tx);
        }
        return catmull_rom(col[0], col[1], col[2], col[3], ty);
    };
    h11 = sample(h11g);
    h12 = sample(h12g);
    h22 = sample(h22g);
}

// ---------------------------------------------------------------------------
// Frame integration
// ---------------------------------------------------------------------------

namespace {

struct FrameState {
    Vec3 r, rx, ry, n;
    FrameState operator+(const FrameState& o) const {
        return {r + o.r, rx + o.rx, ry + o.ry, n + o.n};
    }
    FrameState operator*(double s) const { return {r * s, rx * s, ry * s, n * s}; }
};

// Gauss-Weingarten right-hand sides. dir = 0: d/dx, dir = 1: d/dy.
FrameState derivative(const FormsSampler& forms, const FrameState& s, double x, double y,
                      int dir) {
    const MetricSample m = forms.metric_at(y);
    const ChristoffelSet G = forms.christoffels_at(y);
    double h11, h12, h22;
    forms.second_form_at(x, y, h11, h12, h22);
    const double det = m.E * m.G - m.F * m.F;
    if (!(det > 0)) throw MetricDegenerate("frame_integrate: EG - F^2 <= 0 at y = " + fmt17(y));

    FrameState d;
    if (dir == 0) {
        d.r = s.rx;
        d.rx = s.rx * G.g111 + s.ry * G.g211 + s.n * h11;
        d.ry = s.rx * G.g112 + s.ry * G.g212 + s.n * h12;
        d.n = s.rx * (-(h11 * m.G - h12 * m.F) / det) + s.ry * (-(h12 * m.E - h11 * m.F) / det);
    } else {
        d.r = s.ry;
        d.rx = s.rx * G.g112 + s.ry * G.g212 + s.n * h12;
        d.ry = s.rx * G.g122 + s.ry * G.g222 + s.n * h22;
        d.n = s.rx * (-(h12 * m.G - h22 * m.F) / det) + s.ry * (-(h22 * m.E - h12 * m.F) / det);
    }
    return d;
}

// Correct the frame Gram matrix to [[E,F,0],[F,G,0],[0,0,1]] with the
// lower-triangular map S = chol(target) chol(current)^{-1}.
// Returns the largest |S - I| entry.
double gram_correct(Frame& f, const MetricSample& m) {
    const double a11 = f.rx.dot(f.rx), a21 = f.ry.dot(f.rx), a22 = f.ry.dot(f.ry);
    const double a31 = f.n.dot(f.rx), a32 = f.n.dot(f.ry), a33 = f.n.dot(f.n);

    // chol of current Gram
    const double la11 = std::sqrt(a11);
    const double la21 = a21 / la11;
    const double la22 = std::sqrt(a22 - la21 * la21);
    const double la31 = a31 / la11;
    const double la32 = (a32 - la31 * la21) / la22;
    const double la33 = std::sqrt(a33 - la31 * la31 - la32 * la32);

    // chol of target Gram
    const double lt11 = std::sqrt(m.E);
    const double lt21 = m.F / lt11;
    const double lt22 = std::sqrt(m.G - lt21 * lt21);
    const double lt33 = 1.0;

    // S lower-triangular with S * L_A = L_T
    const double s11 = lt11 / la11;
    const double s22 = lt22 / la22;
    const double s21 = (lt21 - s22 * la21) / la11;
    const double s33 = lt33 / la33;
    const double s32 = -s33 * la32 / la22;
    const double s31 = -(s32 * la21 + s33 * la31) / la11;

    const Vec3 rx = f.rx * s11;
    const Vec3 ry = f.rx * s21 + f.ry * s22;
    const Vec3 n = f.rx * s31 + f.ry * s32 + f.n * s33;
    f.rx = rx;
    f.ry = ry;
    f.n = n;

    double dev = std::max({std::abs(s11 - 1), std::abs(s22 - 1), std::abs(s33 - 1),
                           std::abs(s21), std::abs(s31), std::abs(s32)});
    return dev;
}

// One RK4 step of (r, rx, ry, n) along x (dir 0) or y (dir 1), then Gram correction.
void rk4_step(const FormsSampler& forms, FrameState& s, double& coord_x, double& coord_y,
              int dir, double h, double& max_corr) {
    const double x = coord_x, y = coord_y;
    auto at = [&](double c) { return dir == 0 ? derivative(forms, s, c, y, dir)
                                              : derivative(forms, s, x, c, dir); };
    auto at2 = [&](const FrameState& st, double c) {
        return dir == 0 ? derivative(forms, st, c, y, dir) : derivative(forms, st, x, c, dir);
    };
    const double c0 = dir == 0 ? x : y;
    const FrameState k1 = at(c0);
    const FrameState k2 = at2(s + k1 * (0.5 * h), c0 + 0.5 * h);
    const FrameState k3 = at2(s + k2 * (0.5 * h), c0 + 0.5 * h);
    const FrameState k4 = at2(s + k3 * h, c0 + h);
    s = s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    if (dir == 0) coord_x += h; else coord_y += h;

    Frame f{s.rx, s.ry, s.n};
    max_corr = std::max(max_corr, gram_correct(f, forms.metric_at(coord_y)));
    s.rx = f.rx;
    s.ry = f.ry;
    s.n = f.n;
}

} // namespace

Frame canonical_seed(const MetricSample& m) {
    Frame f;
    const double se = std::sqrt(m.E);
    f.rx = {se, 0, 0};
    f.ry = {m.F / se, std::sqrt(m.G - m.F * m.F / m.E), 0};
    f.n = {0, 0, 1};
    return f;
}

SurfaceMesh frame_integrate(const FormsSampler& forms, const ImmersionGrid& grid,
                            const Frame& seed, const Vec3& seed_position, MarchOrder order) {
    if (grid.nx < 2 || grid.ny < 2)
        throw EmptyMeshError("frame_integrate: grid must be at least 2x2");
    const double hx = (grid.x_max - grid.x_min) / (grid.nx - 1);
    const double hy = (grid.y_max - grid.y_min) / (grid.ny - 1);

    {
        const MetricSample m0 = forms.metric_at(grid.y_min);
        const double scale = std::max({m0.E, m0.G, 1.0});
        const double defect =
            std::abs(seed.rx.dot(seed.rx) - m0.E) + std::abs(seed.ry.dot(seed.ry) - m0.G) +
            std::abs(seed.rx.dot(seed.ry) - m0.F) + std::abs(seed.n.dot(seed.n) - 1.0) +
            std::abs(seed.n.dot(seed.rx)) + std::abs(seed.n.dot(seed.ry));
        if (defect > 1e-8 * scale)
            throw SeedInconsistent("frame_integrate: seed frame violates the metric relations "
                                   "(defect " + fmt17(defect) + ")");
    }

    SurfaceMesh mesh;
    mesh.nx = grid.nx;
    mesh.ny = grid.ny;
    mesh.x.resize(grid.nx);
    mesh.y.resize(grid.ny);
    for (int i = 0; i < grid.nx; ++i) mesh.x[i] = grid.x_min + i * hx;
    for (int j = 0; j < grid.ny; ++j) mesh.y[j] = grid.y_min + j * hy;
    mesh.r.resize(size_t(grid.nx) * grid.ny);
    mesh.frames.resize(size_t(grid.nx) * grid.ny);
    double max_corr = 0;

    auto put = [&](int i, int j, const FrameState& s) {
        mesh.at(i, j) = s.r;
        mesh.frames[size_t(j) * grid.nx + i] = {s.rx, s.ry, s.n};
    };

    FrameState s0{seed_position, seed.rx, seed.ry, seed.n};
    if (order == MarchOrder::YlineThenRows) {
        // seed column at x_min, then each row in x
        FrameState s = s0;
        double cx = grid.x_min, cy = grid.y_min;
        put(0, 0, s);
        std::vector<FrameState> column(grid.ny);
        column[0] = s;
        for (int j = 1; j < grid.ny; ++j) {
            rk4_step(forms, s, cx, cy, 1, hy, max_corr);
            column[j] = s;
            put(0, j, s);
        }
        for (int j = 0; j < grid.ny; ++j) {
            FrameState t = column[j];
            double tx = grid.x_min, ty = mesh.y[j];
            for (int i = 1; i < grid.nx; ++i) {
                rk4_step(forms, t, tx, ty, 0, hx, max_corr);
                put(i, j, t);
            }
        }
    } else {
        // seed row at y_min, then each column in y
        FrameState s = s0;
        double cx = grid.x_min, cy = grid.y_min;
        put(0, 0, s);
        std::vector<FrameState> row(grid.nx);
        row[0] = s;
        for (int i = 1; i < grid.nx; ++i) {
            rk4_step(forms, s, cx, cy, 0, hx, max_corr);
            row[i] = s;
            put(i, 0, s);
        }
        for (int i = 0; i < grid.nx; ++i) {
            FrameState t = row[i];
            double tx = mesh.x[i], ty = grid.y_min;
            for (int j = 1; j < grid.ny; ++j) {
                rk4_step(forms, t, tx, ty, 1, hy, max_corr);
                put(i, j, t);
            }
        }
    }
    mesh.max_gram_correction = max_corr;
    return mesh;
}

double path_independence(const FormsSampler& forms, const ImmersionGrid& grid,
                         const Frame& seed, const Vec3& seed_position) {
    const SurfaceMesh a = frame_integrate(forms, grid, seed, seed_position,
                                          MarchOrder::YlineThenRows);
    const SurfaceMesh b = frame_integrate(forms, grid, seed, seed_position,
                                          MarchOrder::XrowThenColumns);
    double worst = 0;
    for (size_t k = 0; k < a.r.size(); ++k) worst = std::max(worst, (a.r[k] - b.r[k]).norm());
    return worst;
}

FundFormGrids fundforms_from_mesh(const SurfaceMesh& mesh) {
    if (mesh.nx < 5 || mesh.ny < 5)
        throw GridError("fundforms_from_mesh: need at least a 5x5 mesh");
    const double hx = mesh.x[1] - mesh.x[0];
    const double hy = mesh.y[1] - mesh.y[0];
    const double nan = std::numeric_limits<double>::quiet_NaN();

    FundFormGrids g;
    g.nx = mesh.nx;
    g.ny = mesh.ny;
    const size_t total = size_t(mesh.nx) * mesh.ny;
    g.E.assign(total, nan);
    g.F.assign(total, nan);
    g.G.assign(total, nan);
    g.h11.assign(total, nan);
    g.h12.assign(total, nan);
    g.h22.assign(total, nan);

    auto R = [&](int i, int j) { return mesh.at(i, j); };
    for (int j = 2; j < mesh.ny - 2; ++j) {
        for (int i = 2; i < mesh.nx - 2; ++i) {
            // 4th-order centered stencils
            const Vec3 rx = (R(i - 2, j) - R(i + 2, j) + (R(i + 1, j) - R(i - 1, j)) * 8.0) *
                            (1.0 / (12 * hx));
            const Vec3 ry = (R(i, j - 2) - R(i, j + 2) + (R(i, j + 1) - R(i, j - 1)) * 8.0) *
                            (1.0 / (12 * hy));
            const Vec3 rxx = (R(i + 2, j) * -1.0 + R(i + 1, j) * 16.0 + R(i, j) * -30.0 +
                              R(i - 1, j) * 16.0 + R(i - 2, j) * -1.0) *
                             (1.0 / (12 * hx * hx));
            const Vec3 ryy = (R(i, j + 2) * -1.0 + R(i, j + 1) * 16.0 + R(i, j) * -30.0 +
                              R(i, j - 1) * 16.0 + R(i, j - 2) * -1.0) *
                             (1.0 / (12 * hy * hy));
            // mixed derivative: 4th-order cross of the two first-derivative stencils
            Vec3 rxy{0, 0, 0};
            const double wgt[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12};
            for (int a = -2; a <= 2; ++a) {
                if (wgt[a + 2] == 0.0) continue;
                const Vec3 dcol = (R(i + a, j - 2) - R(i + a, j + 2) +
                                   (R(i + a, j + 1) - R(i + a, j - 1)) * 8.0) *
                                  (1.0 / (12 * hy));
                rxy += dcol * (wgt[a + 2] / hx);
            }
            const Vec3 cr = rx.cross(ry);
            const Vec3 n = cr * (1.0 / cr.norm());
            const size_t k = size_t(j) * mesh.nx + i;
            g.E[k] = rx.dot(rx);
            g.F[k] = rx.dot(ry);
            g.G[k] = ry.dot(ry);
            g.h11[k] = rxx.dot(n);
            g.h12[k] = rxy.dot(n);
            g.h22[k] = ryy.dot(n);
        }
    }
    return g;
}

SurfaceMesh realize_from_solution(const Trajectory& traj, const Metric& metric) {
    if (traj.levels.empty()) throw EmptyMeshError("realize_from_solution: no stored levels");
    for (const auto& lev : traj.levels)
        for (double vv : lev.v)
            if (!(vv > 0))
                throw DomainError("realize_from_solution: nonpositive v in trajectory");

    const GridForms forms(traj, metric);
    const GridSpec& g = traj.levels.front().grid;
    ImmersionGrid grid;
    grid.nx = g.nx;
    grid.ny = int(traj.levels.size());
    grid.x_min = g.x(0);
    grid.x_max = g.x(g.nx - 1);
    grid.y_min = traj.levels.front().y;
    grid.y_max = traj.levels.back().y;

    const MetricSample m0 = forms.metric_at(grid.y_min);
    return frame_integrate(forms, grid, canonical_seed(m0), Vec3{0, 0, 0});
}

void export_obj(const SurfaceMesh& mesh, const std::string& path,
                const std::vector<std::string>& header_lines) {
    if (mesh.r.empty()) throw EmptyMeshError("export_obj: empty mesh");
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    for (const auto& line : header_lines) out << "# " << line << "\n";
    for (const Vec3& p : mesh.r)
        out << "v " << fmt17(p.x) << ' ' << fmt17(p.y) << ' ' << fmt17(p.z) << "\n";
    const bool normals = !mesh.frames.empty();
    if (normals)
        for (const Frame& f : mesh.frames)
            out << "vn " << fmt17(f.n.x) << ' ' << fmt17(f.n.y) << ' ' << fmt17(f.n.z) << "\n";
    for (int j = 0; j + 1 < mesh.ny; ++j) {
        for (int i = 0; i + 1 < mesh.nx; ++i) {
            const long a = long(j) * mesh.nx + i + 1;
            const long b = a + 1;
            const long c = a + mesh.nx + 1;
            const long d = a + mesh.nx;
            auto face = [&](long p, long q, long r) {
                out << "f ";
                if (normals)
                    out << p << "//" << p << ' ' << q << "//" << q << ' ' << r << "//" << r;
                else
                    out << p << ' ' << q << ' ' << r;
                out << "\n";
            };
            face(a, b, c);
            face(a, c, d);
        }
    }
}

} // namespace gcs
