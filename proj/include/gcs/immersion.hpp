#ifndef GCS_IMMERSION_HPP
#define GCS_IMMERSION_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gcs/metric.hpp"
#include "gcs/solver.hpp"

namespace gcs {

struct Vec3 {
    double x = 0, y = 0, z = 0;
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

// Tangent vectors and unit normal at a node; |rx|^2 = E, |ry|^2 = G, rx.ry = F.
struct Frame {
    Vec3 rx, ry, n;
};

struct SurfaceMesh {
    int nx = 0, ny = 0;
    std::vector<double> x, y;           // grid coordinates
    std::vector<Vec3> r;                // row-major: r[j*nx + i]
    std::vector<Frame> frames;          // optional, same layout (empty if absent)
    double max_gram_correction = 0;     // largest per-step frame correction applied

    const Vec3& at(int i, int j) const { return r[size_t(j) * nx + i]; }
    Vec3& at(int i, int j) { return r[size_t(j) * nx + i]; }
};

// Metric + second-fundamental-form data feeding the frame integration.
// h_ij are the physical entries (h11 = sqrt|g| L etc. when built from L,M,N).
struct FormsSampler {
    virtual ~FormsSampler() = default;
    virtual MetricSample metric_at(double y) const = 0;
    virtual ChristoffelSet christoffels_at(double y) const = 0;
    virtual void second_form_at(double x, double y, double& h11, double& h12,
                                double& h22) const = 0;
};

// Exact reference surfaces.
struct ExactCatenoidForms : FormsSampler {
    double c_shape = 1, beta = 1.4142135623730951;
    MetricSample metric_at(double y) const override;
    ChristoffelSet christoffels_at(double y) const override;
    void second_form_at(double, double y, double& h11, double& h12, double& h22) const override;
    Frame exact_frame(double x, double y) const;
    Vec3 exact_position(double x, double y) const;
};

struct ExactHelicoidForms : FormsSampler {
    double c = 1;
    MetricSample metric_at(double y) const override;
    ChristoffelSet christoffels_at(double y) const override;
    void second_form_at(double, double y, double& h11, double& h12, double& h22) const override;
    Frame exact_frame(double x, double y) const;
    Vec3 exact_position(double x, double y) const;
};

// Forms interpolated from a solver trajectory (bicubic: periodic in x, levels in y).
struct GridForms : FormsSampler {
    GridForms(const Trajectory& traj, const Metric& metric);
    MetricSample metric_at(double y) const override;
    ChristoffelSet christoffels_at(double y) const override;
    void second_form_at(double x, double y, double& h11, double& h12, double& h22) const override;

    std::vector<double> xs, ys;
    std::vector<std::vector<double>> h11g, h12g, h22g; // [level][node]
    const Metric* metric_ = nullptr;
    double x_period = 0;
};

struct ImmersionGrid {
    int nx = 0, ny = 0;
    double x_min = 0, x_max = 0;
    double y_min = 0, y_max = 0;
};

enum class MarchOrder { YlineThenRows, XrowThenColumns };

// Default gauge at (x_min, y_min): rx = (sqrt(E),0,0), ry = (F/sqrt(E), sqrt(G-F^2/E), 0).
Frame canonical_seed(const MetricSample& m);

// Integrates the Gauss-Weingarten frame system with classical RK4 and per-step
// Gram correction of the frame against the metric. Marches a seed line first
// (y-line at x_min by default), then fills the transverse rows.
// Throws SeedInconsistent if the seed frame violates the metric relations,
// MetricDegenerate if EG - F^2 <= 0 along the march.
SurfaceMesh frame_integrate(const FormsSampler& forms, const ImmersionGrid& grid,
                            const Frame& seed, const Vec3& seed_position,
                            MarchOrder order = MarchOrder::YlineThenRows);

// Max vertex distance between the two march orders from one seed. Small iff
// the supplied forms satisfy Gauss-Codazzi discretely.
double path_independence(const FormsSampler& forms, const ImmersionGrid& grid,
                         const Frame& seed, const Vec3& seed_position);

// Discrete fundamental forms from positions, 4th-order centered stencils.
// Valid at interior nodes (margin 2); boundary entries are NaN.
struct FundFormGrids {
    int nx = 0, ny = 0;
    int margin = 2;
    std::vector<double> E, F, G, h11, h12, h22; // row-major
};
FundFormGrids fundforms_from_mesh(const SurfaceMesh& mesh);

// (u,v) levels -> (L,M,N) -> h_ij, then frame_integrate on the solve grid.
SurfaceMesh realize_from_solution(const Trajectory& traj, const Metric& metric);

// Wavefront OBJ: v lines in row-major grid order, quads split into two
// triangles, vn normals when frames are present.
void export_obj(const SurfaceMesh& mesh, const std::string& path,
                const std::vector<std::string>& header_lines = {});

} // namespace gcs

#endif
