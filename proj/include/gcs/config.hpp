#ifndef GCS_CONFIG_HPP
#define GCS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gcs/metric.hpp"
#include "gcs/region.hpp"
#include "gcs/solver.hpp"

namespace gcs {

// Flat experiment configuration: every parameter is scalar, file format is
// key=value lines ('#' comments), CLI flags override file values.
struct RunConfig {
    std::string metric = "catenoid";   // catenoid | helicoid | tabulated:PATH
    double beta = 1.4142135623730951;
    double a = -2.0;
    double c = 1.0;
    double k0 = -1.0;                  // < 0: derive from the closed form
    double eps = 1e-3;
    int nx = 256;
    double y0 = 1.0;
    double delta = -1.0;               // < 0: half the admissible upper bound
    std::string init = "stationary";   // stationary | perturb:AMP | random | file:PATH
    std::string out_prefix = "run";
    int levels = 64;
    std::uint64_t seed = 1;
    double x_period = 6.283185307179586;
    double cfl_advect = 0.4;
    double cfl_source = 0.25;
    double mollifier_width = -1.0;
    double v_floor = 1e-8;
    std::string scheme = "semi-implicit"; // semi-implicit | explicit

    void apply(const std::string& key, const std::string& value); // ParseError on unknown key
    void validate() const;                                        // AdmissibilityError
    std::vector<std::string> header_lines() const; // full serialization for output headers

    SolverConfig solver_config() const;
    Metric build_metric() const;
    InvariantRegion build_region_for_metric() const;
    double effective_delta() const;
    // initial data at y = -y0 (before mollification)
    void initial_data(const Metric& metric, const InvariantRegion& region,
                      std::vector<double>& u0, std::vector<double>& v0) const;
};

RunConfig parse_config_file(const std::string& path); // ParseError with line context

} // namespace gcs

#endif
