#ifndef GCS_ERRORS_HPP
#define GCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gcs {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };
struct GridError : Error { using Error::Error; };
struct BlowupError : Error { using Error::Error; };
struct ConsistencyError : Error { using Error::Error; };
struct DeltaOutOfRange : Error { using Error::Error; };
struct CornerInconsistency : Error { using Error::Error; };
struct SupportError : Error { using Error::Error; };
struct SeedInconsistent : Error { using Error::Error; };
struct MetricDegenerate : Error { using Error::Error; };
struct EmptyMeshError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct AdmissibilityError : Error { using Error::Error; };
struct CflViolation : Error { using Error::Error; };

// Solver abort: v dropped to the floor. Carries where it happened.
struct PositivityLoss : Error {
    double y;
    int index;
    PositivityLoss(const std::string& msg, double y_, int index_)
        : Error(msg), y(y_), index(index_) {}
};

} // namespace gcs

#endif
