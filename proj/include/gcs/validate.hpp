#ifndef GCS_VALIDATE_HPP
#define GCS_VALIDATE_HPP

#include <string>
#include <vector>

namespace gcs {

struct CriterionResult {
    int id = 0;
    std::string name;
    double measured = 0;
    double threshold = 0;
    bool lower_is_better = true; // pass iff measured <= threshold (else >=)
    bool pass = false;
    std::string detail;
    std::string line() const;
};

struct ValidationReport {
    std::vector<CriterionResult> results;
    bool all_pass = false;
    std::string text; // one line per criterion plus a summary line
};

// Runs the acceptance battery. quick reduces grid sizes and sample counts
// (it skips the 256^2 immersion) so the subset finishes fast.
ValidationReport validate_suite(bool quick = false, bool echo = false);

} // namespace gcs

#endif
