// Acceptance battery: one line per criterion, exit 0 iff all pass.

#include <cstring>

#include "gcs/validate.hpp"

int main(int argc, char** argv) {
    bool quick = false;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) quick = true;
    gcs::ValidationReport rep = gcs::validate_suite(quick, true);
    return rep.all_pass ? 0 : 4;
}
