#pragma once

#include <iosfwd>

namespace medstat::cli {

// Full command-line surface. Returns the process exit code: 0 on
// success, 1 on analysis errors (unreadable or invalid data, degenerate
// inputs), 2 on usage errors.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace medstat::cli
