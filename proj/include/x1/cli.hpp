#pragma once

#include <iosfwd>

namespace x1 {

// The x1count command line. Exit status 0, 1 on computation errors (with an
// "error:" line on err), 2 on usage errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace x1
