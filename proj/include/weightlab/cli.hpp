#pragma once

#include <iosfwd>

namespace weightlab {

/// Exit status: 0 when every check passes, 1 when a check fails, 2 for
/// unparsable input or an invalid configuration.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace weightlab
