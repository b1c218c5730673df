#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tfbench::cli {

// Runs one `tfbench` command line. Returns 0 on success, 1 on usage or
// configuration errors and 2 when some benchmark runs failed.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace tfbench::cli
