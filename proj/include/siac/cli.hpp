#pragma once

// Command-line front end. Exit codes: 0 success, 1 runtime error, 2 usage or
// configuration error.

#include <iosfwd>
#include <string>

namespace siac {

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Joins a relative output path onto $SIAC_OUT_DIR when that is set.
std::string resolve_output_path(const std::string& path);

}  // namespace siac
