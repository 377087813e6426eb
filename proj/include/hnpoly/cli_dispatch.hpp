#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hnpoly::cli {

/// Runs the full command-line interface on `args` (program name excluded).
/// Exit codes: 0 success, 1 tolerance failure, 2 usage or parse error,
/// 3 enumeration/search budget exceeded.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hnpoly::cli
