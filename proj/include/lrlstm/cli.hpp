#pragma once

#include <string>
#include <vector>

namespace lrlstm {

// Runs one CLI invocation. Exit codes: 0 success, 1 runtime failure
// (I/O, parse, numeric), 2 usage or configuration error.
int dispatch(const std::vector<std::string>& args);

}  // namespace lrlstm
