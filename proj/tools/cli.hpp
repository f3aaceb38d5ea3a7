#pragma once

#include <string>
#include <vector>

namespace fragmenta::cli {

/// Exit codes: 0 success, 1 usage error, 2 IO or data error.
int run(const std::vector<std::string>& args);

}  // namespace fragmenta::cli
