#pragma once

#include <string>
#include <vector>

namespace ringdown::cli {

/// Run one CLI invocation (args exclude the program name). Returns the
/// process exit status: 0 success, 2 usage, 3 ingestion, 4 numerical,
/// 5 segmentation.
int run(const std::vector<std::string>& args);

} // namespace ringdown::cli
