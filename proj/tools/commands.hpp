#pragma once

namespace metricstats::cli {

// Full command-line front end. Returns the process exit code: 0 success,
// 2 degenerate statistics, 3 graph disconnection, 1 any other failure.
int run_cli(int argc, const char* const* argv);

} // namespace metricstats::cli
