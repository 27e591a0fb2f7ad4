#pragma once

namespace ranklab {

// Full command-line entry point. Returns the process exit code:
// 0 success, 1 verification/assertion failure, 2 configuration error.
int run_cli(int argc, const char* const* argv);

}  // namespace ranklab
