#pragma once

namespace gcox {

// Full command-line front end; linked into the gcox binary and callable
// in-process from tests. Returns the process exit code: 0 success, 1 internal
// failure, 2 bad usage or bad input, 3 fit did not converge (output is still
// written in that case).
int run_cli(int argc, const char* const* argv);

}  // namespace gcox
