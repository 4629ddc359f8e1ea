#pragma once

namespace epd {

// Parses and runs a command line.  Exit codes: 0 success, 1 a requested
// tolerance was exceeded, 2 configuration/parse error.
int run_cli(int argc, const char* const* argv);

// Worker-thread cap: EPD_THREADS when set, hardware concurrency otherwise.
int thread_cap();

}  // namespace epd
