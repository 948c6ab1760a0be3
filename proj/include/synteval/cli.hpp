#pragma once

namespace synteval {

// Entry point behind the synteval binary. Exit codes: 0 success, 1 usage
// error, 2 data error.
int cli_main(int argc, const char* const* argv);

}  // namespace synteval
