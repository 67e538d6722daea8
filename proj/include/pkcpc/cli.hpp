#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pkcpc::cli {

// Process exit codes; every failure class gets its own value so callers can
// tell outcomes apart without parsing stderr.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,        // bad flags or bad parameter values
    exit_io = 2,           // file open/read/write trouble
    exit_format = 3,       // a record failed to parse
    exit_decrypt = 4,      // decryption failure (residual weight above t)
    exit_framing = 5,      // plaintext framing/block-structure trouble
    exit_check_failed = 6, // an analyze check did not pass
    exit_internal = 9,
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Runs one tool invocation; `args` excludes the program name.  Never throws;
// all failures map to an ExitCode.
int run_command(const std::vector<std::string>& args);

} // namespace pkcpc::cli
