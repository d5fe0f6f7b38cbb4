#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace horo
{

// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,       // bad flags, domain errors, I/O errors
    exit_inconclusive = 2, // inconclusive verdict or failed verification
    exit_resource = 3,    // enumeration cap exceeded
};

// Entry point of `horolab <command> [options]`. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace horo
