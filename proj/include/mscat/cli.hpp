#pragma once

// Command-line front end: run, validate, sweep and compare.

#include <iosfwd>
#include <string>
#include <vector>

namespace mscat::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kValidation = 3,
    kNonConvergence = 4,
    kIo = 5,
};

/// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, char** argv);

}  // namespace mscat::cli
