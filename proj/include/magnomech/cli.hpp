#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace magnomech::cli {

enum ExitCode : int {
    kOk = 0,
    kValidation = 2,
    kNumerical = 3,
    kUsage = 4,
};

// Runs one subcommand. args excludes the program name. CSV goes to --out (or
// `out` when --out is "-" or absent); diagnostics go to `err`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

} // namespace magnomech::cli
