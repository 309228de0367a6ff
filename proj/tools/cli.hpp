#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace axbench::cli {

/// Runs one subcommand (generate, intervene, train-oracle, evaluate, report,
/// serve-zoo). `args` excludes the program name. Returns 0 on success, 1 on
/// a usage error and 2 on a runtime error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace axbench::cli
