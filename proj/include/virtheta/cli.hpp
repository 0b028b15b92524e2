#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace virtheta {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitInternal = 3 };

// Suite names in registry order.
const std::vector<std::string>& suite_registry();

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace virtheta
