#pragma once

#include <string>
#include <vector>

namespace flowids {

// Entry point behind the flowids binary; also called in-process by tests.
// args excludes the program name. Returns the process exit code.
int run_command(const std::vector<std::string>& args);

}  // namespace flowids
