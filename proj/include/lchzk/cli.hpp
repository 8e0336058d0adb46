#pragma once

#include <string>
#include <vector>

namespace lchzk {

// Exit codes: 0 ok, 1 protocol run ended in reject, 2 usage error,
// 3 internal error.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace lchzk
