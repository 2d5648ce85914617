#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sitcalc::cli {

// Exit codes: 0 success or positive verdict, 1 negative verdict, 2 error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sitcalc::cli
