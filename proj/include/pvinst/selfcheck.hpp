// Built-in invariant suite backing the CLI `verify` command.
#pragma once

#include <string>
#include <vector>

namespace pvinst {

struct CheckResult {
  std::string name;
  bool passed;
  std::string detail;  // measured value vs bound, or empty
};

std::vector<CheckResult> self_check();

}  // namespace pvinst
