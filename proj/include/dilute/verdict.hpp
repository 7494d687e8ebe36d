#pragma once

#include <string>
#include <vector>

namespace dilute {

struct Verdict {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double bound = 0.0;
  std::string note;
};

inline bool all_passed(const std::vector<Verdict>& vs) {
  for (const auto& v : vs)
    if (!v.passed) return false;
  return true;
}

}  // namespace dilute
