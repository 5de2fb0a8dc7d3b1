#pragma once

#include <string>
#include <vector>

namespace paradox {

/// Outcome of a window-relative verification: one entry per named check,
/// each with a counterexample description when it fails.
struct ValidationReport {
  struct Check {
    std::string name;
    bool passed = true;
    std::string detail;
  };

  std::vector<Check> checks;

  // Registers a check if absent; a failure is recorded only once per name.
  void pass(const std::string& name);
  void fail(const std::string& name, const std::string& detail);

  bool passed() const;
  const Check* first_failure() const;
  const Check* find(const std::string& name) const;
  std::string summary() const;
};

}  // namespace paradox
