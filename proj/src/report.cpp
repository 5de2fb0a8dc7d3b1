#include "paradox/report.hpp"

#include <algorithm>

namespace paradox {

namespace {

ValidationReport::Check& slot(std::vector<ValidationReport::Check>& checks, const std::string& name) {
  auto it = std::find_if(checks.begin(), checks.end(), [&](const auto& c) { return c.name == name; });
  if (it != checks.end()) return *it;
  checks.push_back({name, true, {}});
  return checks.back();
}

}  // namespace

void ValidationReport::pass(const std::string& name) { slot(checks, name); }

void ValidationReport::fail(const std::string& name, const std::string& detail) {
  auto& c = slot(checks, name);
  if (c.passed) {
    c.passed = false;
    c.detail = detail;
  }
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationReport::Check* ValidationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

const ValidationReport::Check* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ValidationReport::summary() const {
  if (const auto* f = first_failure()) return "FAIL(" + f->name + "): " + f->detail;
  return "PASS";
}

}  // namespace paradox
