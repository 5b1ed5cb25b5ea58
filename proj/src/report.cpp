#include "coarsex/report.hpp"

#include <algorithm>
#include <sstream>

namespace coarsex {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

void Report::add(std::string name, bool ok, std::string witness) {
  checks.push_back(Check{std::move(name), ok ? Verdict::Pass : Verdict::Fail, std::move(witness), 0.0});
}

void Report::unknown(std::string name, std::string witness) {
  checks.push_back(Check{std::move(name), Verdict::Unknown, std::move(witness), 0.0});
}

void Report::absorb(const std::string& prefix, const Report& other) {
  for (const auto& c : other.checks) {
    Check copy = c;
    copy.name = prefix.empty() ? c.name : prefix + "." + c.name;
    checks.push_back(std::move(copy));
  }
}

bool Report::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const Check& c) { return c.verdict == Verdict::Fail; });
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.verdict == Verdict::Pass; });
}

const Check* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

size_t Report::count(Verdict v) const {
  return static_cast<size_t>(
      std::count_if(checks.begin(), checks.end(), [v](const Check& c) { return c.verdict == v; }));
}

std::string Report::table() const {
  size_t width = 4;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::ostringstream out;
  for (const auto& c : checks) {
    out << c.name << std::string(width - c.name.size() + 2, ' ') << to_string(c.verdict);
    if (!c.witness.empty()) out << "  " << c.witness;
    out << '\n';
  }
  return out.str();
}

}  // namespace coarsex
