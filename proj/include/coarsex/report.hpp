#pragma once

#include <string>
#include <vector>

namespace coarsex {

enum class Verdict { Pass, Fail, Unknown };

const char* to_string(Verdict v);

struct Check {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string witness;
  double seconds = 0.0;
};

struct Report {
  std::vector<Check> checks;

  void add(std::string name, bool ok, std::string witness = {});
  void add(Check check) { checks.push_back(std::move(check)); }
  void unknown(std::string name, std::string witness);
  // Append another report's checks with their names prefixed.
  void absorb(const std::string& prefix, const Report& other);

  bool passed() const;  // no check failed
  bool all_pass() const;  // every check passed outright
  const Check* find(const std::string& name) const;
  size_t count(Verdict v) const;
  std::string table() const;
};

}  // namespace coarsex
