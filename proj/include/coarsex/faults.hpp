#pragma once

// Fault injection used by the mutation-sensitivity suite. Off by default.
namespace coarsex::faults {

struct Injection {
  bool flip_boundary_sign = false;
  bool drop_entourage_pair = false;
  bool break_cocycle = false;

  bool any() const { return flip_boundary_sign || drop_entourage_pair || break_cocycle; }
};

Injection& active();

class Scope {
 public:
  explicit Scope(Injection injection) : saved_(active()) { active() = injection; }
  ~Scope() { active() = saved_; }
  Scope(const Scope&) = delete;
  Scope& operator=(const Scope&) = delete;

 private:
  Injection saved_;
};

}  // namespace coarsex::faults
