#include "doctest.h"

#include "coarsex/faults.hpp"
#include "coarsex/harness.hpp"
#include "coarsex/io.hpp"

using namespace coarsex;

namespace {

bool any_failure_with_witness(const Report& r, const std::string& prefix = "") {
  for (const auto& c : r.checks)
    if (c.verdict == Verdict::Fail && !c.witness.empty() && c.name.rfind(prefix, 0) == 0) return true;
  return false;
}

SuiteConfig small(int trials) {
  SuiteConfig cfg;
  cfg.trials = trials;
  cfg.phi_psi = false;
  return cfg;
}

}  // namespace

TEST_CASE("splitmix64 reference stream") {
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
}

TEST_CASE("generation is deterministic") {
  SuiteConfig cfg;
  cfg.min_size = cfg.max_size = 1;
  cfg.groups = {"trivial"};
  Space p = gen_space(0, cfg);
  CHECK(p.size() == 1);
  SuiteConfig wide;
  for (std::uint64_t seed : {1ULL, 42ULL, 977ULL})
    CHECK(space_to_json(gen_space(seed, wide)).dump() == space_to_json(gen_space(seed, wide)).dump());
  CHECK_THROWS(gen_space(0, SuiteConfig{0, 1, 3, 2}));
}

TEST_CASE("point-only suite passes") {
  SuiteConfig cfg;
  cfg.trials = 5;
  cfg.min_size = cfg.max_size = 1;
  cfg.groups = {"trivial"};
  Report r = axiom_suite(cfg);
  CHECK(r.all_pass());
}

TEST_CASE("suite reports are deterministic and pass") {
  SuiteConfig cfg = small(50);
  Report a = axiom_suite(cfg), b = axiom_suite(cfg);
  CHECK(a.passed());
  CHECK(report_to_json(a, false).dump() == report_to_json(b, false).dump());
  CHECK(a.find("mayer_vietoris/049") != nullptr);
  CHECK(a.find("flasque/000") != nullptr);
}

TEST_CASE("each fault is caught with a witness") {
  {
    faults::Scope s(faults::Injection{true, false, false});
    Report r = axiom_suite(small(10));
    CHECK(any_failure_with_witness(r, "mayer_vietoris/"));
  }
  {
    faults::Scope s(faults::Injection{false, true, false});
    CHECK(any_failure_with_witness(axiom_suite(small(10))));
  }
  {
    faults::Scope s(faults::Injection{false, false, true});
    CHECK(any_failure_with_witness(axiom_suite(small(10)), "ctrl/"));
  }
  CHECK(axiom_suite(small(10)).passed());
}

TEST_CASE("invalid configurations are rejected") {
  SuiteConfig cfg;
  cfg.trials = 0;
  CHECK_THROWS(axiom_suite(cfg));
  cfg.trials = 1;
  cfg.max_degree = 5;
  CHECK_THROWS(axiom_suite(cfg));
}
