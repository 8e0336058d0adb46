#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lchzk {

// One acceptance-suite criterion outcome.
struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelftestOptions {
  uint64_t seed = 2718281828ULL;
  bool parallel = true;
  // scales the Monte Carlo sample counts (1.0 = the nominal 10^4-per-test
  // budget); tests keep their stated tolerances regardless
  double sample_scale = 1.0;
};

CriterionResult criterion_gadget_identities();
CriterionResult criterion_reduction_sanity();
CriterionResult criterion_steane_properties();
CriterionResult criterion_sampler_equivalence(const SelftestOptions& opt);
CriterionResult criterion_completeness_equality();
CriterionResult criterion_soundness_inequality(const SelftestOptions& opt);
CriterionResult criterion_trap_lemma(const SelftestOptions& opt);
CriterionResult criterion_xor_attack_bound(const SelftestOptions& opt);
CriterionResult criterion_zk_indistinguishability(const SelftestOptions& opt);
CriterionResult criterion_protocol_hygiene(const SelftestOptions& opt);

std::vector<CriterionResult> run_acceptance_criteria(const SelftestOptions& opt);

}  // namespace lchzk
