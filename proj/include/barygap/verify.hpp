#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "barygap/io.hpp"

namespace barygap {

struct VerifyOptions {
  std::uint64_t seed = 0;
  int budget = 20;  // random trials per property
  int threads = 1;
};

// 3.2, 4.4-lb, 4.5, helper, mono, cliques-equal, q1-value, q1-witness,
// qinf-clique, qinf-nonclique, q1-failure, qinf-failure, unif.
const std::vector<std::string>& lemma_ids();

// results: {"lemma", "properties": [{"name", "passed", "trials", "observed",
// "counterexample"?}]}; the first counterexample per property is kept.
// Unknown ids throw InputError.
RunReport verify_lemma(const std::string& id, const VerifyOptions& opts = {});

}  // namespace barygap
