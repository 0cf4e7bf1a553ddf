#pragma once

#include <map>
#include <vector>

#include "pdlab/dyadic.hpp"
#include "pdlab/machine.hpp"

namespace pdlab {

// Exact output distribution of a program on a fixed input under a uniform
// random tape, obtained by branching on every RND. Non-halting runs are
// truncated at `budget` steps and contribute their partial output, so the
// masses always sum to 1.
struct OutputDistribution {
  std::map<Bits, Dyadic> mass;

  Dyadic total() const {
    Dyadic t;
    for (auto& [k, v] : mass) t = t + v;
    return t;
  }
  Dyadic of(const Bits& b) const {
    auto it = mass.find(b);
    return it == mass.end() ? Dyadic::zero() : it->second;
  }
};

// Enumeration cap: refuse budgets that could branch too deeply.
inline constexpr uint32_t kDistributionStepCap = 24;

OutputDistribution output_distribution(const Program& m, const Bits& input,
                                       uint32_t budget);

// Probability that the first output bit is 1 (acceptance mass).
Dyadic acceptance_probability(const Program& m, const Bits& input, uint32_t budget);

}  // namespace pdlab
