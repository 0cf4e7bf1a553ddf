#pragma once

#include <cstdint>

#include "pdlab/bits.hpp"
#include "pdlab/circuit.hpp"
#include "pdlab/machine.hpp"

namespace pdlab {

// Compiles "does m(input) emit 1 as its first output bit within `budget`
// steps" into a circuit whose input slot j is the j-th random-tape bit the
// machine consumes. Equal machine states reached on different tape prefixes
// are merged each step, so looping programs compile to circuits sized by
// reachable states rather than by 2^budget paths.
Circuit compile_acceptance(const Program& m, const Bits& input, uint32_t budget,
                           uint32_t arity);

inline Circuit compile_acceptance(const Program& m, const Bits& input,
                                  uint32_t budget) {
  return compile_acceptance(m, input, budget, budget);
}

}  // namespace pdlab
