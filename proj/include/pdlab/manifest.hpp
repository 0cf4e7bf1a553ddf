#pragma once

#include <cstdint>
#include <string>

namespace pdlab {

// Machine-model constants. Everything that a test or a report compares
// against lives here rather than being scattered as magic numbers, and every
// report names the manifest version it was produced under. The values can be
// overridden by pointing PDLAB_MANIFEST at a JSON file with the same keys.
struct Manifest {
  std::string version = "pdlab-manifest-1";

  // instruction width of the toy machine, in bits
  int instruction_bits = 8;

  // compiled-circuit size bound: gates <= compiler_k * t * max(1, ceil(log2 t)),
  // measured over the tested regime (see the compiler tests)
  int compiler_k = 96;

  // witness-cost bound for truth-table prefixes:
  //   cost <= fact51_cprime * (log l + log a + b + log n) + fact51_c0
  int fact51_cprime = 8;
  int fact51_c0 = 48;

  // scaling constant in the estimator's instance-size convention
  int capp_c = 2;

  // checker repetitions used by the optimal-search driver
  int checker_reps = 20;

  // corruption-rate exponent the surrogate self-corrector tolerates (1/m^b)
  int corrector_b = 2;
};

// Process-wide manifest: defaults, or the JSON file named by PDLAB_MANIFEST.
const Manifest& manifest();

}  // namespace pdlab
