#include "pdlab/manifest.hpp"

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "pdlab/errors.hpp"

namespace pdlab {

static Manifest load_manifest() {
  Manifest m;
  const char* path = std::getenv("PDLAB_MANIFEST");
  if (!path || !*path) return m;
  std::ifstream in(path);
  if (!in) throw ValidationError(std::string("cannot open manifest file: ") + path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("version")) m.version = j["version"].get<std::string>();
  if (j.contains("instruction_bits")) m.instruction_bits = j["instruction_bits"].get<int>();
  if (j.contains("compiler_k")) m.compiler_k = j["compiler_k"].get<int>();
  if (j.contains("fact51_cprime")) m.fact51_cprime = j["fact51_cprime"].get<int>();
  if (j.contains("fact51_c0")) m.fact51_c0 = j["fact51_c0"].get<int>();
  if (j.contains("capp_c")) m.capp_c = j["capp_c"].get<int>();
  if (j.contains("checker_reps")) m.checker_reps = j["checker_reps"].get<int>();
  if (j.contains("corrector_b")) m.corrector_b = j["corrector_b"].get<int>();
  return m;
}

const Manifest& manifest() {
  static const Manifest m = load_manifest();
  return m;
}

}  // namespace pdlab
