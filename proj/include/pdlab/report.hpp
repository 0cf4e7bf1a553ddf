#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "pdlab/dyadic.hpp"

namespace pdlab {

using OrderedJson = nlohmann::ordered_json;

// FNV-1a over the canonical config serialization; the report's identity key.
uint64_t fnv1a64(const std::string& text);
std::string hex64(uint64_t v);

// Report skeleton shared by every CLI run: names the machine-model manifest
// version, echoes the config, and pins its hash. Callers append "results"
// and, last, "timing_ms" (the one field excluded from byte-reproducibility).
OrderedJson report_skeleton(const std::string& subcommand, const OrderedJson& config);

// {"num": n, "log_den": e} — exact dyadic probability, no floats.
OrderedJson dyadic_json(const Dyadic& d);

// One CSV row; cells must already be rendered (no quoting layer — the lab's
// cell values never contain commas).
std::string csv_row(const std::vector<std::string>& cells);

}  // namespace pdlab
