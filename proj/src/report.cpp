#include "pdlab/report.hpp"

#include <vector>

#include "pdlab/manifest.hpp"

namespace pdlab {

uint64_t fnv1a64(const std::string& text) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; i--, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

OrderedJson report_skeleton(const std::string& subcommand, const OrderedJson& config) {
  OrderedJson doc;
  doc["manifest_version"] = manifest().version;
  doc["subcommand"] = subcommand;
  doc["config"] = config;
  doc["config_hash"] = hex64(fnv1a64(subcommand + ":" + config.dump()));
  return doc;
}

OrderedJson dyadic_json(const Dyadic& d) {
  OrderedJson j;
  j["num"] = d.num;
  j["log_den"] = d.e;
  return j;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (size_t i = 0; i < cells.size(); i++) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

}  // namespace pdlab
