#pragma once

#include <complex>
#include <memory>
#include <json.hpp>
#include <string>
#include <vector>

#include "cubicdelta/arith.hpp"
#include "cubicdelta/delta.hpp"
#include "cubicdelta/expsum_cache.hpp"
#include "cubicdelta/forms.hpp"
#include "cubicdelta/weight.hpp"

namespace cubicdelta::cli {

using json = nlohmann::ordered_json;

/// Exit codes: 0 pass, 1 invariant violation, 2 usage or scale error.
enum Exit { kPass = 0, kViolation = 1, kUsage = 2 };

/// Options shared by every command.
struct Common {
  std::string form = "1,1,1,1";
  std::string weight;
  std::string output;
  std::string csv;
  std::string cache;
  int workers = 1;
  u64 seed = 1;
  /// Shared prime-power cache, backed by a file when a path is configured.
  std::shared_ptr<ExpSumCache> store;
};

struct Result {
  json body = json::object();
  int status = kPass;
  /// Tabular rows for CSV export, one object per row with flat values.
  json rows = json::array();
};

IVec parse_ivec(const std::string& s);
inline json to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }
WeightSpec weight_for(const Common& o, int m);

/// A verification table row.
json check_row(const std::string& check, const std::string& param, double value, double tolerance, bool pass);
/// Applies the rows' pass flags to the result status and stores the table.
void finish_table(Result& r, json rows);

Result run_verify(const std::string& suite, const Common& o, const json& args);

}  // namespace cubicdelta::cli
