#pragma once

#include <complex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "cubicdelta/arith.hpp"

namespace cubicdelta {

/// Prime-power values S_c(p^l) keyed by (form, p, l, c mod p^l). Backed by an
/// optional JSON-lines file; concurrent readers, last write wins.
class ExpSumCache {
 public:
  explicit ExpSumCache(std::string path = {});
  ~ExpSumCache();

  ExpSumCache(const ExpSumCache&) = delete;
  ExpSumCache& operator=(const ExpSumCache&) = delete;

  /// Path from CUBIC_DELTA_CACHE, else the given fallback.
  static std::string resolve_path(const std::string& fallback);

  std::optional<std::complex<double>> get(const std::string& form, u64 p, int l, const std::vector<i64>& residue) const;
  void put(const std::string& form, u64 p, int l, const std::vector<i64>& residue, std::complex<double> value);

  /// Appends records added since the last flush to the backing file.
  void flush();
  size_t size() const;
  const std::string& path() const { return path_; }

 private:
  static std::string key(const std::string& form, u64 p, int l, const std::vector<i64>& residue);

  std::string path_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, std::complex<double>> values_;
  std::vector<std::string> pending_;
};

}  // namespace cubicdelta
