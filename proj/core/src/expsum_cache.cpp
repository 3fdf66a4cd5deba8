#include "cubicdelta/expsum_cache.hpp"

#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <mutex>

namespace cubicdelta {

ExpSumCache::ExpSumCache(std::string path) : path_(std::move(path)) {
  if (path_.empty()) return;
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      auto v = j.at("value");
      values_[key(j.at("form").get<std::string>(), j.at("p").get<u64>(), j.at("l").get<int>(),
                  j.at("c_residue").get<std::vector<i64>>())] = {v.at(0).get<double>(), v.at(1).get<double>()};
    } catch (const std::exception&) {
      // A torn trailing record from an interrupted writer is recomputed on demand.
    }
  }
}

ExpSumCache::~ExpSumCache() {
  try {
    flush();
  } catch (...) {
  }
}

std::string ExpSumCache::resolve_path(const std::string& fallback) {
  const char* env = std::getenv("CUBIC_DELTA_CACHE");
  return env && *env ? std::string(env) : fallback;
}

std::string ExpSumCache::key(const std::string& form, u64 p, int l, const std::vector<i64>& residue) {
  std::string k = form + "|" + std::to_string(p) + "|" + std::to_string(l) + "|";
  for (i64 r : residue) k += std::to_string(r) + ",";
  return k;
}

std::optional<std::complex<double>> ExpSumCache::get(const std::string& form, u64 p, int l,
                                                     const std::vector<i64>& residue) const {
  std::shared_lock lock(mu_);
  auto it = values_.find(key(form, p, l, residue));
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void ExpSumCache::put(const std::string& form, u64 p, int l, const std::vector<i64>& residue,
                      std::complex<double> value) {
  std::unique_lock lock(mu_);
  values_[key(form, p, l, residue)] = value;
  if (!path_.empty()) {
    nlohmann::json j;
    j["form"] = form;
    j["p"] = p;
    j["l"] = l;
    j["c_residue"] = residue;
    j["value"] = {value.real(), value.imag()};
    pending_.push_back(j.dump());
  }
}

void ExpSumCache::flush() {
  std::unique_lock lock(mu_);
  if (path_.empty() || pending_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  for (const auto& rec : pending_) out << rec << "\n";
  pending_.clear();
}

size_t ExpSumCache::size() const {
  std::shared_lock lock(mu_);
  return values_.size();
}

}  // namespace cubicdelta
