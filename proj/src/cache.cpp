#include "virtheta/cache.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace virtheta {

namespace fs = std::filesystem;

namespace {

bool is_entry(const fs::directory_entry& e) {
  const std::string name = e.path().filename().string();
  return e.is_regular_file() && name.rfind("as_", 0) == 0 && e.path().extension() == ".json";
}

}  // namespace

ASCache::ASCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path ASCache::file_for(const CharacterPsi& chi, const GroupPtr& G) const {
  Lattice2 L = G->conductor().ideal().lattice();
  std::ostringstream name;
  name << "as_D" << chi.D << "_Dp" << chi.Dprime << "_F" << L.A << "-" << L.B << "-" << L.C << ".json";
  return dir_ / name.str();
}

ASSets ASCache::get(const CharacterPsi& chi, const GroupPtr& G) const {
  fs::path file = file_for(chi, G);
  if (std::ifstream in(file); in) {
    try {
      return as_sets_from_json(nlohmann::json::parse(in), chi, G);
    } catch (const nlohmann::json::exception&) {
      // Unreadable entries are recomputed and overwritten.
    }
  }
  ASSets as = compute_A_S(chi, G);
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cache directory " + dir_.string() + " is not writable: " + ec.message());
  fs::path tmp = file;
  tmp += ".tmp" + std::to_string(std::random_device{}());
  {
    std::ofstream out(tmp);
    out << as_sets_to_json(chi, G, as).dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
  }
  fs::rename(tmp, file);
  return as;
}

ASCache::Stats ASCache::stats() const {
  Stats s;
  if (!fs::is_directory(dir_)) return s;
  for (const auto& e : fs::directory_iterator(dir_)) {
    if (!is_entry(e)) continue;
    ++s.entries;
    s.bytes += static_cast<i64>(e.file_size());
  }
  return s;
}

i64 ASCache::clear() const {
  if (!fs::is_directory(dir_)) return 0;
  std::vector<fs::path> doomed;
  for (const auto& e : fs::directory_iterator(dir_))
    if (is_entry(e)) doomed.push_back(e.path());
  for (const auto& p : doomed) fs::remove(p);
  return static_cast<i64>(doomed.size());
}

ASSets as_sets(const CharacterPsi& chi, const GroupPtr& G, const std::string& cache_dir) {
  if (cache_dir.empty()) return compute_A_S(chi, G);
  return ASCache(cache_dir).get(chi, G);
}

}  // namespace virtheta
