#pragma once

#include "virtheta/rayclass.hpp"

#include <filesystem>

namespace virtheta {

// On-disk store of A/S sets, one JSON file per (D, D', F).
class ASCache {
 public:
  explicit ASCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path file_for(const CharacterPsi& chi, const GroupPtr& G) const;
  // Loads the entry if present, otherwise computes and stores it.
  ASSets get(const CharacterPsi& chi, const GroupPtr& G) const;

  struct Stats {
    i64 entries = 0;
    i64 bytes = 0;
  };
  Stats stats() const;
  i64 clear() const;

 private:
  std::filesystem::path dir_;
};

// compute_A_S, going through the cache when cache_dir is nonempty.
ASSets as_sets(const CharacterPsi& chi, const GroupPtr& G, const std::string& cache_dir);

}  // namespace virtheta
