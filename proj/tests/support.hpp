#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "pmvos/grid.hpp"
#include "pmvos/metrics.hpp"
#include "pmvos/random.hpp"

#include <unistd.h>

namespace pmvos::test {

inline FeatureGrid random_grid(Rng& rng, std::size_t c, std::size_t h, std::size_t w,
                               double lo = -1.0, double hi = 1.0) {
  FeatureGrid g(c, h, w);
  for (double& v : g.data()) v = rng.uniform(lo, hi);
  return g;
}

inline ProbabilityField random_field(Rng& rng, std::size_t h, std::size_t w) {
  std::vector<double> fg(h * w);
  for (double& v : fg) v = rng.uniform();
  return ProbabilityField::from_foreground(h, w, fg);
}

inline ProbabilityField constant_field(std::size_t h, std::size_t w, double fg) {
  return ProbabilityField::from_foreground(h, w, std::vector<double>(h * w, fg));
}

inline LabelMask random_mask(Rng& rng, std::size_t h, std::size_t w, std::uint8_t labels = 1) {
  LabelMask m(h, w);
  const double density = rng.uniform(0.1, 0.9);
  for (auto& l : m.labels)
    l = rng.uniform() < density ? static_cast<std::uint8_t>(1 + rng.index(labels)) : 0;
  return m;
}

inline LabelMask block(std::size_t h, std::size_t w, std::size_t y0, std::size_t x0,
                       std::size_t bh, std::size_t bw, std::uint8_t label = 1) {
  LabelMask m(h, w);
  for (std::size_t y = y0; y < y0 + bh; ++y)
    for (std::size_t x = x0; x < x0 + bw; ++x) m.at(y, x) = label;
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

/// Fresh scratch directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    Rng rng(std::hash<std::string>{}(tag));
    path_ = std::filesystem::temp_directory_path() /
            ("pmvos_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(rng.next() % 1000000007));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace pmvos::test
