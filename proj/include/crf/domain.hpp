#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace crf {

using Point = std::vector<double>;

// A coordinate chart: a box in R^dim, with per-coordinate periodicity flags
// (a periodic coordinate is an angle identified mod hi-lo). The last
// `factors` coordinates are product factors (printed t1, t2, ...).
struct CoordinateDomain {
  int dim = 0;
  std::vector<std::pair<double, double>> box;
  std::vector<bool> periodic;
  int factors = 0;

  int x_dim() const { return dim - factors; }
  void validate() const {
    if (dim < 1) throw std::invalid_argument("domain dimension must be positive");
    if (static_cast<int>(box.size()) != dim || static_cast<int>(periodic.size()) != dim)
      throw std::invalid_argument("domain box/periodic size mismatch");
    for (auto& [lo, hi] : box)
      if (!(lo < hi)) throw std::invalid_argument("domain interval must have lo < hi");
  }
};

CoordinateDomain box_domain(std::vector<std::pair<double, double>> box);
CoordinateDomain cube_domain(int dim, double lo = -1.0, double hi = 1.0);
CoordinateDomain torus_domain(int dim);  // [0, 2*pi) per coordinate, all periodic

// Append `h` non-periodic factor coordinates with the given interval.
CoordinateDomain with_factors(const CoordinateDomain& d, int h, double lo = -1.0, double hi = 1.0);

// splitmix64; used everywhere randomness is needed so runs are reproducible
// across platforms.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

std::vector<Point> sample_points(const CoordinateDomain& d, int n, std::uint64_t seed);

// Deterministic replacement point for a sample that hit an expression
// singularity; `attempt` counts retries for the same index.
Point retry_point(const CoordinateDomain& d, std::uint64_t seed, int index, int attempt);

}  // namespace crf
