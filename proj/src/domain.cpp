#include "crf/domain.hpp"

namespace crf {

CoordinateDomain box_domain(std::vector<std::pair<double, double>> box) {
  CoordinateDomain d;
  d.dim = static_cast<int>(box.size());
  d.box = std::move(box);
  d.periodic.assign(d.dim, false);
  d.validate();
  return d;
}

CoordinateDomain cube_domain(int dim, double lo, double hi) {
  CoordinateDomain d;
  d.dim = dim;
  d.box.assign(dim, {lo, hi});
  d.periodic.assign(dim, false);
  d.validate();
  return d;
}

CoordinateDomain torus_domain(int dim) {
  CoordinateDomain d;
  d.dim = dim;
  d.box.assign(dim, {0.0, 6.283185307179586});
  d.periodic.assign(dim, true);
  d.validate();
  return d;
}

CoordinateDomain with_factors(const CoordinateDomain& d, int h, double lo, double hi) {
  CoordinateDomain out = d;
  out.dim += h;
  out.factors += h;
  for (int a = 0; a < h; ++a) {
    out.box.emplace_back(lo, hi);
    out.periodic.push_back(false);
  }
  out.validate();
  return out;
}

std::vector<Point> sample_points(const CoordinateDomain& d, int n, std::uint64_t seed) {
  d.validate();
  SplitMix64 rng(seed);
  std::vector<Point> pts(n, Point(d.dim));
  for (auto& p : pts)
    for (int i = 0; i < d.dim; ++i) p[i] = rng.uniform(d.box[i].first, d.box[i].second);
  return pts;
}

Point retry_point(const CoordinateDomain& d, std::uint64_t seed, int index, int attempt) {
  SplitMix64 rng(seed ^ (0x5bf03635ULL + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(
                                              index * 16 + attempt)));
  Point p(d.dim);
  for (int i = 0; i < d.dim; ++i) p[i] = rng.uniform(d.box[i].first, d.box[i].second);
  return p;
}

}  // namespace crf
