#include "crf/checks.hpp"

#include <chrono>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace crf {

namespace {

// Evaluate one point with the deterministic singularity-retry policy.
double residual_at(const PointResidual& f, const CoordinateDomain& dom, const Point& p,
                   std::uint64_t seed, int index) {
  Point cur = p;
  for (int attempt = 0;; ++attempt) {
    try {
      EvalContext ctx(cur);
      return f(ctx);
    } catch (const EvalError&) {
      if (attempt >= 10) throw;
      cur = retry_point(dom, seed, index, attempt);
    }
  }
}

}  // namespace

CheckReport scan_points_serial(const std::string& name, const PointResidual& f,
                               const CoordinateDomain& dom, const std::vector<Point>& pts,
                               const CheckConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  double best = -1.0;
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double r = residual_at(f, dom, pts[i], cfg.seed, static_cast<int>(i));
    if (r > best) {
      best = r;
      best_i = i;
    }
  }
  CheckReport rep;
  rep.name = name;
  rep.residual = best < 0 ? 0.0 : best;
  rep.worst = pts.empty() ? Point{} : pts[best_i];
  rep.pass = rep.residual < cfg.tol;
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                   .count();
  return rep;
}

CheckReport scan_points(const std::string& name, const PointResidual& f,
                        const CoordinateDomain& dom, const std::vector<Point>& pts,
                        const CheckConfig& cfg) {
#ifdef _OPENMP
  if (cfg.parallel && pts.size() > 1) {
    auto t0 = std::chrono::steady_clock::now();
    const auto n = static_cast<std::int64_t>(pts.size());
    double best = -1.0;
    std::int64_t best_i = 0;
    std::exception_ptr err;
#pragma omp parallel
    {
      double loc_best = -1.0;
      std::int64_t loc_i = 0;
#pragma omp for schedule(static)
      for (std::int64_t i = 0; i < n; ++i) {
        if (err) continue;
        double r;
        try {
          r = residual_at(f, dom, pts[static_cast<std::size_t>(i)], cfg.seed,
                          static_cast<int>(i));
        } catch (...) {
#pragma omp critical
          if (!err) err = std::current_exception();
          continue;
        }
        if (r > loc_best || (r == loc_best && i < loc_i)) {
          loc_best = r;
          loc_i = i;
        }
      }
#pragma omp critical
      {
        if (loc_best > best || (loc_best == best && loc_i < best_i)) {
          best = loc_best;
          best_i = loc_i;
        }
      }
    }
    if (err) std::rethrow_exception(err);
    CheckReport rep;
    rep.name = name;
    rep.residual = best < 0 ? 0.0 : best;
    rep.worst = pts[static_cast<std::size_t>(best_i)];
    rep.pass = rep.residual < cfg.tol;
    rep.millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
#endif
  return scan_points_serial(name, f, dom, pts, cfg);
}

CheckReport merge_reports(const std::string& name, const std::vector<CheckReport>& parts) {
  CheckReport out;
  out.name = name;
  out.pass = true;
  bool first = true;
  for (const auto& p : parts) {
    out.millis += p.millis;
    out.pass = out.pass && p.pass;
    if (first || p.residual > out.residual) {
      out.residual = p.residual;
      out.worst = p.worst;
      first = false;
    }
  }
  return out;
}

}  // namespace crf
