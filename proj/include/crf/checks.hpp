#pragma once

#include <functional>
#include <string>
#include <vector>

#include "crf/fields.hpp"

namespace crf {

struct CheckConfig {
  int samples = 200;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  bool parallel = true;
};

struct CheckReport {
  std::string name;
  double residual = 0.0;
  Point worst;
  bool pass = true;
  double millis = 0.0;
};

// Residual of one named condition at one point. EvalContext carries the
// per-point memo shared by all component expressions.
using PointResidual = std::function<double(EvalContext&)>;

// Scan a residual function over sample points and reduce by max. The OpenMP
// and serial paths produce bit-identical results (max reduction, ties broken
// toward the smallest point index); the serial path is the reference
// implementation used in tests and benchmarks.
//
// A point where evaluation hits an expression singularity is retried at a
// fresh deterministic point up to 10 times, then the run fails.
CheckReport scan_points(const std::string& name, const PointResidual& f,
                        const CoordinateDomain& dom, const std::vector<Point>& pts,
                        const CheckConfig& cfg);
CheckReport scan_points_serial(const std::string& name, const PointResidual& f,
                               const CoordinateDomain& dom, const std::vector<Point>& pts,
                               const CheckConfig& cfg);

// Residual scale guard: arguments of bilinear concomitants are normalized
// down to unit sup-norm (never up), keeping residuals scale-free without
// amplifying noise near zeros of the argument fields.
inline double scale_factor(double a_norm, double b_norm) {
  return std::max(1.0, a_norm) * std::max(1.0, b_norm);
}

// Combine several reports into one (max residual; name from the caller).
CheckReport merge_reports(const std::string& name, const std::vector<CheckReport>& parts);

}  // namespace crf
