#include <chrono>
#include <iomanip>
#include <iostream>

#include "crf/catalog.hpp"

// Compares the serial reference point scan against the OpenMP scan on the
// heavier catalog checks and verifies they produce identical results.

using namespace crf;

namespace {

double time_once(const Payload& payload, const CheckSpec& spec, CheckConfig cfg,
                 CheckReport& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = run_check(payload, spec, cfg);
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  int samples = argc > 1 ? std::atoi(argv[1]) : 200;
  struct Case {
    const char* fixture;
    const char* check;
  };
  const Case cases[] = {
      {"crfk-torus", "integrability"},
      {"crfk-torus", "crfk"},
      {"nirenberg-antiholo", "classical-crf"},
      {"sasaki-r3", "sasakian"},
  };
  std::cout << std::left << std::setw(22) << "fixture" << std::setw(16) << "check"
            << std::right << std::setw(12) << "serial ms" << std::setw(12) << "openmp ms"
            << std::setw(10) << "speedup" << "  identical\n";
  for (const auto& c : cases) {
    Fixture fx = catalog_get(c.fixture);
    CheckConfig cfg;
    cfg.samples = samples;
    CheckReport serial_rep, par_rep;
    cfg.parallel = false;
    double t_serial = time_once(fx.payload, CheckSpec{c.check, {}}, cfg, serial_rep);
    cfg.parallel = true;
    double t_par = time_once(fx.payload, CheckSpec{c.check, {}}, cfg, par_rep);
    bool same = serial_rep.residual == par_rep.residual && serial_rep.worst == par_rep.worst &&
                serial_rep.pass == par_rep.pass;
    std::cout << std::left << std::setw(22) << c.fixture << std::setw(16) << c.check
              << std::right << std::fixed << std::setprecision(1) << std::setw(12) << t_serial
              << std::setw(12) << t_par << std::setprecision(2) << std::setw(10)
              << (t_par > 0 ? t_serial / t_par : 0.0) << "  " << (same ? "yes" : "NO") << "\n";
    if (!same) return 1;
  }
  return 0;
}
