// Periodic-orbit census for the logistic family, printed as a table.
// With an output directory it also writes census.csv and an SVG plot.
//
//   census_demo [lo] [hi] [points] [out-dir]

#include <cstdio>
#include <cstdlib>
#include <string>

#include "unidym/unidym.hpp"

using namespace unidym;

int main(int argc, char** argv) {
  const double lo = argc > 1 ? std::atof(argv[1]) : 2.8;
  const double hi = argc > 2 ? std::atof(argv[2]) : 3.57;
  const int points = argc > 3 ? std::atoi(argv[3]) : 24;
  const std::string out = argc > 4 ? argv[4] : "";

  Config cfg;
  cfg.set("orbits_packs.params", std::to_string(lo) + ":" + std::to_string(hi) + ":" + std::to_string(points));
  try {
    const auto records = run_experiment("census", cfg, 1);
    std::printf("%10s %7s %6s %12s %14s %s\n", "a", "orbits", "packs", "exceptional", "min |mult|", "status");
    for (const auto& r : records)
      std::printf("%10.5f %7g %6g %12g %14.6g %s\n", r.number("parameter"), r.number("orbit_count"),
                  r.number("pack_count"), r.number("exceptional_count"), r.number("min_nonexceptional_multiplier"),
                  to_string(r.status));
    if (!out.empty()) {
      const auto csv = emit(records, Format::csv, out, {"census", 1, "census_demo", true});
      const auto svg = plot(records, PlotKind::census_vs_parameter, out);
      std::printf("wrote %s and %s\n", csv.string().c_str(), svg.string().c_str());
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 1;
  }
  return 0;
}
