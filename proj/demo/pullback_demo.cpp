// Pull a small interval back along a logistic orbit and watch the
// cross-ratio of an inner interval change between head and tail.
//
//   pullback_demo [a] [x0] [steps]

#include <cstdio>
#include <cstdlib>

#include "unidym/unidym.hpp"

using namespace unidym;

int main(int argc, char** argv) {
  const double a = argc > 1 ? std::atof(argv[1]) : 3.9;
  const double x0 = argc > 2 ? std::atof(argv[2]) : 0.2;
  const int steps = argc > 3 ? std::atoi(argv[3]) : 6;

  const MapModel g = MapModel::logistic(a);
  const auto orbit = forward_orbit(g, x0, steps);
  const OrientedInterval Tm = *OrientedInterval::centered(orbit.back(), 1e-3).intersection({0.0, 1.0});

  PullbackOptions opt;
  opt.diffeomorphic = true;
  Chain chain;
  try {
    chain = pull_back_chain(g, Tm, orbit, opt);
  } catch (const Error& e) {
    std::fprintf(stderr, "pullback failed: %s\n", e.what());
    return 1;
  }

  std::printf("logistic a=%g, orbit of %g, %d steps\n", a, x0, chain.length());
  std::printf("%4s %22s %22s %12s\n", "k", "T_k lo", "T_k hi", "|T_k|");
  for (std::size_t k = 0; k < chain.intervals.size(); ++k) {
    const auto& T = chain.intervals[k];
    std::printf("%4zu %22.17g %22.17g %12.4g\n", k, T.lo(), T.hi(), T.length());
  }
  std::printf("multiplicity %d, order %d\n", chain.multiplicity, chain.order);

  const OrientedInterval Jm = OrientedInterval::centered(Tm.midpoint(), Tm.length() / 6);
  const auto rep = verify_pullback_cr(g, chain, Jm);
  std::printf("D(T_m, J_m) = %.6g   D(T_0, J_0) = %.6g\n", rep.D_tail, rep.D_head);
  std::printf("space at tail %.6g, at head %.6g\n", rep.space_tail, rep.space_head);
  return 0;
}
