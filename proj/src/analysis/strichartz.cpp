#include "radwave/analysis.hpp"

namespace radwave {

double strichartz_norm(const Trajectory<double>& traj,
                       const StrichartzPair& pair) {
  if (traj.empty()) throw InputError("Strichartz norm of an empty trajectory");
  MixedNormAccumulator<double> acc(pair.q, pair.rx);
  for (const auto& s : traj.snapshots) acc.add(s.t, s.u);
  return acc.value();
}

}  // namespace radwave
