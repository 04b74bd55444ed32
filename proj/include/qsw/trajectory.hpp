// Monte-Carlo estimate of mu_t by unraveling L_p into pure-state
// trajectories: at every step a Bernoulli(p) draw selects the two-Kraus
// random-walk channel (one branch sampled) or the unitary quantum-walk step.

#ifndef QSW_TRAJECTORY_HPP
#define QSW_TRAJECTORY_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "qsw/coin.hpp"
#include "qsw/exact_evolution.hpp"
#include "qsw/linalg.hpp"

namespace qsw {

/// Per-trajectory random stream. Streams for different trajectory indices
/// are derived from one master seed, so the estimate does not depend on how
/// trajectories are distributed over workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  static Rng for_stream(std::uint64_t master_seed, std::uint64_t index);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Two-component chirality amplitudes on the parity sublattice of [-t, t].
struct PureState {
  int t = 0;
  std::vector<Vec2> amplitudes;  ///< amplitudes[i] at x = -t + 2i

  static PureState at_origin(Vec2 chirality);
  double norm2() const;
  std::vector<double> weights() const;  ///< ||psi(x)||^2 per site
};

inline constexpr double kNormTol = 1e-10;
inline constexpr double kStarvedTol = 1e-14;

/// psi'(x) = P psi(x+1) + Q psi(x-1). Throws Error{NormDrift}.
PureState qw_step(const PureState& psi, const Coin& coin);

/// Samples branch A psi(x) = P psi(x+1) with probability ||A psi||^2, else
/// B psi(x) = Q psi(x-1), and renormalizes. Throws Error{BranchStarved}.
PureState rw_step(const PureState& psi, const Coin& coin, Rng& rng);

/// Final-time position weights ||psi_t(x)||^2 of one trajectory started from
/// a fair draw of |L> or |R> at the origin.
std::vector<double> run_trajectory(const WalkParams& params, int t, Rng& rng);

struct McConfig {
  std::uint64_t n_traj = 100000;
  std::uint64_t seed = 1;
  int t = 0;
  int threads = 1;
  bool use_prefix_cache = true;  ///< share quantum-walk prefixes; same bits either way
};

struct McResult {
  Distribution dist;
  std::vector<double> std_error;  ///< sample sd / sqrt(n_traj), per site
};

/// Mean of Rao-Blackwellized trajectory profiles. The initial chirality is
/// stratified (half the trajectories start from |L>, half from |R>), which
/// removes its sampling noise; std_error is the unstratified estimate and so
/// errs on the conservative side. Trajectories are reduced in
/// fixed blocks combined pairwise, so the result is bit-identical for any
/// thread count.
McResult mc_distribution(const WalkParams& params, const McConfig& cfg);

}  // namespace qsw

#endif  // QSW_TRAJECTORY_HPP
