// Exact evolution of the block density operator rho(x, y) under the
// random-walk channel, the quantum-walk channel and their convex mixture,
// plus the two scalar reference recursions they must reproduce.

#ifndef QSW_EXACT_EVOLUTION_HPP
#define QSW_EXACT_EVOLUTION_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "qsw/coin.hpp"
#include "qsw/linalg.hpp"

namespace qsw {

inline constexpr double kTraceTol = 1e-10;
inline constexpr int kDefaultExactCap = 512;

/// Finding probabilities mu_t(x). Only the sublattice x = -t, -t+2, ..., t
/// is stored; every other position is identically zero.
struct Distribution {
  int t = 0;
  std::vector<double> probs;  ///< probs[i] is mu_t(-t + 2i)

  static int position(int t, std::size_t i) { return -t + 2 * static_cast<int>(i); }
  int position(std::size_t i) const { return position(t, i); }
  /// mu_t(x); 0 off the parity sublattice and outside [-t, t].
  double at(int x) const;
  double total() const;
};

/// rho_t(x, y) for x, y in [-t, t] with x = y = t (mod 2), stored densely
/// over that sublattice (row i, column j <-> x = -t+2i, y = -t+2j).
class DensityGrid {
 public:
  explicit DensityGrid(int t);

  int t() const noexcept { return t_; }
  std::size_t size() const noexcept { return n_; }

  Mat2& at(std::size_t i, std::size_t j) { return blocks_[i * n_ + j]; }
  const Mat2& at(std::size_t i, std::size_t j) const { return blocks_[i * n_ + j]; }

  /// rho(x, y) by lattice coordinates; the zero block off the support.
  Mat2 block(int x, int y) const;

  std::span<const Mat2> blocks() const noexcept { return blocks_; }

 private:
  int t_;
  std::size_t n_;
  std::vector<Mat2> blocks_;
};

/// rho_0(x, y) = (1/2) delta_{(0,0)}(x, y) I_2.
DensityGrid initial_grid();

/// rho_0 = delta_{(0,0)} * block, for an arbitrary 2x2 density matrix.
DensityGrid initial_grid(const Mat2& block);

/// Pure-state grid rho(x, y) = |psi(x)><psi(y)| at step t; amplitudes are
/// indexed like Distribution::probs.
DensityGrid pure_grid(int t, std::span<const Vec2> amplitudes);

struct StepOptions {
  int threads = 1;  ///< parallelism over output rows; results do not depend on it
};

DensityGrid apply_rw(const DensityGrid& grid, const Coin& coin, const StepOptions& opt = {});
DensityGrid apply_qw(const DensityGrid& grid, const Coin& coin, const StepOptions& opt = {});
/// (1 - p) L^QW + p L^RW, evaluated in the direct form in which the
/// interference terms carry the weight q.
DensityGrid apply_interpolated(const DensityGrid& grid, const WalkParams& params,
                               const StepOptions& opt = {});

/// mu(x) = tr rho(x, x). Throws Error{TraceDrift} if |sum - 1| > 1e-10.
Distribution marginal(const DensityGrid& grid);

struct GridDiagnostics {
  double trace_drift = 0.0;       ///< |sum_x tr rho(x,x) - 1|
  double min_diag_eigen = 0.0;    ///< smallest eigenvalue over diagonal blocks
  double hermitian_defect = 0.0;  ///< max |rho(x,y) - rho(y,x)^*|
};

GridDiagnostics diagnose(const DensityGrid& grid);

struct EvolveOptions {
  int threads = 1;
  int max_steps = kDefaultExactCap;  ///< cap on t; raise explicitly for longer runs
  /// Optional per-step hook, called with the grid after every step.
  std::function<void(const DensityGrid&)> observer;
};

/// t steps of L_p from `start` (default rho_0), checking the trace after
/// every step so a drift is attributed to the step that caused it.
DensityGrid evolve_grid(const WalkParams& params, int t, const DensityGrid& start,
                        const EvolveOptions& opt = {});

Distribution evolve(const WalkParams& params, int t, const EvolveOptions& opt = {});

/// Persistent random walk: per-vertex weight on the outgoing arcs (x, x-1)
/// and (x, x+1). Matching rho_0 means (<-|rho_0|->, <+|rho_0|+>).
struct ArcWeights {
  double toward_left = 0.5;
  double toward_right = 0.5;
};

/// Quantum walk: amplitudes on the arcs (x+1, x) and (x-1, x) arriving at
/// the origin, i.e. the chirality components (L, R).
struct ArcAmplitudes {
  Complex left = 1.0;
  Complex right = 0.0;
};

ArcWeights matched_arc_weights(const Coin& coin, const Mat2& rho0);

Distribution persistent_rw_reference(double stay_prob, int t, ArcWeights initial);

/// Throws Error{NormDrift} if the squared norm drifts by more than 1e-10.
Distribution pure_qw_reference(const Coin& coin, int t, ArcAmplitudes initial);

}  // namespace qsw

#endif  // QSW_EXACT_EVOLUTION_HPP
