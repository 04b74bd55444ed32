// The regime p = gamma / s: finitely many random-walk events over s steps.
// Closed-form limit of E[exp(i xi X_s / s)] and its comparison with
// simulation.
//
// gamma is the event rate (written lambda in some of the discussion of the
// walk's figures; the two names denote the same parameter).

#ifndef QSW_POISSON_HPP
#define QSW_POISSON_HPP

#include <cstdint>
#include <vector>

#include "qsw/coin.hpp"
#include "qsw/exact_evolution.hpp"
#include "qsw/linalg.hpp"

namespace qsw {

inline constexpr int kDefaultPoissonNodes = 512;

/// cos theta = |a| cos k with theta in [0, pi], alpha = |a| sin k / sin theta,
/// beta = (1 - alpha^2) / 2.
struct Dispersion {
  double k = 0.0;
  double theta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

/// Throws Error{DegenerateCoin} for |a| in {0, 1} and for |a| >= 1 - 1e-9,
/// where beta can vanish.
Dispersion dispersion(const Coin& coin, double k);

/// lim E[exp(i xi X_s / s)] under p = gamma / s:
///   int e^{-beta gamma} [cosh S + beta gamma sinh(S) / S] dk / 2pi,
/// S = sqrt(beta^2 gamma^2 - alpha^2 xi^2) (principal branch), by the
/// trapezoid rule over n_k nodes. Throws Error{ImaginaryResidual} if the
/// imaginary part exceeds 1e-10.
double prop3_char_fn(const Coin& coin, double gamma, double xi, int n_k = kDefaultPoissonNodes);

/// (1/2) int (e^{i xi alpha} + e^{-i xi alpha}) dk / 2pi, the gamma = 0 case
/// evaluated directly.
double qw_limit_char_fn(const Coin& coin, double xi, int n_k = kDefaultPoissonNodes);

/// First-order generator on the eigenvalue-1 eigenspace of
/// T = U(k) (x) conj(U(k)), U(k) = e^{ik} P + e^{-ik} Q: the 2x2 compression
/// V* D V of D = i xi (diag(-1, 1) (x) I) - gamma (|L><L| (x) |R><R| + |R><R| (x) |L><L|)
/// onto the basis phi_+ (x) conj(phi_+), phi_- (x) conj(phi_-) built from the
/// eigenvectors of U(k).
struct ReducedGenerator {
  Mat2 M;
  std::array<Complex, 2> eigenvalues{};  ///< of M, computed directly
  std::array<Complex, 2> predicted{};    ///< -beta gamma +- sqrt(beta^2 gamma^2 - alpha^2 xi^2) at l
  double basis_residual = 0.0;           ///< max ||T v - v|| over the basis
  double discrepancy = 0.0;              ///< eigenvalues vs predicted, best pairing
};

ReducedGenerator reduced_generator(const Coin& coin, double k, double xi, double gamma);

enum class Engine { Auto, Exact, MonteCarlo };

struct CompareOptions {
  Engine engine = Engine::Auto;
  int exact_cap = kDefaultExactCap;  ///< Auto uses exact evolution for s <= exact_cap
  std::uint64_t n_traj = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  int n_k = kDefaultPoissonNodes;
};

struct ComparePoint {
  double xi = 0.0;
  Complex sim;  ///< sum_x mu_s(x) exp(i xi x / s)
  double formula = 0.0;
  double abs_diff = 0.0;  ///< |sim - formula|
};

struct CompareRun {
  int s = 0;
  double p = 0.0;
  Engine engine = Engine::Exact;  ///< engine actually used
  Distribution dist;
  std::vector<ComparePoint> points;
  double sup_diff = 0.0;
};

/// mu_s under p = gamma / s. gamma = 0 is the pure quantum walk, computed by
/// the amplitude recursion regardless of engine (there is no randomness left
/// to sample apart from the initial chirality).
CompareRun simulate_poisson(const Coin& coin, double gamma, int s, const CompareOptions& opt);

/// For each s, simulate_poisson and compare with prop3_char_fn on xi_grid.
std::vector<CompareRun> compare_sim(const Coin& coin, double gamma, const std::vector<int>& s_list,
                                    const std::vector<double>& xi_grid, const CompareOptions& opt);

/// Central-bump detector. mu is first averaged over a window of
/// 2 * half_width + 1 occupied sites (half_width = max(1, s / 100)) so that
/// the interference ripple of the quantum walk does not register as a peak.
/// The bump is present when the largest smoothed value over |x| <= s/10 is a
/// strict local maximum of the smoothed profile and exceeds the smallest
/// smoothed value over s/10 < |x| <= s/2 by the relative margin.
inline constexpr double kProtrusionMargin = 0.1;

struct Protrusion {
  int half_width = 0;
  int peak_x = 0;
  double peak = 0.0;
  int trough_x = 0;
  double trough = 0.0;
  bool local_max = false;
  bool present = false;
};

Protrusion detect_protrusion(const Distribution& dist);

}  // namespace qsw

#endif  // QSW_POISSON_HPP
