// Numerical checks of the spectrum of the unperturbed Fourier generator T and
// of the second-order splitting of its eigenvalue 1.

#ifndef QSW_SPECTRAL_HPP
#define QSW_SPECTRAL_HPP

#include <array>
#include <vector>

#include "qsw/coin.hpp"
#include "qsw/linalg.hpp"

namespace qsw {

/// T = P(x)P̄ + Q(x)Q̄ + q (e^{2ik} P(x)Q̄ + e^{-2ik} Q(x)P̄) = hat_H(-k, k).
Mat4 T0(const WalkParams& params, double k);

/// D = diag(-1, 1) (x) I, the factor in T^(1) = i xi D T.
Mat4 chirality_sign();

/// The circle variable l = k + sigma - delta/2.
double circle_point(const Coin& coin, double k);

struct UnperturbedSpectrum {
  double k = 0.0;
  std::array<Complex, 4> eigenvalues{};
  double eigvec_residual = 0.0;  ///< ||T v - v|| for v = (1, 0, 0, 1)
  double gap = 0.0;              ///< distance from 1 to the second-closest eigenvalue
  double max_other_modulus = 0.0;
  double max_modulus_defect = 0.0;  ///< max ||lambda| - 1| (meaningful at p = 0)
  bool small_gap = false;           ///< gap < 1e-6: eigenvalue 1 not numerically simple
};

/// Checks that 1 is an eigenvalue with eigenvector (1, 0, 0, 1); for p > 0
/// that it is simple and every other eigenvalue lies strictly inside the
/// unit disc, for p = 0 that all four eigenvalues are unimodular. Throws
/// Error{LemmaViolation} naming the offending eigenvalue.
UnperturbedSpectrum check_unperturbed(const WalkParams& params, double k);

/// (var_ratio / 2) (1 + q^2 - 2q cos 2l) / (1 - q^2) xi^2.
double predicted_coeff(const WalkParams& params, double l, double xi);

/// Eigenvalue of T(eps) = hat_H(eps xi - k, k) nearest to 1. Throws
/// Error{EigenvalueAmbiguity} if two eigenvalues tie within 1e-12.
Complex split_eigenvalue(const WalkParams& params, double k, double xi, double eps);

/// (1 - Re lambda(eps)) / eps^2.
double measured_coeff(const WalkParams& params, double k, double xi, double eps);

/// eps = 1e-2, 5e-3, 2.5e-3, ... (count entries).
std::vector<double> default_eps_ladder(int count = 6);

struct PerturbationRow {
  double eps = 0.0;
  Complex lambda;
  double measured = 0.0;
  /// Prediction at the midpoint l = k - eps xi / 2 + sigma - delta/2 of the
  /// pair (eps xi - k, k); T(eps) depends on k only through eps xi - 2k.
  double predicted = 0.0;
  double rel_err = 0.0;
  /// Same comparison with the prediction taken at l = k + sigma - delta/2.
  double predicted_fixed = 0.0;
  double rel_err_fixed = 0.0;
};

inline constexpr double kResidualFloor = 1e-14;

struct PerturbationReport {
  double k = 0.0, xi = 0.0, p = 0.0;
  std::array<Complex, 4> eigenvalues_T{};
  bool skipped = false;  ///< degenerate gap at this k
  std::vector<PerturbationRow> rows;
  /// Fitted s in |lambda(eps) - (1 - eps^2 predicted)| ~ eps^s over the
  /// ladder, with the midpoint prediction, and its rms log-log misfit.
  /// Points whose residual is below kResidualFloor carry no information
  /// beyond roundoff and are left out; with fewer than three usable points
  /// the order is NaN.
  double richardson_order = 0.0;
  double fit_residual = 0.0;
  int fit_points = 0;
  /// The same fit against the fixed-l prediction (order 3 asymptotically).
  double richardson_order_fixed = 0.0;
  double fit_residual_fixed = 0.0;
  int fit_points_fixed = 0;
};

/// Tracks lambda(eps) along the ladder by continuity (seeded by the
/// eigenvalue nearest 1 at the largest eps) and fits the residual order.
PerturbationReport perturbation_report(const WalkParams& params, double k, double xi,
                                       const std::vector<double>& eps_ladder);

}  // namespace qsw

#endif  // QSW_SPECTRAL_HPP
