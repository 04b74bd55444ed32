// The 2x2 quantum coin and the scalars derived from it.

#ifndef QSW_COIN_HPP
#define QSW_COIN_HPP

#include <utility>

#include "qsw/linalg.hpp"

namespace qsw {

inline constexpr double kUnitarityTol = 1e-12;

/// Validated unitary coin C = [[a, b], [c, d]].
///
/// Two different quantities are called r in the literature on this walk:
/// the persistence probability |a|^2 and the variance ratio |a|^2/|b|^2.
/// They are kept apart here as stay_prob and var_ratio.
struct Coin {
  Complex a, b, c, d;
  double stay_prob = 0.0;  ///< |a|^2
  double var_ratio = 0.0;  ///< |a|^2 / |b|^2; +inf when b = 0
  double sigma = 0.0;      ///< arg a in [0, 2pi); 0 when a = 0
  double delta = 0.0;      ///< arg(ad - bc) in [0, 2pi)
  bool degenerate = false; ///< |a| in {0, 1}: usable for walking, not for limit laws

  Mat2 matrix() const { return {{{a, b}, {c, d}}}; }

  /// Throws Error{DegenerateCoin} unless 0 < |a| < 1.
  void require_nondegenerate(const char* context) const;
};

/// Validates unitarity (each residual <= 1e-12) and fills the derived fields.
Coin make_coin(Complex a, Complex b, Complex c, Complex d);

/// a = b = c = -d = 1/sqrt(2).
Coin hadamard();

struct Projectors {
  Mat2 P;  ///< [[a, b], [0, 0]] = |L><-|
  Mat2 Q;  ///< [[0, 0], [c, d]] = |R><+|
};

Projectors projectors(const Coin& coin);

/// Decoherence probability p and interference strength q = 1 - p.
class WalkParams {
 public:
  WalkParams(Coin coin, double p);

  const Coin& coin() const noexcept { return coin_; }
  double p() const noexcept { return p_; }
  double q() const noexcept { return 1.0 - p_; }

 private:
  Coin coin_;
  double p_;
};

}  // namespace qsw

#endif  // QSW_COIN_HPP
