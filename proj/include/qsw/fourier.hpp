// Fourier-space generator of the vectorized channel and the characteristic
// function of X_t computed from it.
//
// Vectorization is row-major, rho -> (rho_LL, rho_LR, rho_RL, rho_RR), so
// A rho B corresponds to (A kron B^T) vec(rho).

#ifndef QSW_FOURIER_HPP
#define QSW_FOURIER_HPP

#include "qsw/coin.hpp"
#include "qsw/exact_evolution.hpp"
#include "qsw/linalg.hpp"

namespace qsw {

inline constexpr int kDefaultFourierNodes = 256;

/// H_p(k, l) = e^{-i(k+l)} P(x)P̄ + e^{i(k+l)} Q(x)Q̄
///           + q (e^{-i(k-l)} P(x)Q̄ + e^{i(k-l)} Q(x)P̄).
Mat4 hat_H(const WalkParams& params, double k, double l);

/// E[e^{i xi X_t}] from rho_0 = I/2 at the origin, via the uniform
/// trapezoid rule over n_k nodes of (<LL| + <RR|) H^t(xi - k, k) rho_0.
/// Exact once n_k > 2t, because the integrand is a trigonometric
/// polynomial of degree 2t in k.
Complex char_fn(const WalkParams& params, int t, double xi, int n_k = kDefaultFourierNodes);

/// sum_x mu(x) e^{i xi x}.
Complex char_fn_of(const Distribution& dist, double xi);

}  // namespace qsw

#endif  // QSW_FOURIER_HPP
