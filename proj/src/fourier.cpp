#include "qsw/fourier.hpp"

#include <cmath>
#include <numbers>

#include "qsw/error.hpp"

namespace qsw {

Mat4 hat_H(const WalkParams& params, double k, double l) {
  const auto [P, Q] = projectors(params.coin());
  const Mat2 Pb = conjugate(P);
  const Mat2 Qb = conjugate(Q);
  const Complex sum_phase = std::polar(1.0, k + l);
  const Complex diff_phase = std::polar(1.0, k - l);
  Mat4 h = std::conj(sum_phase) * kron(P, Pb) + sum_phase * kron(Q, Qb);
  if (params.q() != 0.0)
    h = h + Complex(params.q()) * (std::conj(diff_phase) * kron(P, Qb) + diff_phase * kron(Q, Pb));
  return h;
}

Complex char_fn(const WalkParams& params, int t, double xi, int n_k) {
  if (n_k < 2) throw Error(ErrorKind::Config, "char_fn needs at least two quadrature nodes");
  if (t < 0) throw Error(ErrorKind::Config, "step count must be non-negative");
  Complex acc = 0.0;
  for (int j = 0; j < n_k; ++j) {
    const double k = 2.0 * std::numbers::pi * j / n_k;
    const Mat4 h = hat_H(params, xi - k, k);
    Vec4 v{0.5, 0.0, 0.0, 0.5};
    for (int s = 0; s < t; ++s) v = h * v;
    acc += v[0] + v[3];
  }
  return acc / static_cast<double>(n_k);
}

Complex char_fn_of(const Distribution& dist, double xi) {
  Complex acc = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i)
    acc += dist.probs[i] * std::polar(1.0, xi * dist.position(i));
  return acc;
}

}  // namespace qsw
