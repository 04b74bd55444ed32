// Small fixed-size complex linear algebra used throughout the walk code.
//
// Matrices are row-major std::array values; everything here is a pure value
// type so it can be shared freely between threads.

#ifndef QSW_LINALG_HPP
#define QSW_LINALG_HPP

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>

namespace qsw {

using Complex = std::complex<double>;

template <std::size_t N>
using Mat = std::array<std::array<Complex, N>, N>;

template <std::size_t N>
using Vec = std::array<Complex, N>;

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;
using Vec2 = Vec<2>;
using Vec4 = Vec<4>;

inline constexpr double abs2(Complex c) { return c.real() * c.real() + c.imag() * c.imag(); }

template <std::size_t N>
constexpr Mat<N> zeros() {
  return Mat<N>{};
}

template <std::size_t N>
constexpr Mat<N> identity() {
  Mat<N> m{};
  for (std::size_t i = 0; i < N; ++i) m[i][i] = 1.0;
  return m;
}

template <std::size_t N>
Mat<N> operator*(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> out{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      const Complex xik = x[i][k];
      for (std::size_t j = 0; j < N; ++j) out[i][j] += xik * y[k][j];
    }
  return out;
}

template <std::size_t N>
Vec<N> operator*(const Mat<N>& x, const Vec<N>& v) {
  Vec<N> out{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out[i] += x[i][j] * v[j];
  return out;
}

template <std::size_t N>
Mat<N> operator+(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> out = x;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out[i][j] += y[i][j];
  return out;
}

template <std::size_t N>
Mat<N> operator-(const Mat<N>& x, const Mat<N>& y) {
  Mat<N> out = x;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out[i][j] -= y[i][j];
  return out;
}

template <std::size_t N>
Mat<N> operator*(Complex s, const Mat<N>& x) {
  Mat<N> out = x;
  for (auto& row : out)
    for (auto& e : row) e *= s;
  return out;
}

/// Conjugate transpose.
template <std::size_t N>
Mat<N> adjoint(const Mat<N>& x) {
  Mat<N> out{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out[i][j] = std::conj(x[j][i]);
  return out;
}

/// Entrywise complex conjugate (the bar in P ⊗ P̄).
template <std::size_t N>
Mat<N> conjugate(const Mat<N>& x) {
  Mat<N> out{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out[i][j] = std::conj(x[i][j]);
  return out;
}

template <std::size_t N>
Complex trace(const Mat<N>& x) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += x[i][i];
  return s;
}

/// Largest entrywise modulus of x - y.
template <std::size_t N>
double max_abs_diff(const Mat<N>& x, const Mat<N>& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) m = std::max(m, std::abs(x[i][j] - y[i][j]));
  return m;
}

/// Kronecker product of two 2x2 matrices; row index (i,k) -> 2i+k, so the
/// basis order of the result is (LL, LR, RL, RR).
Mat4 kron(const Mat2& x, const Mat2& y);

Complex det(const Mat4& m);

/// Eigenvalues of a Hermitian 2x2 block, ascending.
std::array<double, 2> hermitian_eigenvalues(const Mat2& m);

/// All four eigenvalues of a general complex 4x4 matrix.
///
/// Householder reduction to Hessenberg form followed by single-shift complex
/// QR sweeps (Wilkinson shift, exceptional shifts on stagnation) with
/// deflation. Throws Error{NonConvergence} after 500 sweeps without
/// reaching the 1e-13 subdiagonal tolerance.
std::array<Complex, 4> eig4(const Mat4& m);

}  // namespace qsw

#endif  // QSW_LINALG_HPP
