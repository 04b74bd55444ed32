#include "qsw/linalg.hpp"

#include <cmath>
#include <utility>

#include "qsw/error.hpp"

namespace qsw {

Mat4 kron(const Mat2& x, const Mat2& y) {
  Mat4 out{};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out[2 * i + k][2 * j + l] = x[i][j] * y[k][l];
  return out;
}

Complex det(const Mat4& m) {
  Mat4 a = m;
  Complex d = 1.0;
  for (std::size_t col = 0; col < 4; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == Complex(0.0)) return 0.0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      d = -d;
    }
    d *= a[col][col];
    for (std::size_t r = col + 1; r < 4; ++r) {
      const Complex f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < 4; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return d;
}

std::array<double, 2> hermitian_eigenvalues(const Mat2& m) {
  const double a = m[0][0].real();
  const double d = m[1][1].real();
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), std::abs(m[0][1]));
  return {mean - rad, mean + rad};
}

namespace {

constexpr std::size_t kN = 4;
constexpr double kTol = 1e-13;
constexpr int kMaxSweeps = 500;

void to_hessenberg(Mat4& h) {
  for (std::size_t j = 0; j + 2 < kN; ++j) {
    Vec4 v{};
    double norm2 = 0.0;
    for (std::size_t i = j + 1; i < kN; ++i) {
      v[i] = h[i][j];
      norm2 += abs2(v[i]);
    }
    const double norm = std::sqrt(norm2);
    if (norm == 0.0) continue;
    const Complex x0 = v[j + 1];
    const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
    v[j + 1] += phase * norm;
    double vv = 0.0;
    for (std::size_t i = j + 1; i < kN; ++i) vv += abs2(v[i]);
    if (vv == 0.0) continue;
    // h <- (I - 2 v v*/vv) h
    for (std::size_t c = 0; c < kN; ++c) {
      Complex s = 0.0;
      for (std::size_t i = j + 1; i < kN; ++i) s += std::conj(v[i]) * h[i][c];
      s *= 2.0 / vv;
      for (std::size_t i = j + 1; i < kN; ++i) h[i][c] -= v[i] * s;
    }
    // h <- h (I - 2 v v*/vv)
    for (std::size_t r = 0; r < kN; ++r) {
      Complex s = 0.0;
      for (std::size_t i = j + 1; i < kN; ++i) s += h[r][i] * v[i];
      s *= 2.0 / vv;
      for (std::size_t i = j + 1; i < kN; ++i) h[r][i] -= s * std::conj(v[i]);
    }
    for (std::size_t i = j + 2; i < kN; ++i) h[i][j] = 0.0;
  }
}

// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
Complex wilkinson_shift(const Mat4& h, std::size_t hi) {
  const Complex a = h[hi - 1][hi - 1];
  const Complex b = h[hi - 1][hi];
  const Complex c = h[hi][hi - 1];
  const Complex d = h[hi][hi];
  const Complex half = 0.5 * (a - d);
  const Complex root = std::sqrt(half * half + b * c);
  const Complex mu1 = 0.5 * (a + d) + root;
  const Complex mu2 = 0.5 * (a + d) - root;
  return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

void qr_sweep(Mat4& h, std::size_t lo, std::size_t hi, Complex shift) {
  struct Rot {
    double c;
    Complex s;
  };
  std::array<Rot, kN> rots{};
  for (std::size_t i = lo; i <= hi; ++i) h[i][i] -= shift;
  for (std::size_t k = lo; k < hi; ++k) {
    const Complex f = h[k][k];
    const Complex g = h[k + 1][k];
    const double r = std::hypot(std::abs(f), std::abs(g));
    Rot rot{1.0, 0.0};
    if (r > 0.0) {
      if (std::abs(f) == 0.0) {
        rot = {0.0, 1.0};
      } else {
        rot.c = std::abs(f) / r;
        rot.s = (f / std::abs(f)) * std::conj(g) / r;
      }
    }
    rots[k] = rot;
    for (std::size_t j = 0; j < kN; ++j) {
      const Complex x = h[k][j];
      const Complex y = h[k + 1][j];
      h[k][j] = rot.c * x + rot.s * y;
      h[k + 1][j] = -std::conj(rot.s) * x + rot.c * y;
    }
  }
  for (std::size_t k = lo; k < hi; ++k) {
    const Rot rot = rots[k];
    for (std::size_t i = 0; i < kN; ++i) {
      const Complex x = h[i][k];
      const Complex y = h[i][k + 1];
      h[i][k] = x * rot.c + y * std::conj(rot.s);
      h[i][k + 1] = -x * rot.s + y * rot.c;
    }
  }
  for (std::size_t i = lo; i <= hi; ++i) h[i][i] += shift;
}

}  // namespace

std::array<Complex, 4> eig4(const Mat4& m) {
  for (const auto& row : m)
    for (const auto& e : row)
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
        throw Error(ErrorKind::NonConvergence, "eig4: non-finite matrix entry");

  Mat4 h = m;
  to_hessenberg(h);
  std::array<Complex, 4> ev{};
  std::size_t hi = kN - 1;
  int since_deflation = 0;
  int sweeps = 0;
  while (true) {
    std::size_t lo = hi;
    while (lo > 0) {
      const double scale = std::abs(h[lo][lo]) + std::abs(h[lo - 1][lo - 1]);
      if (std::abs(h[lo][lo - 1]) <= kTol * (scale > 0.0 ? scale : 1.0)) {
        h[lo][lo - 1] = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      ev[hi] = h[hi][hi];
      if (hi == 0) break;
      --hi;
      since_deflation = 0;
      continue;
    }
    if (++sweeps > kMaxSweeps)
      throw Error(ErrorKind::NonConvergence, "eig4: QR iteration did not converge in 500 sweeps");
    Complex shift = wilkinson_shift(h, hi);
    if (since_deflation > 0 && since_deflation % 10 == 0) {
      // exceptional shift breaks cycles of the Wilkinson shift
      shift = h[hi][hi] + Complex(std::abs(h[hi][hi - 1].real()), std::abs(h[hi][hi - 1].imag())) * 1.5;
    }
    qr_sweep(h, lo, hi, shift);
    ++since_deflation;
  }
  return ev;
}

}  // namespace qsw
