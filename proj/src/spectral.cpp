#include "qsw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qsw/error.hpp"
#include "qsw/fourier.hpp"

namespace qsw {

Mat4 T0(const WalkParams& params, double k) {
  const auto [P, Q] = projectors(params.coin());
  const Mat2 Pb = conjugate(P);
  const Mat2 Qb = conjugate(Q);
  Mat4 t = kron(P, Pb) + kron(Q, Qb);
  if (params.q() != 0.0) {
    const Complex ph = std::polar(1.0, 2.0 * k);
    t = t + Complex(params.q()) * (ph * kron(P, Qb) + std::conj(ph) * kron(Q, Pb));
  }
  return t;
}

Mat4 chirality_sign() {
  Mat4 d{};
  d[0][0] = -1.0;
  d[1][1] = -1.0;
  d[2][2] = 1.0;
  d[3][3] = 1.0;
  return d;
}

double circle_point(const Coin& coin, double k) { return k + coin.sigma - 0.5 * coin.delta; }

UnperturbedSpectrum check_unperturbed(const WalkParams& params, double k) {
  const Mat4 t = T0(params, k);
  UnperturbedSpectrum out;
  out.k = k;
  out.eigenvalues = eig4(t);

  const Vec4 v{1.0, 0.0, 0.0, 1.0};
  const Vec4 tv = t * v;
  double res = 0.0;
  for (int i = 0; i < 4; ++i) res += abs2(tv[i] - v[i]);
  out.eigvec_residual = std::sqrt(res);

  std::array<Complex, 4> sorted = out.eigenvalues;
  std::sort(sorted.begin(), sorted.end(),
            [](Complex x, Complex y) { return std::abs(x - 1.0) < std::abs(y - 1.0); });
  out.gap = std::abs(sorted[1] - 1.0);
  out.small_gap = out.gap < 1e-6;
  for (int i = 1; i < 4; ++i) out.max_other_modulus = std::max(out.max_other_modulus, std::abs(sorted[i]));
  for (auto e : out.eigenvalues) out.max_modulus_defect = std::max(out.max_modulus_defect, std::abs(std::abs(e) - 1.0));

  auto violation = [&](const std::string& what, Complex lambda) {
    std::ostringstream msg;
    msg << what << " at k = " << k << ", p = " << params.p() << " (eigenvalue " << lambda << ")";
    throw Error(ErrorKind::LemmaViolation, msg.str());
  };
  if (std::abs(sorted[0] - 1.0) > 1e-10) violation("1 is not an eigenvalue of T", sorted[0]);
  if (out.eigvec_residual > 1e-12) violation("(1,0,0,1) is not an eigenvector of T", sorted[0]);
  if (params.p() > 0.0) {
    if (out.gap <= 1e-8) violation("eigenvalue 1 is not simple", sorted[1]);
    for (int i = 1; i < 4; ++i)
      if (std::abs(sorted[i]) >= 1.0) violation("eigenvalue outside the open unit disc", sorted[i]);
  } else {
    for (auto e : out.eigenvalues)
      if (std::abs(std::abs(e) - 1.0) > 1e-10) violation("eigenvalue off the unit circle", e);
  }
  return out;
}

double predicted_coeff(const WalkParams& params, double l, double xi) {
  params.coin().require_nondegenerate("predicted_coeff");
  if (!(params.p() > 0.0)) throw Error(ErrorKind::EndpointRegime, "predicted_coeff requires p > 0");
  const double q = params.q();
  return 0.5 * params.coin().var_ratio * (1.0 + q * q - 2.0 * q * std::cos(2.0 * l)) / (1.0 - q * q) * xi * xi;
}

Complex split_eigenvalue(const WalkParams& params, double k, double xi, double eps) {
  const auto ev = eig4(hat_H(params, eps * xi - k, k));
  std::array<double, 4> dist{};
  for (int i = 0; i < 4; ++i) dist[i] = std::abs(ev[i] - 1.0);
  const int best = static_cast<int>(std::min_element(dist.begin(), dist.end()) - dist.begin());
  for (int i = 0; i < 4; ++i)
    if (i != best && std::abs(dist[i] - dist[best]) <= 1e-12 && std::abs(ev[i] - ev[best]) > 1e-12)
      throw Error(ErrorKind::EigenvalueAmbiguity, "two eigenvalues are equidistant from 1");
  return ev[best];
}

double measured_coeff(const WalkParams& params, double k, double xi, double eps) {
  return (1.0 - split_eigenvalue(params, k, xi, eps).real()) / (eps * eps);
}

std::vector<double> default_eps_ladder(int count) {
  std::vector<double> out;
  double e = 1e-2;
  for (int i = 0; i < count; ++i, e *= 0.5) out.push_back(e);
  return out;
}

namespace {

// Least-squares slope of log residual against log eps.
struct LogFit {
  std::vector<double> x, y;

  void add(double eps, double residual) {
    if (residual < kResidualFloor) return;
    x.push_back(std::log(eps));
    y.push_back(std::log(residual));
  }

  void solve(double& slope, double& rms, int& count) const {
    const std::size_t n = x.size();
    count = static_cast<int>(n);
    if (n < 3) {
      slope = rms = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
    }
    slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - (my + slope * (x[i] - mx));
      ss += r * r;
    }
    rms = std::sqrt(ss / n);
  }
};

}  // namespace

PerturbationReport perturbation_report(const WalkParams& params, double k, double xi,
                                       const std::vector<double>& eps_ladder) {
  PerturbationReport rep;
  rep.k = k;
  rep.xi = xi;
  rep.p = params.p();
  const UnperturbedSpectrum spec = check_unperturbed(params, k);
  rep.eigenvalues_T = spec.eigenvalues;
  rep.skipped = spec.small_gap;
  if (rep.skipped || eps_ladder.empty()) return rep;

  std::vector<double> ladder = eps_ladder;
  std::sort(ladder.begin(), ladder.end(), std::greater<>());
  const Coin& coin = params.coin();
  const double fixed = predicted_coeff(params, circle_point(coin, k), xi);

  Complex prev = split_eigenvalue(params, k, xi, ladder.front());
  LogFit mid;
  LogFit fixed_fit;
  for (double eps : ladder) {
    const auto ev = eig4(hat_H(params, eps * xi - k, k));
    Complex lambda = ev[0];
    for (auto e : ev)
      if (std::abs(e - prev) < std::abs(lambda - prev)) lambda = e;
    prev = lambda;

    PerturbationRow row;
    row.eps = eps;
    row.lambda = lambda;
    row.measured = (1.0 - lambda.real()) / (eps * eps);
    row.predicted = predicted_coeff(params, circle_point(coin, k - 0.5 * eps * xi), xi);
    row.predicted_fixed = fixed;
    auto rel = [&](double pred) {
      return pred != 0.0 ? std::abs(row.measured - pred) / std::abs(pred) : std::abs(row.measured);
    };
    row.rel_err = rel(row.predicted);
    row.rel_err_fixed = rel(fixed);
    rep.rows.push_back(row);

    mid.add(eps, std::abs(lambda - (1.0 - eps * eps * row.predicted)));
    fixed_fit.add(eps, std::abs(lambda - (1.0 - eps * eps * fixed)));
  }
  mid.solve(rep.richardson_order, rep.fit_residual, rep.fit_points);
  fixed_fit.solve(rep.richardson_order_fixed, rep.fit_residual_fixed, rep.fit_points_fixed);
  return rep;
}

}  // namespace qsw
