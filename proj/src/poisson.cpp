#include "qsw/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qsw/error.hpp"
#include "qsw/fourier.hpp"
#include "qsw/spectral.hpp"
#include "qsw/trajectory.hpp"

namespace qsw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double coin_modulus(const Coin& coin, const char* context) {
  coin.require_nondegenerate(context);
  const double m = std::sqrt(coin.stay_prob);
  if (m >= 1.0 - 1e-9) {
    std::ostringstream msg;
    msg << context << ": |a| = " << m << " is too close to 1 (beta would vanish)";
    throw Error(ErrorKind::DegenerateCoin, msg.str());
  }
  return m;
}

Dispersion dispersion_at(double mod_a, double k) {
  Dispersion d;
  d.k = k;
  d.theta = std::acos(std::clamp(mod_a * std::cos(k), -1.0, 1.0));
  d.alpha = mod_a * std::sin(k) / std::sin(d.theta);
  d.beta = 0.5 * (1.0 - d.alpha * d.alpha);
  return d;
}

void require_real(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-10) {
    std::ostringstream msg;
    msg << what << " has imaginary part " << z.imag();
    throw Error(ErrorKind::ImaginaryResidual, msg.str());
  }
}

// Roots of z^2 - tr z + det.
std::array<Complex, 2> quadratic_roots(Complex tr, Complex det) {
  const Complex h = 0.5 * tr;
  const Complex disc = std::sqrt(h * h - det);
  return {h + disc, h - disc};
}

}  // namespace

Dispersion dispersion(const Coin& coin, double k) { return dispersion_at(coin_modulus(coin, "dispersion"), k); }

double prop3_char_fn(const Coin& coin, double gamma, double xi, int n_k) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw Error(ErrorKind::Config, "gamma must be finite and >= 0");
  if (n_k < 2) throw Error(ErrorKind::Config, "need at least 2 quadrature nodes");
  const double mod_a = coin_modulus(coin, "prop3_char_fn");
  Complex sum = 0.0;
  for (int j = 0; j < n_k; ++j) {
    const Dispersion d = dispersion_at(mod_a, kTwoPi * j / n_k);
    const double bg = d.beta * gamma;
    const Complex S = std::sqrt(Complex(bg * bg - d.alpha * d.alpha * xi * xi));
    Complex term;
    if (std::abs(S) < 1e-4) {
      // e^{-bg} (cosh S + bg sinh S / S), both even in S.
      const Complex S2 = S * S;
      term = std::exp(-bg) * ((1.0 + S2 / 2.0 + S2 * S2 / 24.0) + bg * (1.0 + S2 / 6.0 + S2 * S2 / 120.0));
    } else {
      // Split so that neither exponential can overflow: Re S <= bg.
      term = 0.5 * std::exp(S - bg) * (1.0 + bg / S) + 0.5 * std::exp(-S - bg) * (1.0 - bg / S);
    }
    sum += term;
  }
  const Complex mean = sum / static_cast<double>(n_k);
  require_real(mean, "prop3_char_fn");
  return mean.real();
}

double qw_limit_char_fn(const Coin& coin, double xi, int n_k) {
  if (n_k < 2) throw Error(ErrorKind::Config, "need at least 2 quadrature nodes");
  const double mod_a = coin_modulus(coin, "qw_limit_char_fn");
  Complex sum = 0.0;
  for (int j = 0; j < n_k; ++j) {
    const double alpha = dispersion_at(mod_a, kTwoPi * j / n_k).alpha;
    sum += 0.5 * (std::polar(1.0, xi * alpha) + std::polar(1.0, -xi * alpha));
  }
  const Complex mean = sum / static_cast<double>(n_k);
  require_real(mean, "qw_limit_char_fn");
  return mean.real();
}

ReducedGenerator reduced_generator(const Coin& coin, double k, double xi, double gamma) {
  const double mod_a = coin_modulus(coin, "reduced_generator");
  const auto [P, Q] = projectors(coin);
  const Mat2 U = std::polar(1.0, k) * P + std::polar(1.0, -k) * Q;
  const Mat4 T = kron(U, conjugate(U));

  std::array<Vec4, 2> basis{};
  const auto mu = quadratic_roots(U[0][0] + U[1][1], U[0][0] * U[1][1] - U[0][1] * U[1][0]);
  for (int s = 0; s < 2; ++s) {
    Vec2 phi{U[0][1], mu[s] - U[0][0]};  // U[0][1] = e^{ik} b != 0
    const double nrm = std::sqrt(abs2(phi[0]) + abs2(phi[1]));
    phi = {phi[0] / nrm, phi[1] / nrm};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) basis[s][2 * i + j] = phi[i] * std::conj(phi[j]);
  }

  const std::array<Complex, 4> D{Complex(0.0, -xi), Complex(-gamma, -xi), Complex(-gamma, xi), Complex(0.0, xi)};
  ReducedGenerator out;
  for (int s = 0; s < 2; ++s) {
    const Vec4 tv = T * basis[s];
    double res = 0.0;
    for (int i = 0; i < 4; ++i) res += abs2(tv[i] - basis[s][i]);
    out.basis_residual = std::max(out.basis_residual, std::sqrt(res));
    for (int r = 0; r < 2; ++r) {
      Complex m = 0.0;
      for (int i = 0; i < 4; ++i) m += std::conj(basis[r][i]) * D[i] * basis[s][i];
      out.M[r][s] = m;
    }
  }
  out.eigenvalues = quadratic_roots(out.M[0][0] + out.M[1][1], out.M[0][0] * out.M[1][1] - out.M[0][1] * out.M[1][0]);

  const Dispersion d = dispersion_at(mod_a, circle_point(coin, k));
  const double bg = d.beta * gamma;
  const Complex S = std::sqrt(Complex(bg * bg - d.alpha * d.alpha * xi * xi));
  out.predicted = {-bg + S, -bg - S};
  const auto& e = out.eigenvalues;
  const auto& f = out.predicted;
  out.discrepancy = std::min(std::max(std::abs(e[0] - f[0]), std::abs(e[1] - f[1])),
                             std::max(std::abs(e[0] - f[1]), std::abs(e[1] - f[0])));
  return out;
}

CompareRun simulate_poisson(const Coin& coin, double gamma, int s, const CompareOptions& opt) {
  if (s < 1) throw Error(ErrorKind::Config, "s must be at least 1");
  const double p = gamma / s;
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream msg;
    msg << "gamma / s = " << p << " is not a probability";
    throw Error(ErrorKind::Config, msg.str());
  }
  CompareRun run;
  run.s = s;
  run.p = p;
  if (p == 0.0) {
    // rho_0 = I/2 is the even mixture of the two chirality eigenstates.
    const Distribution l = pure_qw_reference(coin, s, {1.0, 0.0});
    const Distribution r = pure_qw_reference(coin, s, {0.0, 1.0});
    run.engine = Engine::Exact;
    run.dist.t = s;
    run.dist.probs.resize(l.probs.size());
    for (std::size_t i = 0; i < l.probs.size(); ++i) run.dist.probs[i] = 0.5 * (l.probs[i] + r.probs[i]);
    return run;
  }
  const WalkParams params(coin, p);
  run.engine = opt.engine == Engine::Auto ? (s <= opt.exact_cap ? Engine::Exact : Engine::MonteCarlo) : opt.engine;
  if (run.engine == Engine::Exact) {
    EvolveOptions eo;
    eo.threads = opt.threads;
    eo.max_steps = std::max(s, opt.exact_cap);
    run.dist = evolve(params, s, eo);
  } else {
    McConfig mc;
    mc.n_traj = opt.n_traj;
    mc.seed = opt.seed;
    mc.t = s;
    mc.threads = opt.threads;
    run.dist = mc_distribution(params, mc).dist;
  }
  return run;
}

std::vector<CompareRun> compare_sim(const Coin& coin, double gamma, const std::vector<int>& s_list,
                                    const std::vector<double>& xi_grid, const CompareOptions& opt) {
  std::vector<double> formula(xi_grid.size());
  for (std::size_t j = 0; j < xi_grid.size(); ++j) formula[j] = prop3_char_fn(coin, gamma, xi_grid[j], opt.n_k);

  std::vector<CompareRun> runs;
  for (int s : s_list) {
    CompareRun run = simulate_poisson(coin, gamma, s, opt);
    for (std::size_t j = 0; j < xi_grid.size(); ++j) {
      ComparePoint pt;
      pt.xi = xi_grid[j];
      pt.sim = char_fn_of(run.dist, xi_grid[j] / s);
      pt.formula = formula[j];
      pt.abs_diff = std::abs(pt.sim - pt.formula);
      run.sup_diff = std::max(run.sup_diff, pt.abs_diff);
      run.points.push_back(pt);
    }
    runs.push_back(std::move(run));
  }
  return runs;
}

Protrusion detect_protrusion(const Distribution& dist) {
  Protrusion out;
  const int s = dist.t;
  const std::size_t n = dist.probs.size();
  out.half_width = std::max(1, s / 100);
  const auto hw = static_cast<std::ptrdiff_t>(out.half_width);
  std::vector<double> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::ptrdiff_t j = -hw; j <= hw; ++j) {
      const auto idx = static_cast<std::ptrdiff_t>(i) + j;
      if (idx >= 0 && idx < static_cast<std::ptrdiff_t>(n)) sum += dist.probs[static_cast<std::size_t>(idx)];
    }
    smooth[i] = sum / static_cast<double>(2 * hw + 1);
  }

  std::ptrdiff_t peak_i = -1;
  bool have_trough = false;
  for (std::size_t i = 0; i < n; ++i) {
    const int x = dist.position(i);
    if (10 * std::abs(x) <= s) {
      if (peak_i < 0 || smooth[i] > out.peak) {
        out.peak = smooth[i];
        out.peak_x = x;
        peak_i = static_cast<std::ptrdiff_t>(i);
      }
    } else if (2 * std::abs(x) <= s) {
      if (!have_trough || smooth[i] < out.trough) {
        out.trough = smooth[i];
        out.trough_x = x;
        have_trough = true;
      }
    }
  }
  if (peak_i <= 0 || peak_i + 1 >= static_cast<std::ptrdiff_t>(n) || !have_trough) return out;
  const auto pi = static_cast<std::size_t>(peak_i);
  out.local_max = smooth[pi - 1] < out.peak && smooth[pi + 1] < out.peak;
  out.present = out.local_max && out.peak > (1.0 + kProtrusionMargin) * out.trough;
  return out;
}

}  // namespace qsw
