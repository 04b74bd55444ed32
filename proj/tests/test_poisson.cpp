#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qsw/error.hpp"
#include "qsw/exact_evolution.hpp"
#include "qsw/fourier.hpp"
#include "qsw/poisson.hpp"
#include "qsw/spectral.hpp"

using namespace qsw;

namespace {

const double kPi = std::numbers::pi;
const Coin kGeneric = oracle::generic_coin(0.9, 0.2, 1.3, -0.6);

// exp(m) by scaling and squaring with a 30-term Taylor series.
Mat2 expm(const Mat2& m) {
  double norm = 0.0;
  for (auto& row : m)
    for (auto& e : row) norm = std::max(norm, std::abs(e));
  int squarings = 0;
  while (norm > 0.5) {
    norm /= 2;
    ++squarings;
  }
  const Mat2 a = Complex(std::ldexp(1.0, -squarings)) * m;
  Mat2 term = identity<2>();
  Mat2 sum = identity<2>();
  for (int n = 1; n <= 30; ++n) {
    term = Complex(1.0 / n) * (term * a);
    sum = sum + term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

// The limit characteristic function as the k-average of
// (1/2) 1^T exp(M(k)) 1 with M = [[-i alpha xi - beta gamma, beta gamma],
// [beta gamma, i alpha xi - beta gamma]]: the matrix-exponential route to
// the closed form.
double prop3_by_expm(const Coin& coin, double gamma, double xi, int n_k) {
  double sum = 0.0;
  for (int j = 0; j < n_k; ++j) {
    const Dispersion d = dispersion(coin, 2 * kPi * j / n_k);
    const double bg = d.beta * gamma;
    Mat2 M{};
    M[0] = {Complex(-bg, -d.alpha * xi), bg};
    M[1] = {bg, Complex(-bg, d.alpha * xi)};
    const Mat2 e = expm(M);
    sum += 0.5 * (e[0][0] + e[0][1] + e[1][0] + e[1][1]).real();
  }
  return sum / n_k;
}

}  // namespace

TEST_CASE("dispersion at special momenta") {
  const Coin h = hadamard();
  const double a = std::sqrt(0.5);
  auto d = dispersion(h, kPi / 2);
  CHECK(d.theta == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(d.alpha == doctest::Approx(a).epsilon(1e-15));
  CHECK(d.beta == doctest::Approx(0.25).epsilon(1e-15));
  d = dispersion(h, 0.0);
  CHECK(d.alpha == 0.0);
  CHECK(d.beta == 0.5);
  d = dispersion(h, kPi / 4);
  CHECK(d.theta == doctest::Approx(kPi / 3).epsilon(1e-14));
  CHECK(d.alpha == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("dispersion ranges") {
  for (const Coin& c : {hadamard(), kGeneric}) {
    const double ma = std::sqrt(c.stay_prob);
    for (int j = 0; j < 200; ++j) {
      const auto d = dispersion(c, 2 * kPi * j / 200);
      CHECK(std::abs(std::cos(d.theta) - ma * std::cos(d.k)) <= 1e-14);
      CHECK(std::abs(d.alpha) <= ma + 1e-14);
      CHECK(d.beta > 0.0);
      CHECK(d.beta <= 0.5);
    }
  }
  CHECK_THROWS_AS(dispersion(make_coin(1.0, 0.0, 0.0, 1.0), 0.3), Error);
  const double e = 1e-10;  // |a| within 1e-9 of 1
  CHECK_THROWS_AS(dispersion(make_coin(std::sqrt(1 - e), std::sqrt(e), -std::sqrt(e), std::sqrt(1 - e)), 0.3), Error);
}

TEST_CASE("closed form agrees with the matrix-exponential route") {
  for (const Coin& c : {hadamard(), kGeneric})
    for (double gamma : {0.0, 0.3, 1.0, 5.0})
      for (double xi : {-7.0, -1.0, 0.5, 3.0, 10.0})
        CHECK(std::abs(prop3_char_fn(c, gamma, xi, 256) - prop3_by_expm(c, gamma, xi, 256)) <= 1e-12);
}

TEST_CASE("closed-form characteristic function properties") {
  const Coin h = hadamard();
  for (double gamma : {0.0, 0.5, 1.0, 10.0}) CHECK(std::abs(prop3_char_fn(h, gamma, 0.0) - 1.0) <= 1e-14);
  for (double xi : {0.0, 0.7, 2.0, 9.5}) CHECK(std::abs(prop3_char_fn(kGeneric, 0.0, xi) - qw_limit_char_fn(kGeneric, xi)) <= 1e-12);
  for (const Coin& c : {h, kGeneric})
    for (double gamma : {0.0, 1.0, 4.0})
      for (double xi = -10.0; xi <= 10.0; xi += 0.5) {
        const double v = prop3_char_fn(c, gamma, xi);
        CHECK(std::abs(v) <= 1.0 + 1e-10);
        CHECK(std::abs(v - prop3_char_fn(c, gamma, -xi)) <= 1e-12);
        CHECK(std::abs(v - prop3_char_fn(c, gamma, xi, 1024)) <= 1e-9);
      }
  for (double xi = -2.0; xi <= 2.0; xi += 0.25) CHECK(std::abs(prop3_char_fn(h, 100.0, xi) - 1.0) <= 0.05);
  CHECK_THROWS_AS(prop3_char_fn(h, -1.0, 1.0), Error);
  CHECK_THROWS_AS(prop3_char_fn(h, 1.0, 1.0, 1), Error);
}

TEST_CASE("reduced first-order generator has eigenvalues -beta gamma +- S") {
  for (const Coin& c : {hadamard(), kGeneric})
    for (double k : {0.2, 1.0, 2.5, 4.0})
      for (double xi : {0.0, 0.5, 3.0})
        for (double gamma : {0.0, 0.7, 2.0}) {
          const auto g = reduced_generator(c, k, xi, gamma);
          CHECK(g.basis_residual <= 1e-12);
          CHECK(g.discrepancy <= 1e-12);
        }
}

TEST_CASE("eigenvalues of hat_H near 1 split at first order under p = gamma eps") {
  // (lambda(eps) - 1) / eps -> lambda_+- with eps = 1/s, p = gamma eps and
  // hat_H(eps xi - k, k); the error is O(eps).
  for (const Coin& c : {hadamard(), kGeneric}) {
    const double k = 0.8, xi = 2.0, gamma = 1.0;
    const auto g = reduced_generator(c, k, xi, gamma);
    double prev_err = 1.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const auto ev = eig4(hat_H(WalkParams(c, gamma * eps), eps * xi - k, k));
      std::array<Complex, 4> scaled{};
      for (int i = 0; i < 4; ++i) scaled[i] = (ev[i] - 1.0) / eps;
      double err = 0.0;
      for (Complex want : g.predicted) {
        double best = 1e300;
        for (Complex z : scaled) best = std::min(best, std::abs(z - want));
        err = std::max(err, best);
      }
      CHECK(err < prev_err);
      prev_err = err;
    }
    CHECK(prev_err <= 1e-2);
  }
}

TEST_CASE("simulation under p = gamma / s approaches the closed form") {
  const Coin h = hadamard();
  CompareOptions opt;
  opt.engine = Engine::Exact;
  std::vector<double> xi;
  for (double v = -10.0; v <= 10.0; v += 1.0) xi.push_back(v);
  const auto runs = compare_sim(h, 1.0, {50, 100, 200}, xi, opt);
  REQUIRE(runs.size() == 3);
  CHECK(runs[0].p == 1.0 / 50);
  CHECK(runs[1].sup_diff < runs[0].sup_diff);
  CHECK(runs[2].sup_diff < runs[1].sup_diff);
  CHECK(runs[2].sup_diff <= 0.05);
  for (const auto& run : runs) {
    CHECK(run.engine == Engine::Exact);
    CHECK(run.points.size() == xi.size());
    for (const auto& pt : run.points) CHECK(std::abs(pt.sim - pt.formula) == pt.abs_diff);
  }
}

TEST_CASE("gamma = 0 compares the pure quantum walk") {
  const Coin h = hadamard();
  CompareOptions opt;
  opt.engine = Engine::MonteCarlo;  // ignored: nothing random remains
  const auto run = simulate_poisson(h, 0.0, 60, opt);
  CHECK(run.engine == Engine::Exact);
  const Distribution exact = evolve(WalkParams(h, 0.0), 60);
  for (std::size_t i = 0; i < exact.probs.size(); ++i) CHECK(std::abs(run.dist.probs[i] - exact.probs[i]) <= 1e-12);
  std::vector<double> xi{-5.0, 1.0, 4.0};
  double prev = 1.0;
  for (int s : {100, 400, 1600}) {
    const auto r = compare_sim(h, 0.0, {s}, xi, opt).front();
    CHECK(r.sup_diff < prev);
    prev = r.sup_diff;
  }
}

TEST_CASE("engine selection and configuration errors") {
  const Coin h = hadamard();
  CompareOptions opt;
  opt.exact_cap = 40;
  opt.n_traj = 256;
  CHECK(simulate_poisson(h, 1.0, 40, opt).engine == Engine::Exact);
  CHECK(simulate_poisson(h, 1.0, 41, opt).engine == Engine::MonteCarlo);
  CHECK_THROWS_AS(simulate_poisson(h, 5.0, 4, opt), Error);  // p > 1
  CHECK_THROWS_AS(simulate_poisson(h, 1.0, 0, opt), Error);
}

TEST_CASE("protrusion detector") {
  SUBCASE("central bump over a rising profile") {
    Distribution d{100, std::vector<double>(101)};
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
      const double x = d.position(i) / 100.0;
      d.probs[i] = 1.0 + 4.0 * x * x + 2.0 * std::exp(-x * x / 0.001);
    }
    const auto p = detect_protrusion(d);
    CHECK(p.present);
    CHECK(p.peak_x == 0);
    CHECK(std::abs(p.trough_x) > 10);
  }
  SUBCASE("no bump: the window maximum is at its edge") {
    Distribution d{100, std::vector<double>(101)};
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
      const double x = d.position(i) / 100.0;
      d.probs[i] = 1.0 + 4.0 * x * x;
    }
    const auto p = detect_protrusion(d);
    CHECK_FALSE(p.local_max);
    CHECK_FALSE(p.present);
  }
  SUBCASE("pure quantum walk: ripple but no central protrusion") {
    CompareOptions opt;
    const auto run = simulate_poisson(hadamard(), 0.0, 400, opt);
    CHECK_FALSE(detect_protrusion(run.dist).present);
  }
  SUBCASE("p = gamma / s with gamma = 1 grows one") {
    CompareOptions opt;
    opt.engine = Engine::Exact;
    const auto run = simulate_poisson(hadamard(), 1.0, 200, opt);
    const auto p = detect_protrusion(run.dist);
    CHECK(p.present);
    CHECK(std::abs(p.peak_x) <= 4);
  }
  SUBCASE("a single-site spike is smoothed, not mistaken for a bump") {
    Distribution d{100, std::vector<double>(101, 1.0 / 101)};
    d.probs[50] *= 1.05;
    CHECK_FALSE(detect_protrusion(d).present);
  }
}
