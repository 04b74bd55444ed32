#include "qsw/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qsw/error.hpp"

namespace qsw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double normal_pdf(double x, double var) {
  return std::exp(-0.5 * x * x / var) / std::sqrt(kTwoPi * var);
}

// Compensated mean of g(l) over n_l uniform nodes on [0, 2pi).
template <typename G>
double circle_mean(int n_l, G&& g) {
  if (n_l < 2) throw Error(ErrorKind::Config, "need at least 2 quadrature nodes");
  double sum = 0.0;
  double comp = 0.0;
  for (int j = 0; j < n_l; ++j) {
    const double y = g(kTwoPi * j / n_l) - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  return sum / n_l;
}

}  // namespace

double ArcsineMixture::sigma2(double l) const {
  return r * (1.0 + q * q - 2.0 * q * std::cos(2.0 * l)) / (1.0 - q * q);
}

ArcsineMixture make_mixture(double q, double r) {
  if (!(q > 0.0 && q < 1.0)) {
    std::ostringstream msg;
    msg << "the arcsine mixture needs 0 < q < 1 (got q = " << q << ")";
    throw Error(ErrorKind::EndpointRegime, msg.str());
  }
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::Config, "variance ratio must be positive and finite");
  ArcsineMixture m;
  m.q = q;
  m.r = r;
  m.A = r * (1.0 - q) / (1.0 + q);
  m.B = r * (1.0 + q) / (1.0 - q);
  return m;
}

ArcsineMixture mixture_for(const WalkParams& params) {
  params.coin().require_nondegenerate("limit law");
  return make_mixture(params.q(), params.coin().var_ratio);
}

std::pair<double, double> support(double q, double r) {
  const auto m = make_mixture(q, r);
  return {m.A, m.B};
}

double nu_density(double u, const ArcsineMixture& mix) {
  if (u < mix.A || u > mix.B) return 0.0;
  if (u == mix.A || u == mix.B) return std::numeric_limits<double>::infinity();
  return 1.0 / (std::numbers::pi * std::sqrt((u - mix.A) * (mix.B - u)));
}

double limit_variance(const ArcsineMixture& mix, int n_l) {
  return circle_mean(n_l, [&](double l) { return mix.sigma2(l); });
}

double f_star(double x, const ArcsineMixture& mix, int n_l) {
  return circle_mean(n_l, [&](double l) { return normal_pdf(x, mix.sigma2(l)); });
}

double f_star_gk(double x, const ArcsineMixture& mix) {
  using boost::math::quadrature::gauss_kronrod;
  const double width = mix.B - mix.A;
  auto integrand = [&](double th) {
    const double s = std::sin(th);
    return normal_pdf(x, mix.A + width * s * s);
  };
  double err = 0.0;
  const double val = gauss_kronrod<double, 15>::integrate(integrand, 0.0, 0.5 * std::numbers::pi, 15, 1e-12, &err);
  return val * 2.0 / std::numbers::pi;
}

double f_star_checked(double x, const ArcsineMixture& mix, int n_l) {
  const double trap = f_star(x, mix, n_l);
  const double gk = f_star_gk(x, mix);
  if (std::abs(trap - gk) > kQuadratureAgreementTol) {
    std::ostringstream msg;
    msg << "f_star(" << x << "): trapezoid " << trap << " vs Gauss-Kronrod " << gk;
    throw Error(ErrorKind::QuadratureDisagreement, msg.str());
  }
  return trap;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double F_star(double x, const ArcsineMixture& mix, int n_l) {
  if (x == 0.0) return 0.5;
  return circle_mean(n_l, [&](double l) { return normal_cdf(x / std::sqrt(mix.sigma2(l))); });
}

double limit_char_fn(double xi, const ArcsineMixture& mix, int n_l) {
  return circle_mean(n_l, [&](double l) { return std::exp(-0.5 * mix.sigma2(l) * xi * xi); });
}

std::vector<double> sample_limit(const ArcsineMixture& mix, Rng& rng, std::size_t n) {
  std::normal_distribution<double> normal;
  std::vector<double> out(n);
  for (auto& y : out) {
    const double l = kTwoPi * rng.uniform();
    y = std::sqrt(mix.sigma2(l)) * normal(rng.engine());
  }
  return out;
}

double StepDensity::operator()(double x) const {
  if (sites.empty()) return 0.0;
  // Plateaus tile (left(0), right(last)] contiguously.
  const double pos = (x * scale - (sites.front() - 1)) / 2.0;
  if (pos <= 0.0) return 0.0;
  const auto i = static_cast<std::size_t>(std::ceil(pos)) - 1;
  return i < heights.size() ? heights[i] : 0.0;
}

double StepDensity::integral() const {
  double s = 0.0;
  for (double h : heights) s += h * 2.0 / scale;
  return s;
}

StepDensity step_density(const Distribution& dist) {
  std::vector<std::pair<int, double>> pts;
  pts.reserve(dist.probs.size());
  for (std::size_t i = 0; i < dist.probs.size(); ++i) pts.emplace_back(dist.position(i), dist.probs[i]);
  return step_density(dist.t, pts);
}

StepDensity step_density(int t, const std::vector<std::pair<int, double>>& points) {
  if (t < 0) throw Error(ErrorKind::Config, "step index must be nonnegative");
  StepDensity f;
  f.t = t;
  f.scale = t == 0 ? 1.0 : std::sqrt(static_cast<double>(t));
  for (int x = -t; x <= t; x += 2) f.sites.push_back(x);
  f.heights.assign(f.sites.size(), 0.0);
  for (const auto& [x, mu] : points) {
    const bool on_lattice = ((x - t) % 2 == 0) && x >= -t && x <= t;
    if (!on_lattice) {
      if (std::abs(mu) > 1e-15) {
        std::ostringstream msg;
        msg << "mass " << mu << " at x = " << x << " off the t = " << t << " parity sublattice";
        throw Error(ErrorKind::ParityViolation, msg.str());
      }
      continue;
    }
    f.heights[static_cast<std::size_t>((x + t) / 2)] += 0.5 * f.scale * mu;
  }
  return f;
}

double ks_distance(const StepDensity& f, const ArcsineMixture& mix, int n_l) {
  if (f.sites.empty()) return 0.0;
  double worst = std::abs(F_star(f.left(0), mix, n_l));
  double cdf = 0.0;
  for (std::size_t i = 0; i < f.sites.size(); ++i) {
    cdf += f.heights[i] * 2.0 / f.scale;
    worst = std::max(worst, std::abs(cdf - F_star(f.right(i), mix, n_l)));
  }
  return worst;
}

double ks_distance(const Distribution& dist, const ArcsineMixture& mix, int n_l) {
  return ks_distance(step_density(dist), mix, n_l);
}

double ks_statistic(std::vector<double> samples, const ArcsineMixture& mix, int n_l) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = F_star(samples[i], mix, n_l);
    d = std::max({d, (i + 1) / n - F, F - i / n});
  }
  return d;
}

}  // namespace qsw
