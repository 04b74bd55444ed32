// The diffusive limit of X_t / sqrt(t): a normal variance mixture whose
// mixing law is an arcsine distribution on [A, B], and the tools for
// comparing finite-t distributions against it.

#ifndef QSW_LIMIT_LAW_HPP
#define QSW_LIMIT_LAW_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "qsw/coin.hpp"
#include "qsw/exact_evolution.hpp"
#include "qsw/trajectory.hpp"

namespace qsw {

inline constexpr int kDefaultLimitNodes = 512;
inline constexpr double kQuadratureAgreementTol = 1e-6;

/// nu(du) = 1 / (pi sqrt((u - A)(B - u))) du on (A, B), with
/// A = r(1-q)/(1+q) and B = r(1+q)/(1-q).
struct ArcsineMixture {
  double q = 0.0;
  double r = 0.0;
  double A = 0.0;
  double B = 0.0;

  /// sigma^2(l) = r (1 + q^2 - 2q cos 2l) / (1 - q^2); sweeps [A, B] twice per period.
  double sigma2(double l) const;
};

/// Throws Error{EndpointRegime} unless 0 < q < 1, Error{Config} unless r > 0.
ArcsineMixture make_mixture(double q, double r);

/// q = 1 - p, r = var_ratio. Throws Error{DegenerateCoin} for |a| in {0, 1}.
ArcsineMixture mixture_for(const WalkParams& params);

std::pair<double, double> support(double q, double r);

/// The arcsine density; +inf exactly at the endpoints, 0 outside [A, B].
double nu_density(double u, const ArcsineMixture& mix);

/// int u nu(du), by the trapezoid rule in l. Equals (A + B) / 2.
double limit_variance(const ArcsineMixture& mix, int n_l = kDefaultLimitNodes);

/// f_*(x) = int_0^{2pi} phi(x; sigma^2(l)) dl / 2pi, periodic trapezoid in l.
double f_star(double x, const ArcsineMixture& mix, int n_l = kDefaultLimitNodes);

/// The same density from the u-form int phi(x; u) nu(du) by adaptive
/// Gauss-Kronrod after u = A + (B - A) sin^2 theta removes the endpoint
/// singularities.
double f_star_gk(double x, const ArcsineMixture& mix);

/// f_star, verified against f_star_gk. Throws Error{QuadratureDisagreement}.
double f_star_checked(double x, const ArcsineMixture& mix, int n_l = kDefaultLimitNodes);

/// Standard normal CDF.
double normal_cdf(double z);

/// F_*(x) = int_0^{2pi} Phi(x / sigma(l)) dl / 2pi.
double F_star(double x, const ArcsineMixture& mix, int n_l = kDefaultLimitNodes);

/// int_0^{2pi} exp(-sigma^2(l) xi^2 / 2) dl / 2pi.
double limit_char_fn(double xi, const ArcsineMixture& mix, int n_l = kDefaultLimitNodes);

/// Y = sigma(l) Z with l ~ U[0, 2pi), Z ~ N(0, 1).
std::vector<double> sample_limit(const ArcsineMixture& mix, Rng& rng, std::size_t n);

/// f_t: height (sqrt(t)/2) mu_t(x) on ((x-1)/sqrt(t), (x+1)/sqrt(t)]. At
/// t = 0 the single unit mass becomes the plateau (-1, 1] of height 1/2.
struct StepDensity {
  int t = 0;
  double scale = 1.0;           ///< sqrt(t), or 1 at t = 0
  std::vector<int> sites;       ///< x, ascending, step 2
  std::vector<double> heights;  ///< plateau heights

  double left(std::size_t i) const { return (sites[i] - 1) / scale; }
  double right(std::size_t i) const { return (sites[i] + 1) / scale; }
  double operator()(double x) const;
  double integral() const;
};

StepDensity step_density(const Distribution& dist);

/// From raw (x, mu) pairs, e.g. read back from a CSV. Throws
/// Error{ParityViolation} for mass on x != t (mod 2) above 1e-15.
StepDensity step_density(int t, const std::vector<std::pair<int, double>>& points);

/// sup over plateau breakpoints of |F_t - F_*|.
double ks_distance(const StepDensity& f, const ArcsineMixture& mix, int n_l = kDefaultLimitNodes);
double ks_distance(const Distribution& dist, const ArcsineMixture& mix, int n_l = kDefaultLimitNodes);

/// One-sample KS statistic of draws against F_*.
double ks_statistic(std::vector<double> samples, const ArcsineMixture& mix, int n_l = kDefaultLimitNodes);

}  // namespace qsw

#endif  // QSW_LIMIT_LAW_HPP
