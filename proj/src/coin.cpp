#include "qsw/coin.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qsw/error.hpp"

namespace qsw {

namespace {

double canonical_angle(double phi) {
  double out = std::fmod(phi, 2.0 * std::numbers::pi);
  if (out < 0.0) out += 2.0 * std::numbers::pi;
  if (out >= 2.0 * std::numbers::pi) out = 0.0;
  return out;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

Coin make_coin(Complex a, Complex b, Complex c, Complex d) {
  if (!finite(a) || !finite(b) || !finite(c) || !finite(d))
    throw Error(ErrorKind::NonUnitary, "coin entries must be finite");

  const double row0 = std::abs(abs2(a) + abs2(b) - 1.0);
  const double row1 = std::abs(abs2(c) + abs2(d) - 1.0);
  const double ortho = std::abs(a * std::conj(c) + b * std::conj(d));
  const double diag = std::abs(abs2(a) - abs2(d));
  const double off = std::abs(abs2(b) - abs2(c));
  const double worst = std::max({row0, row1, ortho, diag, off});
  if (worst > kUnitarityTol) {
    std::ostringstream msg;
    msg << "coin is not unitary (largest residual " << worst << ")";
    throw Error(ErrorKind::NonUnitary, msg.str());
  }

  Coin coin{a, b, c, d};
  coin.stay_prob = abs2(a);
  const double b2 = abs2(b);
  coin.var_ratio = b2 > 0.0 ? coin.stay_prob / b2 : std::numeric_limits<double>::infinity();
  coin.sigma = std::abs(a) > 0.0 ? canonical_angle(std::arg(a)) : 0.0;
  coin.delta = canonical_angle(std::arg(a * d - b * c));
  const double mod_a = std::abs(a);
  coin.degenerate = mod_a <= kUnitarityTol || mod_a >= 1.0 - kUnitarityTol;
  return coin;
}

Coin hadamard() {
  const double h = 1.0 / std::numbers::sqrt2;
  return make_coin(h, h, h, -h);
}

void Coin::require_nondegenerate(const char* context) const {
  if (degenerate)
    throw Error(ErrorKind::DegenerateCoin,
                std::string(context) + " requires 0 < |a| < 1 (got |a| = " +
                    std::to_string(std::abs(a)) + ")");
}

Projectors projectors(const Coin& coin) {
  return {Mat2{{{coin.a, coin.b}, {0.0, 0.0}}}, Mat2{{{0.0, 0.0}, {coin.c, coin.d}}}};
}

WalkParams::WalkParams(Coin coin, double p) : coin_(coin), p_(p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorKind::Config, "decoherence probability p must lie in [0, 1]");
}

}  // namespace qsw
