#include "qsw/exact_evolution.hpp"

#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "qsw/error.hpp"

namespace qsw {

double Distribution::at(int x) const {
  const int offset = x + t;
  if (offset < 0 || offset > 2 * t || offset % 2 != 0) return 0.0;
  return probs[static_cast<std::size_t>(offset / 2)];
}

double Distribution::total() const {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : probs) {  // Neumaier
    const double next = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - next) + v : (v - next) + sum;
    sum = next;
  }
  return sum + comp;
}

DensityGrid::DensityGrid(int t)
    : t_(t), n_(static_cast<std::size_t>(t) + 1), blocks_(n_ * n_, zeros<2>()) {
  if (t < 0) throw Error(ErrorKind::Config, "step count must be non-negative");
}

Mat2 DensityGrid::block(int x, int y) const {
  const int ox = x + t_;
  const int oy = y + t_;
  if (ox < 0 || oy < 0 || ox > 2 * t_ || oy > 2 * t_ || ox % 2 != 0 || oy % 2 != 0)
    return zeros<2>();
  return at(static_cast<std::size_t>(ox / 2), static_cast<std::size_t>(oy / 2));
}

DensityGrid initial_grid() { return initial_grid(Mat2{{{0.5, 0.0}, {0.0, 0.5}}}); }

DensityGrid initial_grid(const Mat2& block) {
  DensityGrid g(0);
  g.at(0, 0) = block;
  return g;
}

DensityGrid pure_grid(int t, std::span<const Vec2> amplitudes) {
  DensityGrid g(t);
  if (amplitudes.size() != g.size())
    throw Error(ErrorKind::Config, "pure_grid: amplitude count must be t + 1");
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      for (std::size_t u = 0; u < 2; ++u)
        for (std::size_t v = 0; v < 2; ++v)
          g.at(i, j)[u][v] = amplitudes[i][u] * std::conj(amplitudes[j][v]);
  return g;
}

namespace {

// <u| M |v> with <-| = (a, b), <+| = (c, d) and |v> = conj of the row.
inline Complex sandwich(const Vec2& u, const Mat2& m, const Vec2& v) {
  const Complex mv0 = m[0][0] * std::conj(v[0]) + m[0][1] * std::conj(v[1]);
  const Complex mv1 = m[1][0] * std::conj(v[0]) + m[1][1] * std::conj(v[1]);
  return u[0] * mv0 + u[1] * mv1;
}

// One step of
//   (L rho)(x,y) = P rho(x+1,y+1) P* + Q rho(x-1,y-1) Q*
//                + w [P rho(x+1,y-1) Q* + Q rho(x-1,y+1) P*].
// P = |L><-| and Q = |R><+|, so every term is a scalar sandwich placed in one
// entry of the output block. Output position X = -(t+1) + 2I reads the old
// index I at X+1 and I-1 at X-1.
DensityGrid step(const DensityGrid& grid, const Coin& coin, double w, int threads) {
  const Vec2 minus{coin.a, coin.b};
  const Vec2 plus{coin.c, coin.d};
  const std::size_t n = grid.size();
  DensityGrid out(grid.t() + 1);
  const std::size_t m = out.size();
  detail::parallel_for(m, threads, [&](std::size_t I) {
    for (std::size_t J = 0; J < m; ++J) {
      Mat2& blk = out.at(I, J);
      if (I < n && J < n) blk[0][0] = sandwich(minus, grid.at(I, J), minus);
      if (I >= 1 && J >= 1) blk[1][1] = sandwich(plus, grid.at(I - 1, J - 1), plus);
      if (w != 0.0) {
        if (I < n && J >= 1) blk[0][1] = w * sandwich(minus, grid.at(I, J - 1), plus);
        if (I >= 1 && J < n) blk[1][0] = w * sandwich(plus, grid.at(I - 1, J), minus);
      }
    }
  });
  return out;
}

}  // namespace

DensityGrid apply_rw(const DensityGrid& grid, const Coin& coin, const StepOptions& opt) {
  return step(grid, coin, 0.0, opt.threads);
}

DensityGrid apply_qw(const DensityGrid& grid, const Coin& coin, const StepOptions& opt) {
  return step(grid, coin, 1.0, opt.threads);
}

DensityGrid apply_interpolated(const DensityGrid& grid, const WalkParams& params,
                               const StepOptions& opt) {
  return step(grid, params.coin(), params.q(), opt.threads);
}

namespace {

double diagonal_trace(const DensityGrid& grid, std::vector<double>* probs) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = trace(grid.at(i, i)).real();
    if (probs) probs->push_back(v);
    sum += v;
  }
  return sum;
}

}  // namespace

Distribution marginal(const DensityGrid& grid) {
  Distribution d;
  d.t = grid.t();
  d.probs.reserve(grid.size());
  diagonal_trace(grid, &d.probs);
  const double drift = std::abs(d.total() - 1.0);
  if (drift > kTraceTol) {
    std::ostringstream msg;
    msg << "total trace drifted by " << drift << " at t = " << grid.t();
    throw Error(ErrorKind::TraceDrift, msg.str());
  }
  return d;
}

GridDiagnostics diagnose(const DensityGrid& grid) {
  GridDiagnostics g;
  g.trace_drift = std::abs(diagonal_trace(grid, nullptr) - 1.0);
  g.min_diag_eigen = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    g.min_diag_eigen = std::min(g.min_diag_eigen, hermitian_eigenvalues(grid.at(i, i))[0]);
    for (std::size_t j = i; j < grid.size(); ++j)
      g.hermitian_defect = std::max(g.hermitian_defect,
                                    max_abs_diff(grid.at(i, j), adjoint(grid.at(j, i))));
  }
  return g;
}

DensityGrid evolve_grid(const WalkParams& params, int t, const DensityGrid& start,
                        const EvolveOptions& opt) {
  if (t < 0) throw Error(ErrorKind::Config, "step count must be non-negative");
  if (start.t() + t > opt.max_steps) {
    std::ostringstream msg;
    msg << "exact evolution to t = " << start.t() + t << " exceeds the cap of "
        << opt.max_steps << " (raise it explicitly or use the Monte-Carlo engine)";
    throw Error(ErrorKind::Config, msg.str());
  }
  DensityGrid grid = start;
  for (int s = 0; s < t; ++s) {
    grid = apply_interpolated(grid, params, {opt.threads});
    const double drift = std::abs(diagonal_trace(grid, nullptr) - 1.0);
    if (drift > kTraceTol) {
      std::ostringstream msg;
      msg << "total trace drifted by " << drift << " at step " << grid.t();
      throw Error(ErrorKind::TraceDrift, msg.str());
    }
    if (opt.observer) opt.observer(grid);
  }
  return grid;
}

Distribution evolve(const WalkParams& params, int t, const EvolveOptions& opt) {
  return marginal(evolve_grid(params, t, initial_grid(), opt));
}

ArcWeights matched_arc_weights(const Coin& coin, const Mat2& rho0) {
  return {sandwich({coin.a, coin.b}, rho0, {coin.a, coin.b}).real(),
          sandwich({coin.c, coin.d}, rho0, {coin.c, coin.d}).real()};
}

Distribution persistent_rw_reference(double stay_prob, int t, ArcWeights initial) {
  if (!(stay_prob >= 0.0 && stay_prob <= 1.0))
    throw Error(ErrorKind::Config, "stay probability must lie in [0, 1]");
  if (t < 0) throw Error(ErrorKind::Config, "step count must be non-negative");
  const double r = stay_prob;
  std::vector<double> left{initial.toward_left};
  std::vector<double> right{initial.toward_right};
  for (int s = 0; s < t; ++s) {
    const std::size_t n = left.size();
    std::vector<double> nl(n + 1, 0.0);
    std::vector<double> nr(n + 1, 0.0);
    // psi'(x, x-1) = r psi(x+1, x) + (1-r) psi(x-1, x)
    // psi'(x, x+1) = (1-r) psi(x+1, x) + r psi(x-1, x)
    // where psi(x+1, x) is the left-bound weight at x+1 (old index I) and
    // psi(x-1, x) the right-bound weight at x-1 (old index I-1).
    for (std::size_t I = 0; I <= n; ++I) {
      const double from_right = I < n ? left[I] : 0.0;
      const double from_left = I >= 1 ? right[I - 1] : 0.0;
      nl[I] = r * from_right + (1.0 - r) * from_left;
      nr[I] = (1.0 - r) * from_right + r * from_left;
    }
    left = std::move(nl);
    right = std::move(nr);
  }
  Distribution d;
  d.t = t;
  d.probs.resize(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) d.probs[i] = left[i] + right[i];
  const double mass = initial.toward_left + initial.toward_right;
  if (std::abs(d.total() - mass) > kTraceTol * std::max(1.0, mass))
    throw Error(ErrorKind::TraceDrift, "persistent random walk lost mass");
  return d;
}

Distribution pure_qw_reference(const Coin& coin, int t, ArcAmplitudes initial) {
  if (t < 0) throw Error(ErrorKind::Config, "step count must be non-negative");
  const double norm0 = abs2(initial.left) + abs2(initial.right);
  if (std::abs(norm0 - 1.0) > kTraceTol)
    throw Error(ErrorKind::NormDrift, "initial quantum-walk state is not normalized");
  // left[i] = psi(x+1, x), right[i] = psi(x-1, x) at x = -s + 2i
  std::vector<Complex> left{initial.left};
  std::vector<Complex> right{initial.right};
  for (int s = 0; s < t; ++s) {
    const std::size_t n = left.size();
    std::vector<Complex> nl(n + 1);
    std::vector<Complex> nr(n + 1);
    for (std::size_t I = 0; I <= n; ++I) {
      // psi'(x+1, x) = a psi(x+2, x+1) + b psi(x, x+1)
      if (I < n) nl[I] = coin.a * left[I] + coin.b * right[I];
      // psi'(x-1, x) = c psi(x, x-1) + d psi(x-2, x-1)
      if (I >= 1) nr[I] = coin.c * left[I - 1] + coin.d * right[I - 1];
    }
    left = std::move(nl);
    right = std::move(nr);
    double norm = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) norm += abs2(left[i]) + abs2(right[i]);
    if (std::abs(norm - 1.0) > kTraceTol) {
      std::ostringstream msg;
      msg << "quantum-walk norm drifted by " << std::abs(norm - 1.0) << " at step " << s + 1;
      throw Error(ErrorKind::NormDrift, msg.str());
    }
  }
  Distribution d;
  d.t = t;
  d.probs.resize(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) d.probs[i] = abs2(left[i]) + abs2(right[i]);
  return d;
}

}  // namespace qsw
