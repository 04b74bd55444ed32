#include "qsw/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "qsw/error.hpp"

namespace qsw {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::for_stream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

PureState PureState::at_origin(Vec2 chirality) { return {0, {chirality}}; }

double PureState::norm2() const {
  double s = 0.0;
  for (const auto& v : amplitudes) s += abs2(v[0]) + abs2(v[1]);
  return s;
}

std::vector<double> PureState::weights() const {
  std::vector<double> w(amplitudes.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = abs2(amplitudes[i][0]) + abs2(amplitudes[i][1]);
  return w;
}

namespace {

// Kernels over raw buffers so a trajectory can reuse two preallocated arrays.
// Input has n sites (step t), output n + 1 sites (step t + 1).

double qw_kernel(const Vec2* in, Vec2* out, std::size_t n, const Coin& c) {
  double norm = 0.0;
  for (std::size_t I = 0; I <= n; ++I) {
    Complex l = 0.0;
    Complex r = 0.0;
    if (I < n) l = c.a * in[I][0] + c.b * in[I][1];
    if (I >= 1) r = c.c * in[I - 1][0] + c.d * in[I - 1][1];
    out[I] = {l, r};
    norm += abs2(l) + abs2(r);
  }
  return norm;
}

// Returns true if branch A (left move) was taken.
bool rw_kernel(const Vec2* in, Vec2* out, std::size_t n, const Coin& c, double u) {
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    na += abs2(c.a * in[i][0] + c.b * in[i][1]);
    nb += abs2(c.c * in[i][0] + c.d * in[i][1]);
  }
  if (na < kStarvedTol && nb < kStarvedTol)
    throw Error(ErrorKind::BranchStarved, "both random-walk branches have vanishing norm");
  const bool take_a = u * (na + nb) < na;
  if (take_a) {
    const double s = 1.0 / std::sqrt(na);
    for (std::size_t I = 0; I < n; ++I) out[I] = {s * (c.a * in[I][0] + c.b * in[I][1]), 0.0};
    out[n] = {0.0, 0.0};
  } else {
    const double s = 1.0 / std::sqrt(nb);
    out[0] = {0.0, 0.0};
    for (std::size_t I = 1; I <= n; ++I)
      out[I] = {0.0, s * (c.c * in[I - 1][0] + c.d * in[I - 1][1])};
  }
  return take_a;
}

void check_norm(double norm, int t) {
  if (std::abs(norm - 1.0) > kNormTol) {
    std::ostringstream msg;
    msg << "trajectory norm drifted by " << std::abs(norm - 1.0) << " at step " << t;
    throw Error(ErrorKind::NormDrift, msg.str());
  }
}

}  // namespace

PureState qw_step(const PureState& psi, const Coin& coin) {
  PureState out{psi.t + 1, std::vector<Vec2>(psi.amplitudes.size() + 1)};
  const double norm = qw_kernel(psi.amplitudes.data(), out.amplitudes.data(), psi.amplitudes.size(), coin);
  check_norm(norm, out.t);
  return out;
}

PureState rw_step(const PureState& psi, const Coin& coin, Rng& rng) {
  PureState out{psi.t + 1, std::vector<Vec2>(psi.amplitudes.size() + 1)};
  rw_kernel(psi.amplitudes.data(), out.amplitudes.data(), psi.amplitudes.size(), coin, rng.uniform());
  return out;
}

namespace {

// Pure quantum-walk states from |L> and |R> at every step. A trajectory is
// deterministic until its first random-walk event, so that prefix is looked
// up instead of recomputed; the random stream is consumed exactly as in the
// uncached path, so the two paths give identical bits.
class PrefixCache {
 public:
  static constexpr std::size_t kMaxBytes = std::size_t{256} << 20;

  PrefixCache(const Coin& coin, int t) {
    if (t < 0) return;
    const std::size_t n = static_cast<std::size_t>(t) + 1;
    if (n * (n + 1) * sizeof(Vec2) > kMaxBytes) return;
    for (int c = 0; c < 2; ++c) {
      auto& st = states_[c];
      st.resize(n * (n + 1) / 2);
      st[0] = c == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
      for (int s = 0; s < t; ++s) check_norm(qw_kernel(at(c, s), at(c, s + 1), s + 1, coin), s + 1);
      auto& w = final_[c];
      w.resize(n);
      double total = 0.0;
      const Vec2* last = at(c, t);
      for (std::size_t i = 0; i < n; ++i) {
        w[i] = abs2(last[i][0]) + abs2(last[i][1]);
        total += w[i];
      }
      check_norm(total, t);
    }
    enabled_ = true;
  }

  bool enabled() const { return enabled_; }
  const Vec2* at(int chirality, int step) const {
    return states_[chirality].data() + static_cast<std::size_t>(step) * (step + 1) / 2;
  }
  const std::vector<double>& final_weights(int chirality) const { return final_[chirality]; }

 private:
  Vec2* at(int chirality, int step) {
    return states_[chirality].data() + static_cast<std::size_t>(step) * (step + 1) / 2;
  }

  bool enabled_ = false;
  std::array<std::vector<Vec2>, 2> states_;
  std::array<std::vector<double>, 2> final_;
};

class Workspace {
 public:
  explicit Workspace(int t) : a_(static_cast<std::size_t>(t) + 1), b_(a_.size()) {}

  // chirality 0 starts from |L>, 1 from |R>.
  std::vector<double> run(const WalkParams& params, int t, int chirality, Rng& rng,
                          const PrefixCache* cache = nullptr) {
    const Coin& coin = params.coin();
    const double p = params.p();
    Vec2* cur = a_.data();
    Vec2* nxt = b_.data();
    int s = 0;
    bool event = false;
    if (cache != nullptr && cache->enabled()) {
      for (; s < t; ++s)
        if (rng.uniform() < p) {
          event = true;
          break;
        }
      if (!event) return cache->final_weights(chirality);
      std::copy_n(cache->at(chirality, s), s + 1, cur);
    } else {
      cur[0] = chirality == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    }
    std::size_t n = static_cast<std::size_t>(s) + 1;
    for (; s < t; ++s) {
      if (event || rng.uniform() < p) {
        rw_kernel(cur, nxt, n, coin, rng.uniform());
      } else {
        check_norm(qw_kernel(cur, nxt, n, coin), s + 1);
      }
      event = false;
      std::swap(cur, nxt);
      ++n;
    }
    std::vector<double> w(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = abs2(cur[i][0]) + abs2(cur[i][1]);
      total += w[i];
    }
    check_norm(total, t);
    return w;
  }

 private:
  std::vector<Vec2> a_;
  std::vector<Vec2> b_;
};

constexpr std::uint64_t kBlock = 256;

struct BlockSums {
  std::vector<double> sum;
  std::vector<double> sum_sq;
};

void add_into(BlockSums& into, const BlockSums& from) {
  for (std::size_t i = 0; i < into.sum.size(); ++i) {
    into.sum[i] += from.sum[i];
    into.sum_sq[i] += from.sum_sq[i];
  }
}

// Pairwise reduction over blocks [lo, hi) in index order.
BlockSums reduce(std::vector<BlockSums>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return std::move(blocks[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  BlockSums left = reduce(blocks, lo, mid);
  add_into(left, reduce(blocks, mid, hi));
  return left;
}

}  // namespace

std::vector<double> run_trajectory(const WalkParams& params, int t, Rng& rng) {
  if (t < 0) throw Error(ErrorKind::Config, "step count must be non-negative");
  const int chirality = rng.uniform() < 0.5 ? 0 : 1;
  return Workspace(t).run(params, t, chirality, rng);
}

McResult mc_distribution(const WalkParams& params, const McConfig& cfg) {
  if (cfg.n_traj < 1) throw Error(ErrorKind::Config, "n_traj must be at least 1");
  if (cfg.t < 0) throw Error(ErrorKind::Config, "step count must be non-negative");
  const std::size_t sites = static_cast<std::size_t>(cfg.t) + 1;
  const std::size_t n_blocks = static_cast<std::size_t>((cfg.n_traj + kBlock - 1) / kBlock);
  std::vector<BlockSums> blocks(n_blocks);
  const PrefixCache cache(params.coin(), cfg.use_prefix_cache ? cfg.t : -1);
  detail::parallel_for(n_blocks, cfg.threads, [&](std::size_t b) {
    Workspace ws(cfg.t);
    BlockSums acc{std::vector<double>(sites, 0.0), std::vector<double>(sites, 0.0)};
    const std::uint64_t first = b * kBlock;
    const std::uint64_t last = std::min<std::uint64_t>(cfg.n_traj, first + kBlock);
    for (std::uint64_t k = first; k < last; ++k) {
      Rng rng = Rng::for_stream(cfg.seed, k);
      // rho_0 = I/2 is sampled by stratification: even indices start from
      // |L>, odd from |R>
      const std::vector<double> w = ws.run(params, cfg.t, static_cast<int>(k & 1), rng, &cache);
      for (std::size_t i = 0; i < sites; ++i) {
        acc.sum[i] += w[i];
        acc.sum_sq[i] += w[i] * w[i];
      }
    }
    blocks[b] = std::move(acc);
  });
  const BlockSums total = reduce(blocks, 0, n_blocks);

  McResult res;
  res.dist.t = cfg.t;
  res.dist.probs.resize(sites);
  res.std_error.resize(sites);
  const double n = static_cast<double>(cfg.n_traj);
  for (std::size_t i = 0; i < sites; ++i) {
    const double mean = total.sum[i] / n;
    res.dist.probs[i] = mean;
    if (cfg.n_traj > 1) {
      const double var = std::max(0.0, (total.sum_sq[i] - n * mean * mean) / (n - 1.0));
      res.std_error[i] = std::sqrt(var / n);
    }
  }
  return res;
}

}  // namespace qsw
