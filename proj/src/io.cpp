#include "qsw/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "qsw/error.hpp"

#ifndef QSW_VERSION
#define QSW_VERSION "unknown"
#endif

namespace qsw {

namespace fs = std::filesystem;

fs::path default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return env && *env ? fs::path(env) : fs::path(".");
}

std::string format_real(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (std::isfinite(x) && s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  CsvTable t;
  std::string text;
  bool first = true;
  while (std::getline(in, text)) {
    if (text.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size())
        throw Error(ErrorKind::Io, path.string() + ": row width does not match the header");
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

void write_atomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw Error(ErrorKind::Io, "write failed for " + tmp.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw Error(ErrorKind::Io, "cannot rename into " + path.string() + ": " + ec.message());
  }
}

void write_csv(const fs::path& path, const CsvTable& table) { write_atomic(path, table.str()); }

void write_json(const fs::path& path, const nlohmann::json& doc) { write_atomic(path, doc.dump(2) + "\n"); }

nlohmann::json version_info() {
  return {
      {"qsw", QSW_VERSION},
      {"compiler", __VERSION__},
      {"cplusplus", __cplusplus},
      {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                   std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
  };
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc() || res.ptr != end)
    throw Error(ErrorKind::Config, std::string(what) + ": cannot parse '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::vector<double> parse_grid(std::string_view spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw Error(ErrorKind::Config, "grid must be start:stop:count, got '" + std::string(spec) + "'");
  const double start = parse_number<double>(parts[0], "grid start");
  const double stop = parse_number<double>(parts[1], "grid stop");
  const long count = parse_number<long>(parts[2], "grid count");
  if (count < 1) throw Error(ErrorKind::Config, "grid count must be at least 1");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw Error(ErrorKind::Config, "grid endpoints must be finite");
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = count == 1 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1);
  return out;
}

Coin parse_coin(std::string_view spec) {
  if (spec == "hadamard") return hadamard();
  const auto parts = split(spec, ',');
  if (parts.size() != 8)
    throw Error(ErrorKind::Config, "coin must be 'hadamard' or 8 comma-separated reals, got '" + std::string(spec) + "'");
  double v[8];
  for (int i = 0; i < 8; ++i) v[i] = parse_number<double>(parts[i], "coin entry");
  return make_coin({v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]});
}

CsvTable distribution_table(const Distribution& dist) {
  CsvTable t{{"x", "prob"}, {}};
  for (std::size_t i = 0; i < dist.probs.size(); ++i)
    t.rows.push_back({std::to_string(dist.position(i)), format_real(dist.probs[i])});
  return t;
}

CsvTable distribution_table(const Distribution& dist, const std::vector<double>& stderrs) {
  if (stderrs.size() != dist.probs.size()) throw Error(ErrorKind::Config, "stderr column length mismatch");
  CsvTable t{{"x", "prob", "stderr"}, {}};
  for (std::size_t i = 0; i < dist.probs.size(); ++i)
    t.rows.push_back({std::to_string(dist.position(i)), format_real(dist.probs[i]), format_real(stderrs[i])});
  return t;
}

CsvTable char_fn_table(const std::vector<double>& xi, const std::vector<Complex>& values) {
  if (xi.size() != values.size()) throw Error(ErrorKind::Config, "char_fn_table: length mismatch");
  CsvTable t{{"xi", "re", "im"}, {}};
  for (std::size_t i = 0; i < xi.size(); ++i)
    t.rows.push_back({format_real(xi[i]), format_real(values[i].real()), format_real(values[i].imag())});
  return t;
}

CsvTable perturbation_table(const std::vector<PerturbationReport>& reports) {
  CsvTable t{{"k", "xi", "p", "eps", "measured", "predicted", "rel_err"}, {}};
  for (const auto& r : reports)
    for (const auto& row : r.rows)
      t.rows.push_back({format_real(r.k), format_real(r.xi), format_real(r.p), format_real(row.eps),
                        format_real(row.measured), format_real(row.predicted), format_real(row.rel_err)});
  return t;
}

CsvTable overlay_table(const StepDensity& f, const ArcsineMixture& mix) {
  CsvTable t{{"x", "f_t", "f_star"}, {}};
  for (std::size_t i = 0; i < f.sites.size(); ++i) {
    const double x = f.sites[i] / f.scale;
    t.rows.push_back({format_real(x), format_real(f.heights[i]), format_real(f_star(x, mix))});
  }
  return t;
}

CsvTable ks_table(const std::vector<KsRow>& rows) {
  CsvTable t{{"t", "p", "ks"}, {}};
  for (const auto& r : rows) t.rows.push_back({std::to_string(r.t), format_real(r.p), format_real(r.ks)});
  return t;
}

CsvTable compare_table(const CompareRun& run) {
  CsvTable t{{"xi", "sim_re", "formula", "abs_diff"}, {}};
  for (const auto& pt : run.points)
    t.rows.push_back({format_real(pt.xi), format_real(pt.sim.real()), format_real(pt.formula), format_real(pt.abs_diff)});
  return t;
}

CsvTable dispersion_table(const std::vector<Dispersion>& rows) {
  CsvTable t{{"k", "theta", "alpha", "beta"}, {}};
  for (const auto& d : rows)
    t.rows.push_back({format_real(d.k), format_real(d.theta), format_real(d.alpha), format_real(d.beta)});
  return t;
}

}  // namespace qsw
