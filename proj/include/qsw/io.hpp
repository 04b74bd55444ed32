// Output plumbing: CSV tables with stable headers, JSON run metadata,
// atomic file replacement, and parsers for the command-line value formats.

#ifndef QSW_IO_HPP
#define QSW_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qsw/coin.hpp"
#include "qsw/exact_evolution.hpp"
#include "qsw/limit_law.hpp"
#include "qsw/poisson.hpp"
#include "qsw/spectral.hpp"

namespace qsw {

/// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutputDirEnv = "QSW_OUTPUT_DIR";

std::filesystem::path default_output_dir();

/// Shortest round-trip decimal form; integral values keep a trailing ".0"
/// so that every real column reads as a real.
std::string format_real(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Writes `content` next to `path` and renames it into place, so readers
/// never observe a partially written file. Throws Error{Io}.
void write_atomic(const std::filesystem::path& path, std::string_view content);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Library and toolchain versions recorded in every sidecar.
nlohmann::json version_info();

/// "start:stop:count", count >= 1, endpoints included. Throws Error{Config}.
std::vector<double> parse_grid(std::string_view spec);

/// "hadamard" or eight comma-separated reals re(a),im(a),...,re(d),im(d).
Coin parse_coin(std::string_view spec);

// Schema builders.
CsvTable distribution_table(const Distribution& dist);                                      // x,prob
CsvTable distribution_table(const Distribution& dist, const std::vector<double>& stderrs);  // x,prob,stderr
CsvTable char_fn_table(const std::vector<double>& xi, const std::vector<Complex>& values);   // xi,re,im
CsvTable perturbation_table(const std::vector<PerturbationReport>& reports);  // k,xi,p,eps,measured,predicted,rel_err
CsvTable overlay_table(const StepDensity& f, const ArcsineMixture& mix);      // x,f_t,f_star
struct KsRow {
  int t;
  double p;
  double ks;
};
CsvTable ks_table(const std::vector<KsRow>& rows);                            // t,p,ks
CsvTable compare_table(const CompareRun& run);                                // xi,sim_re,formula,abs_diff
CsvTable dispersion_table(const std::vector<Dispersion>& rows);               // k,theta,alpha,beta

}  // namespace qsw

#endif  // QSW_IO_HPP
