// Batch scans of genuine negativity against dephasing time nu, plus CSV
// and SVG writers for the resulting curves.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmedyn/dephasing.hpp"
#include "gmedyn/gme.hpp"

namespace gmedyn::experiment {

enum class Format { Csv, Svg, Both };

Format parse_format(std::string_view s);

/// Tags: ghz3 w3 ghz4 w4 dicke24 singlet4 cluster4 chi4 (fixed states) and
/// random-pure wgs (ensembles on n_qubits qubits).
bool is_known_tag(std::string_view tag);
bool is_ensemble_tag(std::string_view tag);

struct ScanConfig {
  std::vector<std::string> states{"ghz3"};
  int n_qubits = 3; // ensemble tags only
  double a = 1.0;
  std::vector<double> taus{5.0};
  double nu_max = 1.0;
  int steps = 101;
  int ensemble = 100;
  std::uint64_t seed = 7;
  std::filesystem::path out = "scan.csv";
  Format format = Format::Csv;
  bool with_f = false;
  unsigned threads = 0; // 0: one per hardware thread
};

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ConfigError on the first invalid field.
void validate(const ScanConfig& cfg);

/// steps points spanning [0, nu_max]; the last point is nu_max exactly.
std::vector<double> nu_grid(double nu_max, int steps);

enum class SeriesKind { Curve, Member, Mean, Std, FCurve };

struct Series {
  std::string name;
  SeriesKind kind = SeriesKind::Curve;
  std::vector<double> values;
};

struct ScanResult {
  std::vector<double> nu;
  std::vector<Series> series;

  /// nullptr when absent.
  const Series* find(std::string_view name) const;
};

/// E(nu) for rho0 evolved under local dephasing, one solve per grid point.
std::vector<double> negativity_curve(const DensityMatrix& rho0, const dephasing::DephasingParams& p,
                                     const std::vector<double>& grid,
                                     const gme::GmeOptions& options = {});

/// Series order: for each tau, for each tag, either the curve or the
/// members followed by _mean and _std; f/10 (when requested) closes each
/// tau group.  Members run in parallel and are joined by index.
ScanResult run_scan(const ScanConfig& cfg);

struct EnsembleStats {
  std::vector<double> mean;
  std::vector<double> std; // sample deviation, 0 for a single curve
};

/// Throws std::invalid_argument on an empty set or ragged curves.
EnsembleStats ensemble_mean(const std::vector<std::vector<double>>& curves);

/// f(nu)/10 on the grid.
std::vector<double> emit_f_curve(const dephasing::DephasingParams& p, const std::vector<double>& grid);

/// Header "nu,<names>", then one row per grid point, 9 decimals.
void emit_csv(const ScanResult& result, std::ostream& out);
void emit_csv(const ScanResult& result, const std::filesystem::path& path);

/// Standalone SVG: E on [0, 0.55] against nu.  Members are thin grey lines
/// without a legend entry; std series are not drawn.
void emit_svg(const ScanResult& result, std::ostream& out);
void emit_svg(const ScanResult& result, const std::filesystem::path& path);

/// Files written for cfg: out itself for a single format, out with .csv
/// and .svg extensions for both.
std::vector<std::filesystem::path> output_paths(const ScanConfig& cfg);

/// Writes every output of cfg; returns the paths.
std::vector<std::filesystem::path> write_outputs(const ScanConfig& cfg, const ScanResult& result);

} // namespace gmedyn::experiment
