#include "gmedyn/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "gmedyn/random.hpp"
#include "gmedyn/states.hpp"

namespace gmedyn::experiment {

namespace {

constexpr std::array kFixedTags{"ghz3", "w3", "ghz4", "w4", "dicke24", "singlet4", "cluster4", "chi4"};
constexpr std::array kEnsembleTags{"random-pure", "wgs"};

PureState fixed_state(std::string_view tag) {
  if (tag == "ghz3") return states::ghz(3);
  if (tag == "w3") return states::w(3);
  if (tag == "ghz4") return states::ghz(4);
  if (tag == "w4") return states::w(4);
  return states::named_four_qubit(states::parse_four_qubit(tag));
}

PureState ensemble_member(std::string_view tag, int n, std::uint64_t seed, std::size_t index) {
  // Each ensemble tag draws from its own branch of the seed.
  const std::uint64_t branch = tag == "wgs" ? 1 : 0;
  RandomStream stream = RandomStream(seed).child(branch).child(index);
  if (tag == "wgs") return states::weighted_graph_state(states::random_weighted_graph(n, stream));
  return states::haar_random(n, stream);
}

std::string tau_suffix(const ScanConfig& cfg, double tau) {
  if (cfg.taus.size() < 2) return "";
  std::ostringstream s;
  s << "[tau=" << tau << "]";
  return s.str();
}

std::string member_name(const std::string& base, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "#%03zu", i);
  return base + buf;
}

// Runs jobs[0..n) on up to `threads` workers.  The exception of the
// lowest-numbered failing job is rethrown.
void run_parallel(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i; !failed && (i = next++) < n;) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace

Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "svg") return Format::Svg;
  if (s == "both") return Format::Both;
  throw ConfigError("format must be csv, svg or both, got '" + std::string(s) + "'");
}

bool is_known_tag(std::string_view tag) {
  return std::find(kFixedTags.begin(), kFixedTags.end(), tag) != kFixedTags.end() || is_ensemble_tag(tag);
}

bool is_ensemble_tag(std::string_view tag) {
  return std::find(kEnsembleTags.begin(), kEnsembleTags.end(), tag) != kEnsembleTags.end();
}

void validate(const ScanConfig& cfg) {
  if (cfg.states.empty()) throw ConfigError("no state tag given");
  for (const auto& t : cfg.states)
    if (!is_known_tag(t)) throw ConfigError("unknown state tag '" + t + "'");
  for (std::size_t i = 0; i < cfg.states.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.states.size(); ++j)
      if (cfg.states[i] == cfg.states[j]) throw ConfigError("state tag '" + cfg.states[i] + "' repeated");
  if (cfg.n_qubits < 2 || cfg.n_qubits > 4) throw ConfigError("n must be 2, 3 or 4");
  if (!(cfg.a > 0.0) || !std::isfinite(cfg.a)) throw ConfigError("a must be positive");
  if (cfg.taus.empty()) throw ConfigError("no tau given");
  for (double t : cfg.taus)
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("tau values must be positive");
  if (!(cfg.nu_max > 0.0) || !std::isfinite(cfg.nu_max)) throw ConfigError("nu-max must be positive");
  if (cfg.steps < 2) throw ConfigError("steps must be at least 2");
  if (cfg.ensemble < 1) throw ConfigError("ensemble size must be at least 1");
  if (cfg.out.empty()) throw ConfigError("output path is empty");
}

std::vector<double> nu_grid(double nu_max, int steps) {
  if (steps < 2 || !(nu_max > 0.0)) throw std::invalid_argument("grid needs steps >= 2 and nu_max > 0");
  std::vector<double> g(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) g[static_cast<std::size_t>(i)] = nu_max * i / (steps - 1);
  g.back() = nu_max;
  return g;
}

const Series* ScanResult::find(std::string_view name) const {
  for (const auto& s : series)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<double> negativity_curve(const DensityMatrix& rho0, const dephasing::DephasingParams& p,
                                     const std::vector<double>& grid, const gme::GmeOptions& options) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double nu : grid) out.push_back(gme::genuine_negativity(dephasing::evolve_analytic(rho0, p, nu), options).E);
  return out;
}

EnsembleStats ensemble_mean(const std::vector<std::vector<double>>& curves) {
  if (curves.empty()) throw std::invalid_argument("ensemble_mean needs at least one curve");
  const std::size_t len = curves.front().size();
  for (const auto& c : curves)
    if (c.size() != len) throw std::invalid_argument("ensemble curves have different grids");
  EnsembleStats st{std::vector<double>(len, 0.0), std::vector<double>(len, 0.0)};
  const double n = static_cast<double>(curves.size());
  for (std::size_t k = 0; k < len; ++k) {
    double sum = 0.0;
    for (const auto& c : curves) sum += c[k];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& c : curves) ss += (c[k] - mean) * (c[k] - mean);
    st.mean[k] = mean;
    st.std[k] = curves.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return st;
}

std::vector<double> emit_f_curve(const dephasing::DephasingParams& p, const std::vector<double>& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double nu : grid) out.push_back(dephasing::f_function(p, nu) / 10.0);
  return out;
}

ScanResult run_scan(const ScanConfig& cfg) {
  validate(cfg);
  ScanResult res;
  res.nu = nu_grid(cfg.nu_max, cfg.steps);

  struct Job {
    std::size_t series;
    std::string tag;
    std::size_t member;
    double tau;
  };
  std::vector<Job> jobs;
  struct Ensemble {
    std::size_t first;
    std::size_t count;
  };
  std::vector<Ensemble> ensembles;

  for (double tau : cfg.taus) {
    const std::string sfx = tau_suffix(cfg, tau);
    for (const auto& tag : cfg.states) {
      if (!is_ensemble_tag(tag)) {
        jobs.push_back({res.series.size(), tag, 0, tau});
        res.series.push_back({tag + sfx, SeriesKind::Curve, {}});
        continue;
      }
      const std::string base = tag + sfx;
      const auto count = static_cast<std::size_t>(cfg.ensemble);
      ensembles.push_back({res.series.size(), count});
      for (std::size_t i = 0; i < count; ++i) {
        jobs.push_back({res.series.size(), tag, i, tau});
        res.series.push_back({member_name(base, i), SeriesKind::Member, {}});
      }
      res.series.push_back({base + "_mean", SeriesKind::Mean, {}});
      res.series.push_back({base + "_std", SeriesKind::Std, {}});
    }
    if (cfg.with_f) {
      const dephasing::DephasingParams p(cfg.a, tau);
      res.series.push_back({"f/10" + sfx, SeriesKind::FCurve, emit_f_curve(p, res.nu)});
    }
  }

  run_parallel(jobs.size(), cfg.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    const PureState psi = is_ensemble_tag(job.tag) ? ensemble_member(job.tag, cfg.n_qubits, cfg.seed, job.member)
                                                   : fixed_state(job.tag);
    const dephasing::DephasingParams p(cfg.a, job.tau);
    res.series[job.series].values = negativity_curve(DensityMatrix(psi), p, res.nu);
  });

  for (const auto& e : ensembles) {
    std::vector<std::vector<double>> curves;
    for (std::size_t i = 0; i < e.count; ++i) curves.push_back(res.series[e.first + i].values);
    auto st = ensemble_mean(curves);
    res.series[e.first + e.count].values = std::move(st.mean);
    res.series[e.first + e.count + 1].values = std::move(st.std);
  }
  return res;
}

void emit_csv(const ScanResult& result, std::ostream& out) {
  out << "nu";
  for (const auto& s : result.series) out << ',' << s.name;
  out << '\n';
  char buf[64];
  for (std::size_t k = 0; k < result.nu.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.9f", result.nu[k]);
    out << buf;
    for (const auto& s : result.series) {
      // Avoid "-0.000000000" for values that round to zero.
      const double v = std::abs(s.values[k]) < 5e-10 ? 0.0 : s.values[k];
      std::snprintf(buf, sizeof buf, ",%.9f", v);
      out << buf;
    }
    out << '\n';
  }
}

void emit_csv(const ScanResult& result, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_csv(result, f);
  if (!f) throw std::runtime_error("error writing " + path.string());
}

void emit_svg(const ScanResult& result, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit_svg(result, f);
  if (!f) throw std::runtime_error("error writing " + path.string());
}

std::vector<std::filesystem::path> output_paths(const ScanConfig& cfg) {
  if (cfg.format != Format::Both) return {cfg.out};
  auto csv = cfg.out, svg = cfg.out;
  return {csv.replace_extension(".csv"), svg.replace_extension(".svg")};
}

std::vector<std::filesystem::path> write_outputs(const ScanConfig& cfg, const ScanResult& result) {
  const auto paths = output_paths(cfg);
  switch (cfg.format) {
  case Format::Csv: emit_csv(result, paths[0]); break;
  case Format::Svg: emit_svg(result, paths[0]); break;
  case Format::Both:
    emit_csv(result, paths[0]);
    emit_svg(result, paths[1]);
    break;
  }
  return paths;
}

} // namespace gmedyn::experiment
