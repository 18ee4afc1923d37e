// Copyright 2026 The swapanneal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SWAPANNEAL_EXPERIMENTS_HPP
#define SWAPANNEAL_EXPERIMENTS_HPP

// Experiment drivers behind the command-line tool. Every run collects its
// outputs in memory, commits them with temp-file + rename, and writes a
// manifest listing each file with its SHA-256. A run that fails before the
// commit leaves nothing behind. Requires linking libcrypto and a thread
// library.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "swapanneal/coefficients.hpp"
#include "swapanneal/flow.hpp"
#include "swapanneal/format.hpp"
#include "swapanneal/network.hpp"
#include "swapanneal/protocol.hpp"
#include "swapanneal/schedule.hpp"
#include "swapanneal/spectrum.hpp"
#include "swapanneal/state.hpp"
#include "swapanneal/verify.hpp"

namespace swapanneal {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInvalidInput = 2 };

/// Bad user input; maps to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
  std::vector<ModelKind> models;
  std::vector<std::size_t> dims;
  double delta = 1.0;
  std::optional<double> dt;  // defaults to 0.01 / delta
  std::optional<double> t_max;
  std::vector<int> alphas{1, 2, 3, 4};
  std::vector<std::size_t> ms{16, 32, 64, 128};
  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  bool doubled = false;
  std::size_t jobs = 1;
  std::optional<std::filesystem::path> k_source;
  std::size_t samples = 200;       // protocol samples in verify
  double taylor_hph = 2.0;         // HPH coefficient tested by verify

  double step() const { return dt ? *dt : 0.01 / delta; }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::uint64_t parse_unsigned(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (s.empty() || s.front() == '-') throw std::invalid_argument(s);
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw InputError(key + ": expected a non-negative integer, got '" + s + "'");
  }
  if (used != s.size()) throw InputError(key + ": trailing characters in '" + s + "'");
  return v;
}

inline double parse_real(const std::string& s, const std::string& key) {
  try {
    return parse_double(s);
  } catch (const std::exception&) {
    throw InputError(key + ": expected a number, got '" + s + "'");
  }
}

inline bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw InputError(key + ": expected a boolean, got '" + s + "'");
}

}  // namespace detail

/// Comma-separated items, each either N or LO..HI (LO, 2 LO, ... up to HI).
inline std::vector<std::size_t> parse_size_list(const std::string& text,
                                                const std::string& key) {
  std::vector<std::size_t> out;
  for (const auto& item : detail::split(text, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(detail::parse_unsigned(item, key));
      continue;
    }
    const auto lo = detail::parse_unsigned(detail::trim(item.substr(0, dots)), key);
    const auto hi = detail::parse_unsigned(detail::trim(item.substr(dots + 2)), key);
    if (lo == 0 || hi < lo) throw InputError(key + ": bad range '" + item + "'");
    for (std::uint64_t v = lo; v <= hi; v *= 2) out.push_back(v);
  }
  return out;
}

inline void apply_setting(ExperimentConfig& cfg, const std::string& key,
                          const std::string& raw) {
  const std::string value = detail::trim(raw);
  if (key == "model" || key == "models") {
    cfg.models.clear();
    for (const auto& m : detail::split(value, ',')) {
      try {
        cfg.models.push_back(parse_model_kind(m));
      } catch (const std::exception&) {
        throw InputError("model: unknown kind '" + m + "'");
      }
    }
  } else if (key == "dims") {
    cfg.dims = parse_size_list(value, key);
  } else if (key == "delta") {
    cfg.delta = detail::parse_real(value, key);
  } else if (key == "dt") {
    cfg.dt = detail::parse_real(value, key);
  } else if (key == "t_max") {
    cfg.t_max = detail::parse_real(value, key);
  } else if (key == "alphas") {
    cfg.alphas.clear();
    for (auto a : parse_size_list(value, key)) cfg.alphas.push_back(int(a));
  } else if (key == "ms") {
    cfg.ms = parse_size_list(value, key);
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "seed") {
    cfg.seed = detail::parse_unsigned(value, key);
  } else if (key == "double") {
    cfg.doubled = detail::parse_bool(value, key);
  } else if (key == "jobs") {
    cfg.jobs = detail::parse_unsigned(value, key);
  } else if (key == "k_source") {
    cfg.k_source = value;
  } else if (key == "samples") {
    cfg.samples = detail::parse_unsigned(value, key);
  } else if (key == "taylor_hph") {
    cfg.taylor_hph = detail::parse_real(value, key);
  } else {
    throw InputError("unknown config key '" + key + "'");
  }
}

/// Flat key=value text; '#' starts a comment.
inline void apply_config_text(ExperimentConfig& cfg, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(cfg, detail::trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

inline void validate_common(const ExperimentConfig& cfg) {
  if (!(cfg.delta > 0) || !std::isfinite(cfg.delta))
    throw InputError("delta must be a positive number");
  if (!(cfg.step() > 0) || !std::isfinite(cfg.step()))
    throw InputError("dt must be a positive number");
  if (cfg.t_max && !(*cfg.t_max > 0)) throw InputError("t_max must be positive");
  if (cfg.jobs == 0) throw InputError("jobs must be >= 1");
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  std::string models;
  for (auto k : cfg.models) models += to_char(k);
  nlohmann::json j{{"models", models},     {"dims", cfg.dims},   {"delta", cfg.delta},
                   {"dt", cfg.step()},     {"alphas", cfg.alphas}, {"ms", cfg.ms},
                   {"seed", cfg.seed},     {"double", cfg.doubled}, {"samples", cfg.samples},
                   {"taylor_hph", cfg.taylor_hph}};
  if (cfg.t_max) j["t_max"] = *cfg.t_max;
  if (cfg.k_source) j["k_source"] = cfg.k_source->generic_string();
  return j;
}

// ---------------------------------------------------------------------------
// Output bookkeeping

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

struct RunManifest {
  std::string command;
  nlohmann::json config;
  std::vector<std::pair<std::string, double>> stages;  // name, seconds
  std::map<std::string, std::string> files;            // relative path -> sha256
};

inline nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& [name, sec] : m.stages) stages.push_back({{"stage", name}, {"seconds", sec}});
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [path, hash] : m.files) files.push_back({{"path", path}, {"sha256", hash}});
  return {{"tool", "swapanneal"}, {"version", kVersion}, {"command", m.command},
          {"config", m.config},   {"stages", stages},    {"files", files}};
}

/// In-memory outputs of one run plus stage timings.
class RunOutputs {
 public:
  RunOutputs(std::string command, const ExperimentConfig& cfg) {
    manifest_.command = std::move(command);
    manifest_.config = to_json(cfg);
  }

  void add(const std::string& rel, std::string contents) {
    if (!files_.emplace(rel, std::move(contents)).second)
      throw std::logic_error("duplicate output " + rel);
  }

  template <class F>
  auto stage(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    auto record = [&] {
      const std::chrono::duration<double> d = std::chrono::steady_clock::now() - t0;
      manifest_.stages.emplace_back(name, d.count());
    };
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record();
    } else {
      auto r = f();
      record();
      return r;
    }
  }

  const std::map<std::string, std::string>& files() const { return files_; }

  /// Writes every file atomically, then the manifest. On failure the
  /// files already written by this call are removed again.
  std::vector<std::filesystem::path> commit(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> written;
    try {
      std::filesystem::create_directories(dir);
      for (const auto& [rel, contents] : files_) {
        const auto path = dir / rel;
        if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
        write_file_atomic(path, contents);
        written.push_back(path);
        manifest_.files[rel] = sha256_hex(contents);
      }
      const auto mpath = dir / ("manifest_" + manifest_.command + ".json");
      write_file_atomic(mpath, to_json(manifest_).dump(2) + "\n");
      written.push_back(mpath);
    } catch (...) {
      std::error_code ec;
      for (const auto& p : written) std::filesystem::remove(p, ec);
      throw;
    }
    return written;
  }

 private:
  RunManifest manifest_;
  std::map<std::string, std::string> files_;
};

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; the first exception
/// is rethrown after all workers stop.
template <class F>
void parallel_for(std::size_t n, std::size_t jobs, F&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct RunResult {
  int exit_code = kExitOk;
  std::string message;
  std::vector<std::filesystem::path> files;
};

// ---------------------------------------------------------------------------
// Shared helpers

struct ModelCase {
  ModelKind kind;
  std::size_t dim;  // before doubling
  Spectrum spec;
  std::string tag;  // e.g. "a_8" or "a_8_doubled"
};

/// Builds every (model, dim) spectrum up front so invalid combinations fail
/// before any work is done.
inline std::vector<ModelCase> build_cases(const ExperimentConfig& cfg,
                                          std::vector<ModelKind> default_models) {
  const auto& models = cfg.models.empty() ? default_models : cfg.models;
  if (cfg.dims.empty()) throw InputError("dims list is empty");
  std::vector<ModelCase> out;
  for (auto k : models)
    for (auto dim : cfg.dims) {
      Spectrum spec;
      try {
        spec = build_model(k, dim, cfg.delta);
      } catch (const std::invalid_argument& e) {
        throw InputError(std::string("model ") + to_char(k) + ", dim " +
                         std::to_string(dim) + ": " + e.what());
      }
      std::string tag = std::string(1, to_char(k)) + "_" + std::to_string(dim);
      if (cfg.doubled) {
        spec = doubled(spec);
        tag += "_doubled";
      }
      out.push_back({k, dim, std::move(spec), std::move(tag)});
    }
  return out;
}

/// Plotted p1 column: the lowest-level probability, scaled by the ground
/// degeneracy for model (d).
inline double p1_scale_for(const ModelCase& c) {
  return c.kind == ModelKind::d && !c.spec.label().ends_with("~")
             ? double(ground_degeneracy(c.spec))
             : 1.0;
}

// ---------------------------------------------------------------------------
// Commands

inline RunResult run_spectrum(const ExperimentConfig& cfg) {
  validate_common(cfg);
  const auto cases = build_cases(cfg, {ModelKind::a});
  RunOutputs outs("spectrum", cfg);
  outs.stage("spectra", [&] {
    CsvWriter summary({"model", "dim", "doubled", "ground_energy", "top_energy", "gap",
                       "span", "ground_degeneracy", "uniform_energy", "min_m_bound"});
    for (const auto& c : cases) {
      std::ostringstream txt;
      write_text(txt, c.spec);
      outs.add("spectrum_" + c.tag + ".txt", txt.str());
      outs.add("spectrum_" + c.tag + ".json", to_json(c.spec).dump() + "\n");
      const auto st = spectral_stats(c.spec);
      const double e0 = energy_moments(uniform_state(c.spec.dim()), c.spec).mean;
      summary.cell(std::string(1, to_char(c.kind))).cell(c.dim).cell(cfg.doubled)
          .cell(st.ground_energy).cell(st.top_energy).cell(st.gap).cell(st.span)
          .cell(st.ground_degeneracy).cell(e0).cell(min_m_bound(c.spec, e0));
      summary.end_row();
    }
    outs.add("spectra_summary.csv", summary.str());
  });
  return {kExitOk, "wrote " + std::to_string(outs.files().size()) + " files",
          outs.commit(cfg.out)};
}

/// Grid length for a flow table: t_max if given, otherwise 1.25 times the
/// slowest 0.99 window edge.
inline std::size_t flow_steps(const ExperimentConfig& cfg, const Spectrum& spec,
                              const PureState& phi0) {
  double horizon = 0;
  if (cfg.t_max) {
    horizon = *cfg.t_max;
  } else {
    const auto st = spectral_stats(spec);
    const double p0 = ground_probability(phi0, spec).p_ground;
    horizon = 1.25 * t_c_bounds_from(p0, st.gap, st.span, 0.99).upper;
  }
  return static_cast<std::size_t>(std::ceil(horizon / cfg.step() - 1e-9));
}

inline RunResult run_flow(const ExperimentConfig& cfg) {
  validate_common(cfg);
  const auto cases = build_cases(cfg, {ModelKind::a});
  RunOutputs outs("flow", cfg);
  std::vector<std::string> csv(cases.size());
  outs.stage("flow", [&] {
    parallel_for(cases.size(), cfg.jobs, [&](std::size_t i) {
      const auto& c = cases[i];
      const PureState phi0 = uniform_state(c.spec.dim());
      FlowTableOptions opt;
      opt.dt = cfg.step();
      opt.steps = flow_steps(cfg, c.spec, phi0);
      opt.p1_scale = p1_scale_for(c);
      csv[i] = to_csv(flow_table(phi0, c.spec, opt));
    });
  });
  for (std::size_t i = 0; i < cases.size(); ++i)
    outs.add("flow_" + cases[i].tag + ".csv", std::move(csv[i]));
  return {kExitOk, "wrote " + std::to_string(cases.size()) + " flow tables",
          outs.commit(cfg.out)};
}

inline RunResult run_protocol(const ExperimentConfig& cfg) {
  validate_common(cfg);
  const auto cases = build_cases(cfg, {ModelKind::a});
  RunOutputs outs("protocol", cfg);
  const double dt = cfg.step();
  outs.stage("protocol", [&] {
    CsvWriter summary({"model", "dim", "dt", "E0", "Ea", "Eb", "Ea_first_order",
                       "Eb_first_order", "conservation_error", "oracle_error"});
    for (const auto& c : cases) {
      const PureState phi0 = uniform_state(c.spec.dim());
      const ProtocolOutput out = apply_protocol(phi0, c.spec, dt);
      const EnergyPair first = transfer_first_order(phi0, c.spec, dt);
      outs.add("protocol_" + c.tag + ".json", to_json(out).dump(1) + "\n");
      summary.cell(std::string(1, to_char(c.kind))).cell(c.dim).cell(dt).cell(out.E0)
          .cell(out.E_a).cell(out.E_b).cell(first.E_a).cell(first.E_b)
          .cell(std::abs(out.E_a + out.E_b - 2 * out.E0));
      if (c.spec.dim() <= kOracleMaxDim) {
        const OracleOutput o = protocol_oracle(phi0, c.spec, dt);
        summary.cell(std::max(hermitian_norm(out.rho_a.to_dense() - o.rho_a.matrix),
                              hermitian_norm(out.rho_b.to_dense() - o.rho_b.matrix)));
      } else {
        summary.cell("");
      }
      summary.end_row();
    }
    outs.add("protocol_summary.csv", summary.str());
  });
  return {kExitOk, "wrote protocol outputs", outs.commit(cfg.out)};
}

inline std::string step_star_table(const std::vector<std::size_t>& ms) {
  CsvWriter csv({"m", "step_star", "step_star_over_m2"});
  for (auto m : ms) {
    const auto s = build_improved_schedule(m);
    csv.cell(m).cell(s.step_star).cell(double(s.step_star) / double(m * m));
    csv.end_row();
  }
  return csv.str();
}

inline void require_ms(const ExperimentConfig& cfg) {
  if (cfg.ms.empty()) throw InputError("ms list is empty");
  for (auto m : cfg.ms)
    if (m == 0) throw InputError("ms entries must be >= 1");
}

inline RunResult run_schedule(const ExperimentConfig& cfg) {
  validate_common(cfg);
  require_ms(cfg);
  RunOutputs outs("schedule", cfg);
  outs.stage("schedule", [&] {
    for (auto m : cfg.ms) {
      const auto s = build_improved_schedule(m);
      if (auto err = validate(s); !err.empty())
        throw std::logic_error("schedule m=" + std::to_string(m) + ": " + err);
      outs.add("schedule_m" + std::to_string(m) + ".json", to_json(s).dump() + "\n");
    }
    outs.add("step_star.csv", step_star_table(cfg.ms));
  });
  return {kExitOk, "wrote schedules", outs.commit(cfg.out)};
}

inline std::string cuts_csv(const ScalingReport& r) {
  CsvWriter csv({"cut", "is_row", "index", "position", "small", "rescaled"});
  for (const auto& cs : r.sections)
    for (std::size_t i = 0; i < cs.position.size(); ++i) {
      csv.cell(cs.name).cell(cs.is_row).cell(static_cast<long long>(cs.index))
          .cell(cs.position[i]).cell(cs.small[i]).cell(cs.rescaled[i]);
      csv.end_row();
    }
  return csv.str();
}

inline RunResult run_coeffs(const ExperimentConfig& cfg) {
  validate_common(cfg);
  require_ms(cfg);
  std::vector<std::size_t> ms = cfg.ms;
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  RunOutputs outs("coeffs", cfg);
  std::vector<CoefficientMatrix> Ks(ms.size());
  outs.stage("propagate", [&] {
    parallel_for(ms.size(), cfg.jobs, [&](std::size_t i) {
      Ks[i] = propagate_coefficients(build_improved_schedule(ms[i]));
    });
  });
  for (std::size_t i = 0; i < ms.size(); ++i)
    outs.add("K_m" + std::to_string(ms[i]) + ".csv", to_csv(Ks[i]));
  outs.stage("scaling", [&] {
    nlohmann::json reports = nlohmann::json::array();
    for (std::size_t i = 1; i < ms.size(); ++i) {
      if (ms[i] % ms[0] != 0) continue;
      const ScalingReport r = check_scaling_law(Ks[0], Ks[i], ms[i] / ms[0]);
      reports.push_back(to_json(r));
      outs.add("cuts_m" + std::to_string(ms[0]) + "_m" + std::to_string(ms[i]) + ".csv",
               cuts_csv(r));
    }
    CsvWriter growth({"m", "last_row_max", "last_row_max_over_m"});
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const double mx = Ks[i].last_row().maxCoeff();
      growth.cell(ms[i]).cell(mx).cell(mx / double(ms[i]));
      growth.end_row();
    }
    outs.add("scaling_report.json", reports.dump(1) + "\n");
    outs.add("last_row_growth.csv", growth.str());
  });
  outs.stage("step_star", [&] {
    std::vector<std::size_t> table{1, 2, 3};
    for (std::size_t m = 4; m <= ms.back(); m *= 2) table.push_back(m);
    for (auto m : ms) table.push_back(m);
    std::sort(table.begin(), table.end());
    table.erase(std::unique(table.begin(), table.end()), table.end());
    outs.add("step_star.csv", step_star_table(table));
  });
  return {kExitOk, "wrote coefficient matrices", outs.commit(cfg.out)};
}

struct XiRow {
  ModelKind kind;
  std::size_t dim = 0;
  int alpha = 0;
  std::int64_t m_alpha = 0;
  double xi = 0;
  double bound = 0;  // energy-conservation lower bound on m
  bool constraint_violated = false;
};

/// Loads the K source for the xi sweep; missing sources are an input error
/// pointing at the `coeffs` command.
inline CoefficientMatrix load_k_source(const ExperimentConfig& cfg) {
  const auto path = cfg.k_source ? *cfg.k_source : cfg.out / "K_m128.csv";
  if (!std::filesystem::exists(path))
    throw InputError("K source " + path.string() +
                     " not found; run `swapanneal coeffs --ms 128 --out DIR` first "
                     "or pass --k-source");
  try {
    return coefficients_from_csv(read_file(path));
  } catch (const std::exception& e) {
    throw InputError("K source " + path.string() + ": " + e.what());
  }
}

/// One (model, dim) block of the xi sweep.
inline std::vector<XiRow> xi_rows(const ModelCase& c, const CoefficientMatrix& K,
                                  const std::vector<int>& alphas, double dt) {
  const PureState phi0 = uniform_state(c.spec.dim());
  const double e0 = energy_moments(phi0, c.spec).mean;
  const double bound = min_m_bound(c.spec, e0);
  std::vector<XiRow> rows;
  for (int alpha : alphas) {
    XiRow r;
    r.kind = c.kind;
    r.dim = c.spec.dim();
    r.alpha = alpha;
    r.m_alpha = m_alpha(c.spec, phi0, dt, alpha);
    const auto m = static_cast<std::size_t>(r.m_alpha);
    r.xi = m == 0 ? 0.0 : xi_statistic(c.spec, phi0, m, dt, rescaled_last_row(K, m));
    r.bound = bound;
    r.constraint_violated = double(r.m_alpha) <= bound;
    rows.push_back(r);
  }
  return rows;
}

inline RunResult run_xi(const ExperimentConfig& base) {
  ExperimentConfig cfg = base;
  if (cfg.dims.empty()) cfg.dims = parse_size_list("8..512", "dims");
  validate_common(cfg);
  for (int a : cfg.alphas)
    if (a < 0) throw InputError("alphas must be >= 0");
  for (auto d : cfg.dims)
    if (d < 8) throw InputError("xi needs dims >= 8");
  const auto cases =
      build_cases(cfg, {ModelKind::a, ModelKind::b, ModelKind::c, ModelKind::d});
  const CoefficientMatrix K = load_k_source(cfg);
  RunOutputs outs("xi", cfg);
  std::vector<std::vector<XiRow>> blocks(cases.size());
  outs.stage("xi", [&] {
    parallel_for(cases.size(), cfg.jobs, [&](std::size_t i) {
      blocks[i] = xi_rows(cases[i], K, cfg.alphas, cfg.step());
    });
  });
  CsvWriter csv({"model", "dim", "alpha", "m_alpha", "xi", "min_m_bound",
                 "constraint_violated", "reference_only"});
  for (const auto& block : blocks)
    for (const auto& r : block) {
      csv.cell(std::string(1, to_char(r.kind))).cell(r.dim).cell(r.alpha)
          .cell(static_cast<long long>(r.m_alpha)).cell(r.xi).cell(r.bound)
          .cell(r.constraint_violated).cell(r.kind == ModelKind::a);
      csv.end_row();
    }
  outs.add(cfg.doubled ? "xi_doubled.csv" : "xi.csv", csv.str());
  return {kExitOk, "wrote xi table", outs.commit(cfg.out)};
}

inline RunResult run_verify(const ExperimentConfig& cfg) {
  validate_common(cfg);
  VerifyOptions opt;
  opt.seed = cfg.seed;
  opt.protocol_samples = cfg.samples;
  opt.hph_coefficient = cfg.taylor_hph;
  RunOutputs outs("verify", cfg);
  const VerifyReport report = outs.stage("verify", [&] { return run_verification(opt); });
  outs.add("verify_report.json", to_json(report).dump(1) + "\n");
  RunResult r;
  r.files = outs.commit(cfg.out);
  if (report.passed()) {
    r.message = "all " + std::to_string(report.checks.size()) + " checks passed";
  } else {
    r.exit_code = kExitVerifyFailed;
    r.message = "failed checks:";
    for (const auto& name : report.failures()) r.message += " " + name;
  }
  return r;
}

}  // namespace swapanneal

#endif  // SWAPANNEAL_EXPERIMENTS_HPP
