// SPDX-License-Identifier: Apache-2.0
#include "sjisac/harness.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "sjisac/commetrics.hpp"

namespace sjisac {

using json = nlohmann::json;

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int resolve_cp(const std::string& s, int N) {
  if (s == "0") return 0;
  if (s == "N/4") return N / 4;
  if (s == "N") return N;
  throw ConfigError(fmt::format("N_cp '{}' must be one of \"0\", \"N/4\", \"N\"", s));
}

std::string cp_label(int N_cp, int N) {
  if (N_cp == 0) return "0";
  return N_cp == N ? "N" : "N/4";
}
}  // namespace

std::vector<double> SweepSpec::default_rms_grid() {
  std::vector<double> g;
  for (int e = -17; e <= -10; ++e) g.push_back(std::pow(10.0, e));
  return g;
}

void SweepSpec::validate() const {
  auto empty = [](const auto& v, const char* name) {
    if (v.empty()) throw ConfigError(fmt::format("axis '{}' is empty", name));
  };
  empty(rms_sj_s, "rms_sj_s");
  empty(eta, "eta");
  empty(N, "N");
  empty(n_cp, "N_cp");
  empty(modulation, "modulation");
  empty(mode, "mode");
  for (double r : rms_sj_s)
    if (!(r == 0.0 || (r >= 1e-17 * (1 - 1e-9) && r <= 1e-10 * (1 + 1e-9))))
      throw ConfigError(fmt::format("rms_sj_s = {:g} outside [1e-17, 1e-10] s", r));
  for (int e : eta)
    if (e != 1 && e != 2 && e != 4 && e != 8) throw ConfigError(fmt::format("eta = {} not in {{1,2,4,8}}", e));
  for (int n : N)
    if (n < 256 || n > 16384 || (n & (n - 1))) throw ConfigError(fmt::format("N = {} not a power of two in [256, 16384]", n));
  for (const auto& c : n_cp) resolve_cp(c, 256);
  if (M < 1) throw ConfigError("M must be positive");
  if (seeds < 1) throw ConfigError("seeds must be at least 1");
  if (converter.upsample < 1 || converter.half_taps < 1) throw ConfigError("converter filter parameters must be positive");
  for (auto m : mode)
    if (m == SamplingMode::BP)
      for (int e : eta)
        if (!(e * B_hz > 2.0 * (f_if_hz + B_hz / 2.0)))
          throw ConfigError(fmt::format("BP at eta = {} violates Nyquist for f_IF = {:g} Hz", e, f_if_hz));
  if (kind == SweepKind::Radar) {
    if (radar.targets.empty()) throw ConfigError("radar sweep needs at least one target");
    if (radar.cut_zp < 1 || radar.image_zp < 1) throw ConfigError("zero-padding factors must be >= 1");
    for (int n : N)
      for (const auto& c : n_cp) {
        const double cp_s = resolve_cp(c, n) / B_hz;
        for (const auto& t : radar.targets)
          if (t.range_m / kSpeedOfLight > cp_s)
            throw ConfigError(fmt::format("target at {} m does not fit N_cp = {} for N = {}", t.range_m, c, n));
      }
  }
}

SweepSpec parse_sweep(std::string_view text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
  }
  SweepSpec s;
  try {
    const std::string kind = j.value("kind", "comm");
    if (kind == "comm")
      s.kind = SweepKind::Comm;
    else if (kind == "radar")
      s.kind = SweepKind::Radar;
    else
      throw ConfigError(fmt::format("kind '{}' must be comm or radar", kind));
    s.engine = parse_engine(j.value("engine", std::string(to_string(s.engine))));
    s.M = j.value("M", s.M);
    s.B_hz = j.value("B_hz", s.B_hz);
    s.f_if_hz = j.value("f_if_hz", s.f_if_hz);
    s.seeds = j.value("seeds", s.seeds);
    s.base_seed = j.value("base_seed", s.base_seed);
    s.per_subcarrier = j.value("per_subcarrier", s.per_subcarrier);
    if (j.contains("mask")) {
      std::filesystem::path p = j["mask"].get<std::string>();
      s.mask_path = p.is_absolute() ? p : base_dir / p;
    }
    if (j.contains("converter")) {
      const auto& c = j["converter"];
      s.converter.upsample = c.value("upsample", s.converter.upsample);
      s.converter.half_taps = c.value("half_taps", s.converter.half_taps);
      s.converter.kaiser_beta = c.value("kaiser_beta", s.converter.kaiser_beta);
    }
    const json axes = j.value("axes", json::object());
    if (!axes.contains("rms_sj_s") || axes["rms_sj_s"] == "default")
      s.rms_sj_s = SweepSpec::default_rms_grid();
    else
      s.rms_sj_s = axes["rms_sj_s"].get<std::vector<double>>();
    if (axes.contains("eta")) s.eta = axes["eta"].get<std::vector<int>>();
    if (axes.contains("N")) s.N = axes["N"].get<std::vector<int>>();
    if (axes.contains("N_cp")) s.n_cp = axes["N_cp"].get<std::vector<std::string>>();
    if (axes.contains("modulation")) {
      s.modulation.clear();
      for (const auto& m : axes["modulation"]) s.modulation.push_back(parse_modulation(m.get<std::string>()));
    }
    if (axes.contains("mode")) {
      s.mode.clear();
      for (const auto& m : axes["mode"]) s.mode.push_back(parse_mode(m.get<std::string>()));
    }
    if (j.contains("radar")) {
      const auto& r = j["radar"];
      if (r.contains("targets")) {
        s.radar.targets.clear();
        for (const auto& t : r["targets"])
          s.radar.targets.push_back({t.at("range_m").get<double>(), t.value("doppler_norm", 0.0),
                                     cplx(t.value("amp_re", 1.0), t.value("amp_im", 0.0))});
      }
      if (r.contains("cut_window")) s.radar.cut_window = parse_window(r["cut_window"].get<std::string>());
      if (r.contains("image_window")) s.radar.image_window = parse_window(r["image_window"].get<std::string>());
      s.radar.cut_zp = r.value("cut_zp", s.radar.cut_zp);
      s.radar.image_zp = r.value("image_zp", s.radar.image_zp);
      s.radar.save_images = r.value("save_images", s.radar.save_images);
      if (r.contains("metrics")) {
        s.radar.cuts = s.radar.image_metrics = false;
        for (const auto& m : r["metrics"]) {
          const auto name = m.get<std::string>();
          if (name == "cuts")
            s.radar.cuts = true;
          else if (name == "image_sir")
            s.radar.image_metrics = true;
          else
            throw ConfigError(fmt::format("unknown radar metric '{}'", name));
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("config field has the wrong type: {}", e.what()));
  }
  s.validate();
  return s;
}

SweepSpec load_sweep(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep(ss.str(), path.parent_path());
}

OfdmConfig Tuple::ofdm(const SweepSpec& s) const {
  OfdmConfig c;
  c.N = N;
  c.eta = eta;
  c.N_cp = N_cp;
  c.M = s.M;
  c.B_hz = s.B_hz;
  c.modulation = modulation;
  return c;
}

std::string Tuple::draw_key() const {
  return fmt::format("mode={};eta={};N={};ncp={};mod={};seed={}", to_string(mode), eta, N, N_cp,
                     to_string(modulation), seed_index);
}

std::string Tuple::config_key(Engine e) const {
  return fmt::format("{}_eta{}_N{}_cp{}_{}_rms{:.3e}_{}", to_string(mode), eta, N, N_cp, to_string(modulation),
                     rms_sj_s, to_string(e));
}

std::vector<Tuple> expand(const SweepSpec& spec) {
  std::vector<Tuple> out;
  for (auto mode : spec.mode)
    for (int eta : spec.eta)
      for (int N : spec.N)
        for (const auto& cp : spec.n_cp)
          for (auto mod : spec.modulation)
            for (double rms : spec.rms_sj_s)
              for (int s = 0; s < spec.seeds; ++s) out.push_back({mode, eta, N, resolve_cp(cp, N), mod, rms, s});
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view key, std::string_view role) {
  auto fnv = [](std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  };
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ fnv(key)) ^ fnv(role));
}

namespace {

struct Draw {
  OfdmConfig cfg;
  SymbolGrid X;
  FrontendConfig fe;
  FrontendConfig fe_ref;  // same chain, zero jitter
  std::uint64_t seed_dac, seed_adc;
};

Draw make_draw(const SweepSpec& spec, const Tuple& t, const PsdMask& mask, bool want_ref) {
  Draw d;
  d.cfg = t.ofdm(spec);
  d.cfg.validate();
  const std::string key = t.draw_key();
  d.seed_dac = derive_seed(spec.base_seed, key, "DAC");
  d.seed_adc = derive_seed(spec.base_seed, key, "ADC");
  const auto bits = random_bits(static_cast<std::size_t>(d.cfg.N) * d.cfg.M * bits_per_symbol(d.cfg.modulation),
                                derive_seed(spec.base_seed, key, "BITS"));
  d.X = map_symbols(bits, d.cfg);

  const std::size_t len = d.cfg.stream_length();
  const double fs = d.cfg.rate_hz();
  d.fe.mode = t.mode;
  d.fe.f_if_hz = t.mode == SamplingMode::BP ? spec.f_if_hz : 0.0;
  d.fe.B_hz = spec.B_hz;
  d.fe.engine = spec.engine;
  d.fe.converter = spec.converter;
  if (want_ref) {
    d.fe_ref = d.fe;
    d.fe_ref.dac_jitter = JitterTrace{rvec(len, 0.0), fs, 0.0, 0};
    d.fe_ref.adc_jitter = d.fe_ref.dac_jitter;
  }
  d.fe.dac_jitter = make_jitter(mask, fs, len, d.seed_dac, t.rms_sj_s);
  d.fe.adc_jitter = make_jitter(mask, fs, len, d.seed_adc, t.rms_sj_s);
  return d;
}

ResultRow blank_row(const SweepSpec& spec, const Tuple& t, const char* kind) {
  ResultRow r{};
  r.kind = kind;
  r.mode = t.mode;
  r.engine = spec.engine;
  r.eta = t.eta;
  r.N = t.N;
  r.N_cp = t.N_cp;
  r.M = spec.M;
  r.modulation = t.modulation;
  r.rms_sj_s = t.rms_sj_s;
  r.seed_index = t.seed_index;
  r.mean_evm_db = r.sir_db = r.mean_evm_cpe_db = r.sir_cpe_db = kNaN;
  r.pplr_db = r.pslr_range_db = r.pslr_doppler_db = r.islr_range_db = r.islr_doppler_db = kNaN;
  r.image_sir_mean_db = r.image_sir_min_db = r.stripe_mean_db = r.stripe_max_db = kNaN;
  return r;
}

PsdMask mask_for(const SweepSpec& spec) {
  return spec.mask_path.empty() ? default_mask() : PsdMask::load(spec.mask_path);
}

template <class Fn>
std::vector<ResultRow> run_pool(const std::vector<Tuple>& tuples, const RunOptions& opt, Fn&& fn) {
  std::vector<ResultRow> rows(tuples.size());
  std::vector<std::exception_ptr> errors(tuples.size());
  std::atomic<std::size_t> next{0}, done{0};
  std::mutex progress_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tuples.size();) {
      try {
        rows[i] = fn(tuples[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      const std::size_t d = done.fetch_add(1) + 1;
      if (opt.progress) {
        std::lock_guard lock(progress_mu);
        opt.progress(d, tuples.size());
      }
    }
  };
  const int k = std::max(1, opt.workers);
  std::vector<std::thread> pool;
  for (int w = 1; w < k; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

ResultRow run_comm_tuple(const SweepSpec& spec, const Tuple& t, const PsdMask& mask) {
  const auto t0 = std::chrono::steady_clock::now();
  Draw d = make_draw(spec, t, mask, false);
  ResultRow r = blank_row(spec, t, "comm");
  r.seed_dac = d.seed_dac;
  r.seed_adc = d.seed_adc;

  const SymbolGrid R = demodulate(frontend_chain(modulate(d.X, d.cfg), d.fe), d.cfg);
  EvmResult e = evm(R, d.X);
  r.mean_evm_db = e.mean_db;
  r.sir_db = sir(R, d.X);
  const SymbolGrid Rc = correct_cpe(R, estimate_cpe(R, d.X).phase);
  r.mean_evm_cpe_db = evm(Rc, d.X).mean_db;
  r.sir_cpe_db = sir(Rc, d.X);
  r.evm_per_subcarrier_db = std::move(e.per_subcarrier_db);
  r.runtime_s = seconds_since(t0);
  return r;
}

ResultRow run_radar_tuple(const SweepSpec& spec, const Tuple& t, const PsdMask& mask,
                          const std::filesystem::path& image_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  const RadarSettings& rs = spec.radar;
  Draw d = make_draw(spec, t, mask, rs.cuts);
  ResultRow r = blank_row(spec, t, "radar");
  r.seed_dac = d.seed_dac;
  r.seed_adc = d.seed_adc;

  const SampleStream tx = modulate(apply_targets(d.X, rs.targets, d.cfg), d.cfg);
  const SymbolGrid R = demodulate(frontend_chain(tx, d.fe), d.cfg);

  std::size_t main_target = 0;
  for (std::size_t i = 1; i < rs.targets.size(); ++i)
    if (std::abs(rs.targets[i].amplitude) > std::abs(rs.targets[main_target].amplitude)) main_target = i;

  if (rs.cuts) {
    const SymbolGrid R0 = demodulate(frontend_chain(tx, d.fe_ref), d.cfg);
    const RadarImage img = range_doppler(R, d.X, rs.cut_window, rs.cut_window, rs.cut_zp, d.cfg);
    const RadarImage ref = range_doppler(R0, d.X, rs.cut_window, rs.cut_window, rs.cut_zp, d.cfg);
    const Peak pk = locate_target(img, rs.targets[main_target]);
    r.pplr_db = pplr(img, ref);
    r.pslr_range_db = pslr_cut(img, pk, CutAxis::Range);
    r.pslr_doppler_db = pslr_cut(img, pk, CutAxis::Doppler);
    r.islr_range_db = islr_cut(img, pk, CutAxis::Range);
    r.islr_doppler_db = islr_cut(img, pk, CutAxis::Doppler);
  }
  if (rs.image_metrics) {
    const RadarImage img = range_doppler(R, d.X, rs.image_window, rs.image_window, rs.image_zp, d.cfg);
    std::vector<Peak> peaks;
    for (const auto& tg : rs.targets) peaks.push_back(locate_target(img, tg));
    const Exclusion ex = default_exclusion(img, d.cfg);
    const ImageSir is = image_sir(img, peaks, ex);
    const StripeMetric sm = stripe_metric(img, peaks, ex);
    r.image_sir_mean_db = is.mean_db;
    r.image_sir_min_db = is.min_db;
    r.stripe_mean_db = sm.ridge_mean_db;
    r.stripe_max_db = sm.ridge_max_db;
    if (rs.save_images && !image_dir.empty()) {
      std::filesystem::create_directories(image_dir);
      write_image(image_dir / fmt::format("{}_seed{}.bin", t.config_key(spec.engine), t.seed_index), img);
    }
  }
  r.runtime_s = seconds_since(t0);
  return r;
}

std::vector<ResultRow> run_comm(const SweepSpec& spec, const RunOptions& opt) {
  spec.validate();
  const PsdMask mask = mask_for(spec);
  return run_pool(expand(spec), opt, [&](const Tuple& t) { return run_comm_tuple(spec, t, mask); });
}

std::vector<ResultRow> run_radar(const SweepSpec& spec, const RunOptions& opt) {
  spec.validate();
  const PsdMask mask = mask_for(spec);
  return run_pool(expand(spec), opt,
                  [&](const Tuple& t) { return run_radar_tuple(spec, t, mask, opt.image_dir); });
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "kind",          "mode",           "engine",          "eta",           "N",
      "N_cp",          "M",              "modulation",      "rms_sj_s",      "seed_index",
      "seed_dac",      "seed_adc",       "mean_evm_db",     "sir_db",        "mean_evm_cpe_db",
      "sir_cpe_db",    "pplr_db",        "pslr_range_db",   "pslr_doppler_db", "islr_range_db",
      "islr_doppler_db", "image_sir_mean_db", "image_sir_min_db", "stripe_mean_db", "stripe_max_db",
      "runtime_s"};
  return cols;
}

std::string csv_header() {
  std::string h;
  for (const auto& c : csv_columns()) h += (h.empty() ? "" : ",") + c;
  return h;
}

namespace {
std::string num(double v) { return std::isnan(v) ? std::string() : fmt::format("{:.10g}", v); }

std::vector<double> metric_values(const ResultRow& r) {
  return {r.mean_evm_db,     r.sir_db,         r.mean_evm_cpe_db, r.sir_cpe_db,       r.pplr_db,
          r.pslr_range_db,   r.pslr_doppler_db, r.islr_range_db,  r.islr_doppler_db,  r.image_sir_mean_db,
          r.image_sir_min_db, r.stripe_mean_db, r.stripe_max_db,  r.runtime_s};
}

void set_metric_values(ResultRow& r, const std::vector<double>& v) {
  double* f[] = {&r.mean_evm_db,     &r.sir_db,          &r.mean_evm_cpe_db, &r.sir_cpe_db,
                 &r.pplr_db,         &r.pslr_range_db,   &r.pslr_doppler_db, &r.islr_range_db,
                 &r.islr_doppler_db, &r.image_sir_mean_db, &r.image_sir_min_db, &r.stripe_mean_db,
                 &r.stripe_max_db,   &r.runtime_s};
  for (std::size_t i = 0; i < v.size(); ++i) *f[i] = v[i];
}

std::string row_key(const ResultRow& r) {
  return fmt::format("{}|{}|{}|{}|{}|{}|{}|{}|{:.17g}", r.kind, to_string(r.mode), to_string(r.engine), r.eta, r.N,
                     r.N_cp, r.M, to_string(r.modulation), r.rms_sj_s);
}
}  // namespace

std::string csv_row(const ResultRow& r) {
  std::string s = fmt::format("{},{},{},{},{},{},{},{},{:.6e},{},{},{}", r.kind, to_string(r.mode),
                              to_string(r.engine), r.eta, r.N, cp_label(r.N_cp, r.N), r.M,
                              to_string(r.modulation), r.rms_sj_s, r.seed_index, r.seed_dac, r.seed_adc);
  for (double v : metric_values(r)) s += "," + num(v);
  return s;
}

std::vector<ResultRow> aggregate(const std::vector<ResultRow>& rows) {
  std::vector<ResultRow> out;
  std::map<std::string, std::size_t> index;
  std::vector<std::vector<double>> sums, counts;
  for (const auto& r : rows) {
    const std::string key = row_key(r);
    auto [it, fresh] = index.emplace(key, out.size());
    const auto vals = metric_values(r);
    if (fresh) {
      ResultRow a = r;
      a.seed_index = 0;
      a.seed_dac = a.seed_adc = 0;
      a.evm_per_subcarrier_db.assign(r.evm_per_subcarrier_db.size(), 0.0);
      out.push_back(std::move(a));
      sums.emplace_back(vals.size(), 0.0);
      counts.emplace_back(vals.size(), 0.0);
    }
    const std::size_t i = it->second;
    ++out[i].seed_index;  // number of seeds folded in
    for (std::size_t c = 0; c < vals.size(); ++c)
      if (!std::isnan(vals[c])) {
        sums[i][c] += vals[c];
        counts[i][c] += 1.0;
      }
    auto& k = out[i].evm_per_subcarrier_db;
    for (std::size_t c = 0; c < k.size() && c < r.evm_per_subcarrier_db.size(); ++c) k[c] += r.evm_per_subcarrier_db[c];
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::vector<double> v(sums[i].size());
    for (std::size_t c = 0; c < v.size(); ++c) v[c] = counts[i][c] > 0 ? sums[i][c] / counts[i][c] : kNaN;
    set_metric_values(out[i], v);
    for (double& e : out[i].evm_per_subcarrier_db) e /= out[i].seed_index;
  }
  return out;
}

void report(const std::vector<ResultRow>& rows, const SweepSpec& spec, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto open = [&](const std::filesystem::path& p) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", p.string()));
    return f;
  };
  {
    auto f = open(out_dir / "results.csv");
    f << csv_header() << '\n';
    for (const auto& r : rows) f << csv_row(r) << '\n';
    if (!f) throw std::runtime_error(fmt::format("write failed on '{}'", (out_dir / "results.csv").string()));
  }
  const auto agg = aggregate(rows);
  {
    auto f = open(out_dir / "aggregate.csv");
    std::string hdr = csv_header();
    hdr.replace(hdr.find("seed_index"), 10, "n_seeds");
    f << hdr << '\n';
    for (const auto& r : agg) f << csv_row(r) << '\n';
    if (!f) throw std::runtime_error(fmt::format("write failed on '{}'", (out_dir / "aggregate.csv").string()));
  }
  if (spec.per_subcarrier) {
    const auto dir = out_dir / "evm_per_subcarrier";
    std::filesystem::create_directories(dir);
    for (const auto& r : agg) {
      if (r.evm_per_subcarrier_db.empty()) continue;
      auto f = open(dir / fmt::format("{}_eta{}_N{}_cp{}_{}_rms{:.3e}.csv", to_string(r.mode), r.eta, r.N, r.N_cp,
                                      to_string(r.modulation), r.rms_sj_s));
      f << "k,evm_db\n";
      for (std::size_t k = 0; k < r.evm_per_subcarrier_db.size(); ++k)
        f << fmt::format("{},{:.10g}\n", static_cast<long>(k) - r.N / 2, r.evm_per_subcarrier_db[k]);
    }
  }

  auto jnum = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["kind"] = spec.kind == SweepKind::Comm ? "comm" : "radar";
  summary["engine"] = std::string(to_string(spec.engine));
  summary["base_seed"] = spec.base_seed;
  summary["seeds"] = spec.seeds;
  summary["interpolator"] = "cubic Lagrange, 4-tap Farrow form, edge clamp";
  summary["converter"] = {{"upsample", spec.converter.upsample},
                          {"half_taps", spec.converter.half_taps},
                          {"kaiser_beta", spec.converter.kaiser_beta}};
  summary["evm_convention"] = "mean of per-subcarrier dB, frame LS gain removed";
  summary["aggregation"] = "arithmetic mean of dB values over seeds";
  if (spec.kind == SweepKind::Radar) {
    json tg = json::array();
    for (const auto& t : spec.radar.targets) tg.push_back({{"range_m", t.range_m}, {"doppler_norm", t.doppler_norm}});
    summary["radar"] = {{"targets", tg},
                        {"cut_window", to_string(spec.radar.cut_window)},
                        {"cut_zp", spec.radar.cut_zp},
                        {"image_window", to_string(spec.radar.image_window)},
                        {"image_zp", spec.radar.image_zp}};
  }
  json arr = json::array();
  const auto& cols = csv_columns();
  for (const auto& r : agg) {
    json o;
    o["mode"] = std::string(to_string(r.mode));
    o["eta"] = r.eta;
    o["N"] = r.N;
    o["N_cp"] = r.N_cp;
    o["M"] = r.M;
    o["modulation"] = std::string(to_string(r.modulation));
    o["rms_sj_s"] = r.rms_sj_s;
    o["n_seeds"] = r.seed_index;
    const auto vals = metric_values(r);
    for (std::size_t c = 0; c < vals.size(); ++c) o[cols[12 + c]] = jnum(vals[c]);
    arr.push_back(std::move(o));
  }
  summary["aggregate"] = std::move(arr);
  auto f = open(out_dir / "summary.json");
  f << summary.dump(2) << '\n';
  if (!f) throw std::runtime_error(fmt::format("write failed on '{}'", (out_dir / "summary.json").string()));
}

}  // namespace sjisac
