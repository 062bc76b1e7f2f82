// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sjisac/radar.hpp"

using namespace sjisac;

namespace {

OfdmConfig frame(int N, int M, int N_cp) {
  OfdmConfig c;
  c.N = N;
  c.M = M;
  c.N_cp = N_cp;
  return c;
}

SymbolGrid grid(const OfdmConfig& c, std::uint64_t seed) {
  return map_symbols(random_bits(static_cast<std::size_t>(c.N) * c.M * bits_per_symbol(c.modulation), seed), c);
}

RadarImage blank(int P, int Q) {
  RadarImage img;
  img.P = P;
  img.Q = Q;
  img.power.assign(static_cast<std::size_t>(P) * Q, 0.0f);
  return img;
}

void set(RadarImage& img, int p, int q, float v) { img.power[static_cast<std::size_t>(p) * img.Q + q] = v; }

}  // namespace

TEST_CASE("Chebyshev window matches the Dolph construction") {
  const auto w = make_window({WindowType::Chebyshev, 100.0}, 128);
  CHECK(w[0] == doctest::Approx(0.0004232940803).epsilon(1e-8));
  CHECK(w[10] == doctest::Approx(0.008973127408).epsilon(1e-8));
  CHECK(w[63] == doctest::Approx(1.0));
  const auto o = make_window({WindowType::Chebyshev, 60.0}, 9);
  const double want[9] = {0.0518685636, 0.2271239336, 0.5379172016, 0.8604844374, 1.0,
                          0.8604844374, 0.5379172016, 0.2271239336, 0.0518685636};
  for (int i = 0; i < 9; ++i) CHECK(o[static_cast<std::size_t>(i)] == doctest::Approx(want[i]).epsilon(1e-8));
  CHECK(parse_window("cheb:80").sidelobe_db == 80.0);
  CHECK(parse_window("rect").type == WindowType::Rectangular);
  CHECK_THROWS_AS(parse_window("hann"), ConfigError);
}

TEST_CASE("mainlobe half widths") {
  CHECK(mainlobe_halfwidth_bins({WindowType::Rectangular, 0}, 64) == doctest::Approx(1.0));
  const double c = mainlobe_halfwidth_bins({WindowType::Chebyshev, 100.0}, 2048);
  CHECK(c > 3.5);
  CHECK(c < 4.0);
}

TEST_CASE("apply_targets") {
  const auto c = frame(64, 8, 32);
  const auto X = grid(c, 1);
  const Target unit{0.0, 0.0, {1.0, 0.0}};
  const auto I = apply_targets(X, std::span(&unit, 1), c);
  for (std::size_t i = 0; i < X.data.size(); ++i) CHECK(std::abs(I.data[i] - X.data[i]) < 1e-15);

  const Target t10{10.0, 0.0, {1.0, 0.0}};
  const auto R = apply_targets(X, std::span(&t10, 1), c);
  const double tau = 10.0 / 299792458.0;
  CHECK(tau == doctest::Approx(33.356e-9).epsilon(1e-4));
  const double slope = -2.0 * kPi * c.delta_f() * tau;
  for (int k = 1; k < c.N; ++k) {
    const cplx d = (R.at(k, 3) / X.at(k, 3)) / (R.at(k - 1, 3) / X.at(k - 1, 3));
    CHECK(std::arg(d) == doctest::Approx(slope).epsilon(1e-9));
  }

  const Target far{100.0, 0.0, {1.0, 0.0}};
  CHECK_THROWS_AS(apply_targets(X, std::span(&far, 1), c), ConfigError);
  const Target fast{1.0, 0.6, {1.0, 0.0}};
  CHECK_THROWS_AS(apply_targets(X, std::span(&fast, 1), c), ConfigError);
}

TEST_CASE("two targets are found at their coordinates") {
  const auto c = frame(256, 64, 64);
  const auto X = grid(c, 2);
  const std::vector<Target> ts{{10.0, 0.0, {1, 0}}, {15.0, 0.1, {1, 0}}};
  const auto img = range_doppler(apply_targets(X, ts, c), X, {WindowType::Chebyshev, 100}, {WindowType::Chebyshev, 100}, 4, c);
  const double range_cell = kSpeedOfLight / c.B_hz, dop_cell = 1.0 / (c.M * c.T_sym() * c.delta_f());
  for (const auto& t : ts) {
    const Peak p = locate_target(img, t);
    CHECK(std::abs(img.range_of(p.p) - t.range_m) <= 0.5 * range_cell);
    CHECK(std::abs(img.doppler_of(p.q) - t.doppler_norm) <= 0.5 * dop_cell);
  }
}

TEST_CASE("rectangular windows: Dirichlet kernel energy and sidelobes") {
  const auto c = frame(256, 32, 64);
  const auto X = grid(c, 3);
  const Target on_grid{0.0, 0.0, {1, 0}};
  const int zp = 8;
  const auto img = range_doppler(apply_targets(X, std::span(&on_grid, 1), c), X, {}, {}, zp, c);
  double total = 0;
  for (float v : img.power) total += v;
  const Peak pk = find_peak(img);
  CHECK(pk.power / total == doctest::Approx(1.0 / (zp * zp)).epsilon(1e-5));
  CHECK(pk.power == doctest::Approx(std::pow(c.N * c.M, 2)).epsilon(1e-5));
  // The zero-padded grid samples the first sidelobe slightly off its crest.
  for (auto ax : {CutAxis::Range, CutAxis::Doppler}) {
    const double v = pslr_cut(img, pk, ax);
    CHECK(v <= -13.26);
    CHECK(v > -13.6);
  }
}

TEST_CASE("Chebyshev 100 dB windows keep all cut sidelobes below -100 dB") {
  const auto c = frame(256, 64, 64);
  const auto X = grid(c, 4);
  const Target t{7.3, 0.05, {1, 0}};
  const WindowSpec ch{WindowType::Chebyshev, 100};
  const auto img = range_doppler(apply_targets(X, std::span(&t, 1), c), X, ch, ch, 4, c);
  const Peak pk = locate_target(img, t);
  CHECK(pslr_cut(img, pk, CutAxis::Range) < -99.9);
  CHECK(pslr_cut(img, pk, CutAxis::Doppler) < -99.9);

  const Peak only[1] = {pk};
  const auto s = image_sir(img, only, default_exclusion(img, c));
  CHECK(s.mean_db >= 100.0);
  CHECK(s.min_db >= 99.9);
}

TEST_CASE("PPLR") {
  auto a = blank(8, 8);
  set(a, 3, 4, 2.0f);
  CHECK(pplr(a, a) == 0.0);
  auto b = a;
  set(b, 3, 4, 1.0f);
  CHECK(pplr(b, a) == doctest::Approx(-3.0103).epsilon(1e-4));
  CHECK_THROWS_AS(pplr(blank(4, 4), a), DetectionError);
}

TEST_CASE("PSLR and ISLR on synthetic cuts") {
  // Mainlobe {0.5, 1, 0.5} flanked by minima and one sidelobe at -20 dB.
  rvec cut(32, 0.0);
  cut[10] = 1.0;
  cut[9] = cut[11] = 0.5;
  cut[20] = 0.01;
  CHECK(pslr_1d(cut, 10) == doctest::Approx(-20.0).epsilon(1e-12));
  CHECK(islr_1d(cut, 10) == doctest::Approx(10.0 * std::log10(0.01 / 2.0)).epsilon(1e-12));

  rvec lone(16, 0.0);
  lone[3] = 1.0;
  CHECK(pslr_1d(lone, 3) == kFloorDb);
  CHECK(islr_1d(lone, 3) == kFloorDb);
}

TEST_CASE("image SIR and stripe metric on synthetic images") {
  auto img = blank(64, 32);
  img.zp = 1;
  for (auto& v : img.power) v = 1e-6f;
  set(img, 20, 16, 1.0f);
  // A ridge along Doppler at the target range, 100x the floor.
  for (int q = 0; q < 32; ++q)
    if (std::abs(q - 16) > 2) set(img, 20, q, 1e-4f);
  const Peak pk{20, 16, 1.0};
  const Exclusion ex{2, 2};
  const Peak ts[1] = {pk};
  const auto s = image_sir(img, ts, ex);
  const double n_ridge = 32 - 5, n_all = 64.0 * 32 - 25;
  const double mean = (n_ridge * 1e-4 + (n_all - n_ridge) * 1e-6) / n_all;
  CHECK(s.mean_db == doctest::Approx(-10.0 * std::log10(mean)).epsilon(1e-4));
  CHECK(s.min_db == doctest::Approx(40.0).epsilon(1e-4));
  const auto st = stripe_metric(img, ts, ex);
  CHECK(st.ridge_mean_db == doctest::Approx(20.0).epsilon(1e-4));
  CHECK(st.ridge_max_db == doctest::Approx(20.0).epsilon(1e-4));

  CHECK_THROWS_AS(image_sir(img, ts, Exclusion{64, 32}), ConfigError);
}

TEST_CASE("image files carry a header") {
  auto img = blank(4, 2);
  img.zp = 2;
  set(img, 1, 1, 3.0f);
  const auto path = std::filesystem::temp_directory_path() / "sjisac_img.bin";
  write_image(path, img);
  CHECK(std::filesystem::file_size(path) == 8 * sizeof(double));
  std::ifstream h(path.string() + ".hdr");
  std::string first;
  std::getline(h, first);
  CHECK(first.find("float64") != std::string::npos);
  std::filesystem::remove(path);
  std::filesystem::remove(path.string() + ".hdr");
}
