#include <doctest.h>

#include <cmath>
#include <set>

#include "uvlce/channel.hpp"
#include "uvlce/config.hpp"
#include "uvlce/errors.hpp"

using namespace uvlce;

TEST_CASE("attenuation_at evaluates the quasi-linear fit") {
  CHECK(attenuation_at(0.0, {1e-15, 0.15}) == doctest::Approx(0.15));
  CHECK(attenuation_at(123e6, {0.0, 0.3}) == doctest::Approx(0.3));
  CHECK(attenuation_at(1e6, {2e-15, 0.1}) == doctest::Approx(0.1 + 2e-9));
}

TEST_CASE("cfr_at sums attenuated path contributions") {
  const PathSet one{{{1.0, 0.0}}};
  CHECK(cfr_at(5e6, one, {1e-8, 0.2}) == doctest::Approx(1.0));

  const PathSet unit{{{1.0, 1.0}}};
  CHECK(cfr_at(7.7e6, unit, {0.0, 0.5}) == doctest::Approx(std::exp(-0.5)));

  const PathSet split{{{0.5, 2.5}, {0.5, 2.5}}};
  const PathSet whole{{{1.0, 2.5}}};
  const AttenuationModel m{3e-9, 0.3};
  CHECK(cfr_at(4e6, split, m) == doctest::Approx(cfr_at(4e6, whole, m)));
}

TEST_CASE("sample_pilots is flat for zero-distance or zero-slope channels") {
  const PilotGrid g{1e6, 9e6, 2};
  const PathSet flat{{{1.0, 0.0}}};
  const auto y = sample_pilots(flat, g, {2e-9, 0.2});
  REQUIRE(y.size() == 2);
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(1.0));

  const PathSet ch{{{0.7, 3.0}, {0.2, 8.0}}};
  const auto y2 = sample_pilots(ch, {1e6, 9e6, 5}, {0.0, 0.31});
  for (std::size_t i = 1; i < y2.size(); ++i) CHECK(y2[i] == doctest::Approx(y2[0]));
}

TEST_CASE("sample_pilots decreases strictly with pilot index for one path and c1 > 0") {
  const PilotGrid g{0.0, 30e6, 16};
  const auto y = sample_pilots(PathSet{{{0.8, 4.0}}}, g, {1e-8, 0.15});
  for (std::size_t i = 1; i < y.size(); ++i) CHECK(y[i] < y[i - 1]);
}

TEST_CASE("quantize_paths places quantized amplitudes on the grid") {
  const DistanceGrid dg{0.1, 12.0};
  const PilotGrid g{0.0, 30e6, 8};

  SUBCASE("zero-distance path lands in bin 0 with untouched amplitude") {
    const auto x = quantize_paths(PathSet{{{1.0, 0.0}}}, dg, g, {2e-8, 0.15});
    CHECK(x[0] == doctest::Approx(1.0));
    for (std::size_t k = 1; k < x.size(); ++k) CHECK(x[k] == 0.0);
  }

  SUBCASE("no attenuation keeps the raw amplitude") {
    // degenerate model (c1 = c2 = 0) isolates the pure binning behaviour
    const auto x = quantize_paths(PathSet{{{2.0, 0.3}}}, dg, g, {0.0, 0.0});
    CHECK(x[3] == 2.0);
    int nnz = 0;
    for (double v : x) nnz += v != 0.0;
    CHECK(nnz == 1);
  }

  SUBCASE("paths closer than the step collide") {
    const PathSet ch{{{1.0, 0.50}, {0.5, 0.52}}};
    CHECK_THROWS_AS(quantize_paths(ch, dg, g, {2e-8, 0.15}), IndexCollision);
  }

  SUBCASE("sparsity matches the path count") {
    Rng rng(99);
    const ChannelGenConfig cfg{6, 0.5, 1.0, 0.05, 0.5, false};
    for (int trial = 0; trial < 50; ++trial) {
      const PathSet ch = random_channel(rng, cfg, dg);
      const auto x = quantize_paths(ch, dg, g, {2e-8, 0.15});
      int nnz = 0;
      for (double v : x) nnz += v != 0.0;
      CHECK(nnz == 6);
      for (double v : x)
        if (v != 0.0) CHECK(v > 0.0);
    }
  }
}

TEST_CASE("reconstruct_paths inverts quantize_paths on the grid") {
  const SystemConfig cfg = default_config();
  const DistanceGrid dg = cfg.grid;
  const PilotGrid g = cfg.pilots;
  const AttenuationModel m = cfg.attenuation;

  SUBCASE("round trip over many random channels") {
    Rng rng(1234);
    for (int trial = 0; trial < 200; ++trial) {
      const PathSet ch = random_channel(rng, cfg.gen, dg);
      const auto x = quantize_paths(ch, dg, g, m);
      const PathSet back = reconstruct_paths(x, dg, g, m, 0.0);
      REQUIRE(back.paths.size() == ch.paths.size());
      for (std::size_t i = 0; i < ch.paths.size(); ++i) {
        CHECK(back.paths[i].distance == doctest::Approx(ch.paths[i].distance).epsilon(1e-10));
        CHECK(back.paths[i].alpha == doctest::Approx(ch.paths[i].alpha).epsilon(1e-10));
      }
    }
  }

  SUBCASE("all-zero proxy reconstructs to an empty path set") {
    CHECK(reconstruct_paths(SparseProxy(dg.size(), 0.0), dg, g, m, 0.0).paths.empty());
  }

  SUBCASE("threshold drops small entries") {
    SparseProxy x(dg.size(), 0.0);
    x[4] = 1e-9;
    x[10] = 0.5;
    const PathSet got = reconstruct_paths(x, dg, g, m, 1e-6);
    REQUIRE(got.paths.size() == 1);
    CHECK(got.paths[0].distance == doctest::Approx(1.0));
  }
}

TEST_CASE("random_channel draws valid deterministic channels") {
  const DistanceGrid dg{0.1, 12.0};

  SUBCASE("single path") {
    Rng rng(5);
    const ChannelGenConfig cfg{1, 0.5, 1.0, 0.05, 0.5, false};
    CHECK(random_channel(rng, cfg, dg).paths.size() == 1);
  }

  SUBCASE("same seed gives identical channels") {
    const ChannelGenConfig cfg{6, 0.5, 1.0, 0.05, 0.5, false};
    Rng a(77), b(77);
    const PathSet ca = random_channel(a, cfg, dg);
    const PathSet cb = random_channel(b, cfg, dg);
    REQUIRE(ca.paths.size() == cb.paths.size());
    for (std::size_t i = 0; i < ca.paths.size(); ++i) {
      CHECK(ca.paths[i].alpha == cb.paths[i].alpha);
      CHECK(ca.paths[i].distance == cb.paths[i].distance);
    }
  }

  SUBCASE("too many paths for the grid") {
    Rng rng(5);
    const ChannelGenConfig cfg{dg.size() + 1, 0.5, 1.0, 0.05, 0.5, false};
    CHECK_THROWS_AS(random_channel(rng, cfg, dg), ConfigError);
  }

  SUBCASE("paths are sorted, on-grid, distinct, with the LoS amplitude range first") {
    Rng rng(31);
    const ChannelGenConfig cfg{8, 0.5, 1.0, 0.05, 0.5, false};
    for (int trial = 0; trial < 30; ++trial) {
      const PathSet ch = random_channel(rng, cfg, dg);
      std::set<int> bins;
      for (std::size_t i = 0; i < ch.paths.size(); ++i) {
        if (i > 0) CHECK(ch.paths[i].distance > ch.paths[i - 1].distance);
        bins.insert(quantize_index(ch.paths[i].distance, dg.step));
      }
      CHECK(bins.size() == ch.paths.size());
      CHECK(ch.paths[0].alpha >= 0.5);
      CHECK(ch.paths[0].alpha <= 1.0);
    }
  }

  SUBCASE("off-grid channels avoid bin collisions") {
    Rng rng(13);
    ChannelGenConfig cfg{6, 0.5, 1.0, 0.05, 0.5, true};
    for (int trial = 0; trial < 20; ++trial) {
      const PathSet ch = random_channel(rng, cfg, dg);
      std::set<int> bins;
      for (const Path& p : ch.paths) bins.insert(quantize_index(p.distance, dg.step));
      CHECK(bins.size() == ch.paths.size());
    }
  }
}

TEST_CASE("distance grid size snaps exact multiples") {
  CHECK(DistanceGrid{0.1, 12.0}.size() == 120);
  CHECK(DistanceGrid{0.3, 14.7}.size() == 49);
  CHECK(DistanceGrid{0.1, 12.05}.size() == 121);
}
