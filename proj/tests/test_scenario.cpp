#include <doctest.h>

#include "sr/ctmn.hpp"
#include "sr/desim.hpp"
#include "sr/rng.hpp"
#include "sr/scenario.hpp"

using namespace sr;

TEST_CASE("toy scenario coordinates") {
  const Deployment t1 = toy_scenario(1);
  REQUIRE(t1.bsses.size() == 2);
  CHECK(t1.bsses[0].ap.x == 4.0);
  CHECK(t1.bsses[0].ap.y == 0.0);
  CHECK(t1.bsses[1].ap.x == 6.0);
  CHECK(t1.bsses[0].stas[0].x == 0.0);
  CHECK(t1.bsses[1].stas[0].x == 8.0);
  CHECK(distance(t1.bsses[0].ap, t1.bsses[0].stas[0]) == doctest::Approx(4.0));

  const Deployment t2 = toy_scenario(2);
  REQUIRE(t2.bsses.size() == 3);
  CHECK(t2.bsses[2].stas[0].x == 6.0);
  CHECK(t2.bsses[2].stas[0].y == 9.0);
  CHECK(t2.bsses[0].srg == 1);
  CHECK(t2.bsses[1].srg == 1);
  CHECK(t2.bsses[2].srg == 2);

  CHECK_THROWS_AS(toy_scenario(3), std::invalid_argument);
}

TEST_CASE("toy configs carry the defaults and SRG bitmaps") {
  const Deployment t2 = toy_scenario(2);
  const auto cfg = toy_configs(t2);
  for (const SrConfig& c : cfg) {
    CHECK(c.tx_pwr == 20.0);
    CHECK(c.cca_cs == -82.0);
    CHECK(c.tx_pwr_ref == 21.0);
  }
  CHECK(cfg[0].srg_enabled);
  CHECK((cfg[0].srg_color_bitmap & (1ull << 2)) != 0);  // A groups with B
  CHECK((cfg[0].srg_color_bitmap & (1ull << 3)) == 0);  // but not with C
  CHECK((cfg[2].srg_color_bitmap & (1ull << 3)) != 0);
}

TEST_CASE("random grid pins the center AP and stays within cells") {
  for (std::uint64_t seed : {1ull, 2ull, 42ull}) {
    const Deployment d = random_grid(25.0, seed);
    REQUIRE(d.bsses.size() == 9);
    CHECK(d.bsses[0].ap.x == 12.5);
    CHECK(d.bsses[0].ap.y == 12.5);
    int nodes = 0;
    for (const Bss& b : d.bsses) nodes += 1 + static_cast<int>(b.stas.size());
    CHECK(nodes == 18);
  }

  // Determinism.
  const Deployment a = random_grid(15.0, 7);
  const Deployment b = random_grid(15.0, 7);
  for (std::size_t i = 0; i < a.bsses.size(); ++i) {
    CHECK(a.bsses[i].ap.x == b.bsses[i].ap.x);
    CHECK(a.bsses[i].stas[0].y == b.bsses[i].stas[0].y);
  }

  // STA of BSS k lies in cell k, across many seeds.
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const Deployment d = random_grid(15.0, seed);
    const double cell = 5.0;
    // Cell order: center first, then row-major around it.
    const std::pair<int, int> cells[9] = {{1, 1}, {0, 0}, {0, 1}, {0, 2}, {1, 0},
                                          {1, 2}, {2, 0}, {2, 1}, {2, 2}};
    for (int k = 0; k < 9; ++k) {
      const Position p = d.bsses[k].stas[0];
      CHECK(p.x >= cells[k].second * cell);
      CHECK(p.x <= (cells[k].second + 1) * cell);
      CHECK(p.y >= cells[k].first * cell);
      CHECK(p.y <= (cells[k].first + 1) * cell);
    }
  }
  CHECK_THROWS_AS(random_grid(0.0, 1), std::invalid_argument);
}

TEST_CASE("scenario files parse, validate and round-trip") {
  const char* text = R"(# two BSS toy file
[phy]
noise_dbm = -95
mcs_table = toy

[mac]
cw = 15

[deployment]
map = 8x0
bss = ap:4,0 sta:0,0 color:1
bss = ap:6,0 sta:8,0 color:2 obss_pd_dbm:-78

[sweep]
obss_pd = -82..-62:1
sr_mode = only_a
seeds = 1..3
)";
  const Scenario s = parse_scenario(text);
  REQUIRE(s.deployment.bsses.size() == 2);
  CHECK(s.configs[1].obss_pd_non_srg == -78.0);
  CHECK(s.sweep.obss_pd_values.size() == 21);
  CHECK(s.sweep.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(s.mac.cw == 15);

  const std::string canon = serialize_scenario(s);
  const Scenario again = parse_scenario(canon);
  CHECK(serialize_scenario(again) == canon);
  REQUIRE(again.deployment.bsses.size() == s.deployment.bsses.size());
  for (std::size_t i = 0; i < s.deployment.bsses.size(); ++i) {
    CHECK(again.deployment.bsses[i].ap.x == s.deployment.bsses[i].ap.x);
    CHECK(again.deployment.bsses[i].stas[0].y == s.deployment.bsses[i].stas[0].y);
    CHECK(again.configs[i].obss_pd_non_srg == s.configs[i].obss_pd_non_srg);
  }
}

TEST_CASE("a minimal file picks up every default") {
  const Scenario s = parse_scenario("[deployment]\n"
                                    "map = 10x10\n"
                                    "bss = ap:1,1 sta:2,2 color:1\n");
  CHECK(s.phy.noise_dbm == -95.0);
  CHECK(s.phy.n_sc == 234);
  CHECK(s.phy.sym_s == doctest::Approx(16e-6));
  CHECK(s.mac.cw == 15);
  CHECK(s.mac.l_data_bits == 12000);
  CHECK(s.mac.n_agg_max == 64);
  CHECK(s.configs[0].tx_pwr == 20.0);
  CHECK(s.configs[0].cca_cs == -82.0);
  CHECK(s.sweep.obss_pd_values.size() == 21);  // -82..-62 in 1 dBm steps
}

TEST_CASE("scenario parser rejects bad input with diagnostics") {
  // Unknown key.
  try {
    parse_scenario("[phy]\nfoo = 1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.field() == "foo");
  }

  // Out-of-range threshold.
  CHECK_THROWS_AS(parse_scenario("[deployment]\n"
                                 "map = 10x10\n"
                                 "bss = ap:1,1 sta:2,2 color:1 obss_pd_dbm:-61\n"),
                  ParseError);

  // Node outside the map bounds.
  CHECK_THROWS_AS(parse_scenario("[deployment]\n"
                                 "map = 5x5\n"
                                 "bss = ap:1,1 sta:9,1 color:1\n"),
                  ParseError);

  // Swept value outside the allowed band.
  CHECK_THROWS_AS(parse_scenario("[deployment]\n"
                                 "map = 10x10\n"
                                 "bss = ap:1,1 sta:2,2 color:1\n"
                                 "[sweep]\n"
                                 "obss_pd = -90,-82\n"),
                  ParseError);

  CHECK_THROWS_AS(parse_scenario("[nope]\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("key_without_section = 1\n"), ParseError);
}

TEST_CASE("deterministic rng draws are portable and in range") {
  DetRng rng(123);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double e = rng.exponential(100.0);
    CHECK(e >= 0.0);
  }
  DetRng a(9), b(9);
  for (int i = 0; i < 100; ++i) CHECK(a.uniform01() == b.uniform01());
}

TEST_CASE("engines reject multi-STA deployments explicitly") {
  Deployment d = toy_scenario(1);
  d.bsses[0].stas.push_back({1.0, 0.0});
  PhyParams phy;
  MacParams mac;
  CHECK_THROWS_AS(ctmn::enumerate_states(d, toy_configs(toy_scenario(1)), phy, mac),
                  std::invalid_argument);
  sim::SimParams p;
  p.duration_s = 0.1;
  CHECK_THROWS_AS(sim::run_simulation(d, toy_configs(toy_scenario(1)), phy, mac, p),
                  std::invalid_argument);
}
