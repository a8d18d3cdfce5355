#include <doctest.h>

#include <algorithm>
#include <random>

#include "sr/ctmn.hpp"

using namespace sr;
using namespace sr::ctmn;

namespace {

const StateInfo* find_state(const Graph& g, const std::string& label) {
  for (const StateInfo& s : g.states)
    if (s.label == label) return &s;
  return nullptr;
}

int state_index(const Graph& g, const std::string& label) {
  for (std::size_t i = 0; i < g.states.size(); ++i)
    if (g.states[i].label == label) return static_cast<int>(i);
  return -1;
}

Deployment single_bss() {
  Deployment d;
  d.bsses.push_back({{0.0, 0.0}, {{4.0, 0.0}}, 1, std::nullopt, 1});
  return d;
}

}  // namespace

TEST_CASE("channel access rate from the mean continuous backoff") {
  MacParams mac;
  CHECK(default_lambda(mac) == doctest::Approx(1.0 / (7.5 * 9e-6)));
  CHECK(default_lambda(mac) == doctest::Approx(14814.8).epsilon(1e-4));
}

TEST_CASE("single BSS solves to the birth-death closed form") {
  const Deployment d = single_bss();
  std::vector<SrConfig> cfg(1);
  cfg[0].tx_pwr = 20.0;
  PhyParams phy;
  MacParams mac;
  const Solution sol = solve(d, cfg, phy, mac);
  REQUIRE(sol.graph.states.size() == 2);

  const double lambda = sol.lambda;
  const double mu = 1.0 / sol.graph.states[1].service_s[0];
  CHECK(sol.pi[0] == doctest::Approx(mu / (lambda + mu)).epsilon(1e-12));
  CHECK(sol.pi[1] == doctest::Approx(lambda / (lambda + mu)).epsilon(1e-12));

  const double rate = sol.graph.states[1].delivered_bps[0];
  CHECK(sol.throughput_bps[0] == doctest::Approx(rate * lambda / (lambda + mu)).epsilon(1e-12));
}

TEST_CASE("generator rows sum to zero and the solve is a stationary point") {
  const Deployment d = toy_scenario(2);
  auto cfg = toy_configs(d);
  for (auto& c : cfg) {
    c.obss_pd_non_srg = -78;
    c.obss_pd_srg = -76;
  }
  PhyParams phy;
  MacParams mac;
  const Graph g = enumerate_states(d, cfg, phy, mac);
  const auto subset = g.reachable_indices();
  const Eigen::MatrixXd Q = build_generator(g, default_lambda(mac), subset);
  for (int i = 0; i < Q.rows(); ++i) {
    CHECK(Q.row(i).sum() == doctest::Approx(0.0).epsilon(1e-9));
    for (int j = 0; j < Q.cols(); ++j)
      if (i != j) CHECK(Q(i, j) >= 0.0);
  }
  const Eigen::VectorXd pi = stationary_distribution(Q);
  CHECK((pi.transpose() * Q).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < pi.size(); ++i) CHECK(pi(i) >= 0.0);
}

TEST_CASE("toy 1 legacy chain enumerates AB but cannot reach it") {
  const Deployment d = toy_scenario(1);
  const auto cfg = toy_configs(d);
  PhyParams phy;
  MacParams mac;
  const Graph g = enumerate_states(d, cfg, phy, mac);

  REQUIRE(g.states.size() == 4);
  const StateInfo* ab = find_state(g, "A B");
  REQUIRE(ab != nullptr);
  CHECK(!ab->reachable);
  const int ab_idx = state_index(g, "A B");
  for (const Transition& t : g.transitions) CHECK(t.to != ab_idx);
  CHECK(find_state(g, "(empty)")->reachable);
  CHECK(find_state(g, "A")->reachable);
  CHECK(find_state(g, "B")->reachable);
}

TEST_CASE("toy 1 SR chain gains A_SR with no inbound edge from the empty state") {
  const Deployment d = toy_scenario(1);
  auto cfg = toy_configs(d);
  cfg[0].obss_pd_non_srg = -78;
  PhyParams phy;
  MacParams mac;
  const Graph g = enumerate_states(d, cfg, phy, mac);

  const int a_sr = state_index(g, "A_SR");
  REQUIRE(a_sr >= 0);
  CHECK(g.states[a_sr].reachable);
  const int empty = state_index(g, "(empty)");
  const int a_sr_b = state_index(g, "A_SR B");
  REQUIRE(a_sr_b >= 0);
  for (const Transition& t : g.transitions) {
    if (t.to == a_sr) CHECK(t.from == a_sr_b);  // only by B departing
    CHECK(!(t.from == empty && t.to == a_sr));
  }
  // The SR mode carries the power cap of the threshold that was used.
  CHECK(g.states[a_sr].active[0].tx_pwr_dbm == doctest::Approx(17.0));
}

TEST_CASE("toy 1 throughput: equal split below the threshold, SR gains above") {
  const Deployment d = toy_scenario(1);
  const auto base = toy_configs(d);
  PhyParams phy;
  MacParams mac;
  const Solution legacy = solve(d, base, phy, mac);
  CHECK(legacy.throughput_bps[0] ==
        doctest::Approx(legacy.throughput_bps[1]).epsilon(1e-12));

  for (int t = -82; t <= -62; ++t) {
    auto cfg = base;
    cfg[0].obss_pd_non_srg = t;
    const Solution s = solve(d, cfg, phy, mac);
    if (t < -78) {
      CHECK(s.throughput_bps[0] == doctest::Approx(s.throughput_bps[1]).epsilon(1e-9));
      CHECK(s.throughput_bps[0] == doctest::Approx(legacy.throughput_bps[0]).epsilon(1e-9));
    } else {
      CHECK(s.throughput_bps[0] > legacy.throughput_bps[0]);
    }
  }
}

TEST_CASE("toy 1 both-SR is symmetric and dominated by two-active states") {
  const Deployment d = toy_scenario(1);
  const auto base = toy_configs(d);
  PhyParams phy;
  MacParams mac;
  for (int t = -82; t <= -62; ++t) {
    auto cfg = base;
    cfg[0].obss_pd_non_srg = t;
    cfg[1].obss_pd_non_srg = t;
    const Solution s = solve(d, cfg, phy, mac);
    CHECK(s.throughput_bps[0] == doctest::Approx(s.throughput_bps[1]).epsilon(1e-6));
    if (t >= -78) {
      double two_active = 0.0;
      for (std::size_t i = 0; i < s.graph.states.size(); ++i)
        if (s.graph.states[i].active.size() == 2) two_active += s.pi[i];
      CHECK(two_active >= 0.85);
    }
  }
}

TEST_CASE("removing SR reproduces the legacy chain exactly") {
  const Deployment d = toy_scenario(2);
  const auto base = toy_configs(d);
  PhyParams phy;
  MacParams mac;
  auto all_cca = base;
  for (auto& c : all_cca) {
    c.obss_pd_non_srg = c.cca_cs;
    c.obss_pd_srg = c.cca_cs;
  }
  const Solution legacy = solve(d, base, phy, mac);
  const Solution nosr = solve(d, all_cca, phy, mac);
  REQUIRE(legacy.graph.states.size() == nosr.graph.states.size());
  for (std::size_t i = 0; i < legacy.graph.states.size(); ++i) {
    CHECK(legacy.graph.states[i].label == nosr.graph.states[i].label);
    CHECK(legacy.pi[i] == doctest::Approx(nosr.pi[i]).epsilon(1e-12));
  }
}

TEST_CASE("raising a threshold never removes legacy-reachable states") {
  std::mt19937 rng(17);
  PhyParams phy;
  MacParams mac;
  for (int iter = 0; iter < 30; ++iter) {
    Deployment d;
    const int n = 2 + static_cast<int>(rng() % 2);
    for (int b = 0; b < n; ++b) {
      const double x = static_cast<double>(rng() % 120) / 10.0;
      const double y = static_cast<double>(rng() % 120) / 10.0;
      d.bsses.push_back({{x, y}, {{x + 1.0, y}}, b + 1, std::nullopt, 1});
    }
    std::vector<SrConfig> base(static_cast<std::size_t>(n));
    const Graph legacy = enumerate_states(d, base, phy, mac);
    auto cfg = base;
    cfg[rng() % n].obss_pd_non_srg = -82 + static_cast<int>(rng() % 21);
    const Graph sr = enumerate_states(d, cfg, phy, mac);
    for (const StateInfo& s : legacy.states) {
      if (!s.reachable) continue;
      const StateInfo* match = find_state(sr, s.label);
      REQUIRE(match != nullptr);
      CHECK(match->reachable);
    }
  }
}

TEST_CASE("toy 2 with the calibrated SRG point: C peaks while A and B starve") {
  const Deployment d = toy_scenario(2);
  const auto base = toy_configs(d);
  PhyParams phy;
  MacParams mac;
  const Solution legacy = solve(d, base, phy, mac);
  auto cfg = base;
  for (auto& c : cfg) {
    c.obss_pd_non_srg = -82;
    c.obss_pd_srg = -78;
  }
  const Solution s = solve(d, cfg, phy, mac);
  // C rides on top of the SRG pair: above both its own legacy share and
  // the paired BSSs, which fall back toward mutual-SR levels.
  CHECK(s.throughput_bps[2] > 1.5 * legacy.throughput_bps[2]);
  CHECK(s.throughput_bps[2] > 1.3 * s.throughput_bps[0]);
  CHECK(s.throughput_bps[0] == doctest::Approx(s.throughput_bps[1]).epsilon(1e-9));
}

TEST_CASE("state cap guards combinatorial blow-up") {
  const Deployment d = toy_scenario(2);
  const auto cfg = toy_configs(d);
  PhyParams phy;
  MacParams mac;
  Options opt;
  opt.state_cap = 3;
  CHECK_THROWS_AS(enumerate_states(d, cfg, phy, mac, opt), std::runtime_error);
}

TEST_CASE("graph dump uses subscripted state labels") {
  const Deployment d = toy_scenario(1);
  auto cfg = toy_configs(d);
  cfg[0].obss_pd_non_srg = -78;
  PhyParams phy;
  MacParams mac;
  const Graph g = enumerate_states(d, cfg, phy, mac);
  const std::string dump = dump_graph(g);
  CHECK(dump.find("A_SR B") != std::string::npos);
  CHECK(dump.find("[unreachable]") != std::string::npos);
  CHECK(dump.find("arrival") != std::string::npos);
}
