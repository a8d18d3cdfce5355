#include <doctest.h>

#include <random>

#include "sr/srcore.hpp"

using namespace sr;

namespace {

FrameMeta he_frame(int color) {
  FrameMeta f;
  f.format = PpduFormat::He;
  f.bss_color = BssColor(color);
  return f;
}

}  // namespace

TEST_CASE("classify_frame follows the color and SRG rules") {
  SrConfig cfg;
  const BssColor mine(5);

  CHECK(classify_frame(cfg, mine, he_frame(5)) == FrameClass::IntraBss);
  CHECK(classify_frame(cfg, mine, he_frame(7)) == FrameClass::InterBssNonSrg);

  cfg.srg_enabled = true;
  cfg.srg_color_bitmap = 1ull << 7;
  CHECK(classify_frame(cfg, mine, he_frame(7)) == FrameClass::InterBssSrg);

  // VHT: GROUP_ID 0 plus partial-AID bit.
  FrameMeta vht;
  vht.format = PpduFormat::Vht;
  vht.group_id = 0;
  vht.partial_aid = 12;
  cfg.srg_partial_bssid_bitmap = 1ull << 12;
  CHECK(classify_frame(cfg, mine, vht) == FrameClass::InterBssSrg);
  vht.group_id = 3;
  CHECK(classify_frame(cfg, mine, vht) == FrameClass::InterBssNonSrg);

  FrameMeta legacy;
  legacy.format = PpduFormat::Legacy;
  legacy.bssid = 9;
  CHECK(classify_frame(cfg, mine, legacy) == FrameClass::InterBssNonSrg);
  legacy.bssid = 12;
  CHECK(classify_frame(cfg, mine, legacy) == FrameClass::InterBssSrg);

  // SRG disabled at the receiver: bitmap hits stay non-SRG.
  cfg.srg_enabled = false;
  CHECK(classify_frame(cfg, mine, he_frame(7)) == FrameClass::InterBssNonSrg);
}

TEST_CASE("classify_frame rejects frames missing mandatory identity fields") {
  SrConfig cfg;
  FrameMeta he;
  he.format = PpduFormat::He;
  CHECK_THROWS_AS(classify_frame(cfg, BssColor(1), he), std::invalid_argument);
  FrameMeta vht;
  vht.format = PpduFormat::Vht;
  vht.group_id = 0;
  CHECK_THROWS_AS(classify_frame(cfg, BssColor(1), vht), std::invalid_argument);
  FrameMeta legacy;
  legacy.format = PpduFormat::Legacy;
  CHECK_THROWS_AS(classify_frame(cfg, BssColor(1), legacy), std::invalid_argument);
}

TEST_CASE("intra-BSS means equal colors, regardless of every other field") {
  std::mt19937 rng(7);
  for (int i = 0; i < 2000; ++i) {
    SrConfig cfg;
    cfg.srg_enabled = rng() & 1;
    cfg.srg_color_bitmap = rng();
    cfg.srg_partial_bssid_bitmap = rng();
    cfg.non_srg_sr_disallowed = rng() & 1;
    const int mine = 1 + static_cast<int>(rng() % 63);
    const int theirs = 1 + static_cast<int>(rng() % 63);
    const FrameClass cls = classify_frame(cfg, BssColor(mine), he_frame(theirs));
    CHECK((cls == FrameClass::IntraBss) == (mine == theirs));
  }
}

TEST_CASE("effective_sensitivity selects the per-class threshold") {
  SrConfig cfg;
  cfg.obss_pd_non_srg = -72.0;
  CHECK(effective_sensitivity(cfg, FrameClass::IntraBss) == -82.0);
  CHECK(effective_sensitivity(cfg, FrameClass::InterBssNonSrg) == -72.0);

  cfg.non_srg_sr_disallowed = true;
  CHECK(effective_sensitivity(cfg, FrameClass::InterBssNonSrg) == -82.0);
  cfg.non_srg_sr_disallowed = false;

  // SRG disabled: SRG frames fall back to the non-SRG threshold.
  CHECK(effective_sensitivity(cfg, FrameClass::InterBssSrg) == -72.0);
  cfg.srg_enabled = true;
  cfg.obss_pd_srg = -70.0;
  CHECK(effective_sensitivity(cfg, FrameClass::InterBssSrg) == -70.0);
}

TEST_CASE("max_obss_pd reproduces the adjustment bound") {
  CHECK(max_obss_pd(25, 25) == -82.0);
  CHECK(max_obss_pd(5, 25) == -62.0);
  CHECK(max_obss_pd(0, 21) == -62.0);  // inner min clamps -61 to -62

  // Exhaustive over integer powers against a direct evaluation.
  for (double ref : {21.0, 25.0})
    for (int tx = -30; tx <= 60; ++tx) {
      const double got = max_obss_pd(tx, ref);
      const double direct = std::max(-82.0, std::min(-62.0, -82.0 + (ref - tx)));
      CHECK(got == direct);
      CHECK(got >= -82.0);
      CHECK(got <= -62.0);
    }
}

TEST_CASE("scale_obss_pd adds 3 dB per width doubling") {
  CHECK(scale_obss_pd(-72, 20) == -72.0);
  CHECK(scale_obss_pd(-72, 40) == -69.0);
  CHECK(scale_obss_pd(-72, 160) == -63.0);
  CHECK_THROWS_AS(scale_obss_pd(-72, 30), std::invalid_argument);
}

TEST_CASE("tx_power_restriction matches the power cap rule") {
  CHECK(!tx_power_restriction(-82, 21).has_value());
  CHECK(tx_power_restriction(-62, 21) == 1.0);
  CHECK(tx_power_restriction(-72, 25) == 15.0);
  CHECK_THROWS_AS(tx_power_restriction(-83, 21), std::invalid_argument);
  CHECK_THROWS_AS(tx_power_restriction(-61, 21), std::invalid_argument);

  // Exhaustive integer domain: equal to the hand formula, never above the
  // reference power, monotonically non-increasing in the threshold.
  for (double ref : {21.0, 25.0}) {
    double prev = 1e9;
    for (int pd = -82; pd <= -62; ++pd) {
      const PowerRestriction r = tx_power_restriction(pd, ref);
      if (pd == -82) {
        CHECK(!r.has_value());
        continue;
      }
      const double direct = ref - (pd + 82.0);
      CHECK(r.has_value());
      CHECK(*r == direct);
      CHECK(*r <= ref);
      CHECK(*r <= prev);
      prev = *r;
    }
  }
}

TEST_CASE("combine_power_restrictions is a min over engaged caps") {
  using PR = PowerRestriction;
  std::vector<PR> none = {std::nullopt};
  CHECK(!combine_power_restrictions(none).has_value());
  std::vector<PR> two = {11.0, 15.0};
  CHECK(combine_power_restrictions(two) == 11.0);
  std::vector<PR> mixed = {std::nullopt, 7.0};
  CHECK(combine_power_restrictions(mixed) == 7.0);
  CHECK(!combine_power_restrictions(std::span<const PR>{}).has_value());

  // Commutative, associative, idempotent; unconstrained is the identity.
  std::mt19937 rng(11);
  auto rand_pr = [&]() -> PR {
    if (rng() % 4 == 0) return std::nullopt;
    return static_cast<double>(static_cast<int>(rng() % 41) - 20);
  };
  for (int i = 0; i < 500; ++i) {
    PR a = rand_pr(), b = rand_pr(), c = rand_pr();
    std::vector<PR> ab = {a, b}, ba = {b, a};
    CHECK(combine_power_restrictions(ab) == combine_power_restrictions(ba));
    std::vector<PR> abc = {a, b, c};
    std::vector<PR> ab_c = {combine_power_restrictions(ab), c};
    CHECK(combine_power_restrictions(abc) == combine_power_restrictions(ab_c));
    std::vector<PR> aa = {a, a};
    std::vector<PR> only_a = {a};
    CHECK(combine_power_restrictions(aa) == combine_power_restrictions(only_a));
    std::vector<PR> a_id = {a, std::nullopt};
    CHECK(combine_power_restrictions(a_id) == combine_power_restrictions(only_a));
  }
}

TEST_CASE("validate_srps enforces the four offset constraints") {
  SrpsElement e;
  e.srg_information_present = true;
  e.non_srg_offset_present = true;
  e.srg_obss_pd_min_offset = 9;
  e.srg_obss_pd_max_offset = 20;
  e.non_srg_obss_pd_max_offset = 15;
  const SrpsBounds b = validate_srps(e);
  CHECK(b.srg_min_dbm == -73.0);
  CHECK(b.srg_max_dbm == -62.0);
  CHECK(b.non_srg_max_dbm == -67.0);

  e.non_srg_obss_pd_max_offset = 21;  // would allow -61 dBm
  CHECK_THROWS_AS(validate_srps(e), SrpsValidationError);

  SrpsElement disallowed;
  disallowed.non_srg_obss_pd_sr_disallowed = true;
  const SrpsBounds d = validate_srps(disallowed);
  CHECK(d.non_srg_min_dbm == -82.0);
  CHECK(d.non_srg_max_dbm == -82.0);
  CHECK(!d.srg_min_dbm.has_value());

  const SrpsBounds plain = validate_srps(SrpsElement{});
  CHECK(plain.non_srg_min_dbm == -82.0);
  CHECK(plain.non_srg_max_dbm == -62.0);
  CHECK(!plain.srg_max_dbm.has_value());
}

TEST_CASE("validate_srps accepts exactly the tuples satisfying the inequalities") {
  // Exhaustive over the 5-bit offset fields.
  for (int srg_min = 0; srg_min <= 31; ++srg_min)
    for (int srg_max = 0; srg_max <= 31; ++srg_max)
      for (int non_srg = 0; non_srg <= 31; ++non_srg) {
        SrpsElement e;
        e.srg_information_present = true;
        e.non_srg_offset_present = true;
        e.srg_obss_pd_min_offset = srg_min;
        e.srg_obss_pd_max_offset = srg_max;
        e.non_srg_obss_pd_max_offset = non_srg;
        const bool legal = (-82 + srg_min >= -82) && (-82 + srg_min <= -62) &&
                           (srg_min <= srg_max) && (-82 + srg_max <= -62) &&
                           (-82 + non_srg <= -62);
        bool accepted = true;
        try {
          validate_srps(e);
        } catch (const SrpsValidationError&) {
          accepted = false;
        }
        REQUIRE(accepted == legal);
      }
}

TEST_CASE("PSR arithmetic") {
  CHECK(psr_value(20, -40) == -20.0);
  CHECK(psr_value(0, 0) == 0.0);
  CHECK(psr_value(21, -55) == -34.0);

  CHECK(i_ap_max(-60, 20, 0) == -80.0);
  CHECK(i_ap_max(-60, 20, 5) == -85.0);
  CHECK_THROWS_AS(i_ap_max(-60, 20, 6), std::invalid_argument);
  CHECK_THROWS_AS(i_ap_max(-60, 20, -1), std::invalid_argument);

  CHECK(psr_opportunity(-20, -60, 5));
  CHECK(!psr_opportunity(-20, -60, 40));  // strict inequality at the boundary
  CHECK(!psr_opportunity(-20, -20, 1));

  // Only the difference PSR - RPL matters.
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    const int p = static_cast<int>(rng() % 100) - 50;
    const int r = static_cast<int>(rng() % 100) - 120;
    const int t = static_cast<int>(rng() % 40) - 10;
    const int c = static_cast<int>(rng() % 60) - 30;
    CHECK(psr_opportunity(p, r, t) == psr_opportunity(p + c, r + c, t));
  }
}

TEST_CASE("SrConfig and BssColor validation") {
  SrConfig ok;
  CHECK_NOTHROW(ok.validate());
  SrConfig bad = ok;
  bad.obss_pd_non_srg = -61;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.obss_pd_non_srg = -72.5;  // not a 1 dBm step
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.tx_pwr_ref = 23;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(BssColor(0), std::invalid_argument);
  CHECK_THROWS_AS(BssColor(64), std::invalid_argument);
}
