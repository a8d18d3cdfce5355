#include "sr/srcore.hpp"

#include <algorithm>
#include <cmath>

namespace sr {

namespace {

bool bit_set(std::uint64_t bitmap, std::uint64_t index) {
  return index < 64 && ((bitmap >> index) & 1u) != 0;
}

bool integral_dbm(double v) { return std::abs(v - std::round(v)) < 1e-9; }

}  // namespace

void SrConfig::validate() const {
  auto check_pd = [](double v, const char* name) {
    if (v < kObssPdMinDbm || v > kObssPdMaxDbm || !integral_dbm(v))
      throw std::invalid_argument(std::string(name) + " must lie in [-82, -62] dBm in 1 dBm steps");
  };
  check_pd(obss_pd_non_srg, "obss_pd_non_srg");
  if (srg_enabled) check_pd(obss_pd_srg, "obss_pd_srg");
  if (tx_pwr_ref != 21.0 && tx_pwr_ref != 25.0)
    throw std::invalid_argument("tx_pwr_ref must be 21 or 25 dBm");
  if (!std::isfinite(tx_pwr) || !std::isfinite(cca_cs))
    throw std::invalid_argument("tx_pwr and cca_cs must be finite");
}

FrameClass classify_frame(const SrConfig& receiver, BssColor receiver_color,
                          const FrameMeta& frame) {
  // Intra-BSS detection is color-based regardless of SRG state.
  if (frame.format == PpduFormat::He) {
    if (!frame.bss_color)
      throw std::invalid_argument("HE frame without BSS color");
    if (*frame.bss_color == receiver_color) return FrameClass::IntraBss;
  }

  // SRG membership rules; frames can only be SRG-classified when the
  // receiver has SRG operation enabled.
  bool srg = false;
  switch (frame.format) {
    case PpduFormat::He:
      srg = bit_set(receiver.srg_color_bitmap,
                    static_cast<std::uint64_t>(frame.bss_color->value));
      break;
    case PpduFormat::Vht:
      if (!frame.group_id || !frame.partial_aid)
        throw std::invalid_argument("VHT frame without GROUP_ID/PARTIAL_AID");
      srg = *frame.group_id == 0 &&
            bit_set(receiver.srg_partial_bssid_bitmap,
                    static_cast<std::uint64_t>(*frame.partial_aid));
      break;
    case PpduFormat::Legacy:
      if (!frame.bssid)
        throw std::invalid_argument("legacy frame without BSSID");
      srg = bit_set(receiver.srg_partial_bssid_bitmap, *frame.bssid);
      break;
  }
  if (receiver.srg_enabled && srg) return FrameClass::InterBssSrg;
  return FrameClass::InterBssNonSrg;
}

double effective_sensitivity(const SrConfig& receiver, FrameClass cls) {
  switch (cls) {
    case FrameClass::IntraBss:
      return receiver.cca_cs;
    case FrameClass::InterBssSrg:
      if (receiver.srg_enabled) return receiver.obss_pd_srg;
      [[fallthrough]];  // SRG disabled: treat as non-SRG inter-BSS
    case FrameClass::InterBssNonSrg:
      return receiver.non_srg_sr_disallowed ? receiver.cca_cs : receiver.obss_pd_non_srg;
  }
  return receiver.cca_cs;
}

double max_obss_pd(double tx_pwr_dbm, double tx_pwr_ref_dbm) {
  return std::max(kObssPdMinDbm,
                  std::min(kObssPdMaxDbm, kObssPdMinDbm + (tx_pwr_ref_dbm - tx_pwr_dbm)));
}

double scale_obss_pd(double obss_pd_20mhz_dbm, int channel_width_mhz) {
  switch (channel_width_mhz) {
    case 20: return obss_pd_20mhz_dbm;
    case 40: return obss_pd_20mhz_dbm + 3.0;
    case 80: return obss_pd_20mhz_dbm + 6.0;
    case 160: return obss_pd_20mhz_dbm + 9.0;
    default:
      throw std::invalid_argument("unsupported channel width: " +
                                  std::to_string(channel_width_mhz) + " MHz");
  }
}

PowerRestriction tx_power_restriction(double obss_pd_dbm, double tx_pwr_ref_dbm) {
  if (obss_pd_dbm < kObssPdMinDbm || obss_pd_dbm > kObssPdMaxDbm)
    throw std::invalid_argument("obss_pd outside [-82, -62] dBm");
  if (obss_pd_dbm <= kObssPdMinDbm) return std::nullopt;
  return tx_pwr_ref_dbm - (obss_pd_dbm - kObssPdMinDbm);
}

PowerRestriction combine_power_restrictions(std::span<const PowerRestriction> restrictions) {
  PowerRestriction result;
  for (const auto& r : restrictions) {
    if (!r) continue;
    if (!result || *r < *result) result = r;
  }
  return result;
}

SrpsBounds validate_srps(const SrpsElement& e) {
  auto check_5bit = [](int v, const char* name) {
    if (v < 0 || v > 31)
      throw SrpsValidationError("offset-field-width",
                                std::string(name) + " must be a 5-bit value (0..31)");
  };
  if (e.non_srg_offset_present)
    check_5bit(e.non_srg_obss_pd_max_offset, "non_srg_obss_pd_max_offset");
  if (e.srg_information_present) {
    check_5bit(e.srg_obss_pd_min_offset, "srg_obss_pd_min_offset");
    check_5bit(e.srg_obss_pd_max_offset, "srg_obss_pd_max_offset");

    const double srg_min = kObssPdMinDbm + e.srg_obss_pd_min_offset;
    const double srg_max = kObssPdMinDbm + e.srg_obss_pd_max_offset;
    if (srg_min < kObssPdMinDbm || srg_min > kObssPdMaxDbm)
      throw SrpsValidationError("srg-min-range",
                                "-82 + SRG min offset must lie in [-82, -62] dBm");
    if (e.srg_obss_pd_min_offset > e.srg_obss_pd_max_offset)
      throw SrpsValidationError("srg-min-le-max",
                                "SRG min offset must not exceed SRG max offset");
    if (srg_max > kObssPdMaxDbm)
      throw SrpsValidationError("srg-max-range", "-82 + SRG max offset must not exceed -62 dBm");
  }
  if (e.non_srg_offset_present &&
      kObssPdMinDbm + e.non_srg_obss_pd_max_offset > kObssPdMaxDbm)
    throw SrpsValidationError("non-srg-max-range",
                              "-82 + non-SRG max offset must not exceed -62 dBm");

  SrpsBounds bounds;
  if (e.non_srg_obss_pd_sr_disallowed) {
    bounds.non_srg_min_dbm = kObssPdMinDbm;
    bounds.non_srg_max_dbm = kObssPdMinDbm;
  } else if (e.non_srg_offset_present) {
    bounds.non_srg_max_dbm = kObssPdMinDbm + e.non_srg_obss_pd_max_offset;
  }
  if (e.srg_information_present) {
    bounds.srg_min_dbm = kObssPdMinDbm + e.srg_obss_pd_min_offset;
    bounds.srg_max_dbm = kObssPdMinDbm + e.srg_obss_pd_max_offset;
  }
  return bounds;
}

double psr_value(double tx_pwr_ap_dbm, double i_ap_max_db) {
  return tx_pwr_ap_dbm + i_ap_max_db;
}

double i_ap_max(double target_rssi_dbm, double min_snr_10pct_per_db, double safety_margin_db) {
  if (safety_margin_db < 0.0 || safety_margin_db > 5.0)
    throw std::invalid_argument("PSR safety margin must lie in [0, 5] dB");
  return target_rssi_dbm - min_snr_10pct_per_db - safety_margin_db;
}

bool psr_opportunity(double psr_db, double rpl_dbm, double intended_tx_pwr_dbm) {
  return intended_tx_pwr_dbm < psr_db - rpl_dbm;
}

}  // namespace sr
