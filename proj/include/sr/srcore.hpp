#ifndef SR_SRCORE_HPP
#define SR_SRCORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

// Rule-and-formula engine for the 802.11ax spatial reuse operation:
// frame classification, per-class sensitivity selection, OBSS/PD bounds,
// transmit power restriction, SRPS offset validation and PSR arithmetic.
// Everything here is a pure function of its arguments.

namespace sr {

inline constexpr double kCcaCsDbm = -82.0;     // default CCA/CS threshold
inline constexpr double kObssPdMinDbm = -82.0;
inline constexpr double kObssPdMaxDbm = -62.0;

/// BSS color identifier carried in HE PHY headers, valid range 1..63.
struct BssColor {
  int value;
  explicit BssColor(int v) : value(v) {
    if (v < 1 || v > 63)
      throw std::invalid_argument("BssColor out of range 1..63: " + std::to_string(v));
  }
  friend bool operator==(BssColor a, BssColor b) { return a.value == b.value; }
};

enum class PpduFormat { He, Vht, Legacy };

enum class FrameKind { Rts, Cts, Data, Ack, Back, TriggerFrame, CfEnd, Beacon };

/// Abstract PPDU header content, enough to classify a detected frame.
/// HE frames carry a BSS color, VHT frames GROUP_ID/PARTIAL_AID, legacy
/// frames a (partial) BSSID. src_bss is simulator ground truth only and
/// must never be consulted by classification.
struct FrameMeta {
  PpduFormat format = PpduFormat::He;
  std::optional<BssColor> bss_color;
  std::optional<int> group_id;
  std::optional<int> partial_aid;
  std::optional<std::uint64_t> bssid;
  int src_bss = -1;
  double duration_s = 0.0;
  FrameKind kind = FrameKind::Data;
};

enum class FrameClass { IntraBss, InterBssNonSrg, InterBssSrg };

/// Per-node spatial reuse configuration.
struct SrConfig {
  double cca_cs = kCcaCsDbm;
  double obss_pd_non_srg = kObssPdMinDbm;
  double obss_pd_srg = kObssPdMinDbm;   // meaningful only when srg_enabled
  double tx_pwr = 20.0;
  double tx_pwr_ref = 21.0;             // 21 or 25 dBm
  bool srg_enabled = false;
  std::uint64_t srg_color_bitmap = 0;
  std::uint64_t srg_partial_bssid_bitmap = 0;
  bool non_srg_sr_disallowed = false;
  bool psr_disallowed = false;

  /// Throws std::invalid_argument if a field is outside its allowed domain.
  void validate() const;
};

/// Busy test shared by the analytical model and the simulator: a signal
/// exactly at threshold is sensed.
inline bool senses_busy(double rssi_dbm, double threshold_dbm) {
  return rssi_dbm >= threshold_dbm;
}

/// Classifies a detected frame as intra-BSS, inter-BSS SRG or inter-BSS
/// non-SRG from the identity fields its format mandates.
/// Throws std::invalid_argument when a mandatory field is missing.
FrameClass classify_frame(const SrConfig& receiver, BssColor receiver_color,
                          const FrameMeta& frame);

/// Sensitivity threshold the receiver applies to a frame of the given class.
double effective_sensitivity(const SrConfig& receiver, FrameClass cls);

/// Upper bound on a legal OBSS/PD threshold for a node transmitting at
/// tx_pwr with reference power tx_pwr_ref.
double max_obss_pd(double tx_pwr_dbm, double tx_pwr_ref_dbm);

/// OBSS/PD defined for 20 MHz grows 3 dB per channel-width doubling.
/// Throws std::invalid_argument for widths other than 20/40/80/160 MHz.
double scale_obss_pd(double obss_pd_20mhz_dbm, int channel_width_mhz);

/// A transmit power cap in dBm; disengaged means unconstrained.
using PowerRestriction = std::optional<double>;

/// Maximum transmit power when a TXOP was detected by ignoring a frame
/// under the given OBSS/PD threshold. Unconstrained at the minimum
/// threshold. Throws std::invalid_argument outside [-82, -62].
PowerRestriction tx_power_restriction(double obss_pd_dbm, double tx_pwr_ref_dbm);

/// Most restrictive cap among the collected restrictions; unconstrained
/// entries are ignored, an empty list is unconstrained.
PowerRestriction combine_power_restrictions(std::span<const PowerRestriction> restrictions);

/// Spatial Reuse Parameter Set element, offsets are 5-bit fields (0..31).
struct SrpsElement {
  bool psr_disallowed = false;
  bool non_srg_obss_pd_sr_disallowed = false;
  bool non_srg_offset_present = false;
  bool srg_information_present = false;
  int non_srg_obss_pd_max_offset = 0;
  int srg_obss_pd_min_offset = 0;
  int srg_obss_pd_max_offset = 0;
  std::uint64_t srg_bss_color_bitmap = 0;
  std::uint64_t srg_partial_bssid_bitmap = 0;
};

/// Allowed OBSS/PD ranges derived from a validated SRPS element. SRG
/// bounds are absent when the element carries no SRG information.
struct SrpsBounds {
  double non_srg_min_dbm = kObssPdMinDbm;
  double non_srg_max_dbm = kObssPdMaxDbm;
  std::optional<double> srg_min_dbm;
  std::optional<double> srg_max_dbm;
};

class SrpsValidationError : public std::runtime_error {
 public:
  SrpsValidationError(std::string constraint, const std::string& detail)
      : std::runtime_error(constraint + ": " + detail), constraint_(std::move(constraint)) {}
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

/// Checks the four offset inequalities and returns the resulting bound
/// table. Throws SrpsValidationError naming the violated constraint.
SrpsBounds validate_srps(const SrpsElement& element);

/// PSR advertised in a trigger frame: transmit power plus the maximum
/// acceptable interference at the transmission holder.
double psr_value(double tx_pwr_ap_dbm, double i_ap_max_db);

/// Maximum acceptable interference at the AP: target RSSI minus the
/// minimum SNR granting 10% PER, minus a safety margin capped at 5 dB.
/// Throws std::invalid_argument when the margin is outside [0, 5].
double i_ap_max(double target_rssi_dbm, double min_snr_10pct_per_db, double safety_margin_db);

/// PSR opportunity test: the intended power must stay strictly below
/// PSR minus the received power level of the trigger frame.
bool psr_opportunity(double psr_db, double rpl_dbm, double intended_tx_pwr_dbm);

}  // namespace sr

#endif  // SR_SRCORE_HPP
