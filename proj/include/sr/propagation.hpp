#ifndef SR_PROPAGATION_HPP
#define SR_PROPAGATION_HPP

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

// Radio abstraction: path loss, link budget, SINR, MCS selection and
// transmission duration arithmetic.

namespace sr {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Position a, Position b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

/// Log-distance path loss with a breakpoint:
///   PL(d) = l0 + 10*g1*log10(min(d, d_bp)) + [d > d_bp]*10*g2*log10(d/d_bp) + wall
/// The default parameter set is a synthetic fit that reproduces the toy
/// deployment interaction structure (see README, "Calibration"); use
/// PathLossParams::residential() for realistic indoor studies.
struct PathLossParams {
  double l0_db = 68.199;
  double exponent_near = 0.1;   // g1
  double breakpoint_m = 4.0;
  double exponent_far = 1.5;    // g2
  double wall_loss_db = 30.0;

  /// TGax-flavored residential profile used by the random-grid scenarios.
  static PathLossParams residential() { return {46.4, 2.0, 5.0, 3.5, 27.0}; }
};

/// Deterministic loss in dB at distance d > 0 meters.
double path_loss_db(double d_m, const PathLossParams& model);

/// Modulation and coding scheme entry: index, information bits carried
/// per subcarrier per OFDM symbol, and the minimum SINR that sustains it.
struct Mcs {
  int index = 0;
  double bits_per_sc_sym = 0.5;
  double min_sinr_db = 0.0;
  friend bool operator==(const Mcs&, const Mcs&) = default;
};

/// 12-entry single-stream HE table with conventional 10%-PER thresholds.
std::vector<Mcs> standard_mcs_table();

/// Table paired with the default path-loss fit for the toy deployments:
/// one wide low-rate bin so that the restricted-power sweeps stay on a
/// single rate tier (see README, "Calibration").
std::vector<Mcs> toy_mcs_table();

struct PhyParams {
  double f_c_hz = 5.0e9;
  double g_tx_db = 0.0;
  double g_rx_db = 0.0;
  double noise_dbm = -95.0;
  double sym_s = 16e-6;          // OFDM symbol duration, GI-32
  double sym_legacy_s = 4e-6;
  int n_sc = 234;                // data subcarriers at 20 MHz
  int n_ss = 1;
  PathLossParams path_loss;
  std::vector<Mcs> mcs_table = toy_mcs_table();
  double capture_margin_db = 0.0;  // added to min_sinr for frame lock
  // Antenna sensitivity for locking onto an addressed frame; sits below
  // the CCA/CS decode threshold.
  double rx_sensitivity_dbm = -105.0;
};

/// Received power over distance d with the configured gains and model.
double rssi_dbm(double tx_pwr_dbm, double d_m, const PhyParams& phy);

/// SINR computed in the linear domain over an interferer list.
double sinr_db(double signal_dbm, std::span<const double> interferers_dbm, double noise_dbm);

/// Highest-index MCS whose min_sinr is satisfied; nullptr when even the
/// lowest entry is out of reach. Throws std::invalid_argument on an
/// empty table.
const Mcs* select_mcs(double sinr_db, std::span<const Mcs> table);

/// PHY rate of one spatial stream configuration.
double data_rate_bps(const Mcs& mcs, const PhyParams& phy);

struct MacParams {
  double slot_s = 9e-6;          // empty slot (T_e)
  double sifs_s = 16e-6;
  double difs_s = 34e-6;
  double pifs_s = 25e-6;
  double phy_legacy_s = 20e-6;   // legacy preamble
  double he_su_s = 100e-6;       // HE single-user fields
  double ack_s = 28e-6;
  double back_s = 32e-6;
  int l_data_bits = 12000;
  int l_rts_bits = 160;
  int l_cts_bits = 112;
  int l_sf_bits = 16;            // service field
  int l_mh_bits = 320;           // MAC header
  int l_sym_legacy_bits = 24;
  int cw = 15;                   // fixed contention window
  int n_agg_max = 64;
  double max_ppdu_s = 5484e-6;
};

struct FrameDurations {
  double rts_s = 0.0;
  double cts_s = 0.0;
  double data_s = 0.0;
  double ack_or_back_s = 0.0;
  double exchange_s = 0.0;  // RTS..ACK/BACK plus DIFS and one slot
  int n_agg = 1;            // after the PPDU-duration clamp
};

/// Durations of an RTS/CTS protected exchange carrying n_agg aggregated
/// frames at the given MCS. n_agg is reduced when the data PPDU would
/// exceed the maximum PPDU duration. Throws std::invalid_argument when
/// n_agg < 1 or no frame fits.
FrameDurations frame_durations(int n_agg, const Mcs& mcs, const PhyParams& phy,
                               const MacParams& mac);

/// Largest aggregate size whose data PPDU stays within the duration cap.
int max_aggregation(const Mcs& mcs, const PhyParams& phy, const MacParams& mac);

}  // namespace sr

#endif  // SR_PROPAGATION_HPP
