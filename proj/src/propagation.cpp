#include "sr/propagation.hpp"

#include <algorithm>

namespace sr {

double path_loss_db(double d_m, const PathLossParams& m) {
  if (!(d_m > 0.0)) throw std::invalid_argument("path_loss: distance must be > 0");
  double loss = m.l0_db + 10.0 * m.exponent_near * std::log10(std::min(d_m, m.breakpoint_m)) +
                m.wall_loss_db;
  if (d_m > m.breakpoint_m)
    loss += 10.0 * m.exponent_far * std::log10(d_m / m.breakpoint_m);
  return loss;
}

std::vector<Mcs> standard_mcs_table() {
  return {
      {0, 0.5, 2.0},       // BPSK 1/2
      {1, 1.0, 5.0},       // QPSK 1/2
      {2, 1.5, 9.0},       // QPSK 3/4
      {3, 2.0, 11.0},      // 16-QAM 1/2
      {4, 3.0, 15.0},      // 16-QAM 3/4
      {5, 4.0, 18.0},      // 64-QAM 2/3
      {6, 4.5, 20.0},      // 64-QAM 3/4
      {7, 5.0, 25.0},      // 64-QAM 5/6
      {8, 6.0, 29.0},      // 256-QAM 3/4
      {9, 20.0 / 3.0, 31.0},   // 256-QAM 5/6
      {10, 7.5, 34.0},     // 1024-QAM 3/4
      {11, 25.0 / 3.0, 36.0},  // 1024-QAM 5/6
  };
}

std::vector<Mcs> toy_mcs_table() {
  return {
      {0, 0.5, -20.0},
      {1, 0.55, 3.0},
      {2, 1.5, 17.0},
      {3, 2.0, 20.0},
      {4, 3.0, 24.0},
      {5, 4.0, 28.0},
      {6, 4.5, 32.0},
      {7, 5.0, 36.0},
      {8, 6.0, 40.0},
      {9, 20.0 / 3.0, 44.0},
      {10, 7.5, 48.0},
      {11, 25.0 / 3.0, 52.0},
  };
}

double rssi_dbm(double tx_pwr_dbm, double d_m, const PhyParams& phy) {
  return tx_pwr_dbm + phy.g_tx_db + phy.g_rx_db - path_loss_db(d_m, phy.path_loss);
}

double sinr_db(double signal_dbm, std::span<const double> interferers_dbm, double noise_dbm) {
  double denom_mw = dbm_to_mw(noise_dbm);
  for (double i : interferers_dbm) denom_mw += dbm_to_mw(i);
  return signal_dbm - mw_to_dbm(denom_mw);
}

const Mcs* select_mcs(double sinr, std::span<const Mcs> table) {
  if (table.empty()) throw std::invalid_argument("select_mcs: empty MCS table");
  const Mcs* best = nullptr;
  for (const Mcs& m : table)
    if (sinr >= m.min_sinr_db) best = &m;
  return best;
}

double data_rate_bps(const Mcs& mcs, const PhyParams& phy) {
  return phy.n_sc * mcs.bits_per_sc_sym * phy.n_ss / phy.sym_s;
}

namespace {

double control_frame_duration(int bits, const PhyParams& phy, const MacParams& mac) {
  const double symbols = std::ceil(static_cast<double>(bits) / mac.l_sym_legacy_bits);
  return mac.phy_legacy_s + symbols * phy.sym_legacy_s;
}

}  // namespace

int max_aggregation(const Mcs& mcs, const PhyParams& phy, const MacParams& mac) {
  const double bits_per_sym = phy.n_sc * mcs.bits_per_sc_sym * phy.n_ss;
  const int max_symbols = static_cast<int>(std::floor(mac.max_ppdu_s / phy.sym_s));
  const double capacity = max_symbols * bits_per_sym - mac.l_sf_bits;
  const int per_frame = mac.l_mh_bits + mac.l_data_bits;
  return std::max(0, static_cast<int>(std::floor(capacity / per_frame)));
}

FrameDurations frame_durations(int n_agg, const Mcs& mcs, const PhyParams& phy,
                               const MacParams& mac) {
  if (n_agg < 1) throw std::invalid_argument("frame_durations: n_agg must be >= 1");
  const int cap = max_aggregation(mcs, phy, mac);
  if (cap < 1)
    throw std::invalid_argument("frame_durations: no frame fits within the PPDU duration cap");

  FrameDurations d;
  d.n_agg = std::min(n_agg, cap);
  d.rts_s = control_frame_duration(mac.l_rts_bits, phy, mac);
  d.cts_s = control_frame_duration(mac.l_cts_bits, phy, mac);

  const double bits_per_sym = phy.n_sc * mcs.bits_per_sc_sym * phy.n_ss;
  const double payload_bits = mac.l_sf_bits + static_cast<double>(d.n_agg) *
                                                  (mac.l_mh_bits + mac.l_data_bits);
  d.data_s = mac.phy_legacy_s + mac.he_su_s + std::ceil(payload_bits / bits_per_sym) * phy.sym_s;
  d.ack_or_back_s = d.n_agg == 1 ? mac.ack_s : mac.back_s;
  d.exchange_s = d.rts_s + mac.sifs_s + d.cts_s + mac.sifs_s + d.data_s + mac.sifs_s +
                 d.ack_or_back_s + mac.difs_s + mac.slot_s;
  return d;
}

}  // namespace sr
