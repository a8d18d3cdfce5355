#include "sr/desim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <ostream>
#include <queue>

#include "sr/rng.hpp"

namespace sr::sim {

namespace {

constexpr double kNever = -1.0;

enum EvType : int {
  kArrival = 0,
  kResume,       // gate passed, try to (re)start the countdown
  kExpiry,       // backoff reached zero
  kTxEnd,
  kReply,        // scheduled frame of an ongoing exchange
  kTimeout,
};

// Reply kinds (Ev::c)
enum : int { kReplyCts = 1, kReplyData = 2, kReplyBack = 3 };

// Exchange stages
enum Stage : int { kNoExchange = 0, kWaitCts, kSendData, kWaitBack };

struct Ev {
  double t = 0.0;
  std::uint64_t seq = 0;  // insertion order, makes equal-time handling deterministic
  int type = 0;
  int a = 0;
  std::uint64_t b = 0;
  int c = 0;
};

struct EvLater {
  bool operator()(const Ev& x, const Ev& y) const {
    if (x.t != y.t) return x.t > y.t;
    return x.seq > y.seq;
  }
};

struct TxRec {
  int node = -1;
  double power = 0.0;
  double start = 0.0, end = 0.0;
  FrameMeta meta;
  int intended = -1;  // node expected to decode, -1 none
  bool active = false;
};

struct Reception {
  int tx_id = -1;
  int rx_node = -1;
  double required_sinr = 0.0;
  double signal_dbm = 0.0;
  bool ok = true;
};

struct PowerCap {
  double cap_dbm = 0.0;
  double expiry_s = 0.0;
};

struct Node {
  int id = 0;
  int bss = 0;
  bool is_ap = false;
  Position pos;
  int color = 1;

  // contention (APs only)
  bool contending = false;
  bool counting = false;
  double remaining_s = 0.0;
  std::uint64_t token = 0;   // invalidates stale resume/expiry events
  double count_start = kNever;

  std::deque<double> queue;  // packet arrival times
  double earliest_resume = 0.0;  // post-exchange spacing gate

  // exchange (APs only)
  int stage = kNoExchange;
  std::uint64_t xseq = 0;
  int peer = -1;
  double tx_power = 0.0;
  FrameDurations fd;
  const Mcs* mcs = nullptr;

  std::vector<PowerCap> caps;
  double nav_intra = kNever;
  double nav_inter = kNever;
};

struct PerBssCounters {
  double airtime_s = 0.0;
  double delivered_bits = 0.0;
  double delay_sum_s = 0.0;
  std::uint64_t delay_samples = 0;
  std::uint64_t generated = 0, delivered = 0, drops = 0, collisions = 0;
  std::uint64_t total_generated = 0, total_delivered = 0, total_dropped = 0;
};

class Simulator {
 public:
  Simulator(const Deployment& d, const std::vector<SrConfig>& configs, const PhyParams& phy,
            const MacParams& mac, const SimParams& params)
      : deployment_(d), configs_(configs), phy_(phy), mac_(mac), p_(params), rng_(params.seed) {
    if (d.bsses.size() != configs.size())
      throw std::invalid_argument("run_simulation: one config per BSS required");
    d.validate();
    for (const SrConfig& c : configs) c.validate();
    build_nodes();
    ctrl_min_sinr_ = phy_.mcs_table.front().min_sinr_db + phy_.capture_margin_db;
    cfend_s_ = mac_.phy_legacy_s +
               std::ceil(static_cast<double>(mac_.l_rts_bits) / mac_.l_sym_legacy_bits) *
                   phy_.sym_legacy_s;
  }

  MetricsReport run();

 private:
  // --- setup -------------------------------------------------------------
  void build_nodes() {
    const int n = static_cast<int>(deployment_.bsses.size());
    for (int b = 0; b < n; ++b) {
      if (deployment_.bsses[b].stas.size() != 1)
        throw std::invalid_argument(
            "run_simulation: single-STA abstraction, BSS " + std::to_string(b) +
            " has " + std::to_string(deployment_.bsses[b].stas.size()) + " STAs");
      Node ap;
      ap.id = static_cast<int>(nodes_.size());
      ap.bss = b;
      ap.is_ap = true;
      ap.pos = deployment_.bsses[b].ap;
      ap.color = deployment_.bsses[b].color;
      nodes_.push_back(ap);
      Node sta;
      sta.id = static_cast<int>(nodes_.size());
      sta.bss = b;
      sta.is_ap = false;
      sta.pos = deployment_.bsses[b].stas.front();
      sta.color = deployment_.bsses[b].color;
      nodes_.push_back(sta);
    }
    pl_.assign(nodes_.size(), std::vector<double>(nodes_.size(), 0.0));
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      for (std::size_t j = 0; j < nodes_.size(); ++j)
        if (i != j) {
          const double dist = std::max(distance(nodes_[i].pos, nodes_[j].pos), 1e-3);
          pl_[i][j] = path_loss_db(dist, phy_.path_loss);
        }
    counters_.assign(n, {});
  }

  // --- small helpers -----------------------------------------------------
  void push(double t, int type, int a, std::uint64_t b = 0, int c = 0) {
    events_.push({t, ++ev_seq_, type, a, b, c});
  }

  void trace(double t, int node, const char* ev, const std::string& detail) {
    if (!p_.trace) return;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", t * 1e6);
    (*p_.trace) << buf << ',' << node << ',' << ev << ',' << detail << '\n';
  }

  double rssi_at(const TxRec& tx, int node) const {
    return tx.power - pl_[node][tx.node];
  }

  FrameClass classify_at(const TxRec& tx, const Node& n) const {
    return classify_frame(configs_[n.bss], BssColor(n.color), tx.meta);
  }

  double threshold_for(const Node& n, FrameClass cls) const {
    if (!p_.sr_enabled) return configs_[n.bss].cca_cs;
    return effective_sensitivity(configs_[n.bss], cls);
  }

  bool nav_active(const Node& n, double now) const {
    return n.nav_intra > now || n.nav_inter > now;
  }

  bool tx_busy_for(const Node& n) const {
    for (int id : active_txs_) {
      const TxRec& tx = txs_[id];
      if (tx.node == n.id) continue;
      if (senses_busy(rssi_at(tx, n.id), threshold_for(n, classify_at(tx, n)))) return true;
    }
    return false;
  }

  bool channel_busy_for(const Node& n, double now) const {
    return nav_active(n, now) || tx_busy_for(n);
  }

  double next_nav_clear(const Node& n) const { return std::max(n.nav_intra, n.nav_inter); }

  // --- contention --------------------------------------------------------
  void ensure_contending(Node& n, double now, bool fresh_draw) {
    if (n.stage != kNoExchange) return;
    if (n.queue.empty()) {
      n.contending = false;
      n.counting = false;
      ++n.token;
      return;
    }
    if (!n.contending || fresh_draw) {
      n.contending = true;
      n.counting = false;
      n.remaining_s = rng_.uniform(0.0, mac_.cw * mac_.slot_s);
      ++n.token;
      push(now, kResume, n.id, n.token);
    }
  }

  void freeze(Node& n, double now) {
    if (!n.counting) return;
    n.remaining_s -= now - n.count_start;
    if (n.remaining_s < 0.0) n.remaining_s = 0.0;
    n.counting = false;
    n.count_start = kNever;
    ++n.token;
    trace(now, n.id, "backoff_freeze", "");
  }

  void freeze_busy_contenders(double now) {
    for (Node& n : nodes_)
      if (n.is_ap && n.contending && n.counting && channel_busy_for(n, now)) freeze(n, now);
  }

  void gate_idle_contenders(double now) {
    for (Node& n : nodes_) {
      if (!n.is_ap || !n.contending || n.counting) continue;
      if (tx_busy_for(n)) continue;  // a later tx end re-gates
      // A pending NAV has no event of its own; wake up at its expiry.
      const double clear = std::max(now, next_nav_clear(n));
      ++n.token;
      push(std::max(clear + mac_.difs_s, n.earliest_resume), kResume, n.id, n.token);
    }
  }

  void on_resume(Node& n, double now, std::uint64_t token) {
    if (token != n.token || !n.contending || n.counting || n.stage != kNoExchange) return;
    if (now < n.earliest_resume) {
      ++n.token;
      push(n.earliest_resume, kResume, n.id, n.token);
      return;
    }
    for (int id : active_txs_) {
      const TxRec& tx = txs_[id];
      if (tx.node != n.id &&
          senses_busy(rssi_at(tx, n.id), threshold_for(n, classify_at(tx, n))))
        return;  // a later tx end will re-gate
    }
    if (nav_active(n, now)) {
      ++n.token;
      push(next_nav_clear(n) + mac_.difs_s, kResume, n.id, n.token);
      return;
    }
    n.counting = true;
    n.count_start = now;
    ++n.token;
    char detail[64];
    std::snprintf(detail, sizeof detail, "nav_intra=%d nav_inter=%d",
                  n.nav_intra > now ? 1 : 0, n.nav_inter > now ? 1 : 0);
    trace(now, n.id, "backoff_resume", detail);
    push(now + n.remaining_s, kExpiry, n.id, n.token);
  }

  // --- transmissions -----------------------------------------------------
  int start_tx(int node, double power, double now, double dur, FrameMeta meta, int intended,
               double required_sinr) {
    TxRec tx;
    tx.node = node;
    tx.power = power;
    tx.start = now;
    tx.end = now + dur;
    tx.meta = meta;
    tx.intended = intended;
    tx.active = true;
    const int id = static_cast<int>(txs_.size());
    txs_.push_back(tx);
    active_txs_.push_back(id);

    trace(now, node, "tx_start", frame_name(meta.kind));

    // Interference onto in-flight receptions.
    for (Reception& r : receptions_) {
      if (!r.ok) continue;
      if (update_reception_sinr(r) < r.required_sinr) {
        r.ok = false;
        trace(now, r.rx_node, "rx_ruined", frame_name(txs_[r.tx_id].meta.kind));
      }
    }

    // Reception tracking for the intended receiver.
    if (intended >= 0) {
      Reception r;
      r.tx_id = id;
      r.rx_node = intended;
      r.required_sinr = required_sinr;
      r.signal_dbm = rssi_at(tx, intended);
      r.ok = r.signal_dbm >= phy_.rx_sensitivity_dbm && !is_transmitting(intended);
      if (r.ok && update_reception_sinr(r) < r.required_sinr) r.ok = false;
      receptions_.push_back(r);
    }

    // Carrier sensing, NAV and power-restriction bookkeeping at third parties.
    for (Node& n : nodes_) {
      if (n.id == node || n.id == intended || is_transmitting(n.id)) continue;
      const double rssi = tx.power - pl_[n.id][node];
      const FrameClass cls = classify_at(tx, n);
      if (cls == FrameClass::IntraBss && tx.meta.src_bss != n.bss) ++color_collisions_;
      const double threshold = threshold_for(n, cls);
      if (senses_busy(rssi, threshold)) {
        const bool decodable = current_sinr_at(n.id, id) >= ctrl_min_sinr_;
        if (decodable) handle_decoded_header(n, tx, cls, now);
      } else if (p_.sr_enabled && cls != FrameClass::IntraBss &&
                 senses_busy(rssi, configs_[n.bss].cca_cs)) {
        // Ignored through an OBSS/PD threshold: SR TXOP with a power cap
        // that lives until the ignored transmission's TXOP (frame plus its
        // advertised duration) ends.
        const PowerRestriction pr = tx_power_restriction(threshold, configs_[n.bss].tx_pwr_ref);
        if (pr && n.is_ap) {
          const double scope_end = tx.end + tx.meta.duration_s;
          n.caps.push_back({*pr, scope_end});
          char detail[64];
          std::snprintf(detail, sizeof detail, "cap=%.6g until=%.3f", *pr, scope_end * 1e6);
          trace(now, n.id, "pr_recorded", detail);
        }
      }
    }
    freeze_busy_contenders(now);
    push(tx.end, kTxEnd, id);
    return id;
  }

  void handle_decoded_header(Node& n, const TxRec& tx, FrameClass cls, double now) {
    const bool inter = cls != FrameClass::IntraBss;
    if (tx.meta.kind == FrameKind::CfEnd) {
      char detail[96];
      if (inter) {
        const bool had = n.nav_inter > now;
        n.nav_inter = kNever;
        std::snprintf(detail, sizeof detail, "class=inter cleared_inter=%d cleared_intra=0",
                      had ? 1 : 0);
      } else {
        const bool had = n.nav_intra > now;
        n.nav_intra = kNever;
        std::snprintf(detail, sizeof detail, "class=intra cleared_inter=0 cleared_intra=%d",
                      had ? 1 : 0);
      }
      trace(now, n.id, "cfend_rx", detail);
      return;
    }
    if (tx.meta.duration_s <= 0.0) return;
    const double until = tx.end + tx.meta.duration_s;
    double& nav = inter ? n.nav_inter : n.nav_intra;
    if (until > nav) {
      nav = until;
      char detail[64];
      std::snprintf(detail, sizeof detail, "until=%.3f", until * 1e6);
      trace(now, n.id, inter ? "nav_inter_set" : "nav_intra_set", detail);
    }
  }

  bool is_transmitting(int node) const {
    for (int id : active_txs_)
      if (txs_[id].node == node) return true;
    return false;
  }

  double update_reception_sinr(const Reception& r) const {
    return current_sinr_at(r.rx_node, r.tx_id);
  }

  double current_sinr_at(int rx_node, int tx_id) const {
    double denom_mw = dbm_to_mw(phy_.noise_dbm);
    for (int id : active_txs_) {
      if (id == tx_id) continue;
      const TxRec& o = txs_[id];
      if (o.node == rx_node) continue;
      denom_mw += dbm_to_mw(o.power - pl_[rx_node][o.node]);
    }
    return (txs_[tx_id].power - pl_[rx_node][txs_[tx_id].node]) - mw_to_dbm(denom_mw);
  }

  static const char* frame_name(FrameKind k) {
    switch (k) {
      case FrameKind::Rts: return "RTS";
      case FrameKind::Cts: return "CTS";
      case FrameKind::Data: return "DATA";
      case FrameKind::Ack: return "ACK";
      case FrameKind::Back: return "BACK";
      case FrameKind::TriggerFrame: return "TF";
      case FrameKind::CfEnd: return "CF-End";
      case FrameKind::Beacon: return "BEACON";
    }
    return "?";
  }

  FrameMeta make_meta(const Node& sender, FrameKind kind, double nav_duration) const {
    FrameMeta m;
    m.format = PpduFormat::He;
    m.bss_color = BssColor(sender.color);
    m.src_bss = sender.bss;
    m.duration_s = nav_duration;
    m.kind = kind;
    return m;
  }

  // --- exchange logic ----------------------------------------------------
  void start_exchange(Node& ap, double now) {
    if (ap.queue.empty()) {
      ap.contending = false;
      return;
    }
    double power = configs_[ap.bss].tx_pwr;
    if (p_.sr_enabled) {
      std::vector<PowerRestriction> live;
      std::vector<PowerCap> keep;
      for (const PowerCap& c : ap.caps)
        if (c.expiry_s > now) {
          live.push_back(c.cap_dbm);
          keep.push_back(c);
        }
      ap.caps = std::move(keep);
      const PowerRestriction combined = combine_power_restrictions(live);
      if (combined) power = std::min(power, *combined);
    }

    const int sta = ap.id + 1;  // STA of the same BSS
    const double est_sinr = current_sinr_at_power(sta, ap.id, power);
    const Mcs* mcs = select_mcs(est_sinr, phy_.mcs_table);
    if (!mcs) {
      // No sustainable rate at the restricted power; abandon and re-contend.
      if (in_window(now)) ++counters_[ap.bss].collisions;
      trace(now, ap.id, "exchange_infeasible", "");
      ensure_contending(ap, now, true);
      return;
    }
    const int want = std::min<int>(mac_.n_agg_max, static_cast<int>(ap.queue.size()));
    ap.fd = frame_durations(want, *mcs, phy_, mac_);
    ap.mcs = mcs;
    ap.tx_power = power;
    ap.peer = sta;
    ap.stage = kWaitCts;
    ++ap.xseq;
    ap.contending = false;
    ap.counting = false;
    ++ap.token;

    const double nav = mac_.sifs_s + ap.fd.cts_s + mac_.sifs_s + ap.fd.data_s + mac_.sifs_s +
                       ap.fd.ack_or_back_s;
    start_tx(ap.id, power, now, ap.fd.rts_s, make_meta(ap, FrameKind::Rts, nav), sta,
             ctrl_min_sinr_);
    push(now + ap.fd.rts_s + mac_.sifs_s + ap.fd.cts_s + mac_.slot_s, kTimeout, ap.id, ap.xseq,
         kWaitCts);
  }

  double current_sinr_at_power(int rx_node, int tx_node, double power) const {
    double denom_mw = dbm_to_mw(phy_.noise_dbm);
    for (int id : active_txs_) {
      const TxRec& o = txs_[id];
      if (o.node == rx_node || o.node == tx_node) continue;
      denom_mw += dbm_to_mw(o.power - pl_[rx_node][o.node]);
    }
    return (power - pl_[rx_node][tx_node]) - mw_to_dbm(denom_mw);
  }

  void on_tx_end(int tx_id, double now) {
    TxRec& tx = txs_[tx_id];
    tx.active = false;
    active_txs_.erase(std::find(active_txs_.begin(), active_txs_.end(), tx_id));
    counters_[nodes_[tx.node].bss].airtime_s += clip_window(tx.start, tx.end);
    trace(now, tx.node, "tx_end", frame_name(tx.meta.kind));

    bool delivered = false;
    for (std::size_t i = 0; i < receptions_.size(); ++i)
      if (receptions_[i].tx_id == tx_id) {
        delivered = receptions_[i].ok;
        receptions_.erase(receptions_.begin() + static_cast<std::ptrdiff_t>(i));
        break;
      }

    switch (tx.meta.kind) {
      case FrameKind::Rts:
        if (delivered)
          push(now + mac_.sifs_s, kReply, tx.intended, nodes_[tx.node].xseq, kReplyCts);
        break;
      case FrameKind::Cts: {
        Node& ap = nodes_[static_cast<std::size_t>(tx.intended)];
        if (delivered && ap.stage == kWaitCts) {
          ap.stage = kSendData;  // disarms the pending CTS timeout
          push(now + mac_.sifs_s, kReply, ap.id, ap.xseq, kReplyData);
        }
        break;
      }
      case FrameKind::Data:
        if (delivered)
          push(now + mac_.sifs_s, kReply, tx.intended, nodes_[tx.node].xseq, kReplyBack);
        break;
      case FrameKind::Ack:
      case FrameKind::Back: {
        Node& ap = nodes_[static_cast<std::size_t>(tx.intended)];
        if (delivered && ap.stage == kWaitBack) finish_exchange(ap, now, true);
        break;
      }
      default:
        break;
    }
    gate_idle_contenders(now);
  }

  void on_reply(int node, double now, std::uint64_t xseq, int what) {
    Node& n = nodes_[static_cast<std::size_t>(node)];
    if (what == kReplyCts) {
      const Node& ap = nodes_[static_cast<std::size_t>(n.id - 1)];
      if (ap.stage != kWaitCts || ap.xseq != xseq) return;
      const double nav = mac_.sifs_s + ap.fd.data_s + mac_.sifs_s + ap.fd.ack_or_back_s;
      start_tx(n.id, configs_[n.bss].tx_pwr, now, ap.fd.cts_s, make_meta(n, FrameKind::Cts, nav),
               ap.id, ctrl_min_sinr_);
    } else if (what == kReplyData) {
      Node& ap = n;
      if (ap.stage != kSendData || ap.xseq != xseq) return;
      ap.stage = kWaitBack;
      const double nav = mac_.sifs_s + ap.fd.ack_or_back_s;
      start_tx(ap.id, ap.tx_power, now, ap.fd.data_s, make_meta(ap, FrameKind::Data, nav),
               ap.peer, ap.mcs->min_sinr_db + phy_.capture_margin_db);
      push(now + ap.fd.data_s + mac_.sifs_s + ap.fd.ack_or_back_s + mac_.slot_s, kTimeout, ap.id,
           ap.xseq, kWaitBack);
    } else {  // kReplyBack
      const Node& ap = nodes_[static_cast<std::size_t>(n.id - 1)];
      if (ap.stage != kWaitBack || ap.xseq != xseq) return;
      const FrameKind kind = ap.fd.n_agg == 1 ? FrameKind::Ack : FrameKind::Back;
      start_tx(n.id, configs_[n.bss].tx_pwr, now, ap.fd.ack_or_back_s,
               make_meta(n, kind, 0.0), ap.id, ctrl_min_sinr_);
    }
  }

  void on_timeout(Node& ap, double now, std::uint64_t xseq, int stage) {
    if (ap.stage != stage || ap.xseq != xseq) return;
    PerBssCounters& c = counters_[ap.bss];
    if (in_window(now)) ++c.collisions;
    trace(now, ap.id, "exchange_timeout", stage == kWaitCts ? "CTS" : "BACK");
    ap.stage = kNoExchange;
    // NAV truncation: release third parties still holding the advertised
    // duration of this aborted exchange.
    start_tx(ap.id, ap.tx_power, now, cfend_s_, make_meta(ap, FrameKind::CfEnd, 0.0), -1, 0.0);
    rearm_after_exchange(ap, now + cfend_s_ + mac_.difs_s + mac_.slot_s);
  }

  void finish_exchange(Node& ap, double now, bool success) {
    PerBssCounters& c = counters_[ap.bss];
    if (success) {
      for (int k = 0; k < ap.fd.n_agg; ++k) {
        const double arrival = ap.queue.front();
        ap.queue.pop_front();
        ++c.total_delivered;
        if (in_window(now)) {
          ++c.delivered;
          c.delivered_bits += mac_.l_data_bits;
          c.delay_sum_s += now - arrival;
          ++c.delay_samples;
        }
      }
      if (p_.full_buffer) top_up(ap, now);
      trace(now, ap.id, "exchange_success", "");
    }
    ap.stage = kNoExchange;
    rearm_after_exchange(ap, now + mac_.difs_s + mac_.slot_s);
  }

  // Fresh contention cycle; the countdown may begin at `when`.
  void rearm_after_exchange(Node& ap, double when) {
    ap.stage = kNoExchange;
    ap.contending = false;
    ap.earliest_resume = when;
    if (ap.queue.empty()) return;
    ap.contending = true;
    ap.counting = false;
    ap.remaining_s = rng_.uniform(0.0, mac_.cw * mac_.slot_s);
    ++ap.token;
    push(when, kResume, ap.id, ap.token);
  }

  void top_up(Node& ap, double now) {
    while (static_cast<int>(ap.queue.size()) < kBufferCapacityPkts) {
      ap.queue.push_back(now);
      ++counters_[ap.bss].total_generated;
      if (in_window(now)) ++counters_[ap.bss].generated;
    }
  }

  // --- bookkeeping ---------------------------------------------------------
  bool in_window(double t) const { return t >= p_.warmup_s && t <= p_.duration_s; }

  double clip_window(double a, double b) const {
    const double lo = std::max(a, p_.warmup_s);
    const double hi = std::min(b, p_.duration_s);
    return std::max(0.0, hi - lo);
  }

  void on_arrival(Node& ap, double now) {
    PerBssCounters& c = counters_[ap.bss];
    ++c.total_generated;
    if (in_window(now)) ++c.generated;
    if (static_cast<int>(ap.queue.size()) >= kBufferCapacityPkts) {
      ++c.total_dropped;
      if (in_window(now)) ++c.drops;
    } else {
      ap.queue.push_back(now);
      if (ap.stage == kNoExchange && !ap.contending) ensure_contending(ap, now, true);
    }
    const double rate = p_.load_bps / mac_.l_data_bits;
    push(now + rng_.exponential(rate), kArrival, ap.id);
  }

  const Deployment& deployment_;
  const std::vector<SrConfig>& configs_;
  const PhyParams& phy_;
  const MacParams& mac_;
  const SimParams& p_;
  DetRng rng_;

  std::vector<Node> nodes_;
  std::vector<std::vector<double>> pl_;
  std::vector<TxRec> txs_;
  std::vector<int> active_txs_;
  std::vector<Reception> receptions_;
  std::priority_queue<Ev, std::vector<Ev>, EvLater> events_;
  std::uint64_t ev_seq_ = 0;
  std::vector<PerBssCounters> counters_;
  std::uint64_t color_collisions_ = 0;
  double ctrl_min_sinr_ = 0.0;
  double cfend_s_ = 0.0;
};

MetricsReport Simulator::run() {
  // Kick-off: traffic processes (or saturated queues) per AP in id order.
  for (Node& n : nodes_) {
    if (!n.is_ap) continue;
    if (p_.full_buffer) {
      top_up(n, 0.0);
      ensure_contending(n, 0.0, true);
    } else if (p_.load_bps > 0.0) {
      const double rate = p_.load_bps / mac_.l_data_bits;
      push(rng_.exponential(rate), kArrival, n.id);
    }
  }

  while (!events_.empty()) {
    const Ev ev = events_.top();
    if (ev.t > p_.duration_s) break;
    events_.pop();
    switch (ev.type) {
      case kArrival: on_arrival(nodes_[static_cast<std::size_t>(ev.a)], ev.t); break;
      case kResume: on_resume(nodes_[static_cast<std::size_t>(ev.a)], ev.t, ev.b); break;
      case kExpiry: {
        Node& n = nodes_[static_cast<std::size_t>(ev.a)];
        if (ev.b == n.token && n.counting) {
          n.counting = false;
          trace(ev.t, n.id, "backoff_expire", "");
          start_exchange(n, ev.t);
        }
        break;
      }
      case kTxEnd: on_tx_end(ev.a, ev.t); break;
      case kReply: on_reply(ev.a, ev.t, ev.b, ev.c); break;
      case kTimeout:
        on_timeout(nodes_[static_cast<std::size_t>(ev.a)], ev.t, ev.b, ev.c);
        break;
      default: throw std::runtime_error("desim: unknown event type");
    }
  }

  // Clip transmissions still on the air at the horizon.
  for (int id : active_txs_) {
    const TxRec& tx = txs_[id];
    counters_[nodes_[tx.node].bss].airtime_s += clip_window(tx.start, p_.duration_s);
  }

  MetricsReport report;
  report.duration_s = p_.duration_s;
  report.warmup_s = p_.warmup_s;
  report.color_collisions = color_collisions_;
  const double window = p_.duration_s - p_.warmup_s;
  for (std::size_t b = 0; b < counters_.size(); ++b) {
    const PerBssCounters& c = counters_[b];
    // Conservation over the full run: every generated packet is delivered,
    // dropped, or still queued.
    const std::uint64_t queued = nodes_[2 * b].queue.size();
    if (c.total_generated != c.total_delivered + c.total_dropped + queued)
      throw std::runtime_error("desim: packet conservation violated");
    BssMetrics m;
    m.throughput_bps = c.delivered_bits / window;
    m.occupancy = c.airtime_s / window;
    m.mean_delay_s = c.delay_samples ? c.delay_sum_s / c.delay_samples : 0.0;
    m.generated = c.generated;
    m.delivered_pkts = c.delivered;
    m.drops = c.drops;
    m.collisions = c.collisions;
    m.sr_enabled = p_.sr_enabled && (configs_[b].obss_pd_non_srg > configs_[b].cca_cs ||
                                     (configs_[b].srg_enabled &&
                                      configs_[b].obss_pd_srg > configs_[b].cca_cs));
    report.per_bss.push_back(m);
  }
  return report;
}

}  // namespace

MetricsReport run_simulation(const Deployment& d, const std::vector<SrConfig>& configs,
                             const PhyParams& phy, const MacParams& mac,
                             const SimParams& params) {
  Simulator sim(d, configs, phy, mac, params);
  return sim.run();
}

}  // namespace sr::sim
