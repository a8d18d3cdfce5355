#include "sr/ctmn.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace sr::ctmn {

namespace {

// State key: (bss, mode) pairs, sorted. The transmit power is a function
// of the mode (via the configured threshold and Eq-style restriction),
// so it does not need to participate in the key.
using StateKey = std::vector<std::pair<int, int>>;

StateKey make_key(const std::vector<ActiveBss>& active) {
  StateKey k;
  for (const auto& a : active) k.emplace_back(a.bss, static_cast<int>(a.mode));
  std::sort(k.begin(), k.end());
  return k;
}

struct Geometry {
  // pl_ap[i][j]: path loss from AP_j to AP_i; pl_sta[i][j]: from AP_j to
  // the (first) STA of BSS i. Single-STA abstraction.
  std::vector<std::vector<double>> pl_ap;
  std::vector<std::vector<double>> pl_sta;
};

Geometry make_geometry(const Deployment& d, const PhyParams& phy) {
  const int n = static_cast<int>(d.bsses.size());
  for (int b = 0; b < n; ++b)
    if (d.bsses[b].stas.size() != 1)
      throw std::invalid_argument("ctmn: single-STA abstraction, BSS " + std::to_string(b) +
                                  " has " + std::to_string(d.bsses[b].stas.size()) + " STAs");
  Geometry g;
  g.pl_ap.assign(n, std::vector<double>(n, 0.0));
  g.pl_sta.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j) g.pl_ap[i][j] = path_loss_db(distance(d.bsses[i].ap, d.bsses[j].ap), phy.path_loss);
      g.pl_sta[i][j] = path_loss_db(distance(d.bsses[i].stas.front(), d.bsses[j].ap), phy.path_loss);
    }
  return g;
}

struct Activation {
  bool feasible = false;
  BssMode mode = BssMode::Default;
  double tx_pwr = 0.0;
};

// Channel-access test for BSS b against the transmissions active in a
// state. Default mode requires everything below CCA/CS; an SR mode
// requires at least one inter-BSS transmission at or above CCA/CS with
// every such transmission ignorable under its class threshold.
Activation try_activate(int b, const std::vector<ActiveBss>& active, const Deployment& d,
                        const std::vector<SrConfig>& configs, const Geometry& geo) {
  const SrConfig& cfg = configs[b];
  const BssColor my_color(d.bsses[b].color);

  bool any_detected = false;
  double max_used_threshold = -1e9;
  bool used_srg = false;

  for (const ActiveBss& a : active) {
    const double rssi = a.tx_pwr_dbm - geo.pl_ap[b][a.bss];
    FrameMeta frame;
    frame.format = PpduFormat::He;
    frame.bss_color = BssColor(d.bsses[a.bss].color);
    frame.src_bss = a.bss;
    const FrameClass cls = classify_frame(cfg, my_color, frame);
    const double threshold = effective_sensitivity(cfg, cls);

    if (!senses_busy(rssi, cfg.cca_cs)) continue;  // invisible at the default threshold
    any_detected = true;
    if (cls == FrameClass::IntraBss || senses_busy(rssi, threshold))
      return {};  // cannot be ignored
    if (threshold > max_used_threshold) {
      max_used_threshold = threshold;
      used_srg = cls == FrameClass::InterBssSrg;
    }
  }

  Activation act;
  act.feasible = true;
  if (!any_detected) {
    act.mode = BssMode::Default;
    act.tx_pwr = cfg.tx_pwr;
    return act;
  }
  act.mode = used_srg ? BssMode::SrSrg : BssMode::SrNonSrg;
  const PowerRestriction pr = tx_power_restriction(max_used_threshold, cfg.tx_pwr_ref);
  act.tx_pwr = pr ? std::min(cfg.tx_pwr, *pr) : cfg.tx_pwr;
  return act;
}

void fill_link_quality(StateInfo& s, const PhyParams& phy, const MacParams& mac,
                       const Geometry& geo) {
  s.mcs_index.assign(s.active.size(), -1);
  s.service_s.assign(s.active.size(), 0.0);
  s.delivered_bps.assign(s.active.size(), 0.0);
  for (std::size_t k = 0; k < s.active.size(); ++k) {
    const ActiveBss& a = s.active[k];
    const double signal = a.tx_pwr_dbm - geo.pl_sta[a.bss][a.bss];
    std::vector<double> interferers;
    for (const ActiveBss& other : s.active)
      if (other.bss != a.bss)
        interferers.push_back(other.tx_pwr_dbm - geo.pl_sta[a.bss][other.bss]);
    const double sinr = sinr_db(signal, interferers, phy.noise_dbm);
    const Mcs* mcs = select_mcs(sinr, phy.mcs_table);
    if (mcs) {
      const FrameDurations fd = frame_durations(mac.n_agg_max, *mcs, phy, mac);
      s.mcs_index[k] = mcs->index;
      s.service_s[k] = fd.exchange_s;
      s.delivered_bps[k] = fd.n_agg * static_cast<double>(mac.l_data_bits) / fd.exchange_s;
    } else {
      // Spoiled transmission: it still occupies the channel, at the
      // slowest exchange duration, but delivers nothing.
      const FrameDurations fd = frame_durations(mac.n_agg_max, phy.mcs_table.front(), phy, mac);
      s.service_s[k] = fd.exchange_s;
    }
  }
}

}  // namespace

double default_lambda(const MacParams& mac) {
  return 1.0 / ((mac.cw / 2.0) * mac.slot_s);
}

std::string state_label(const std::vector<ActiveBss>& active) {
  if (active.empty()) return "(empty)";
  std::string out;
  for (const ActiveBss& a : active) {
    if (!out.empty()) out += ' ';
    out += static_cast<char>('A' + a.bss);
    if (a.mode == BssMode::SrNonSrg) out += "_SR";
    if (a.mode == BssMode::SrSrg) out += "_SRG";
  }
  return out;
}

std::vector<int> Graph::reachable_indices() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(states.size()); ++i)
    if (states[i].reachable) out.push_back(i);
  return out;
}

Graph enumerate_states(const Deployment& d, const std::vector<SrConfig>& configs,
                       const PhyParams& phy, const MacParams& mac, const Options& opt) {
  if (d.bsses.size() != configs.size())
    throw std::invalid_argument("enumerate_states: one config per BSS required");
  d.validate();
  for (const SrConfig& c : configs) c.validate();
  const int n = static_cast<int>(d.bsses.size());
  const Geometry geo = make_geometry(d, phy);

  Graph g;
  g.n_bss = n;
  std::map<StateKey, int> index;

  auto add_state = [&](std::vector<ActiveBss> active, bool reachable) {
    std::sort(active.begin(), active.end(),
              [](const ActiveBss& x, const ActiveBss& y) { return x.bss < y.bss; });
    const StateKey key = make_key(active);
    auto it = index.find(key);
    if (it != index.end()) {
      if (reachable) g.states[it->second].reachable = true;
      return it->second;
    }
    if (static_cast<int>(g.states.size()) >= opt.state_cap)
      throw std::runtime_error("CTMN state cap exceeded (" + std::to_string(opt.state_cap) + ")");
    StateInfo s;
    s.active = std::move(active);
    s.label = state_label(s.active);
    s.reachable = reachable;
    fill_link_quality(s, phy, mac, geo);
    g.states.push_back(std::move(s));
    const int idx = static_cast<int>(g.states.size()) - 1;
    index.emplace(key, idx);
    return idx;
  };

  add_state({}, true);
  std::deque<int> frontier{0};
  while (!frontier.empty()) {
    const int si = frontier.front();
    frontier.pop_front();
    const std::vector<ActiveBss> active = g.states[si].active;  // copy: vector may reallocate

    for (int b = 0; b < n; ++b) {
      if (std::any_of(active.begin(), active.end(),
                      [&](const ActiveBss& a) { return a.bss == b; }))
        continue;
      const Activation act = try_activate(b, active, d, configs, geo);
      if (!act.feasible) continue;
      std::vector<ActiveBss> next = active;
      next.push_back({b, act.mode, act.tx_pwr});
      const bool is_new = index.find(make_key(next)) == index.end();
      const int ti = add_state(next, true);
      if (!g.states[ti].reachable) g.states[ti].reachable = true;
      g.transitions.push_back({si, ti, b, true});
      if (is_new) frontier.push_back(ti);
    }
    for (const ActiveBss& a : active) {
      std::vector<ActiveBss> next;
      for (const ActiveBss& o : active)
        if (o.bss != a.bss) next.push_back(o);
      const bool is_new = index.find(make_key(next)) == index.end();
      const int ti = add_state(next, true);
      g.transitions.push_back({si, ti, a.bss, false});
      if (is_new) frontier.push_back(ti);
    }
  }

  // All-default combinations are enumerated even when no transition can
  // enter them, mirroring the grayed-out states of the analysis.
  const int combos = 1 << n;
  for (int mask = 1; mask < combos; ++mask) {
    std::vector<ActiveBss> active;
    for (int b = 0; b < n; ++b)
      if (mask & (1 << b)) active.push_back({b, BssMode::Default, configs[b].tx_pwr});
    const StateKey key = make_key(active);
    if (index.find(key) != index.end()) continue;
    const int si = add_state(active, false);
    for (const ActiveBss& a : g.states[si].active) {
      std::vector<ActiveBss> next;
      for (const ActiveBss& o : g.states[si].active)
        if (o.bss != a.bss) next.push_back(o);
      auto it = index.find(make_key(next));
      if (it != index.end()) g.transitions.push_back({si, it->second, a.bss, false});
    }
  }
  return g;
}

Eigen::MatrixXd build_generator(const Graph& g, double lambda, const std::vector<int>& subset) {
  const int n = static_cast<int>(subset.size());
  std::vector<int> local(g.states.size(), -1);
  for (int i = 0; i < n; ++i) local[subset[i]] = i;

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
  for (const Transition& t : g.transitions) {
    const int from = local[t.from], to = local[t.to];
    if (from < 0 || to < 0) continue;
    double rate = lambda;
    if (!t.arrival) {
      const StateInfo& s = g.states[t.from];
      for (std::size_t k = 0; k < s.active.size(); ++k)
        if (s.active[k].bss == t.bss) rate = 1.0 / s.service_s[k];
    }
    if (!std::isfinite(rate) || rate <= 0.0)
      throw std::runtime_error("build_generator: non-finite transition rate");
    Q(from, to) += rate;
  }
  for (int i = 0; i < n; ++i) {
    Q(i, i) = 0.0;
    Q(i, i) = -Q.row(i).sum();
  }
  return Q;
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& Q) {
  const int n = static_cast<int>(Q.rows());
  Eigen::MatrixXd A = Q.transpose();
  A.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  Eigen::VectorXd pi = A.partialPivLu().solve(b);

  const double residual = (pi.transpose() * Q).cwiseAbs().maxCoeff();
  if (!(residual < 1e-10))
    throw std::runtime_error("stationary_distribution: residual above tolerance");
  for (int i = 0; i < n; ++i) {
    if (pi(i) < -1e-12)
      throw std::runtime_error("stationary_distribution: negative probability");
    if (pi(i) < 0.0) pi(i) = 0.0;
  }
  return pi;
}

std::vector<double> throughput_per_bss(const Graph& g, const std::vector<double>& pi_full) {
  std::vector<double> gamma(g.n_bss, 0.0);
  for (std::size_t s = 0; s < g.states.size(); ++s) {
    const StateInfo& st = g.states[s];
    for (std::size_t k = 0; k < st.active.size(); ++k)
      gamma[st.active[k].bss] += pi_full[s] * st.delivered_bps[k];
  }
  return gamma;
}

Solution solve(const Deployment& d, const std::vector<SrConfig>& configs, const PhyParams& phy,
               const MacParams& mac, const Options& opt) {
  Solution sol;
  sol.graph = enumerate_states(d, configs, phy, mac, opt);
  sol.lambda = opt.lambda.value_or(default_lambda(mac));

  const std::vector<int> subset = sol.graph.reachable_indices();
  const Eigen::MatrixXd Q = build_generator(sol.graph, sol.lambda, subset);
  const Eigen::VectorXd pi = stationary_distribution(Q);

  sol.pi.assign(sol.graph.states.size(), 0.0);
  for (std::size_t i = 0; i < subset.size(); ++i) sol.pi[subset[i]] = pi(static_cast<int>(i));
  sol.throughput_bps = throughput_per_bss(sol.graph, sol.pi);

  sol.sr_tx_pwr_dbm.assign(sol.graph.n_bss, 0.0);
  for (int b = 0; b < sol.graph.n_bss; ++b) sol.sr_tx_pwr_dbm[b] = configs[b].tx_pwr;
  for (int si : subset)
    for (const ActiveBss& a : sol.graph.states[si].active)
      sol.sr_tx_pwr_dbm[a.bss] = std::min(sol.sr_tx_pwr_dbm[a.bss], a.tx_pwr_dbm);
  return sol;
}

std::string dump_graph(const Graph& g, const std::vector<double>* pi) {
  std::ostringstream os;
  int reach = 0;
  for (const StateInfo& s : g.states) reach += s.reachable ? 1 : 0;
  os << "# states " << g.states.size() << " reachable " << reach << "\n";
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const StateInfo& s = g.states[i];
    os << "state " << i << ": " << s.label << (s.reachable ? "" : " [unreachable]");
    if (pi) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " pi=%.6g", (*pi)[i]);
      os << buf;
    }
    for (std::size_t k = 0; k < s.active.size(); ++k) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " {%c pwr=%.6g mcs=%d}", 'A' + s.active[k].bss,
                    s.active[k].tx_pwr_dbm, s.mcs_index[k]);
      os << buf;
    }
    os << "\n";
  }
  for (const Transition& t : g.transitions)
    os << t.from << " -> " << t.to << (t.arrival ? " arrival " : " departure ")
       << static_cast<char>('A' + t.bss) << "\n";
  return os.str();
}

std::string pi_csv(const Graph& g, const std::vector<double>& pi) {
  std::string out = "state,label,reachable,pi\n";
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ",%d,%.12g\n", g.states[i].reachable ? 1 : 0, pi[i]);
    out += std::to_string(i) + ",\"" + g.states[i].label + "\"" + buf;
  }
  return out;
}

}  // namespace sr::ctmn
