#ifndef SR_CTMN_HPP
#define SR_CTMN_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sr/propagation.hpp"
#include "sr/scenario.hpp"
#include "sr/srcore.hpp"

// Continuous-time Markov network of an OBSS under the spatial reuse
// sensing rules: a state is a feasible set of concurrently transmitting
// BSSs with the sensitivity mode each one used to start. Full-buffer,
// downlink-only traffic over one STA per BSS; uplink control frames
// only contribute to the exchange duration.

namespace sr::ctmn {

enum class BssMode { Default, SrNonSrg, SrSrg };

struct ActiveBss {
  int bss = 0;
  BssMode mode = BssMode::Default;
  double tx_pwr_dbm = 0.0;
};

struct StateInfo {
  std::vector<ActiveBss> active;       // sorted by bss id
  std::string label;                   // "A_SR B" notation
  bool reachable = false;
  // Per active entry, aligned with `active`:
  std::vector<int> mcs_index;          // -1 when no MCS is sustainable
  std::vector<double> service_s;       // exchange duration
  std::vector<double> delivered_bps;   // 0 for spoiled transmissions
};

struct Transition {
  int from = 0;
  int to = 0;
  int bss = 0;
  bool arrival = false;  // activation (rate lambda) vs departure (rate mu)
};

struct Graph {
  std::vector<StateInfo> states;  // index 0 is the empty state
  std::vector<Transition> transitions;
  int n_bss = 0;

  std::vector<int> reachable_indices() const;
};

struct Options {
  std::optional<double> lambda;  // default: 1 / ((CW/2) * T_e)
  int state_cap = 2000;
};

/// Channel-access rate implied by the mean continuous backoff.
double default_lambda(const MacParams& mac);

/// Breadth-first expansion from the empty state under the sensing rules,
/// plus the all-default combinations kept (flagged unreachable) for
/// report parity. Throws std::runtime_error past options.state_cap.
Graph enumerate_states(const Deployment& d, const std::vector<SrConfig>& configs,
                       const PhyParams& phy, const MacParams& mac, const Options& opt = {});

/// Generator matrix over the given state subset; diagonal set to the
/// negative row sum.
Eigen::MatrixXd build_generator(const Graph& g, double lambda, const std::vector<int>& subset);

/// Solves pi * Q = 0, sum(pi) = 1 by direct LU with the normalization
/// row substituted. Throws std::runtime_error when the residual exceeds
/// 1e-10. Entries in [-1e-12, 0) are clipped to zero.
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& Q);

/// Long-term per-BSS throughput: sum over states of pi(s) times the
/// delivered rate of the BSS in s.
std::vector<double> throughput_per_bss(const Graph& g, const std::vector<double>& pi_full);

struct Solution {
  Graph graph;
  std::vector<double> pi;              // full-size; zero on unreachable states
  std::vector<double> throughput_bps;  // per BSS
  std::vector<double> sr_tx_pwr_dbm;   // lowest power each BSS uses across reachable states
  double lambda = 0.0;
};

Solution solve(const Deployment& d, const std::vector<SrConfig>& configs, const PhyParams& phy,
               const MacParams& mac, const Options& opt = {});

/// Plain-text adjacency dump of the state graph; includes stationary
/// probabilities when provided.
std::string dump_graph(const Graph& g, const std::vector<double>* pi = nullptr);

/// Per-state stationary distribution as CSV (state,label,reachable,pi).
std::string pi_csv(const Graph& g, const std::vector<double>& pi);

std::string state_label(const std::vector<ActiveBss>& active);

}  // namespace sr::ctmn

#endif  // SR_CTMN_HPP
