#ifndef SR_DESIM_HPP
#define SR_DESIM_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sr/propagation.hpp"
#include "sr/scenario.hpp"
#include "sr/srcore.hpp"

// Event-driven CSMA/CA simulator of an OBSS with the spatial reuse
// operation: continuous backoff with a fixed contention window, RTS/CTS
// protected downlink exchanges, two-NAV virtual carrier sensing, OBSS/PD
// based ignoring with transmit power restriction, Poisson traffic with
// finite buffers, and frame aggregation. Downlink-only, one STA per BSS.

namespace sr::sim {

struct SimParams {
  double duration_s = 30.0;
  double warmup_s = 1.0;
  double load_bps = 12e6;      // offered load per BSS (downlink)
  bool full_buffer = false;    // saturated APs, no arrival process
  std::uint64_t seed = 1;
  bool sr_enabled = true;      // false: legacy-only operation, SR paths inert
  std::ostream* trace = nullptr;
};

struct BssMetrics {
  double throughput_bps = 0.0;
  double occupancy = 0.0;       // fraction of time transmitting, retries included
  double mean_delay_s = 0.0;    // enqueue to acknowledgment, delivered packets
  std::uint64_t generated = 0;
  std::uint64_t delivered_pkts = 0;
  std::uint64_t drops = 0;      // buffer overflow
  std::uint64_t collisions = 0; // exchanges abandoned on timeout
  bool sr_enabled = false;
};

struct MetricsReport {
  std::vector<BssMetrics> per_bss;
  std::uint64_t color_collisions = 0;  // frames misclassified intra due to color reuse
  double duration_s = 0.0;
  double warmup_s = 0.0;
};

inline constexpr int kBufferCapacityPkts = 100;

/// Runs one simulation. Deterministic in (deployment, configs, params).
/// Throws std::invalid_argument on malformed input and std::runtime_error
/// when an internal conservation check fails.
MetricsReport run_simulation(const Deployment& d, const std::vector<SrConfig>& configs,
                             const PhyParams& phy, const MacParams& mac, const SimParams& params);

}  // namespace sr::sim

#endif  // SR_DESIM_HPP
