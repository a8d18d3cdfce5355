#ifndef SR_EXPERIMENTS_HPP
#define SR_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sr/ctmn.hpp"
#include "sr/desim.hpp"
#include "sr/scenario.hpp"

// Sweep drivers and report emission shared by the CLI and the test
// suites. All output is deterministic: fixed formatting, fixed row order,
// parallel fan-out merged by job index.

namespace sr::exp {

inline constexpr const char* kToolVersion = "srsim 1.0.0";

/// Per-BSS configs for one sweep point. BSS_A (index 0) applies SR in
/// every mode except Legacy; Mixed draws a fair coin per other BSS from
/// the deployment seed.
std::vector<SrConfig> apply_sr_point(const std::vector<SrConfig>& base, SrMode mode,
                                     double obss_pd, std::optional<double> obss_pd_srg,
                                     std::uint64_t deployment_seed);

struct CtmnRow {
  double obss_pd = 0.0;
  std::optional<double> obss_pd_srg;
  int bss = 0;
  double throughput_mbps = 0.0;
  double tx_pwr_dbm = 0.0;
};

struct CtmnSweepResult {
  std::vector<CtmnRow> rows;
  // One adjacency dump per sweep point, keyed by a point label.
  std::vector<std::pair<std::string, std::string>> graphs;
};

CtmnSweepResult ctmn_sweep(const Deployment& d, const std::vector<SrConfig>& base,
                           const PhyParams& phy, const MacParams& mac, const SweepSpec& sweep,
                           bool keep_graphs = false);

struct SimRow {
  std::uint64_t seed = 0;
  double map_size_m = 0.0;
  double load_mbps = 0.0;
  int n_agg_max = 0;
  std::string sr_mode;
  double obss_pd = 0.0;
  int bss = 0;
  double throughput_mbps = 0.0;
  double occupancy = 0.0;
  double delay_ms = 0.0;
  std::uint64_t drops = 0;
  bool sr_enabled = false;
};

/// Simulation fan-out over seeds (deployments), thresholds and loads per
/// the sweep spec. `jobs` bounds the worker threads; results come back
/// in deterministic order regardless of scheduling. A non-empty
/// trace_dir writes one event-trace file per run.
std::vector<SimRow> sim_sweep(const Scenario& scenario, int jobs,
                              const std::string& trace_dir = {});

struct CrossvalResult {
  std::vector<double> mae_mbps;  // per BSS
  std::vector<double> mad_mbps;  // per BSS
  std::vector<std::string> csv_rows;
  int points = 0;
};

/// CTMN vs simulator over the joint (non-SRG x SRG) threshold grid with
/// full-buffer traffic.
CrossvalResult crossval(const Deployment& d, const std::vector<SrConfig>& base,
                        const PhyParams& phy, const MacParams& mac, const SweepSpec& sweep,
                        double sim_duration_s, int jobs);

/// Threshold maximizing BSS_A's mean throughput over seeds; ties go to
/// the lower (more conservative) threshold.
double best_obss_pd_for_bss_a(const std::vector<SimRow>& rows);

struct SweepSummaryRow {
  double map_size_m = 0.0;
  double load_mbps = 0.0;
  double best_obss_pd = 0.0;
  double legacy_a_mbps = 0.0;   // mean over seeds
  double best_a_mbps = 0.0;     // at the best threshold
  double gain_a_mbps = 0.0;
  double others_delta_mbps = 0.0;  // mean change of the other BSSs at that threshold
};

/// Best-threshold study against the legacy baseline, per map size and
/// load: the selection is made from BSS_A's point of view.
std::vector<SweepSummaryRow> sweep_summary(const Scenario& scenario, int jobs);

std::string sweep_summary_csv(const std::vector<SweepSummaryRow>& rows);

// --- deterministic emission ------------------------------------------------

std::string ctmn_csv(const std::vector<CtmnRow>& rows);
std::string sim_csv(const std::vector<SimRow>& rows);
std::string sim_aggregate_csv(const std::vector<SimRow>& rows);
std::string crossval_csv(const CrossvalResult& r);

/// Writes `text` to path, creating parent directories.
void write_file(const std::string& path, const std::string& text);

/// Leading comment line tying a data file to the manifest that
/// produced it; constant content keeps reruns byte-identical.
inline constexpr const char* kManifestRef = "# manifest: manifest.json\n";

/// JSON run manifest; wall-clock stays out of the data files so reruns
/// stay byte-identical.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::string& scenario_path, const std::vector<std::string>& outputs);

std::string format_mbps(double v);

}  // namespace sr::exp

#endif  // SR_EXPERIMENTS_HPP
