#ifndef SR_SCENARIO_HPP
#define SR_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sr/propagation.hpp"
#include "sr/srcore.hpp"

// Deployment construction and scenario-file ingestion: the fixed toy
// deployments, the 3x3 random grid generator, and the structured text
// format consumed by the CLI.

namespace sr {

struct Bss {
  Position ap;
  std::vector<Position> stas;
  int color = 1;
  std::optional<int> srg;
  int channel = 1;
};

struct Deployment {
  std::vector<Bss> bsses;
  double map_w_m = 0.0;
  double map_h_m = 0.0;

  /// Enforces the structural invariants: at least one STA per BSS, valid
  /// colors, and (when a map is set) all nodes inside its bounds.
  void validate() const;
};

/// Fixed two- and three-BSS deployments. Scenario 2 carries two spatial
/// reuse groups: {A, B} and {C}.
Deployment toy_scenario(int id);

/// Per-BSS configs matching the toy deployments: 20 dBm transmit power,
/// -82 dBm CCA/CS, SRG bitmaps derived from group membership.
std::vector<SrConfig> toy_configs(const Deployment& d);

/// 9-BSS deployment on a 3x3 cell grid. BSS_A (index 0) has its AP
/// pinned at the map center; every other AP, and every STA, is placed
/// uniformly at random inside its cell. Deterministic in the seed.
Deployment random_grid(double map_size_m, std::uint64_t seed, bool pin_center_sta = false);

enum class SrMode { Legacy, OnlyA, Mixed, All };

struct SweepSpec {
  std::vector<double> obss_pd_values;      // non-SRG dimension
  std::vector<double> obss_pd_srg_values;  // optional SRG dimension
  std::vector<double> map_sizes_m;
  std::vector<double> loads_bps;
  int n_deployments = 50;
  std::vector<std::uint64_t> seeds;
  SrMode sr_mode = SrMode::OnlyA;
  double duration_s = 30.0;
  double warmup_s = 1.0;
  bool full_buffer = false;
};

/// All possible OBSS/PD levels, -82..-62 dBm in 1 dBm steps.
std::vector<double> default_obss_pd_sweep();

struct Scenario {
  Deployment deployment;           // empty when grid generation is requested
  std::vector<SrConfig> configs;   // parallel to deployment.bsses
  bool grid = false;
  bool pin_center_sta = false;
  SrConfig grid_default;           // template for generated BSSs
  PhyParams phy;
  MacParams mac;
  SweepSpec sweep;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& field, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line) + ", " + field + ": " + msg),
        line_(line), field_(field) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Parses the documented scenario format. Unknown sections or keys are
/// rejected with a ParseError carrying line and field diagnostics.
Scenario parse_scenario(std::string_view text);

/// Canonical serialization; parse(serialize(s)) reconstructs the same
/// deployment and configuration.
std::string serialize_scenario(const Scenario& s);

Scenario load_scenario_file(const std::string& path);

}  // namespace sr

#endif  // SR_SCENARIO_HPP
