// Command-line front end: CTMN analyses, simulations, OBSS/PD sweeps,
// model-vs-simulator cross-validation, and SRPS element validation.
//
// Exit codes: 0 success, 2 input error, 3 internal assertion.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "sr/experiments.hpp"

namespace {

using namespace sr;

struct CommonOpts {
  std::string scenario_path;
  std::string out_dir = "out";
  std::string seeds_range;
  int jobs = 1;
  bool trace = false;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--scenario", o.scenario_path, "scenario file")->required();
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--seeds", o.seeds_range, "seed range a..b (overrides the scenario)");
  cmd->add_option("--jobs", o.jobs, "parallel runs");
  cmd->add_flag("--trace", o.trace, "emit per-run event traces");
  cmd->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
}

Scenario load(const CommonOpts& o) {
  Scenario s = load_scenario_file(o.scenario_path);
  if (!o.seeds_range.empty()) {
    auto dots = o.seeds_range.find("..");
    if (dots == std::string::npos) throw std::invalid_argument("--seeds expects a..b");
    const std::uint64_t a = std::stoull(o.seeds_range.substr(0, dots));
    const std::uint64_t b = std::stoull(o.seeds_range.substr(dots + 2));
    if (b < a) throw std::invalid_argument("--seeds range is empty");
    s.sweep.seeds.clear();
    for (std::uint64_t v = a; v <= b; ++v) s.sweep.seeds.push_back(v);
  }
  return s;
}

nlohmann::json sim_rows_json(const std::vector<exp::SimRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["seed"] = r.seed;
    j["map_size"] = r.map_size_m;
    j["load_mbps"] = r.load_mbps;
    j["n_agg"] = r.n_agg_max;
    j["sr_mode"] = r.sr_mode;
    j["obss_pd"] = r.obss_pd;
    j["bss"] = std::string(1, static_cast<char>('A' + r.bss));
    j["throughput_mbps"] = r.throughput_mbps;
    j["occupancy"] = r.occupancy;
    j["delay_ms"] = r.delay_ms;
    j["drops"] = r.drops;
    j["sr_enabled"] = r.sr_enabled;
    arr.push_back(j);
  }
  return arr;
}

int cmd_ctmn(const CommonOpts& o) {
  const Scenario s = load(o);
  if (s.grid) throw std::invalid_argument("ctmn expects an explicit deployment");
  const exp::CtmnSweepResult res =
      exp::ctmn_sweep(s.deployment, s.configs, s.phy, s.mac, s.sweep, true);
  std::vector<std::string> outputs;
  if (o.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : res.rows) {
      nlohmann::json j;
      j["obss_pd_non_srg"] = r.obss_pd;
      if (r.obss_pd_srg) j["obss_pd_srg"] = *r.obss_pd_srg;
      j["bss"] = std::string(1, static_cast<char>('A' + r.bss));
      j["throughput_mbps"] = r.throughput_mbps;
      j["tx_pwr_dbm"] = r.tx_pwr_dbm;
      arr.push_back(j);
    }
    nlohmann::json doc;
    doc["manifest"] = "manifest.json";
    doc["rows"] = arr;
    exp::write_file(o.out_dir + "/ctmn.json", doc.dump(2) + "\n");
    outputs.push_back("ctmn.json");
  } else {
    exp::write_file(o.out_dir + "/ctmn.csv", exp::kManifestRef + exp::ctmn_csv(res.rows));
    outputs.push_back("ctmn.csv");
  }
  for (const auto& [label, dump] : res.graphs) {
    const std::string name =
        label.size() > 4 && label.ends_with(".csv") ? label : label + ".txt";
    exp::write_file(o.out_dir + "/graphs/" + name, exp::kManifestRef + dump);
    outputs.push_back("graphs/" + name);
  }
  exp::write_manifest(o.out_dir, "ctmn", o.scenario_path, outputs);
  std::printf("ctmn: %zu rows, %zu state graphs -> %s\n", res.rows.size(), res.graphs.size(),
              o.out_dir.c_str());
  return 0;
}

int cmd_sim(const CommonOpts& o) {
  const Scenario s = load(o);
  const auto rows = exp::sim_sweep(s, o.jobs, o.trace ? o.out_dir + "/traces" : std::string());
  std::vector<std::string> outputs;
  if (o.format == "json") {
    nlohmann::json doc;
    doc["manifest"] = "manifest.json";
    doc["rows"] = sim_rows_json(rows);
    exp::write_file(o.out_dir + "/sim.json", doc.dump(2) + "\n");
    outputs.push_back("sim.json");
  } else {
    exp::write_file(o.out_dir + "/sim.csv", exp::kManifestRef + exp::sim_csv(rows));
    exp::write_file(o.out_dir + "/sim_mean.csv", exp::kManifestRef + exp::sim_aggregate_csv(rows));
    outputs.push_back("sim.csv");
    outputs.push_back("sim_mean.csv");
  }
  exp::write_manifest(o.out_dir, "sim", o.scenario_path, outputs);
  std::printf("sim: %zu rows -> %s\n", rows.size(), o.out_dir.c_str());
  return 0;
}

int cmd_sweep(const CommonOpts& o) {
  const Scenario s = load(o);
  const auto rows = exp::sim_sweep(s, o.jobs);
  const auto summary = exp::sweep_summary(s, o.jobs);
  exp::write_file(o.out_dir + "/sweep.csv", exp::kManifestRef + exp::sim_csv(rows));
  exp::write_file(o.out_dir + "/summary.csv", exp::kManifestRef + exp::sweep_summary_csv(summary));
  exp::write_manifest(o.out_dir, "sweep", o.scenario_path, {"sweep.csv", "summary.csv"});
  for (const auto& r : summary)
    std::printf("map %g load %g Mbps: best OBSS/PD %g, BSS_A %+0.2f Mbps, others %+0.2f Mbps\n",
                r.map_size_m, r.load_mbps, r.best_obss_pd, r.gain_a_mbps, r.others_delta_mbps);
  return 0;
}

int cmd_crossval(const CommonOpts& o, double duration_s) {
  const Scenario s = load(o);
  if (s.grid) throw std::invalid_argument("crossval expects an explicit deployment");
  if (s.sweep.obss_pd_values.empty()) throw std::invalid_argument("crossval: empty sweep");
  const exp::CrossvalResult res =
      exp::crossval(s.deployment, s.configs, s.phy, s.mac, s.sweep, duration_s, o.jobs);
  exp::write_file(o.out_dir + "/crossval.csv", exp::kManifestRef + exp::crossval_csv(res));
  std::string points = std::string(exp::kManifestRef) + "obss_pd_non_srg,obss_pd_srg";
  for (std::size_t b = 0; b < res.mae_mbps.size(); ++b) {
    const char c = static_cast<char>('A' + b);
    points += std::string(",ctmn_") + c + ",sim_" + c;
  }
  points += "\n";
  for (const std::string& row : res.csv_rows) points += row + "\n";
  exp::write_file(o.out_dir + "/crossval_points.csv", points);
  exp::write_manifest(o.out_dir, "crossval", o.scenario_path,
                      {"crossval.csv", "crossval_points.csv"});
  for (std::size_t b = 0; b < res.mae_mbps.size(); ++b)
    std::printf("BSS_%c: MAE %.3f Mbps, MAD %.3f Mbps\n", static_cast<char>('A' + b),
                res.mae_mbps[b], res.mad_mbps[b]);
  return 0;
}

int cmd_validate_srps(const std::string& element_path) {
  std::ifstream in(element_path);
  if (!in) throw std::invalid_argument("cannot open element file: " + element_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed element JSON: ") + e.what());
  }
  SrpsElement e;
  e.psr_disallowed = j.value("psr_disallowed", false);
  e.non_srg_obss_pd_sr_disallowed = j.value("non_srg_obss_pd_sr_disallowed", false);
  e.non_srg_offset_present = j.value("non_srg_offset_present", false);
  e.srg_information_present = j.value("srg_information_present", false);
  e.non_srg_obss_pd_max_offset = j.value("non_srg_obss_pd_max_offset", 0);
  e.srg_obss_pd_min_offset = j.value("srg_obss_pd_min_offset", 0);
  e.srg_obss_pd_max_offset = j.value("srg_obss_pd_max_offset", 0);
  e.srg_bss_color_bitmap = j.value("srg_bss_color_bitmap", 0ull);
  e.srg_partial_bssid_bitmap = j.value("srg_partial_bssid_bitmap", 0ull);

  try {
    const SrpsBounds b = validate_srps(e);
    std::printf("valid\n");
    std::printf("non-SRG OBSS/PD bounds: [%g, %g] dBm\n", b.non_srg_min_dbm, b.non_srg_max_dbm);
    if (b.srg_min_dbm)
      std::printf("SRG OBSS/PD bounds:     [%g, %g] dBm\n", *b.srg_min_dbm, *b.srg_max_dbm);
    else
      std::printf("SRG OBSS/PD bounds:     not applicable\n");
    return 0;
  } catch (const SrpsValidationError& err) {
    std::fprintf(stderr, "invalid: %s\n", err.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"802.11ax spatial reuse analysis toolkit"};
  app.require_subcommand(1);

  CommonOpts ctmn_o, sim_o, sweep_o, cross_o;
  double cross_duration = 10.0;
  std::string element_path;

  add_common(app.add_subcommand("ctmn", "analytical model over the configured sweep"), ctmn_o);
  add_common(app.add_subcommand("sim", "simulate the configured sweep"), sim_o);
  add_common(app.add_subcommand("sweep", "best-threshold study against a legacy baseline"),
             sweep_o);
  auto* cross = app.add_subcommand("crossval", "model vs simulator error table");
  add_common(cross, cross_o);
  cross->add_option("--duration", cross_duration, "simulated seconds per point");
  auto* vs = app.add_subcommand("validate-srps", "check a spatial reuse parameter set element");
  vs->add_option("--element", element_path, "JSON element file")->required();

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("ctmn")) return cmd_ctmn(ctmn_o);
    if (app.got_subcommand("sim")) return cmd_sim(sim_o);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_o);
    if (app.got_subcommand("crossval")) return cmd_crossval(cross_o, cross_duration);
    if (app.got_subcommand("validate-srps")) return cmd_validate_srps(element_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const sr::ParseError& e) {
    std::fprintf(stderr, "scenario error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 3;
  }
  return 0;
}
