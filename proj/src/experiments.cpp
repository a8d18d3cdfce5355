#include "sr/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "sr/rng.hpp"

namespace sr::exp {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const char* mode_name(SrMode m) {
  switch (m) {
    case SrMode::Legacy: return "legacy";
    case SrMode::OnlyA: return "only_a";
    case SrMode::Mixed: return "mixed";
    case SrMode::All: return "all";
  }
  return "?";
}

// Index-ordered parallel map: worker threads pull job indices from a
// shared counter, results land in a pre-sized vector.
template <typename Fn>
void parallel_for(int n_jobs, int threads, Fn&& fn) {
  threads = std::max(1, std::min(threads, n_jobs));
  if (threads == 1) {
    for (int i = 0; i < n_jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n_jobs; i = next.fetch_add(1)) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

std::string format_mbps(double v) { return fmt("%.6f", v); }

std::vector<SrConfig> apply_sr_point(const std::vector<SrConfig>& base, SrMode mode,
                                     double obss_pd, std::optional<double> obss_pd_srg,
                                     std::uint64_t deployment_seed) {
  std::vector<SrConfig> out = base;
  DetRng coin(deployment_seed ^ 0x5ebe11aull);
  for (std::size_t b = 0; b < out.size(); ++b) {
    bool applies = false;
    switch (mode) {
      case SrMode::Legacy: applies = false; break;
      case SrMode::OnlyA: applies = b == 0; break;
      case SrMode::All: applies = true; break;
      case SrMode::Mixed: {
        const bool flip = coin.bernoulli(0.5);  // every BSS draws, keeps streams aligned
        applies = b == 0 || flip;
        break;
      }
    }
    if (!applies) continue;
    out[b].obss_pd_non_srg = obss_pd;
    if (out[b].srg_enabled && obss_pd_srg) out[b].obss_pd_srg = *obss_pd_srg;
  }
  return out;
}

CtmnSweepResult ctmn_sweep(const Deployment& d, const std::vector<SrConfig>& base,
                           const PhyParams& phy, const MacParams& mac, const SweepSpec& sweep,
                           bool keep_graphs) {
  CtmnSweepResult result;
  std::vector<std::optional<double>> srg_points;
  if (sweep.obss_pd_srg_values.empty()) {
    srg_points.push_back(std::nullopt);
  } else {
    for (double v : sweep.obss_pd_srg_values) srg_points.emplace_back(v);
  }

  for (double t : sweep.obss_pd_values)
    for (const auto& srg : srg_points) {
      const auto configs = apply_sr_point(base, sweep.sr_mode, t, srg, 0);
      const ctmn::Solution sol = ctmn::solve(d, configs, phy, mac);
      for (int b = 0; b < sol.graph.n_bss; ++b) {
        CtmnRow row;
        row.obss_pd = t;
        row.obss_pd_srg = srg;
        row.bss = b;
        row.throughput_mbps = sol.throughput_bps[b] / 1e6;
        row.tx_pwr_dbm = sol.sr_tx_pwr_dbm[b];
        result.rows.push_back(row);
      }
      if (keep_graphs) {
        std::string label = "obss_pd_" + fmt("%g", t);
        if (srg) label += "_srg_" + fmt("%g", *srg);
        result.graphs.emplace_back(label, ctmn::dump_graph(sol.graph, &sol.pi));
        result.graphs.emplace_back(label + "_pi.csv", ctmn::pi_csv(sol.graph, sol.pi));
      }
    }
  return result;
}

std::vector<SimRow> sim_sweep(const Scenario& scenario, int jobs, const std::string& trace_dir) {
  struct Job {
    Deployment d;
    std::vector<SrConfig> configs;
    sim::SimParams params;
    SimRow proto;
  };
  std::vector<Job> list;
  const SweepSpec& sw = scenario.sweep;

  std::vector<std::uint64_t> seeds = sw.seeds;
  if (seeds.empty())
    for (int i = 0; i < sw.n_deployments; ++i) seeds.push_back(static_cast<std::uint64_t>(i + 1));
  std::vector<double> maps = sw.map_sizes_m;
  if (!scenario.grid) maps = {scenario.deployment.map_w_m};
  std::vector<double> loads = sw.loads_bps;
  if (loads.empty() || sw.full_buffer) loads = {0.0};

  for (double map_size : maps)
    for (std::uint64_t seed : seeds)
      for (double load : loads)
        for (double t : sw.obss_pd_values) {
          Job job;
          if (scenario.grid) {
            job.d = random_grid(map_size, seed, scenario.pin_center_sta);
            job.configs.assign(job.d.bsses.size(), scenario.grid_default);
          } else {
            job.d = scenario.deployment;
            job.configs = scenario.configs;
          }
          std::optional<double> srg;
          if (!sw.obss_pd_srg_values.empty()) srg = sw.obss_pd_srg_values.front();
          job.configs = apply_sr_point(job.configs, sw.sr_mode, t, srg, seed);
          job.params.duration_s = sw.duration_s;
          job.params.warmup_s = sw.warmup_s;
          job.params.load_bps = load;
          job.params.full_buffer = sw.full_buffer;
          job.params.seed = seed;
          job.proto.seed = seed;
          job.proto.map_size_m = scenario.grid ? map_size : scenario.deployment.map_w_m;
          job.proto.load_mbps = load / 1e6;
          job.proto.n_agg_max = scenario.mac.n_agg_max;
          job.proto.sr_mode = mode_name(sw.sr_mode);
          job.proto.obss_pd = t;
          list.push_back(std::move(job));
        }

  std::vector<std::vector<SimRow>> results(list.size());
  parallel_for(static_cast<int>(list.size()), jobs, [&](int i) {
    Job& job = list[static_cast<std::size_t>(i)];
    std::ostringstream trace;
    if (!trace_dir.empty()) job.params.trace = &trace;
    const sim::MetricsReport rep =
        sim::run_simulation(job.d, job.configs, scenario.phy, scenario.mac, job.params);
    if (!trace_dir.empty()) {
      char name[128];
      std::snprintf(name, sizeof name, "/trace_m%g_s%llu_l%g_t%g.txt", job.proto.map_size_m,
                    static_cast<unsigned long long>(job.proto.seed), job.proto.load_mbps,
                    job.proto.obss_pd);
      write_file(trace_dir + name, trace.str());
    }
    std::vector<SimRow> rows;
    for (std::size_t b = 0; b < rep.per_bss.size(); ++b) {
      SimRow row = job.proto;
      row.bss = static_cast<int>(b);
      row.throughput_mbps = rep.per_bss[b].throughput_bps / 1e6;
      row.occupancy = rep.per_bss[b].occupancy;
      row.delay_ms = rep.per_bss[b].mean_delay_s * 1e3;
      row.drops = rep.per_bss[b].drops;
      row.sr_enabled = rep.per_bss[b].sr_enabled;
      rows.push_back(row);
    }
    results[static_cast<std::size_t>(i)] = std::move(rows);
  });

  std::vector<SimRow> out;
  for (auto& rows : results)
    for (auto& r : rows) out.push_back(std::move(r));
  return out;
}

CrossvalResult crossval(const Deployment& d, const std::vector<SrConfig>& base,
                        const PhyParams& phy, const MacParams& mac, const SweepSpec& sweep,
                        double sim_duration_s, int jobs) {
  struct Point {
    double t;
    std::optional<double> srg;
  };
  std::vector<Point> points;
  if (sweep.obss_pd_srg_values.empty()) {
    for (double t : sweep.obss_pd_values) points.push_back({t, std::nullopt});
  } else {
    for (double t : sweep.obss_pd_values)
      for (double s : sweep.obss_pd_srg_values) points.push_back({t, s});
  }
  if (points.empty()) throw std::invalid_argument("crossval: empty sweep");

  const int n = static_cast<int>(d.bsses.size());
  std::vector<std::vector<double>> errors(points.size());
  std::vector<std::string> rows(points.size());

  parallel_for(static_cast<int>(points.size()), jobs, [&](int i) {
    const Point& pt = points[static_cast<std::size_t>(i)];
    const auto configs = apply_sr_point(base, sweep.sr_mode, pt.t, pt.srg, 0);
    const ctmn::Solution sol = ctmn::solve(d, configs, phy, mac);

    sim::SimParams sp;
    sp.duration_s = sim_duration_s;
    sp.warmup_s = std::min(1.0, sim_duration_s / 10.0);
    sp.full_buffer = true;
    sp.seed = 1000 + static_cast<std::uint64_t>(i);
    const sim::MetricsReport rep = sim::run_simulation(d, configs, phy, mac, sp);

    std::vector<double> e(static_cast<std::size_t>(n));
    std::string row = fmt("%g", pt.t);
    row += pt.srg ? "," + fmt("%g", *pt.srg) : ",";
    for (int b = 0; b < n; ++b) {
      const double c = sol.throughput_bps[static_cast<std::size_t>(b)] / 1e6;
      const double s = rep.per_bss[static_cast<std::size_t>(b)].throughput_bps / 1e6;
      e[static_cast<std::size_t>(b)] = c - s;
      row += "," + format_mbps(c) + "," + format_mbps(s);
    }
    errors[static_cast<std::size_t>(i)] = std::move(e);
    rows[static_cast<std::size_t>(i)] = std::move(row);
  });

  CrossvalResult out;
  out.points = static_cast<int>(points.size());
  out.csv_rows = std::move(rows);
  out.mae_mbps.assign(static_cast<std::size_t>(n), 0.0);
  out.mad_mbps.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> mean(static_cast<std::size_t>(n), 0.0);
  for (const auto& e : errors)
    for (int b = 0; b < n; ++b) {
      out.mae_mbps[static_cast<std::size_t>(b)] += std::abs(e[static_cast<std::size_t>(b)]);
      mean[static_cast<std::size_t>(b)] += e[static_cast<std::size_t>(b)];
    }
  for (int b = 0; b < n; ++b) {
    out.mae_mbps[static_cast<std::size_t>(b)] /= static_cast<double>(points.size());
    mean[static_cast<std::size_t>(b)] /= static_cast<double>(points.size());
  }
  for (const auto& e : errors)
    for (int b = 0; b < n; ++b)
      out.mad_mbps[static_cast<std::size_t>(b)] +=
          std::abs(e[static_cast<std::size_t>(b)] - mean[static_cast<std::size_t>(b)]);
  for (int b = 0; b < n; ++b)
    out.mad_mbps[static_cast<std::size_t>(b)] /= static_cast<double>(points.size());
  return out;
}

double best_obss_pd_for_bss_a(const std::vector<SimRow>& rows) {
  std::map<double, std::pair<double, int>> by_threshold;  // threshold -> (sum, count)
  for (const SimRow& r : rows) {
    if (r.bss != 0) continue;
    auto& acc = by_threshold[r.obss_pd];
    acc.first += r.throughput_mbps;
    acc.second += 1;
  }
  if (by_threshold.empty()) throw std::invalid_argument("best_obss_pd: no BSS_A rows");
  double best_t = by_threshold.begin()->first;
  double best_mean = -1.0;
  for (const auto& [t, acc] : by_threshold) {
    const double mean = acc.first / acc.second;
    if (mean > best_mean + 1e-12) {  // ties resolve to the lower threshold
      best_mean = mean;
      best_t = t;
    }
  }
  return best_t;
}

std::vector<SweepSummaryRow> sweep_summary(const Scenario& scenario, int jobs) {
  Scenario leg = scenario;
  leg.sweep.sr_mode = SrMode::Legacy;
  leg.sweep.obss_pd_values = {kObssPdMinDbm};
  const std::vector<SimRow> rows = sim_sweep(scenario, jobs);
  const std::vector<SimRow> base = sim_sweep(leg, jobs);

  std::vector<SweepSummaryRow> out;
  std::vector<double> maps = scenario.sweep.map_sizes_m;
  if (!scenario.grid) maps = {scenario.deployment.map_w_m};
  std::vector<double> loads = scenario.sweep.loads_bps;
  if (loads.empty() || scenario.sweep.full_buffer) loads = {0.0};

  for (double map_size : maps)
    for (double load : loads) {
      auto in_group = [&](const SimRow& r) {
        return r.map_size_m == (scenario.grid ? map_size : scenario.deployment.map_w_m) &&
               r.load_mbps == load / 1e6;
      };
      std::vector<SimRow> group;
      for (const SimRow& r : rows)
        if (in_group(r)) group.push_back(r);
      if (group.empty()) continue;

      SweepSummaryRow s;
      s.map_size_m = map_size;
      s.load_mbps = load / 1e6;
      s.best_obss_pd = best_obss_pd_for_bss_a(group);

      double best_a = 0, best_o = 0, leg_a = 0, leg_o = 0;
      int na = 0, no = 0, la = 0, lo = 0;
      for (const SimRow& r : group) {
        if (r.obss_pd != s.best_obss_pd) continue;
        if (r.bss == 0) {
          best_a += r.throughput_mbps;
          ++na;
        } else {
          best_o += r.throughput_mbps;
          ++no;
        }
      }
      for (const SimRow& r : base) {
        if (!in_group(r)) continue;
        if (r.bss == 0) {
          leg_a += r.throughput_mbps;
          ++la;
        } else {
          leg_o += r.throughput_mbps;
          ++lo;
        }
      }
      s.best_a_mbps = na ? best_a / na : 0.0;
      s.legacy_a_mbps = la ? leg_a / la : 0.0;
      s.gain_a_mbps = s.best_a_mbps - s.legacy_a_mbps;
      s.others_delta_mbps = (no ? best_o / no : 0.0) - (lo ? leg_o / lo : 0.0);
      out.push_back(s);
    }
  return out;
}

std::string sweep_summary_csv(const std::vector<SweepSummaryRow>& rows) {
  std::string out =
      "map_size,load_mbps,best_obss_pd,legacy_a_mbps,best_a_mbps,gain_a_mbps,others_delta_mbps\n";
  for (const SweepSummaryRow& r : rows) {
    out += fmt("%g", r.map_size_m) + "," + fmt("%g", r.load_mbps) + "," +
           fmt("%g", r.best_obss_pd) + "," + format_mbps(r.legacy_a_mbps) + "," +
           format_mbps(r.best_a_mbps) + "," + format_mbps(r.gain_a_mbps) + "," +
           format_mbps(r.others_delta_mbps) + "\n";
  }
  return out;
}

std::string ctmn_csv(const std::vector<CtmnRow>& rows) {
  std::string out = "obss_pd_non_srg,obss_pd_srg,bss,throughput_mbps,tx_pwr_dbm\n";
  for (const CtmnRow& r : rows) {
    out += fmt("%g", r.obss_pd);
    out += r.obss_pd_srg ? "," + fmt("%g", *r.obss_pd_srg) : ",";
    out += ",";
    out += static_cast<char>('A' + r.bss);
    out += "," + format_mbps(r.throughput_mbps) + "," + fmt("%.6g", r.tx_pwr_dbm) + "\n";
  }
  return out;
}

std::string sim_csv(const std::vector<SimRow>& rows) {
  std::string out =
      "seed,map_size,load_mbps,n_agg,sr_mode,obss_pd,bss,throughput_mbps,occupancy,delay_ms,"
      "drops,sr_enabled\n";
  for (const SimRow& r : rows) {
    out += std::to_string(r.seed) + "," + fmt("%g", r.map_size_m) + "," +
           fmt("%g", r.load_mbps) + "," + std::to_string(r.n_agg_max) + "," + r.sr_mode + "," +
           fmt("%g", r.obss_pd) + ",";
    out += static_cast<char>('A' + r.bss);
    out += "," + format_mbps(r.throughput_mbps) + "," + fmt("%.6f", r.occupancy) + "," +
           fmt("%.6f", r.delay_ms) + "," + std::to_string(r.drops) + "," +
           (r.sr_enabled ? "1" : "0") + "\n";
  }
  return out;
}

std::string sim_aggregate_csv(const std::vector<SimRow>& rows) {
  struct Acc {
    double thr = 0, occ = 0, delay = 0;
    int n = 0;
  };
  std::map<std::tuple<double, double, std::string, double, int>, Acc> groups;
  for (const SimRow& r : rows) {
    Acc& a = groups[{r.map_size_m, r.load_mbps, r.sr_mode, r.obss_pd, r.bss}];
    a.thr += r.throughput_mbps;
    a.occ += r.occupancy;
    a.delay += r.delay_ms;
    ++a.n;
  }
  std::string out =
      "map_size,load_mbps,sr_mode,obss_pd,bss,mean_throughput_mbps,mean_occupancy,mean_delay_ms\n";
  for (const auto& [key, a] : groups) {
    const auto& [map_size, load, mode, t, bss] = key;
    out += fmt("%g", map_size) + "," + fmt("%g", load) + "," + mode + "," + fmt("%g", t) + ",";
    out += static_cast<char>('A' + bss);
    out += "," + format_mbps(a.thr / a.n) + "," + fmt("%.6f", a.occ / a.n) + "," +
           fmt("%.6f", a.delay / a.n) + "\n";
  }
  return out;
}

std::string crossval_csv(const CrossvalResult& r) {
  std::string out = "bss,mae_mbps,mad_mbps\n";
  for (std::size_t b = 0; b < r.mae_mbps.size(); ++b) {
    out += static_cast<char>('A' + static_cast<int>(b));
    out += "," + format_mbps(r.mae_mbps[b]) + "," + format_mbps(r.mad_mbps[b]) + "\n";
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void write_manifest(const std::string& out_dir, const std::string& command,
                    const std::string& scenario_path, const std::vector<std::string>& outputs) {
  nlohmann::json j;
  j["tool"] = kToolVersion;
  j["command"] = command;
  j["scenario"] = scenario_path;
  j["outputs"] = outputs;
  const auto now = std::chrono::system_clock::now();
  j["wall_clock_unix_s"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  write_file(out_dir + "/manifest.json", j.dump(2) + "\n");
}

}  // namespace sr::exp
