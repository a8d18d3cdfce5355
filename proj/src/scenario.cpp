#include "sr/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "sr/rng.hpp"

namespace sr {

void Deployment::validate() const {
  for (std::size_t i = 0; i < bsses.size(); ++i) {
    const Bss& b = bsses[i];
    if (b.stas.empty())
      throw std::invalid_argument("BSS " + std::to_string(i) + " has no STA");
    BssColor check(b.color);  // range check
    if (map_w_m > 0.0 || map_h_m > 0.0) {
      auto inside = [&](Position p) {
        return p.x >= 0.0 && p.x <= map_w_m && p.y >= 0.0 && p.y <= map_h_m;
      };
      if (!inside(b.ap))
        throw std::invalid_argument("AP of BSS " + std::to_string(i) + " outside map bounds");
      for (Position s : b.stas)
        if (!inside(s))
          throw std::invalid_argument("STA of BSS " + std::to_string(i) + " outside map bounds");
    }
  }
}

Deployment toy_scenario(int id) {
  Deployment d;
  if (id == 1) {
    d.map_w_m = 8.0;
    d.map_h_m = 0.0;
    d.bsses.push_back({{4.0, 0.0}, {{0.0, 0.0}}, 1, std::nullopt, 1});
    d.bsses.push_back({{6.0, 0.0}, {{8.0, 0.0}}, 2, std::nullopt, 1});
  } else if (id == 2) {
    d.map_w_m = 12.0;
    d.map_h_m = 9.0;
    d.bsses.push_back({{4.0, 0.0}, {{0.0, 0.0}}, 1, 1, 1});
    d.bsses.push_back({{8.0, 0.0}, {{12.0, 0.0}}, 2, 1, 1});
    d.bsses.push_back({{6.0, 5.0}, {{6.0, 9.0}}, 3, 2, 1});
  } else {
    throw std::invalid_argument("unknown toy scenario id: " + std::to_string(id));
  }
  d.validate();
  return d;
}

std::vector<SrConfig> toy_configs(const Deployment& d) {
  std::vector<SrConfig> configs(d.bsses.size());
  for (std::size_t i = 0; i < d.bsses.size(); ++i) {
    SrConfig& c = configs[i];
    c.tx_pwr = 20.0;
    c.tx_pwr_ref = 21.0;
    c.cca_cs = kCcaCsDbm;
    c.obss_pd_non_srg = kObssPdMinDbm;
    c.obss_pd_srg = kObssPdMinDbm;
    if (d.bsses[i].srg) {
      c.srg_enabled = true;
      for (const Bss& other : d.bsses)
        if (other.srg == d.bsses[i].srg) {
          c.srg_color_bitmap |= 1ull << other.color;
          c.srg_partial_bssid_bitmap |= 1ull << other.color;
        }
    }
  }
  return configs;
}

Deployment random_grid(double map_size_m, std::uint64_t seed, bool pin_center_sta) {
  if (!(map_size_m > 0.0)) throw std::invalid_argument("random_grid: map size must be > 0");
  const double cell = map_size_m / 3.0;
  DetRng rng(seed);

  // Cell order: center first (BSS_A), then the rest row-major.
  std::vector<std::pair<int, int>> cells = {{1, 1}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (!(r == 1 && c == 1)) cells.emplace_back(r, c);

  Deployment d;
  d.map_w_m = map_size_m;
  d.map_h_m = map_size_m;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto [r, c] = cells[i];
    const double x0 = c * cell, y0 = r * cell;
    auto draw = [&]() -> Position {
      return {x0 + rng.uniform(0.0, cell), y0 + rng.uniform(0.0, cell)};
    };
    Bss b;
    if (i == 0) {
      b.ap = {map_size_m / 2.0, map_size_m / 2.0};
      b.stas.push_back(pin_center_sta ? b.ap : draw());
    } else {
      b.ap = draw();
      b.stas.push_back(draw());
    }
    b.color = static_cast<int>(i) + 1;
    b.channel = 1;
    d.bsses.push_back(b);
  }
  d.validate();
  return d;
}

std::vector<double> default_obss_pd_sweep() {
  std::vector<double> v;
  for (int t = -82; t <= -62; ++t) v.push_back(t);
  return v;
}

// ---------------------------------------------------------------------------
// Scenario text format
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string_view sv) {
  std::size_t a = 0, b = sv.size();
  while (a < b && std::isspace(static_cast<unsigned char>(sv[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(sv[b - 1]))) --b;
  return std::string(sv.substr(a, b - a));
}

double parse_double(const std::string& v, int line, const std::string& field) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError(line, field, "expected a number, got '" + v + "'");
  }
}

long parse_int(const std::string& v, int line, const std::string& field) {
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError(line, field, "expected an integer, got '" + v + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// Lists accept "a,b,c" and ranges "a..b" or "a..b:step".
std::vector<double> parse_list(const std::string& v, int line, const std::string& field) {
  auto range = v.find("..");
  if (range != std::string::npos) {
    double lo = parse_double(trim(v.substr(0, range)), line, field);
    std::string rest = trim(v.substr(range + 2));
    double step = 1.0;
    auto colon = rest.find(':');
    if (colon != std::string::npos) {
      step = parse_double(trim(rest.substr(colon + 1)), line, field);
      rest = trim(rest.substr(0, colon));
    }
    double hi = parse_double(rest, line, field);
    if (!(step > 0.0) || hi < lo) throw ParseError(line, field, "bad range '" + v + "'");
    std::vector<double> out;
    for (double x = lo; x <= hi + 1e-9; x += step) out.push_back(x);
    return out;
  }
  std::vector<double> out;
  for (const std::string& tok : split(v, ','))
    if (!tok.empty()) out.push_back(parse_double(tok, line, field));
  return out;
}

Position parse_position(const std::string& v, int line, const std::string& field) {
  auto parts = split(v, ',');
  if (parts.size() != 2) throw ParseError(line, field, "expected 'x,y' meters, got '" + v + "'");
  return {parse_double(parts[0], line, field), parse_double(parts[1], line, field)};
}

// Attribute strings: space-separated "key:value" tokens.
std::vector<std::pair<std::string, std::string>> parse_attrs(const std::string& v, int line,
                                                             const std::string& field) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream is(v);
  std::string tok;
  while (is >> tok) {
    auto colon = tok.find(':');
    if (colon == std::string::npos)
      throw ParseError(line, field, "expected 'key:value', got '" + tok + "'");
    out.emplace_back(tok.substr(0, colon), tok.substr(colon + 1));
  }
  return out;
}

struct BssLine {
  Bss bss;
  SrConfig cfg;
};

BssLine parse_bss_line(const std::string& v, int line) {
  BssLine out;
  bool have_ap = false, have_sta = false;
  for (auto& [k, val] : parse_attrs(v, line, "bss")) {
    if (k == "ap") {
      out.bss.ap = parse_position(val, line, "bss.ap");
      have_ap = true;
    } else if (k == "sta") {
      out.bss.stas.push_back(parse_position(val, line, "bss.sta"));
      have_sta = true;
    } else if (k == "color") {
      out.bss.color = static_cast<int>(parse_int(val, line, "bss.color"));
    } else if (k == "srg") {
      out.bss.srg = static_cast<int>(parse_int(val, line, "bss.srg"));
    } else if (k == "channel") {
      out.bss.channel = static_cast<int>(parse_int(val, line, "bss.channel"));
    } else if (k == "tx_pwr_dbm") {
      out.cfg.tx_pwr = parse_double(val, line, "bss.tx_pwr_dbm");
    } else if (k == "tx_pwr_ref_dbm") {
      out.cfg.tx_pwr_ref = parse_double(val, line, "bss.tx_pwr_ref_dbm");
    } else if (k == "cca_cs_dbm") {
      out.cfg.cca_cs = parse_double(val, line, "bss.cca_cs_dbm");
    } else if (k == "obss_pd_dbm") {
      out.cfg.obss_pd_non_srg = parse_double(val, line, "bss.obss_pd_dbm");
    } else if (k == "obss_pd_srg_dbm") {
      out.cfg.obss_pd_srg = parse_double(val, line, "bss.obss_pd_srg_dbm");
    } else if (k == "non_srg_sr_disallowed") {
      out.cfg.non_srg_sr_disallowed = parse_int(val, line, "bss.non_srg_sr_disallowed") != 0;
    } else {
      throw ParseError(line, "bss." + k, "unknown attribute");
    }
  }
  if (!have_ap || !have_sta) throw ParseError(line, "bss", "ap and sta are mandatory");
  return out;
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  s.sweep.obss_pd_values = default_obss_pd_sweep();

  std::vector<BssLine> bss_lines;

  std::string section;
  int line_no = 0;
  std::istringstream is{std::string(text)};
  std::string raw;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, line, "malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "phy" && section != "mac" && section != "deployment" && section != "sweep")
        throw ParseError(line_no, section, "unknown section");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, line, "expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ParseError(line_no, key, "key outside any section");

    if (section == "phy") {
      if (key == "f_c_ghz") s.phy.f_c_hz = parse_double(value, line_no, key) * 1e9;
      else if (key == "g_tx_db") s.phy.g_tx_db = parse_double(value, line_no, key);
      else if (key == "g_rx_db") s.phy.g_rx_db = parse_double(value, line_no, key);
      else if (key == "noise_dbm") s.phy.noise_dbm = parse_double(value, line_no, key);
      else if (key == "sigma_us") s.phy.sym_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "sigma_legacy_us") s.phy.sym_legacy_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "n_sc") s.phy.n_sc = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "n_ss") s.phy.n_ss = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "capture_margin_db") s.phy.capture_margin_db = parse_double(value, line_no, key);
      else if (key == "mcs_table") {
        if (value == "toy") s.phy.mcs_table = toy_mcs_table();
        else if (value == "standard") s.phy.mcs_table = standard_mcs_table();
        else throw ParseError(line_no, key, "expected 'toy' or 'standard'");
      } else if (key == "path_loss") {
        for (auto& [k, val] : parse_attrs(value, line_no, key)) {
          if (k == "l0_db") s.phy.path_loss.l0_db = parse_double(val, line_no, "path_loss.l0_db");
          else if (k == "g1") s.phy.path_loss.exponent_near = parse_double(val, line_no, "path_loss.g1");
          else if (k == "bp_m") s.phy.path_loss.breakpoint_m = parse_double(val, line_no, "path_loss.bp_m");
          else if (k == "g2") s.phy.path_loss.exponent_far = parse_double(val, line_no, "path_loss.g2");
          else if (k == "wall_db") s.phy.path_loss.wall_loss_db = parse_double(val, line_no, "path_loss.wall_db");
          else throw ParseError(line_no, "path_loss." + k, "unknown attribute");
        }
      } else {
        throw ParseError(line_no, key, "unknown key in [phy]");
      }
    } else if (section == "mac") {
      if (key == "t_e_us") s.mac.slot_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "t_sifs_us") s.mac.sifs_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "t_difs_us") s.mac.difs_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "t_pifs_us") s.mac.pifs_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "t_phy_legacy_us") s.mac.phy_legacy_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "t_he_su_us") s.mac.he_su_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "t_ack_us") s.mac.ack_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "t_back_us") s.mac.back_s = parse_double(value, line_no, key) * 1e-6;
      else if (key == "l_d_bits") s.mac.l_data_bits = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "l_rts_bits") s.mac.l_rts_bits = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "l_cts_bits") s.mac.l_cts_bits = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "l_sf_bits") s.mac.l_sf_bits = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "l_mh_bits") s.mac.l_mh_bits = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "l_s_legacy_bits") s.mac.l_sym_legacy_bits = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "cw") s.mac.cw = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "n_agg_max") s.mac.n_agg_max = static_cast<int>(parse_int(value, line_no, key));
      else if (key == "max_ppdu_us") s.mac.max_ppdu_s = parse_double(value, line_no, key) * 1e-6;
      else throw ParseError(line_no, key, "unknown key in [mac]");
    } else if (section == "deployment") {
      if (key == "map") {
        auto x = value.find('x');
        if (x == std::string::npos) throw ParseError(line_no, key, "expected 'WxH' meters");
        s.deployment.map_w_m = parse_double(trim(value.substr(0, x)), line_no, key);
        s.deployment.map_h_m = parse_double(trim(value.substr(x + 1)), line_no, key);
      } else if (key == "type") {
        if (value == "grid") s.grid = true;
        else if (value == "explicit") s.grid = false;
        else throw ParseError(line_no, key, "expected 'explicit' or 'grid'");
      } else if (key == "pin_center_sta") {
        s.pin_center_sta = parse_int(value, line_no, key) != 0;
      } else if (key == "bss") {
        bss_lines.push_back(parse_bss_line(value, line_no));
      } else if (key == "tx_pwr_dbm") {
        s.grid_default.tx_pwr = parse_double(value, line_no, key);
      } else if (key == "tx_pwr_ref_dbm") {
        s.grid_default.tx_pwr_ref = parse_double(value, line_no, key);
      } else if (key == "cca_cs_dbm") {
        s.grid_default.cca_cs = parse_double(value, line_no, key);
      } else {
        throw ParseError(line_no, key, "unknown key in [deployment]");
      }
    } else {  // sweep
      if (key == "obss_pd") s.sweep.obss_pd_values = parse_list(value, line_no, key);
      else if (key == "obss_pd_srg") s.sweep.obss_pd_srg_values = parse_list(value, line_no, key);
      else if (key == "loads_mbps") {
        s.sweep.loads_bps.clear();
        for (double m : parse_list(value, line_no, key)) s.sweep.loads_bps.push_back(m * 1e6);
      } else if (key == "map_sizes_m") {
        s.sweep.map_sizes_m = parse_list(value, line_no, key);
      } else if (key == "n_deployments") {
        s.sweep.n_deployments = static_cast<int>(parse_int(value, line_no, key));
      } else if (key == "seeds") {
        s.sweep.seeds.clear();
        for (double v : parse_list(value, line_no, key)) {
          if (v < 0 || v != std::floor(v)) throw ParseError(line_no, key, "seeds must be non-negative integers");
          s.sweep.seeds.push_back(static_cast<std::uint64_t>(v));
        }
      } else if (key == "sr_mode") {
        if (value == "legacy") s.sweep.sr_mode = SrMode::Legacy;
        else if (value == "only_a") s.sweep.sr_mode = SrMode::OnlyA;
        else if (value == "mixed") s.sweep.sr_mode = SrMode::Mixed;
        else if (value == "all") s.sweep.sr_mode = SrMode::All;
        else throw ParseError(line_no, key, "expected legacy|only_a|mixed|all");
      } else if (key == "duration_s") {
        s.sweep.duration_s = parse_double(value, line_no, key);
      } else if (key == "warmup_s") {
        s.sweep.warmup_s = parse_double(value, line_no, key);
      } else if (key == "full_buffer") {
        s.sweep.full_buffer = parse_int(value, line_no, key) != 0;
      } else {
        throw ParseError(line_no, key, "unknown key in [sweep]");
      }
    }
  }

  for (auto& bl : bss_lines) {
    s.deployment.bsses.push_back(bl.bss);
    s.configs.push_back(bl.cfg);
  }
  // SRG bitmaps from group membership.
  for (std::size_t i = 0; i < s.deployment.bsses.size(); ++i) {
    if (!s.deployment.bsses[i].srg) continue;
    SrConfig& c = s.configs[i];
    c.srg_enabled = true;
    for (const Bss& other : s.deployment.bsses)
      if (other.srg == s.deployment.bsses[i].srg) {
        c.srg_color_bitmap |= 1ull << other.color;
        c.srg_partial_bssid_bitmap |= 1ull << other.color;
      }
  }

  try {
    if (!s.grid) s.deployment.validate();
    for (const SrConfig& c : s.configs) c.validate();
    for (double t : s.sweep.obss_pd_values)
      if (t < kObssPdMinDbm || t > kObssPdMaxDbm)
        throw std::invalid_argument("swept obss_pd outside [-82, -62] dBm");
    for (double t : s.sweep.obss_pd_srg_values)
      if (t < kObssPdMinDbm || t > kObssPdMaxDbm)
        throw std::invalid_argument("swept obss_pd_srg outside [-82, -62] dBm");
  } catch (const std::invalid_argument& e) {
    throw ParseError(line_no, "validation", e.what());
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  os << "[phy]\n";
  os << "f_c_ghz = " << format_g(s.phy.f_c_hz / 1e9) << "\n";
  os << "g_tx_db = " << format_g(s.phy.g_tx_db) << "\n";
  os << "g_rx_db = " << format_g(s.phy.g_rx_db) << "\n";
  os << "noise_dbm = " << format_g(s.phy.noise_dbm) << "\n";
  os << "sigma_us = " << format_g(s.phy.sym_s * 1e6) << "\n";
  os << "sigma_legacy_us = " << format_g(s.phy.sym_legacy_s * 1e6) << "\n";
  os << "n_sc = " << s.phy.n_sc << "\n";
  os << "n_ss = " << s.phy.n_ss << "\n";
  os << "capture_margin_db = " << format_g(s.phy.capture_margin_db) << "\n";
  os << "mcs_table = " << (s.phy.mcs_table == standard_mcs_table() ? "standard" : "toy") << "\n";
  const PathLossParams& pl = s.phy.path_loss;
  os << "path_loss = l0_db:" << format_g(pl.l0_db) << " g1:" << format_g(pl.exponent_near)
     << " bp_m:" << format_g(pl.breakpoint_m) << " g2:" << format_g(pl.exponent_far)
     << " wall_db:" << format_g(pl.wall_loss_db) << "\n";
  os << "\n[mac]\n";
  os << "t_e_us = " << format_g(s.mac.slot_s * 1e6) << "\n";
  os << "t_sifs_us = " << format_g(s.mac.sifs_s * 1e6) << "\n";
  os << "t_difs_us = " << format_g(s.mac.difs_s * 1e6) << "\n";
  os << "t_pifs_us = " << format_g(s.mac.pifs_s * 1e6) << "\n";
  os << "t_phy_legacy_us = " << format_g(s.mac.phy_legacy_s * 1e6) << "\n";
  os << "t_he_su_us = " << format_g(s.mac.he_su_s * 1e6) << "\n";
  os << "t_ack_us = " << format_g(s.mac.ack_s * 1e6) << "\n";
  os << "t_back_us = " << format_g(s.mac.back_s * 1e6) << "\n";
  os << "l_d_bits = " << s.mac.l_data_bits << "\n";
  os << "l_rts_bits = " << s.mac.l_rts_bits << "\n";
  os << "l_cts_bits = " << s.mac.l_cts_bits << "\n";
  os << "l_sf_bits = " << s.mac.l_sf_bits << "\n";
  os << "l_mh_bits = " << s.mac.l_mh_bits << "\n";
  os << "l_s_legacy_bits = " << s.mac.l_sym_legacy_bits << "\n";
  os << "cw = " << s.mac.cw << "\n";
  os << "n_agg_max = " << s.mac.n_agg_max << "\n";
  os << "max_ppdu_us = " << format_g(s.mac.max_ppdu_s * 1e6) << "\n";
  os << "\n[deployment]\n";
  os << "type = " << (s.grid ? "grid" : "explicit") << "\n";
  if (s.grid) {
    os << "pin_center_sta = " << (s.pin_center_sta ? 1 : 0) << "\n";
    os << "tx_pwr_dbm = " << format_g(s.grid_default.tx_pwr) << "\n";
    os << "tx_pwr_ref_dbm = " << format_g(s.grid_default.tx_pwr_ref) << "\n";
    os << "cca_cs_dbm = " << format_g(s.grid_default.cca_cs) << "\n";
  } else {
    os << "map = " << format_g(s.deployment.map_w_m) << "x" << format_g(s.deployment.map_h_m)
       << "\n";
    for (std::size_t i = 0; i < s.deployment.bsses.size(); ++i) {
      const Bss& b = s.deployment.bsses[i];
      const SrConfig& c = s.configs[i];
      os << "bss = ap:" << format_g(b.ap.x) << "," << format_g(b.ap.y);
      for (Position p : b.stas) os << " sta:" << format_g(p.x) << "," << format_g(p.y);
      os << " color:" << b.color;
      if (b.srg) os << " srg:" << *b.srg;
      os << " channel:" << b.channel;
      os << " tx_pwr_dbm:" << format_g(c.tx_pwr) << " tx_pwr_ref_dbm:" << format_g(c.tx_pwr_ref)
         << " cca_cs_dbm:" << format_g(c.cca_cs) << " obss_pd_dbm:" << format_g(c.obss_pd_non_srg)
         << " obss_pd_srg_dbm:" << format_g(c.obss_pd_srg)
         << " non_srg_sr_disallowed:" << (c.non_srg_sr_disallowed ? 1 : 0) << "\n";
    }
  }
  os << "\n[sweep]\n";
  auto list = [&](const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_g(v[i]);
    return out;
  };
  os << "obss_pd = " << list(s.sweep.obss_pd_values) << "\n";
  if (!s.sweep.obss_pd_srg_values.empty())
    os << "obss_pd_srg = " << list(s.sweep.obss_pd_srg_values) << "\n";
  if (!s.sweep.loads_bps.empty()) {
    std::vector<double> mbps;
    for (double l : s.sweep.loads_bps) mbps.push_back(l / 1e6);
    os << "loads_mbps = " << list(mbps) << "\n";
  }
  if (!s.sweep.map_sizes_m.empty()) os << "map_sizes_m = " << list(s.sweep.map_sizes_m) << "\n";
  os << "n_deployments = " << s.sweep.n_deployments << "\n";
  if (!s.sweep.seeds.empty()) {
    std::string out;
    for (std::size_t i = 0; i < s.sweep.seeds.size(); ++i)
      out += (i ? "," : "") + std::to_string(s.sweep.seeds[i]);
    os << "seeds = " << out << "\n";
  }
  const char* mode = s.sweep.sr_mode == SrMode::Legacy   ? "legacy"
                     : s.sweep.sr_mode == SrMode::OnlyA  ? "only_a"
                     : s.sweep.sr_mode == SrMode::Mixed  ? "mixed"
                                                         : "all";
  os << "sr_mode = " << mode << "\n";
  os << "duration_s = " << format_g(s.sweep.duration_s) << "\n";
  os << "warmup_s = " << format_g(s.sweep.warmup_s) << "\n";
  os << "full_buffer = " << (s.sweep.full_buffer ? 1 : 0) << "\n";
  return os.str();
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace sr
