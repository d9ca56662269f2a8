#include "casimir/cli.hpp"

#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/material.hpp"
#include "casimir/mie.hpp"
#include "casimir/parallel.hpp"
#include "casimir/thermo.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace casimir::cli {

const char* const kVersion = "1.0.0";

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<double, std::string>;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kPi = std::numbers::pi;

struct Table {
  json meta = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes; ///< warnings echoed to stderr
};

struct Options {
  // common
  std::string format = "csv";
  std::string output;
  int threads = 0;
  bool no_timestamp = false;
  double matsubara_tol = 1e-9;
  double fd_step = 1e-3;
  // sphere-sphere and plane-plane
  std::string geometry = "sphere-sphere";
  double ratio_dR = 20.0;
  std::string material = "pec";
  double gamma_d = kNaN;
  double wp_d = kNaN;
  std::string tau_grid;
  std::string mode = "dipole";
  int lmax = 0;
  std::string observable = "entropy";
  int lpair_max = 0;
  double quad_tol = 1e-10;
  // mie-table
  double sigma_R = kNaN;
  double wp_R = kNaN;
  std::string kR_grid;
  double rayleigh_threshold = 0.05;
  double multipole_threshold = 0.05;
  // entropy-vs-distance
  double wp_over_2pi_gamma = kNaN;
  double tau_R = 1.0;
  std::string dR_grid;
  std::string modes = "dipole,srt,full";
};

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

json json_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_csv(const Table& t, std::ostream& os) {
  for (const auto& [key, value] : t.meta.items()) {
    os << "# " << key << ": ";
    if (value.is_string())
      os << value.get<std::string>();
    else if (value.is_number_float())
      os << format_number(value.get<double>());
    else
      os << value.dump();
    os << "\n";
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ",";
      if (const auto* d = std::get_if<double>(&row[i]))
        os << format_number(*d);
      else
        os << csv_field(std::get<std::string>(row[i]));
    }
    os << "\n";
  }
}

void write_json(const Table& t, std::ostream& os) {
  json doc;
  json meta = json::object();
  for (const auto& [key, value] : t.meta.items())
    meta[key] = value.is_number_float() ? json_number(value.get<double>()) : value;
  doc["metadata"] = meta;
  doc["columns"] = t.columns;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const auto* d = std::get_if<double>(&row[i]))
        r[t.columns[i]] = json_number(*d);
      else
        r[t.columns[i]] = std::get<std::string>(row[i]);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  os << doc.dump(2) << "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("cannot parse " + what + " '" + s + "'");
  return v;
}

int resolve_threads(int requested) { return requested > 0 ? requested : default_threads(); }

Material sphere_material(const Options& o) {
  if (o.material == "pec") return Material::perfect_conductor();
  if (o.material != "drude") throw ConfigError("unknown material '" + o.material + "'");
  if (std::isnan(o.gamma_d) || std::isnan(o.wp_d)) throw ConfigError("drude material needs --gamma-d and --wp-d");
  if (!(o.gamma_d > 0.0) || !(o.wp_d > 0.0)) throw DomainError("--gamma-d and --wp-d must be positive");
  return Material::drude_from_groups(o.wp_d, o.gamma_d);
}

template <class Error>
[[noreturn]] void rethrow_at(const Error& e, const std::string& where) {
  throw Error(where + ": " + e.what());
}

// Runs fn and prefixes core errors with the sweep point.
template <class Fn>
auto at_point(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidityError& e) {
    rethrow_at(e, where);
  } catch (const DomainError& e) {
    rethrow_at(e, where);
  } catch (const ConfigError& e) {
    rethrow_at(e, where);
  }
}

std::string point_name(const std::string& key, double v) { return key + " = " + format_number(v); }

const std::vector<std::string> kBaseColumns = {"tau",     "S_total", "S_TM", "S_TE", "S_mix",
                                               "F_total", "F_TM",    "F_TE", "F_mix", "err_est"};

std::vector<Cell> base_row(double tau, const thermo::ChannelValues& S, const thermo::ChannelValues& F,
                           bool has_entropy, double err_est) {
  const double n = kNaN;
  return {tau,
          has_entropy ? S.total : n,
          has_entropy ? S.tm : n,
          has_entropy ? S.te : n,
          has_entropy ? S.mixing() : n,
          F.total,
          F.tm,
          F.te,
          F.mixing(),
          has_entropy ? err_est : n};
}

void add_truncation(Table& t, const thermo::Truncation& tr) {
  t.meta["lmax"] = tr.lmax;
  t.meta["n_max_reached"] = tr.n_max;
  t.meta["m_max_reached"] = tr.m_max;
  t.meta["tail_bound_max"] = tr.tail_bound;
}

thermo::Truncation merge(const thermo::Truncation& a, const thermo::Truncation& b) {
  return {std::max(a.lmax, b.lmax), std::max(a.n_max, b.n_max), std::max(a.m_max, b.m_max),
          std::max(a.tail_bound, b.tail_bound)};
}

Table plane_plane_table(const Options& o, bool channels_view) {
  const auto grid = parse_grid(o.tau_grid);
  lifshitz::PlanePlaneConfig base;
  base.material = sphere_material(o);
  base.quad_tolerance = o.quad_tol;
  base.matsubara_tolerance = o.matsubara_tol;
  base.threads = resolve_threads(o.threads);
  base.fd_step = o.fd_step;
  const bool want_entropy = o.observable == "entropy";

  const auto f0 = lifshitz::pp_term(base.material, 0.0, base.quad_tolerance);
  const auto f0p = lifshitz::pp_term(Material::perfect_conductor(), 0.0, base.quad_tolerance);
  const double s_ht = -f0.total / (4.0 * kPi);
  const double s_ht_p = -f0p.total / (4.0 * kPi);

  Table t;
  t.columns = kBaseColumns;
  if (channels_view)
    for (const char* c : {"S_total_scaled", "S_TM_scaled", "S_TE_scaled", "S_mix_scaled"}) t.columns.push_back(c);
  long n_max = 0;
  double quad_error = 0.0;
  int warnings = 0;
  for (double tau : grid) {
    auto c = base;
    c.tau = tau;
    const auto r = at_point(point_name("tau", tau), [&] {
      return want_entropy ? lifshitz::pp_entropy(c) : lifshitz::pp_free_energy(c);
    });
    n_max = std::max(n_max, r.n_max);
    quad_error = std::max(quad_error, r.quad_error);
    if (r.warning) {
      ++warnings;
      t.notes.push_back("entropy error estimate exceeds tolerance at " + point_name("tau", tau));
    }
    thermo::ChannelValues S, F;
    S.total = r.S.total, S.tm = r.S.tm, S.te = r.S.te;
    F.total = r.F.total, F.tm = r.F.tm, F.te = r.F.te;
    auto row = base_row(tau, S, F, r.has_entropy, r.err_est);
    if (channels_view) {
      const double n = kNaN;
      for (double v : {S.total, S.tm, S.te, 0.0}) row.push_back(r.has_entropy ? v / s_ht_p : n);
    }
    t.rows.push_back(std::move(row));
  }
  t.meta["geometry"] = "plane-plane";
  t.meta["material"] = base.material.describe();
  t.meta["n_max_reached"] = n_max;
  t.meta["quadrature_error_max"] = quad_error;
  t.meta["S_HT"] = s_ht;
  t.meta["S_HT_P"] = s_ht_p;
  t.meta["warnings"] = warnings;
  t.meta["units"] = "tau = 2 pi k_B T d / hbar c; F per area in hbar c / d^3; S per area in k_B / d^2";
  if (channels_view) t.meta["scaled_by"] = "S_HT_P";
  return t;
}

Table sphere_table(const Options& o, bool channels_view) {
  if (o.geometry == "plane-plane") return plane_plane_table(o, channels_view);
  if (o.geometry != "sphere-sphere") throw ConfigError("unknown geometry '" + o.geometry + "'");
  const auto grid = parse_grid(o.tau_grid);
  if (!(o.ratio_dR > 2.0)) throw DomainError("--ratio-dR must exceed 2 (non-overlapping spheres)");
  const auto geometry = thermo::GeometryConfig::identical(1.0 / o.ratio_dR);
  const Material material = sphere_material(o);
  thermo::ThermalConfig base;
  base.mode = roundtrip::mode_from_string(o.mode);
  if (o.lmax < 0) throw ConfigError("--lmax must be non-negative");
  base.lmax = o.lmax;
  base.matsubara_tolerance = o.matsubara_tol;
  base.threads = resolve_threads(o.threads);
  base.fd_step = o.fd_step;
  const int lmax = thermo::effective_lmax(geometry, base);
  if (o.lpair_max < 0 || o.lpair_max > lmax)
    throw ConfigError("--lpair-max must lie in [0, " + std::to_string(lmax) + "]");
  base.lpair = o.lpair_max > 0;
  const bool want_entropy = o.observable == "entropy";
  if (!want_entropy && o.observable != "free-energy")
    throw ConfigError("unknown observable '" + o.observable + "'");

  const auto ht = thermo::ht_asymptotics(geometry, material, material, base);

  Table t;
  t.columns = kBaseColumns;
  if (channels_view) {
    for (const char* c : {"S_total_scaled", "S_TM_scaled", "S_TE_scaled", "S_mix_scaled", "F_total_scaled",
                          "F_TM_scaled", "F_TE_scaled", "F_mix_scaled"})
      t.columns.push_back(c);
    for (int l1 = 1; l1 <= o.lpair_max; ++l1)
      for (int l2 = l1; l2 <= o.lpair_max; ++l2) {
        const auto suffix = "_l" + std::to_string(l1) + "_" + std::to_string(l2);
        t.columns.push_back("S" + suffix);
        t.columns.push_back("F" + suffix);
      }
  }

  thermo::Truncation trunc;
  double scale6 = 1.0;
  int warnings = 0;
  for (double tau : grid) {
    auto c = base;
    c.tau = tau;
    const auto r = at_point(point_name("tau", tau), [&] {
      return want_entropy ? thermo::entropy(geometry, material, material, c)
                          : thermo::free_energy(geometry, material, material, c);
    });
    trunc = merge(trunc, r.truncation);
    scale6 = r.scale6;
    if (r.warning) {
      ++warnings;
      t.notes.push_back("entropy error estimate exceeds tolerance at " + point_name("tau", tau));
    }
    auto row = base_row(tau, r.S, r.F, r.has_entropy, r.err_est);
    if (channels_view) {
      const double n = kNaN;
      const auto S = r.scaled_S();
      const auto F = r.scaled_F();
      for (double v : {S.total, S.tm, S.te, S.mixing()}) row.push_back(r.has_entropy ? v : n);
      for (double v : {F.total, F.tm, F.te, F.mixing()}) row.push_back(v);
      for (int l1 = 1; l1 <= o.lpair_max; ++l1)
        for (int l2 = l1; l2 <= o.lpair_max; ++l2) {
          row.push_back(r.has_entropy ? r.S.lpair_symmetric(l1, l2) : n);
          row.push_back(r.F.lpair_symmetric(l1, l2));
        }
    }
    t.rows.push_back(std::move(row));
  }
  t.meta["geometry"] = "sphere-sphere";
  t.meta["d_over_R"] = o.ratio_dR;
  t.meta["material"] = material.describe();
  t.meta["mode"] = roundtrip::to_string(base.mode);
  if (trunc.lmax == 0) trunc.lmax = lmax;
  add_truncation(t, trunc);
  t.meta["S_HT"] = ht.S_HT;
  t.meta["S_HT_P"] = ht.S_HT_P;
  t.meta["S_HT_TM_share"] = ht.tm_share();
  t.meta["S_HT_TE_share"] = ht.te_share();
  t.meta["S_HT_mix_share"] = ht.mix_share();
  t.meta["scale_dR6"] = scale6;
  t.meta["warnings"] = warnings;
  t.meta["units"] = "tau = 2 pi k_B T d / hbar c; F in hbar c / d; S in k_B";
  if (channels_view) {
    t.meta["scaled_by"] = "(d/R)^6";
    if (base.mode == roundtrip::RoundTripMode::FullLogDet)
      t.meta["channel_columns"] = "single-round-trip channels; totals from the full log-determinant";
  }
  return t;
}

Table mie_table(const Options& o) {
  const auto grid = parse_grid(o.kR_grid);
  if (std::isnan(o.sigma_R) || std::isnan(o.wp_R)) throw ConfigError("mie-table needs --sigma-R and --wp-R");
  if (!(o.sigma_R > 0.0) || !(o.wp_R > 0.0)) throw DomainError("--sigma-R and --wp-R must be positive");
  const double wp = 2.0 * kPi * o.wp_R;
  const Material material = Material::drude(wp, wp * wp / o.sigma_R);
  const mie::RegimeThresholds thresholds{o.rayleigh_threshold, o.multipole_threshold};

  Table t;
  t.columns = {"kR", "a1", "b1", "a2", "minus_b1_over_a1", "a2_over_a1", "minus_b1_over_a1_series", "regime"};
  for (double kR : grid) {
    t.rows.push_back(at_point(point_name("kR", kR), [&] {
      const auto seq = mie::mie_sequence(material, 2, kR, kR);
      const auto ratios = mie::dipole_ratios(material, 1.0, kR, thresholds);
      double series_ratio = kNaN;
      if (kR < 0.1 && kR * o.sigma_R < 1.0) {
        const auto series = mie::mie_expansion(material, 1, kR, 1.0);
        series_ratio = -series.b.value() / series.a.value();
      }
      return std::vector<Cell>{kR,
                               seq[0].a.value(),
                               seq[0].b.value(),
                               seq[1].a.value(),
                               ratios.minus_b1_over_a1,
                               ratios.a2_over_a1,
                               series_ratio,
                               mie::to_string(ratios.regime)};
    }));
  }
  t.meta["material"] = material.describe();
  t.meta["sigma0_R_over_c"] = o.sigma_R;
  t.meta["wp_R_over_2pi_c"] = o.wp_R;
  t.meta["gamma_R_over_c"] = material.damping();
  t.meta["te_parameter"] = o.sigma_R / 30.0;
  t.meta["rayleigh_threshold"] = o.rayleigh_threshold;
  t.meta["multipole_threshold"] = o.multipole_threshold;
  t.meta["units"] = "kR = xi R / c; lengths in units of R";
  return t;
}

Table distance_table(const Options& o) {
  const auto grid = parse_grid(o.dR_grid);
  Material material = Material::perfect_conductor();
  if (o.material == "drude") {
    if (std::isnan(o.wp_R) || std::isnan(o.wp_over_2pi_gamma))
      throw ConfigError("drude material needs --wp-R and --wp-over-2pi-gamma");
    if (!(o.wp_R > 0.0) || !(o.wp_over_2pi_gamma > 0.0)) throw DomainError("--wp-R and --wp-over-2pi-gamma must be positive");
    const double wp = 2.0 * kPi * o.wp_R;
    material = Material::drude(wp, wp / (2.0 * kPi * o.wp_over_2pi_gamma));
  } else if (o.material != "pec") {
    throw ConfigError("unknown material '" + o.material + "'");
  }
  if (!(o.tau_R > 0.0)) throw DomainError("--tauR must be positive");
  std::vector<roundtrip::RoundTripMode> modes;
  for (const auto& m : split(o.modes, ',')) modes.push_back(roundtrip::mode_from_string(m));
  if (modes.empty()) throw ConfigError("--modes is empty");
  if (o.lmax < 0) throw ConfigError("--lmax must be non-negative");
  thermo::ThermalConfig base;
  base.lmax = o.lmax;
  base.matsubara_tolerance = o.matsubara_tol;
  base.threads = resolve_threads(o.threads);
  base.fd_step = o.fd_step;
  const bool has_full = std::find(modes.begin(), modes.end(), roundtrip::RoundTripMode::FullLogDet) != modes.end();

  Table t;
  t.columns = {"d_over_R"};
  t.columns.insert(t.columns.end(), kBaseColumns.begin(), kBaseColumns.end());
  t.columns.insert(t.columns.begin() + 1, "mode");
  t.columns.push_back("rel_diff_to_full");

  thermo::Truncation trunc;
  int warnings = 0;
  json skipped = json::array();
  for (double dR : grid) {
    if (!(dR > 2.0)) {
      skipped.push_back(dR);
      t.notes.push_back("skipped " + point_name("d/R", dR) + " (spheres touch or overlap)");
      continue;
    }
    const auto points = at_point(point_name("d/R", dR), [&] {
      return thermo::entropy_distance_scan({dR}, material, o.tau_R, modes, base);
    });
    for (const auto& p : points) {
      trunc = merge(trunc, p.report.truncation);
      if (p.report.warning) {
        ++warnings;
        t.notes.push_back("entropy error estimate exceeds tolerance at " + point_name("d/R", dR) + ", mode " +
                          roundtrip::to_string(p.mode));
      }
      std::vector<Cell> row = {dR, roundtrip::to_string(p.mode)};
      const auto base_cells = base_row(p.report.tau, p.report.S, p.report.F, true, p.report.err_est);
      row.insert(row.end(), base_cells.begin(), base_cells.end());
      row.push_back(has_full ? p.rel_diff_to_full : kNaN);
      t.rows.push_back(std::move(row));
    }
  }
  t.meta["geometry"] = "sphere-sphere";
  t.meta["material"] = material.describe();
  t.meta["tau_R"] = o.tau_R;
  t.meta["modes"] = o.modes;
  add_truncation(t, trunc);
  t.meta["skipped_d_over_R"] = skipped;
  t.meta["warnings"] = warnings;
  t.meta["units"] = "tau = 2 pi k_B T d / hbar c = tau_R d/R; material frequencies in c/R; F in hbar c / R; S in k_B";
  return t;
}

// Canonical echo of every physics-relevant option, defaults included.
std::string echo(const CLI::App& sub) {
  std::string s = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--output" || name == "--threads" || name == "--no-timestamp" ||
        name == "--format")
      continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
    } else {
      value = opt->get_default_str();
    }
    s += " " + name + "=" + value;
  }
  return s;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--output,-o", o.output, "Output file (default: standard output)");
  sub->add_option("--threads", o.threads, "Worker threads (0: all available cores)")->check(CLI::NonNegativeNumber);
  sub->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp header line");
  sub->add_option("--matsubara-tol", o.matsubara_tol, "Relative Matsubara truncation tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--fd-step", o.fd_step, "Relative temperature step of the entropy derivative")
      ->check(CLI::PositiveNumber);
}

void add_thermal(CLI::App* sub, Options& o) {
  sub->add_option("--geometry", o.geometry, "sphere-sphere or plane-plane")
      ->check(CLI::IsMember({"sphere-sphere", "plane-plane"}));
  sub->add_option("--ratio-dR", o.ratio_dR, "Center distance over sphere radius d/R");
  sub->add_option("--material", o.material, "pec or drude")->check(CLI::IsMember({"pec", "drude"}));
  sub->add_option("--gamma-d", o.gamma_d, "Drude damping gamma d / c");
  sub->add_option("--wp-d", o.wp_d, "Plasma frequency omega_P d / 2 pi c");
  sub->add_option("--tau-grid", o.tau_grid, "Grid of tau = 2 pi k_B T d / hbar c")->required();
  sub->add_option("--mode", o.mode, "dipole, srt or full")->check(CLI::IsMember({"dipole", "srt", "full"}));
  sub->add_option("--lmax", o.lmax, "Multipole cutoff (0: automatic)");
  sub->add_option("--quad-tol", o.quad_tol, "Plane-plane quadrature tolerance")->check(CLI::PositiveNumber);
}

} // namespace

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw ConfigError("empty grid");
  std::vector<double> out;
  const auto parts = split(text, ':');
  if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
    const double a = parse_double(parts[1], "grid bound");
    const double b = parse_double(parts[2], "grid bound");
    const double nd = parse_double(parts[3], "grid count");
    if (!(nd >= 1.0) || nd != std::floor(nd) || nd > 1e7) throw ConfigError("grid count must be a positive integer");
    const long n = static_cast<long>(nd);
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("grid bounds must be positive");
    if (n == 1 && a != b) throw ConfigError("a one-point grid needs equal bounds");
    const bool log = parts[0] == "log";
    for (long i = 0; i < n; ++i) {
      const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
      double v = log ? std::exp(std::log(a) + f * (std::log(b) - std::log(a))) : a + f * (b - a);
      if (i == 0) v = a;
      if (i == n - 1) v = b;
      out.push_back(v);
    }
    return out;
  }
  if (parts.size() != 1) throw ConfigError("grid must be log:a:b:n, lin:a:b:n or a comma list, got '" + text + "'");
  for (const auto& item : split(text, ',')) {
    const double v = parse_double(item, "grid value");
    if (!(v > 0.0)) throw DomainError("grid values must be positive");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty grid");
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Casimir free energy and entropy for sphere-sphere and plane-plane geometries", "casimir"};
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* evt = app.add_subcommand("entropy-vs-temperature", "Entropy and free energy on a temperature grid");
  add_common(evt, o);
  add_thermal(evt, o);
  evt->add_option("--observable", o.observable, "entropy or free-energy")
      ->check(CLI::IsMember({"entropy", "free-energy"}));

  auto* ch = app.add_subcommand("channels", "Polarization and multipole channels scaled by (d/R)^6");
  add_common(ch, o);
  add_thermal(ch, o);
  ch->add_option("--observable", o.observable, "entropy or free-energy")
      ->check(CLI::IsMember({"entropy", "free-energy"}));
  ch->add_option("--lpair-max", o.lpair_max, "Emit l-pair channel columns up to this l");

  auto* pp = app.add_subcommand("plane-plane", "Entropy per unit area between parallel mirrors");
  add_common(pp, o);
  pp->add_option("--material", o.material, "pec or drude")->check(CLI::IsMember({"pec", "drude"}));
  pp->add_option("--gamma-d", o.gamma_d, "Drude damping gamma d / c");
  pp->add_option("--wp-d", o.wp_d, "Plasma frequency omega_P d / 2 pi c");
  pp->add_option("--tau-grid", o.tau_grid, "Grid of tau = 2 pi k_B T d / hbar c")->required();
  pp->add_option("--observable", o.observable, "entropy or free-energy")
      ->check(CLI::IsMember({"entropy", "free-energy"}));
  pp->add_option("--quad-tol", o.quad_tol, "Quadrature tolerance")->check(CLI::PositiveNumber);

  auto* mt = app.add_subcommand("mie-table", "Dipole Mie coefficients and regime of a Drude sphere");
  add_common(mt, o);
  mt->add_option("--sigma-R", o.sigma_R, "DC conductivity sigma_0 R / c (omega_P^2 R / gamma c)")->required();
  mt->add_option("--wp-R", o.wp_R, "Plasma frequency omega_P R / 2 pi c")->required();
  mt->add_option("--kR-grid", o.kR_grid, "Grid of kR = xi R / c")->required();
  mt->add_option("--rayleigh-threshold", o.rayleigh_threshold, "Rayleigh regime while |b1/a1| is below this");
  mt->add_option("--multipole-threshold", o.multipole_threshold, "Multipole regime once |a2/a1| exceeds this");

  auto* dist = app.add_subcommand("entropy-vs-distance", "Entropy on a distance grid at fixed tau_R = 2 pi k_B T R / hbar c");
  add_common(dist, o);
  dist->add_option("--material", o.material, "pec or drude")->check(CLI::IsMember({"pec", "drude"}));
  dist->add_option("--wp-R", o.wp_R, "Plasma frequency omega_P R / 2 pi c");
  dist->add_option("--wp-over-2pi-gamma", o.wp_over_2pi_gamma, "omega_P / 2 pi gamma");
  dist->add_option("--tauR", o.tau_R, "tau_R = 2 pi k_B T R / hbar c");
  dist->add_option("--dR-grid", o.dR_grid, "Grid of d/R")->required();
  dist->add_option("--modes", o.modes, "Comma list of dipole, srt, full");
  dist->add_option("--lmax", o.lmax, "Multipole cutoff (0: automatic)");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kExitSpecError;
  }

  const CLI::App* sub = app.get_subcommands().front();
  Table table;
  try {
    if (sub == evt)
      table = sphere_table(o, false);
    else if (sub == ch)
      table = sphere_table(o, true);
    else if (sub == pp)
      table = plane_plane_table(o, false);
    else if (sub == mt)
      table = mie_table(o);
    else
      table = distance_table(o);
  } catch (const ValidityError& e) {
    err << "casimir: numerical validity error: " << e.what() << "\n";
    return kExitValidityError;
  } catch (const DomainError& e) {
    err << "casimir: invalid input: " << e.what() << "\n";
    return kExitSpecError;
  } catch (const ConfigError& e) {
    err << "casimir: invalid configuration: " << e.what() << "\n";
    return kExitSpecError;
  }
  for (const auto& note : table.notes) err << "casimir: warning: " << note << "\n";

  const std::string input = echo(*sub);
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(input)));
  json meta = json::object();
  meta["casimir_version"] = kVersion;
  meta["schema_version"] = kSchemaVersion;
  meta["command"] = sub->get_name();
  meta["input"] = input;
  meta["spec_hash"] = hash;
  if (!o.no_timestamp) meta["timestamp"] = utc_timestamp();
  meta.update(table.meta);
  table.meta = std::move(meta);

  std::ostringstream buffer;
  if (o.format == "json")
    write_json(table, buffer);
  else
    write_csv(table, buffer);
  if (o.output.empty()) {
    out << buffer.str();
    out.flush();
  } else {
    std::ofstream file(o.output, std::ios::binary);
    if (!file) {
      err << "casimir: cannot open output file '" << o.output << "'\n";
      return kExitSpecError;
    }
    file << buffer.str();
    if (!file) {
      err << "casimir: failed writing '" << o.output << "'\n";
      return kExitSpecError;
    }
  }
  return kExitOk;
}

} // namespace casimir::cli
