#include "cpneq/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <variant>

#include "json.hpp"

#include "cpneq/errors.hpp"

namespace cpneq::cli {

namespace {

using Value = std::variant<double, std::string, bool, std::vector<double>>;

struct Entry {
  Value value;
  int line = 0;
};

// section -> key -> entry
using Document = std::map<std::string, std::map<std::string, Entry>>;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorKind::ConfigError, what);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& s, int line) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, x);
  if (ec != std::errc() || ptr != end || !std::isfinite(x))
    throw ParseError("not a number: '" + s + "'", line);
  return x;
}

Value parse_value(const std::string& raw, int line) {
  const std::string s = trim(raw);
  if (s.empty()) throw ParseError("missing value", line);
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"')
      throw ParseError("unterminated string", line);
    return s.substr(1, s.size() - 2);
  }
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.front() == '[') {
    if (s.back() != ']') throw ParseError("unterminated array", line);
    std::vector<double> out;
    const std::string body = trim(std::string_view(s).substr(1, s.size() - 2));
    if (body.empty()) return out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item), line));
    return out;
  }
  return parse_number(s, line);
}

Document parse_document(const std::string& text) {
  Document doc;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[' && s.find('=') == std::string::npos) {
      if (s.back() != ']') throw ParseError("malformed section header", line);
      section = trim(std::string_view(s).substr(1, s.size() - 2));
      if (section.empty()) throw ParseError("empty section name", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    const std::string key = trim(std::string_view(s).substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line);
    auto& slot = doc[section];
    if (slot.count(key)) throw ParseError("duplicate key '" + key + "'", line);
    slot[key] = {parse_value(s.substr(eq + 1), line), line};
  }
  return doc;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"scenario",
       {"environment_temperature", "particle_radius", "particle_kind",
        "particle_eps0", "fermi_velocity_ratio", "substrate", "substrate_table",
        "override_validity_floor"}},
      {"sweep",
       {"separation_min", "separation_max", "separation_count",
        "separation_spacing", "delta", "mu", "plate_temperature",
        "normalization"}},
      {"quadrature",
       {"rel_tol", "family", "max_evaluations", "max_matsubara", "k_cutoff",
        "omega_cutoff", "pole_scan", "polarization_rel_tol", "fixture",
        "frozen_temperature", "execution"}},
      {"output", {"path", "format", "threads", "timing"}},
  };
  return keys;
}

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  template <class T>
  const T& get(const Entry& e, const std::string& key, const char* type) const {
    const T* v = std::get_if<T>(&e.value);
    if (!v) throw ParseError("'" + key + "' must be " + type, e.line);
    return *v;
  }

  void number(const std::string& sec, const std::string& key, double& out) const {
    if (const Entry* e = find(sec, key)) out = get<double>(*e, key, "a number");
  }
  template <class I>
  void integer(const std::string& sec, const std::string& key, I& out) const {
    if (const Entry* e = find(sec, key)) {
      const double x = get<double>(*e, key, "an integer");
      if (x != std::floor(x) || std::abs(x) > 1e15)
        throw ParseError("'" + key + "' must be an integer", e->line);
      out = static_cast<I>(x);
    }
  }
  void text(const std::string& sec, const std::string& key, std::string& out) const {
    if (const Entry* e = find(sec, key)) out = get<std::string>(*e, key, "a string");
  }
  void flag(const std::string& sec, const std::string& key, bool& out) const {
    if (const Entry* e = find(sec, key)) out = get<bool>(*e, key, "true or false");
  }
  // Arrays; a bare number is accepted as a one-element list.
  void list(const std::string& sec, const std::string& key,
            std::vector<double>& out) const {
    if (const Entry* e = find(sec, key)) {
      if (const double* x = std::get_if<double>(&e->value)) {
        out = {*x};
        return;
      }
      out = get<std::vector<double>>(*e, key, "an array of numbers");
    }
  }

  template <class E>
  void choice(const std::string& sec, const std::string& key,
              const std::map<std::string, E>& options, E& out) const {
    std::string s;
    text(sec, key, s);
    if (s.empty()) return;
    const auto it = options.find(s);
    if (it == options.end()) {
      std::string valid;
      for (const auto& [name, _] : options) valid += (valid.empty() ? "" : ", ") + name;
      throw ParseError("'" + key + "' must be one of: " + valid, find(sec, key)->line);
    }
    out = it->second;
  }

 private:
  const Document& doc_;
};

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

bool wants_f0(Normalization n) {
  return n == Normalization::F0 || n == Normalization::All;
}
bool wants_fcl(Normalization n) {
  return n == Normalization::Fcl || n == Normalization::All;
}

struct RowKey {
  double a, delta, mu, tp;
};

ResultRow compute_row(const SweepConfig& config, const RowKey& key) {
  ResultRow row;
  row.a_nm = key.a;
  row.delta_eV = key.delta;
  row.mu_eV = key.mu;
  row.Tp_K = key.tp;
  row.TE_K = config.base.environment_temperature;
  const auto start = std::chrono::steady_clock::now();
  try {
    Scenario s = config.base;
    s.separation = key.a;
    s.plate_temperature = key.tp;
    GrapheneSheet g;
    g.delta = key.delta;
    g.mu = key.mu;
    g.fermi_velocity_ratio = config.fermi_velocity_ratio;
    s.plate.sheet = g;
    const NeqBreakdown b = nonequilibrium_force(s, config.spec);
    row.F_eq_N = b.equilibrium_part.newtons;
    row.F_r_N = b.r_part.newtons;
    row.F_neq_N = b.total.newtons;
    row.F_neq_over_F0 = b.total.ratio_f0;
    row.F_neq_over_Fcl = b.total.ratio_fcl;
    row.F_eq_over_F0 = b.equilibrium_part.ratio_f0;
    row.F_eq_over_Fcl = b.equilibrium_part.ratio_fcl;
    row.err_estimate = b.total.error_estimate + b.r_part.tail_bound;
    row.evaluations = b.equilibrium_part.evaluations + b.r_part.evaluations;
    row.regions = b.r_part.regions;
    row.tail_bound = b.r_part.tail_bound;
    row.poles = b.r_part.poles;
    row.matsubara_terms = b.equilibrium_part.terms;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  if (config.timing)
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  return row;
}

}  // namespace

std::vector<double> SeparationGrid::values() const {
  std::vector<double> out;
  if (count == 1) return {min};
  for (int i = 0; i < count; ++i) {
    const double s = static_cast<double>(i) / (count - 1);
    double x = spacing == Spacing::Log ? min * std::pow(max / min, s)
                                       : min + (max - min) * s;
    if (i == 0) x = min;
    if (i == count - 1) x = max;
    out.push_back(x);
  }
  return out;
}

void SweepConfig::validate() const {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) config_error(what);
  };
  check(separations.count >= 1, "separation_count must be at least 1");
  check(separations.min > 0.0, "separations must be positive");
  check(separations.count == 1 ? separations.min <= separations.max
                               : separations.min < separations.max,
        "separation_min must be below separation_max");
  check(!deltas.empty(), "delta list is empty");
  check(!mus.empty(), "mu list is empty");
  check(!plate_temperatures.empty(), "plate_temperature list is empty");
  check(threads >= 1, "threads must be at least 1");
  check(base.override_validity_floor || separations.min >= 200.0,
        "separation_min " + format_number(separations.min) +
            " nm is below the 200 nm validity floor of the Dirac model; set "
            "override_validity_floor to proceed");
  for (double d : deltas) check(d >= 0.0, "delta values must be >= 0");
  for (double t : plate_temperatures) check(t > 0.0, "plate temperatures must be positive");
  try {
    spec.validate();
    // the tightest corner of the grid: smallest separation, hottest plate
    Scenario s = base;
    s.separation = separations.min;
    double t_max = 0.0;
    for (double t : plate_temperatures) t_max = std::max(t_max, t);
    s.plate_temperature = t_max;
    GrapheneSheet g;
    g.delta = deltas.front();
    g.mu = mus.front();
    g.fermi_velocity_ratio = fermi_velocity_ratio;
    s.plate.sheet = g;
    s.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
}

SweepConfig parse_config(const std::string& text, const std::string& base_dir,
                         const Overrides& overrides) {
  const Document doc = parse_document(text);
  for (const auto& [section, entries] : doc) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) {
      const int line = entries.empty() ? 0 : entries.begin()->second.line;
      throw ParseError("unknown section '[" + section + "]'", line);
    }
    for (const auto& [key, entry] : entries)
      if (!it->second.count(key))
        throw ParseError("unknown key '" + key + "' in [" + section + "]", entry.line);
  }

  const Reader r(doc);
  std::string missing;
  for (const char* key : {"separation_min", "separation_max", "separation_count",
                          "delta", "mu", "plate_temperature"})
    if (!r.find("sweep", key)) missing += (missing.empty() ? "" : ", ") + std::string(key);
  if (!missing.empty()) config_error("missing required fields in [sweep]: " + missing);

  SweepConfig c;
  c.base.environment_temperature = 300.0;
  c.base.plate.substrate = Substrate::default_sio2();

  r.number("scenario", "environment_temperature", c.base.environment_temperature);
  r.number("scenario", "particle_radius", c.base.particle.radius);
  r.choice<Nanoparticle::Kind>("scenario", "particle_kind",
                               {{"dielectric", Nanoparticle::Kind::Dielectric},
                                {"metallic", Nanoparticle::Kind::Metallic}},
                               c.base.particle.kind);
  r.number("scenario", "particle_eps0", c.base.particle.eps0);
  r.number("scenario", "fermi_velocity_ratio", c.fermi_velocity_ratio);
  r.flag("scenario", "override_validity_floor", c.base.override_validity_floor);
  std::string substrate = "sio2", table;
  r.text("scenario", "substrate", substrate);
  r.text("scenario", "substrate_table", table);
  if (substrate == "vacuum") {
    c.base.plate.substrate = Substrate::vacuum();
  } else if (substrate == "table") {
    if (table.empty()) config_error("substrate = \"table\" needs substrate_table");
    std::filesystem::path tp(table);
    if (tp.is_relative() && !base_dir.empty()) tp = std::filesystem::path(base_dir) / tp;
    c.base.plate.substrate = Substrate::table(load_optical_table_file(tp.string()));
  } else if (substrate != "sio2") {
    config_error("substrate must be one of: sio2, vacuum, table");
  }

  r.number("sweep", "separation_min", c.separations.min);
  r.number("sweep", "separation_max", c.separations.max);
  r.integer("sweep", "separation_count", c.separations.count);
  r.choice<Spacing>("sweep", "separation_spacing",
                    {{"linear", Spacing::Linear}, {"log", Spacing::Log}},
                    c.separations.spacing);
  r.list("sweep", "delta", c.deltas);
  r.list("sweep", "mu", c.mus);
  r.list("sweep", "plate_temperature", c.plate_temperatures);
  r.choice<Normalization>("sweep", "normalization",
                          {{"f0", Normalization::F0},
                           {"fcl", Normalization::Fcl},
                           {"absolute", Normalization::Absolute},
                           {"all", Normalization::All}},
                          c.normalization);

  r.number("quadrature", "rel_tol", c.spec.rel_tol);
  r.choice<quad::RuleFamily>(
      "quadrature", "family",
      {{"gauss-kronrod", quad::RuleFamily::GaussKronrod},
       {"double-exponential", quad::RuleFamily::DoubleExponential}},
      c.spec.family);
  c.spec.polarization.family = c.spec.family;
  r.integer("quadrature", "max_evaluations", c.spec.max_evaluations);
  r.integer("quadrature", "max_matsubara", c.spec.max_matsubara);
  r.number("quadrature", "k_cutoff", c.spec.k_cutoff);
  r.number("quadrature", "omega_cutoff", c.spec.omega_cutoff);
  r.integer("quadrature", "pole_scan", c.spec.pole_scan);
  r.number("quadrature", "polarization_rel_tol", c.spec.polarization.rel_tol);
  r.choice<CoefficientFixture>(
      "quadrature", "fixture",
      {{"none", CoefficientFixture::None},
       {"ideal-metal", CoefficientFixture::IdealMetal},
       {"frozen-coefficients", CoefficientFixture::Frozen}},
      c.spec.fixture);
  r.number("quadrature", "frozen_temperature", c.spec.frozen_temperature);
  r.choice<Execution>("quadrature", "execution",
                      {{"serial", Execution::Serial}, {"parallel", Execution::Parallel}},
                      c.spec.execution);

  r.text("output", "path", c.output_path);
  r.choice<OutputFormat>("output", "format",
                         {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}},
                         c.format);
  r.integer("output", "threads", c.threads);
  r.flag("output", "timing", c.timing);

  if (overrides.output_path) c.output_path = *overrides.output_path;
  if (overrides.format) c.format = *overrides.format;
  if (overrides.threads) c.threads = *overrides.threads;
  if (overrides.fixture) c.spec.fixture = *overrides.fixture;
  if (overrides.override_validity_floor) c.base.override_validity_floor = true;
  if (overrides.timing) c.timing = true;

  c.validate();
  return c;
}

SweepConfig load_config_file(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::filesystem::path(path).parent_path().string(),
                      overrides);
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& csv_header() {
  static const std::vector<std::string> h{
      "a_nm",          "delta_eV",       "mu_eV",        "Tp_K",
      "TE_K",          "F_eq_N",         "F_r_N",        "F_neq_N",
      "F_neq_over_F0", "F_neq_over_Fcl", "F_eq_over_F0", "F_eq_over_Fcl",
      "err_estimate",  "evaluations",    "wall_ms",      "error"};
  return h;
}

SweepSummary run_sweep(const SweepConfig& config,
                       const std::function<void(const ResultRow&)>& sink) {
  config.validate();
  std::vector<RowKey> keys;
  for (double a : config.separations.values())
    for (double d : config.deltas)
      for (double m : config.mus)
        for (double t : config.plate_temperatures) keys.push_back({a, d, m, t});

  SweepSummary summary;
  const long n = static_cast<long>(keys.size());
#pragma omp parallel for schedule(dynamic, 1) ordered num_threads(config.threads)
  for (long i = 0; i < n; ++i) {
    const ResultRow row = compute_row(config, keys[i]);
#pragma omp ordered
    {
      ++summary.rows;
      if (!row.error.empty()) ++summary.failed;
      summary.evaluations += row.evaluations;
      summary.max_error_estimate = std::max(summary.max_error_estimate, row.err_estimate);
      sink(row);
    }
  }
  return summary;
}

std::vector<ResultRow> run_sweep(const SweepConfig& config, SweepSummary* summary) {
  std::vector<ResultRow> rows;
  const SweepSummary s = run_sweep(config, [&](const ResultRow& r) { rows.push_back(r); });
  if (summary) *summary = s;
  return rows;
}

CsvWriter::CsvWriter(std::ostream& out, Normalization normalization)
    : out_(out), normalization_(normalization) {
  const auto& h = csv_header();
  for (std::size_t i = 0; i < h.size(); ++i) out_ << (i ? "," : "") << h[i];
  out_ << '\n' << std::flush;
}

void CsvWriter::write(const ResultRow& r) {
  const bool f0 = wants_f0(normalization_), fcl = wants_fcl(normalization_);
  const auto opt = [](bool on, double x) { return on ? format_number(x) : std::string(); };
  // one write per row, flushed, so an interrupted run leaves whole rows
  std::string line = format_number(r.a_nm) + ',' + format_number(r.delta_eV) + ',' +
                     format_number(r.mu_eV) + ',' + format_number(r.Tp_K) + ',' +
                     format_number(r.TE_K) + ',' + format_number(r.F_eq_N) + ',' +
                     format_number(r.F_r_N) + ',' + format_number(r.F_neq_N) + ',' +
                     opt(f0, r.F_neq_over_F0) + ',' + opt(fcl, r.F_neq_over_Fcl) + ',' +
                     opt(f0, r.F_eq_over_F0) + ',' + opt(fcl, r.F_eq_over_Fcl) + ',' +
                     format_number(r.err_estimate) + ',' + std::to_string(r.evaluations) +
                     ',' + format_number(r.wall_ms) + ',' + csv_escape(r.error) + '\n';
  out_ << line << std::flush;
}

void write_json(std::ostream& out, const std::vector<ResultRow>& rows,
                Normalization normalization) {
  const bool f0 = wants_f0(normalization), fcl = wants_fcl(normalization);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json o;
    const auto opt = [](bool on, double x) {
      return on ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
    };
    o["a_nm"] = r.a_nm;
    o["delta_eV"] = r.delta_eV;
    o["mu_eV"] = r.mu_eV;
    o["Tp_K"] = r.Tp_K;
    o["TE_K"] = r.TE_K;
    o["F_eq_N"] = r.F_eq_N;
    o["F_r_N"] = r.F_r_N;
    o["F_neq_N"] = r.F_neq_N;
    o["F_neq_over_F0"] = opt(f0, r.F_neq_over_F0);
    o["F_neq_over_Fcl"] = opt(fcl, r.F_neq_over_Fcl);
    o["F_eq_over_F0"] = opt(f0, r.F_eq_over_F0);
    o["F_eq_over_Fcl"] = opt(fcl, r.F_eq_over_Fcl);
    o["err_estimate"] = r.err_estimate;
    o["evaluations"] = r.evaluations;
    o["wall_ms"] = r.wall_ms;
    o["error"] = r.error;
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << '\n';
}

void write_diagnostics_header(std::ostream& out) {
  out << "a_nm,delta_eV,mu_eV,Tp_K,plasmonic_subgap_N,plasmonic_supragap_N,"
         "large_k_N,tail_bound_N,poles,matsubara_terms,F_r_sign,error\n";
}

void write_diagnostics(std::ostream& out, const ResultRow& r) {
  const int sign = r.F_r_N > 0.0 ? 1 : (r.F_r_N < 0.0 ? -1 : 0);
  out << format_number(r.a_nm) << ',' << format_number(r.delta_eV) << ','
      << format_number(r.mu_eV) << ',' << format_number(r.Tp_K) << ','
      << format_number(r.regions.plasmonic_subgap) << ','
      << format_number(r.regions.plasmonic_supragap) << ','
      << format_number(r.regions.large_k) << ',' << format_number(r.tail_bound)
      << ',' << r.poles << ',' << r.matsubara_terms << ',' << sign << ','
      << csv_escape(r.error) << '\n'
      << std::flush;
}

}  // namespace cpneq::cli
