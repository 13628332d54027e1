#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "casimir/casimir.hpp"

namespace casimir::cli {
namespace {

using Row = nlohmann::ordered_json;
using engine::Tolerance;
using std::numbers::pi;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Params {
  double a = 1.0;
  double T = 0.0;
  double n = 1.0;
  double D = 4.0;
  double eps_bar = 2.0;
  double omega0 = 10.0;
  double lambda = 0.1;
  double omega_max = 100.0;
  double delta = 0.05;
  double L = 1.0;
  double C0 = 1.0;
  double phi_sq = 1.0;
  double k = 1.0;
  double delta_a = 1e-4;
  double tol_rel = 1e-10;
  double tol_abs = 1e-14;
  int u_count = 99;
  std::string method = "auto";
  std::string quantity;
  std::string suite = "all";
  std::string axis = "real";
};

const std::map<std::string, double Params::*>& sweepable() {
  static const std::map<std::string, double Params::*> table = {
      {"a", &Params::a},           {"T", &Params::T},
      {"n", &Params::n},           {"D", &Params::D},
      {"eps-bar", &Params::eps_bar}, {"omega0", &Params::omega0},
      {"cutoff-lambda", &Params::lambda}, {"omega-max", &Params::omega_max},
      {"delta-resonance", &Params::delta}, {"L", &Params::L},
      {"C0", &Params::C0},         {"phi-sq", &Params::phi_sq},
      {"k", &Params::k},           {"delta-a", &Params::delta_a},
  };
  return table;
}

struct Sweep {
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  bool log = false;

  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(count - 1);
      if (log) {
        out.push_back(std::exp(std::log(start) + t * (std::log(stop) - std::log(start))));
      } else {
        out.push_back(start + t * (stop - start));
      }
    }
    // land exactly on the requested end point
    out.back() = stop;
    return out;
  }
};

Sweep parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(':', pos);
    parts.push_back(text.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (parts.size() != 4 && parts.size() != 5) {
    throw UsageError("--sweep expects param:start:stop:count[:lin|log]");
  }
  Sweep s;
  s.param = parts[0];
  if (!sweepable().contains(s.param)) {
    throw UsageError("--sweep: unknown parameter '" + s.param + "'");
  }
  try {
    std::size_t used = 0;
    s.start = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    s.stop = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
    s.count = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("");
  } catch (const std::logic_error&) {
    throw UsageError("--sweep: malformed number in '" + text + "'");
  }
  const std::string scale = parts.size() == 5 ? parts[4] : "lin";
  if (scale != "lin" && scale != "log") throw UsageError("--sweep: scale must be lin or log");
  s.log = scale == "log";
  if (s.count < 2) throw UsageError("--sweep: count must be >= 2");
  if (s.log && !(s.start > 0.0 && s.stop > 0.0)) throw UsageError("--sweep: log scale needs positive bounds");
  return s;
}

Tolerance quad_tol(const Params& p) { return {p.tol_rel, p.tol_abs, 2000}; }
Tolerance series_tol(const Params& p) { return {p.tol_rel, p.tol_abs, 1'000'000}; }

int dimension(const Params& p) {
  if (std::floor(p.D) != p.D || p.D < 3 || p.D > 64) throw UsageError("D must be an integer in [3, 64]");
  return static_cast<int>(p.D);
}

CavityConfig cavity(const Params& p) {
  CavityConfig c{p.a, p.T, p.n};
  c.validate();
  return c;
}

hyperdim::HyperConfig hyper(const Params& p) { return {specfun::DimensionD(dimension(p)), p.a, p.n}; }

dispersion::LorentzModel lorentz(const Params& p) {
  dispersion::LorentzModel m{p.eps_bar, p.omega0};
  m.validate();
  return m;
}

void put(Row& r, const EnergyValue& v) {
  r["value"] = v.value;
  r["err_estimate"] = v.err_estimate;
  r["method"] = std::string(to_string(v.method));
  r["converged"] = v.converged;
}

Row inputs(const Params& p, std::initializer_list<const char*> keys) {
  Row r = Row::object();
  for (const char* key : keys) {
    const std::string k = key;
    if (k == "D") {
      r[k] = dimension(p);
    } else {
      r[k] = p.*sweepable().at(k);
    }
  }
  return r;
}

void check_method(const std::string& m, std::initializer_list<const char*> allowed) {
  for (const char* x : allowed)
    if (m == x) return;
  std::string list;
  for (const char* x : allowed) list += std::string(list.empty() ? "" : ", ") + x;
  throw UsageError("--method '" + m + "' not available here; choose from " + list);
}

std::vector<Row> free_energy_rows(const Params& p) {
  check_method(p.method, {"auto", "direct", "low-T"});
  const auto c = cavity(p);
  Row r = inputs(p, {"a", "T", "n"});
  if (p.method == "low-T") {
    put(r, matsubara::free_energy_lowT(c));
  } else if (c.T == 0.0 && p.method == "auto") {
    put(r, matsubara::free_energy_T0(c));
  } else {
    put(r, matsubara::free_energy(c, series_tol(p)));
  }
  return {r};
}

std::vector<Row> internal_energy_rows(const Params& p) {
  check_method(p.method, {"auto", "direct", "resummed", "low-T", "high-T", "thermodynamic"});
  const auto c = cavity(p);
  const auto t = series_tol(p);
  Row r = inputs(p, {"a", "T", "n"});
  if (p.method == "auto") put(r, matsubara::internal_energy(c, t));
  if (p.method == "direct") put(r, matsubara::internal_energy_direct(c, t));
  if (p.method == "resummed") put(r, matsubara::internal_energy_resummed(c, t));
  if (p.method == "low-T") put(r, matsubara::internal_energy_lowT(c));
  if (p.method == "high-T") put(r, matsubara::internal_energy_highT(c));
  if (p.method == "thermodynamic") put(r, matsubara::internal_energy_from_F(c, t));
  return {r};
}

std::vector<Row> em_energy_rows(const Params& p) {
  check_method(p.method, {"auto", "quadrature", "polar"});
  const auto c = cavity(p);
  Row r = inputs(p, {"a", "T", "n"});
  if (c.T == 0.0) {
    put(r, p.method == "polar" ? green_em::em_energy_T0_polar(c, quad_tol(p)) : green_em::em_energy_T0(c, quad_tol(p)));
  } else {
    if (p.method == "polar") throw UsageError("--method polar applies at T = 0 only");
    const auto inner = p.method == "quadrature" ? green_em::InnerIntegral::quadrature : green_em::InnerIntegral::closed_log;
    put(r, green_em::em_energy_finiteT(c, series_tol(p), inner));
  }
  return {r};
}

std::vector<Row> pressure_rows(const Params& p) {
  check_method(p.method, {"auto", "closed", "quadrature"});
  Row r = inputs(p, {"a", "T", "n", "D"});
  if (p.T > 0.0) {
    if (dimension(p) != 4) throw UsageError("finite-temperature pressure is available for D = 4 only");
    put(r, matsubara::pressure(cavity(p), series_tol(p)));
  } else if (p.method == "quadrature") {
    put(r, hyperdim::pressure_quadrature(hyper(p), quad_tol(p)));
  } else {
    put(r, hyperdim::pressure_closed(hyper(p)));
  }
  return {r};
}

std::vector<Row> profile_rows(const Params& p) {
  if (p.u_count < 1) throw UsageError("--u-count must be >= 1");
  std::vector<double> grid;
  for (int i = 1; i <= p.u_count; ++i) grid.push_back(static_cast<double>(i) / (p.u_count + 1));
  const auto prof = hyperdim::density_profile(hyper(p), grid);
  std::vector<Row> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    Row r = inputs(p, {"a", "n", "D"});
    r["u"] = prof.u[i];
    r["w1"] = prof.w1;
    r["w2"] = prof.w2[i];
    r["total"] = prof.total[i];
    r["regularized"] = prof.regularized[i];
    r["converged"] = true;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<Row> dispersive_rows(const Params& p) {
  const std::string q = p.quantity.empty() ? "mode" : p.quantity;
  const auto model = lorentz(p);
  if (q == "mode") {
    check_method(p.method, {"auto", "lower", "upper", "photon"});
    auto branch = dispersion::Branch::lower;
    if (p.method == "upper") branch = dispersion::Branch::upper;
    if (p.method == "photon") branch = dispersion::Branch::photon;
    Row r = inputs(p, {"eps-bar", "omega0", "k"});
    const double w = dispersion::dispersive_mode_solve(model, p.k, {1e-14, 0.0, 200}, branch);
    const double residual = std::sqrt(dispersion::detail::lorentz(model, w)) * w - p.k;
    r["omega"] = w;
    r["index"] = p.k / w;
    put(r, {w, std::abs(residual), Method::closed_form, std::abs(residual) <= 1e-10 * p.k});
    r["method"] = "root";
    return {r};
  }
  if (q == "wI") {
    Row r = inputs(p, {"eps-bar", "omega0", "a"});
    put(r, dispersion::w_I_energy(model, {p.a, 0.0, 1.0}, quad_tol(p)));
    return {r};
  }
  if (q == "w2") {
    if (p.axis != "real" && p.axis != "imaginary") throw UsageError("--axis must be real or imaginary");
    Row r = inputs(p, {"eps-bar", "omega0", "a", "omega-max", "delta-resonance"});
    r["axis"] = p.axis;
    const auto res = dispersion::w2_density_cutoff(
        model, {p.a, 0.0, 1.0}, {p.omega_max, p.delta}, quad_tol(p),
        p.axis == "real" ? dispersion::SpectralAxis::real : dispersion::SpectralAxis::imaginary);
    put(r, res.energy);
    r["value_2x"] = res.scan[1];
    r["value_4x"] = res.scan[2];
    return {r};
  }
  if (q == "hyper") {
    Row r = inputs(p, {"eps-bar", "omega0", "a", "D", "cutoff-lambda"});
    const auto res = hyperdim::dispersive_hyper_energy(hyper(p), model, p.lambda, quad_tol(p));
    put(r, res.energy);
    r["value_half_lambda"] = res.scan[1];
    r["value_quarter_lambda"] = res.scan[2];
    return {r};
  }
  throw UsageError("--quantity for dispersive must be mode, wI, w2 or hyper");
}

circuit::CircuitSpec circuit_spec(const Params& p) {
  circuit::CircuitSpec s;
  s.L = p.L;
  s.C0 = p.C0;
  s.a = p.a;
  s.phi_sq = p.phi_sq;
  s.delta = p.delta;
  if (p.eps_bar != 1.0) s.medium = lorentz(p);
  s.validate();
  return s;
}

std::vector<Row> circuit_rows(const Params& p) {
  const std::string q = p.quantity.empty() ? "energy" : p.quantity;
  const auto spec = circuit_spec(p);
  Row r = inputs(p, {"L", "C0", "a", "eps-bar", "omega0", "phi-sq", "delta-resonance"});
  if (q == "energy") {
    const auto e = circuit::circuit_energy(spec);
    r["omega_star"] = e.omega_star;
    r["dC_domega"] = e.dC_domega;
    put(r, {e.value, std::abs(0.5 * e.omega_star * (e.dC_domega - e.dC_domega_fd)) * spec.phi_sq, Method::closed_form,
            true});
    return {r};
  }
  if (q == "adiabatic") {
    r["delta-a"] = p.delta_a;
    const auto c = circuit::adiabatic_variation_check(spec, p.delta_a);
    r["lhs"] = c.lhs;
    r["rhs"] = c.rhs;
    put(r, {c.lhs / c.rhs, 0.0, Method::finite_difference, true});
    return {r};
  }
  throw UsageError("--quantity for circuit must be energy or adiabatic");
}

std::vector<Row> cutoff_rows(const Params& p) {
  Row r = inputs(p, {"a", "n", "D", "cutoff-lambda"});
  const auto res = hyperdim::cutoff_mode_energy(hyper(p), p.lambda, quad_tol(p));
  put(r, res.energy);
  r["value_half_lambda"] = res.scan[1];
  r["value_quarter_lambda"] = res.scan[2];
  return {r};
}

// --- crosscheck -------------------------------------------------------------

struct Check {
  std::string suite;
  std::string name;
  double reference;
  double value;
  double tolerance;
};

double rel_diff(double ref, double v) { return ref == 0.0 ? std::abs(v) : std::abs(v - ref) / std::abs(ref); }

std::vector<Check> checks(const std::string& suite) {
  std::vector<Check> out;
  auto want = [&](const char* s) { return suite == "all" || suite == s; };
  char label[96];

  if (want("matsubara")) {
    for (double t : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0}) {
      const CavityConfig c{1.0, t, 1.0};
      std::snprintf(label, sizeof label, "U direct vs resummed naT=%g", t);
      out.push_back({"matsubara", label, matsubara::internal_energy_direct(c).value,
                     matsubara::internal_energy_resummed(c).value, 1e-9});
    }
    for (double t : {0.3, 1.0, 2.0}) {
      const CavityConfig c{1.0, t, 1.0};
      std::snprintf(label, sizeof label, "U vs d(beta F)/d beta naT=%g", t);
      out.push_back({"matsubara", label, matsubara::internal_energy_direct(c).value,
                     matsubara::internal_energy_from_F(c).value, 1e-6});
    }
    const CavityConfig hot{1.0, 1.0, 1.0};
    // the m = 1 and m = 2 corrections add up to 4.5 e^{-alpha}
    out.push_back({"matsubara", "U high-T asymptote naT=1", matsubara::internal_energy_direct(hot).value,
                   matsubara::internal_energy_highT(hot).value, 5.0 * std::exp(-4.0 * pi)});
    const CavityConfig cold{1.0, 0.1, 1.0};
    out.push_back({"matsubara", "U low-T expansion naT=0.1", matsubara::internal_energy_direct(cold).value,
                   matsubara::internal_energy_lowT(cold).value, 1e-4});
  }
  if (want("green")) {
    const double vac = -pi * pi / 720.0;
    for (double n : {1.0, 2.0, 3.0}) {
      std::snprintf(label, sizeof label, "W(T=0) quadrature n=%g", n);
      out.push_back({"green", label, vac / n, green_em::em_energy_T0({1.0, 0.0, n}).value, 1e-8});
    }
    out.push_back({"green", "W(T=0) polar form", vac, green_em::em_energy_T0_polar({1.0, 0.0, 1.0}).value, 1e-10});
    for (double t : {0.3, 1.0, 2.0, 5.0}) {
      const CavityConfig c{1.0, t, 1.0};
      std::snprintf(label, sizeof label, "W vs U naT=%g", t);
      out.push_back(
          {"green", label, matsubara::internal_energy_direct(c).value, green_em::em_energy_finiteT(c).value, 1e-10});
    }
    for (auto [k, z] : {std::pair{0.3, 1.7}, {1.0, 1.0}, {2.5, 0.4}}) {
      const auto s = green_em::spectral_energy_density(k, z, 1.0, {2.0, 1.0});
      std::snprintf(label, sizeof label, "electric = magnetic k=%g zeta=%g", k, z);
      out.push_back({"green", label, s.electric_half, s.magnetic_half, 1e-12});
    }
  }
  if (want("hyperdim")) {
    for (int D = 4; D <= 8; ++D) {
      const hyperdim::HyperConfig h{specfun::DimensionD(D), 1.0, 1.0};
      const double closed = hyperdim::pressure_closed(h).value;
      std::snprintf(label, sizeof label, "P quadrature vs closed D=%d", D);
      out.push_back({"hyperdim", label, closed, hyperdim::pressure_quadrature(h).value, 1e-8});
      if (D <= 6) {
        const auto w = hyperdim::pressure_from_w1(h);
        std::snprintf(label, sizeof label, "P = (D-1) w1 D=%d", D);
        out.push_back({"hyperdim", label, closed, w.trace.value, 1e-12});
        std::snprintf(label, sizeof label, "P = -d(a w1)/da D=%d", D);
        out.push_back({"hyperdim", label, closed, w.work.value, 1e-8});
      }
    }
  }
  if (want("dispersion")) {
    const dispersion::LorentzModel m{2.0, 10.0};
    for (double k : {1.0, 2.0, 4.0, 8.0}) {
      const double w = dispersion::dispersive_mode_solve(m, k);
      std::snprintf(label, sizeof label, "n(omega) omega = k, k=%g", k);
      out.push_back({"dispersion", label, k, std::sqrt(dispersion::eps_of_omega(m, w)) * w, 1e-10});
    }
    out.push_back({"dispersion", "w_I static-index limit eps=4", -pi * pi / 1440.0,
                   dispersion::w_I_energy({4.0, 1e7}, {1.0, 0.0, 1.0}).value, 1e-6});
  }
  if (want("circuit")) {
    circuit::CircuitSpec s;
    s.medium = dispersion::LorentzModel{2.0, 10.0};
    const auto e = circuit::circuit_energy(s);
    out.push_back({"circuit", "L J^2/2 = C phi^2/2", e.capacitor_half, e.inductor_half, 1e-12});
    out.push_back({"circuit", "dC/domega analytic vs difference", e.dC_domega, e.dC_domega_fd, 1e-6});
    const auto c3 = circuit::adiabatic_variation_check(s, 1e-3);
    const auto c4 = circuit::adiabatic_variation_check(s, 1e-4);
    out.push_back({"circuit", "adiabatic lhs/rhs at delta=1e-4", 1.0, c4.lhs / c4.rhs, 1e-3});
    out.push_back({"circuit", "adiabatic residual shrinks 10x", 0.1,
                   std::abs(c4.lhs / c4.rhs - 1.0) / std::abs(c3.lhs / c3.rhs - 1.0), 0.2});
  }
  return out;
}

std::vector<Row> crosscheck_rows(const Params& p) {
  static const std::vector<std::string> suites = {"all", "matsubara", "green", "hyperdim", "dispersion", "circuit"};
  if (std::find(suites.begin(), suites.end(), p.suite) == suites.end()) {
    throw UsageError("--suite must be one of all, matsubara, green, hyperdim, dispersion, circuit");
  }
  std::vector<Row> rows;
  for (const auto& c : checks(p.suite)) {
    Row r = Row::object();
    r["suite"] = c.suite;
    r["check"] = c.name;
    r["reference"] = c.reference;
    r["value"] = c.value;
    r["rel_diff"] = rel_diff(c.reference, c.value);
    r["tolerance"] = c.tolerance;
    r["converged"] = rel_diff(c.reference, c.value) <= c.tolerance;
    rows.push_back(std::move(r));
  }
  return rows;
}

const std::map<std::string, std::function<std::vector<Row>(const Params&)>>& commands() {
  static const std::map<std::string, std::function<std::vector<Row>(const Params&)>> table = {
      {"free-energy", free_energy_rows}, {"internal-energy", internal_energy_rows},
      {"em-energy", em_energy_rows},     {"pressure", pressure_rows},
      {"profile", profile_rows},         {"dispersive", dispersive_rows},
      {"circuit", circuit_rows},         {"cutoff-sum", cutoff_rows},
      {"crosscheck", crosscheck_rows},
  };
  return table;
}

// --- emission ---------------------------------------------------------------

std::string csv_cell(const Row& v) {
  char buf[40];
  switch (v.type()) {
    case Row::value_t::number_float:
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      return buf;
    case Row::value_t::number_integer:
    case Row::value_t::number_unsigned:
      return v.dump();
    case Row::value_t::boolean:
      return v.get<bool>() ? "true" : "false";
    case Row::value_t::string: {
      const auto s = v.get<std::string>();
      if (s.find_first_of(",\"") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    case Row::value_t::null:
      return "nan";
    default:
      return v.dump();
  }
}

void write_csv(const std::vector<Row>& rows, std::ostream& os) {
  if (rows.empty()) return;
  std::vector<std::string> header;
  for (const auto& row : rows)
    for (const auto& [key, _] : row.items())
      if (std::find(header.begin(), header.end(), key) == header.end()) header.push_back(key);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) os << ',';
      if (row.contains(header[i])) os << csv_cell(row[header[i]]);
    }
    os << '\n';
  }
}

void write_json(const std::vector<Row>& rows, std::ostream& os) {
  Row arr = Row::array();
  for (const auto& r : rows) arr.push_back(r);
  os << arr.dump(2) << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Params p;
  std::string command;
  std::string sweep_text;
  std::string format = "csv";
  std::string out_path;

  CLI::App app{"Casimir energies, pressures and cross-checks for a parallel-plate cavity", "casimir"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "key = value file; flags given on the command line win")->envname("CASIMIR_CONFIG");
  app.add_option("command", command, "free-energy | internal-energy | em-energy | pressure | profile | "
                                     "dispersive | circuit | cutoff-sum | crosscheck")
      ->required()
      ->check(CLI::IsMember({"free-energy", "internal-energy", "em-energy", "pressure", "profile", "dispersive",
                             "circuit", "cutoff-sum", "crosscheck"}));
  app.add_option("--a", p.a, "plate separation");
  app.add_option("--T", p.T, "temperature");
  app.add_option("--n", p.n, "refractive index");
  app.add_option("--D", p.D, "spacetime dimension");
  app.add_option("--eps-bar", p.eps_bar, "static permittivity of the Lorentz medium");
  app.add_option("--omega0", p.omega0, "resonance frequency");
  app.add_option("--cutoff-lambda", p.lambda, "exponential cutoff length");
  app.add_option("--omega-max", p.omega_max, "frequency cutoff for the dispersive correction");
  app.add_option("--delta-resonance", p.delta, "relative half-width excluded around omega0");
  app.add_option("--L", p.L, "circuit inductance");
  app.add_option("--C0", p.C0, "vacuum capacitance at unit separation");
  app.add_option("--phi-sq", p.phi_sq, "mean-square potential");
  app.add_option("--k", p.k, "mode wave number (dispersive --quantity mode)");
  app.add_option("--delta-a", p.delta_a, "relative plate displacement (circuit --quantity adiabatic)");
  app.add_option("--u-count", p.u_count, "interior grid points for profile");
  app.add_option("--method", p.method, "evaluation route");
  app.add_option("--quantity", p.quantity, "dispersive: mode|wI|w2|hyper; circuit: energy|adiabatic");
  app.add_option("--axis", p.axis, "dispersive w2 spectrum axis: real|imaginary");
  app.add_option("--suite", p.suite, "crosscheck suite");
  app.add_option("--sweep", sweep_text, "param:start:stop:count:lin|log");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--tol-rel", p.tol_rel, "relative tolerance");
  app.add_option("--tol-abs", p.tol_abs, "absolute tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "casimir: " << e.what() << '\n' << "run 'casimir --help' for usage\n";
    return kUsage;
  }

  std::vector<Row> rows;
  try {
    if (!(p.tol_rel > 0.0) || !(p.tol_abs >= 0.0)) throw UsageError("tolerances must be positive");
    std::vector<Params> points{p};
    std::string swept;
    if (!sweep_text.empty()) {
      const auto s = parse_sweep(sweep_text);
      swept = s.param;
      points.clear();
      for (double v : s.values()) {
        Params q = p;
        q.*sweepable().at(s.param) = v;
        points.push_back(q);
      }
    }
    const auto& fn = commands().at(command);
    for (const auto& q : points) {
      for (auto& r : fn(q)) {
        if (!swept.empty() && !r.contains(swept)) {
          r[swept] = q.*sweepable().at(swept);
        }
        rows.push_back(std::move(r));
      }
    }
  } catch (const UsageError& e) {
    err << "casimir: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "casimir: invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "casimir: outside the domain: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "casimir: numerical failure: " << e.what() << '\n';
    return kNotConverged;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file.open(out_path, std::ios::binary);
    if (!file) {
      err << "casimir: cannot open " << out_path << '\n';
      return kUsage;
    }
    sink = &file;
  }
  if (format == "json") {
    write_json(rows, *sink);
  } else {
    write_csv(rows, *sink);
  }
  sink->flush();

  for (const auto& r : rows) {
    if (r.contains("converged") && !r["converged"].get<bool>()) return kNotConverged;
  }
  return kOk;
}

}  // namespace casimir::cli
