#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "fwtopo/acceptance.hpp"
#include "fwtopo/berry.hpp"
#include "fwtopo/descendants.hpp"
#include "fwtopo/invariants.hpp"
#include "fwtopo/models.hpp"

namespace fwtopo::cli {

namespace {

using Json = nlohmann::ordered_json;
using std::numbers::pi;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Settings {
  std::string config;
  std::string format = "json";
  std::string out;

  std::string model = "dirac2p1";
  double m = 1.0;
  std::string k;
  std::string domain;
  std::string method = "antiderivative";
  double tol = 1e-8;

  std::string scheme;
  double step = 0.0;
  std::string field = "berry";

  std::string band = "positive";
  std::string report;
  int block = -1;

  std::string quantity;
  std::string profile;
  double n1 = 1.0;
  double n2 = 1.0;
  double theta = kUnset;
  double phi3 = kUnset;
  double dtheta = kUnset;
  double dn1 = kUnset;
  int grid = 400;

  std::string param = "m";
  double lo = 0.5;
  double hi = 2.0;
  int steps = 9;

  bool json = false;
  bool inject_fault = false;
};

bool is_set(double v) { return !std::isnan(v); }

double round12(double v) {
  if (v == 0.0) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json num(double v) {
  if (!std::isfinite(v)) return Json(v > 0 ? "inf" : v < 0 ? "-inf" : "nan");
  return Json(round12(v));
}

std::string text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

Json matrix_json(const ComplexMatrix& a) {
  Json re = Json::array(), im = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json rr = Json::array(), ir = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      rr.push_back(num(a(r, c).real()));
      ir.push_back(num(a(r, c).imag()));
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return Json{{"real", re}, {"imag", im}};
}

Json vector_json(const Momentum& k) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < k.size(); ++i) a.push_back(num(k(i)));
  return a;
}

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("malformed " + what + ": '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("malformed " + what + ": '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Momentum parse_momentum(const std::string& s, int dim) {
  if (trim(s).empty()) return Momentum::Zero(dim);
  std::vector<double> v;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const double x = parse_number(trim(item), "--k component");
    if (!std::isfinite(x)) throw ConfigError("--k components must be finite");
    v.push_back(x);
  }
  if (!s.empty() && s.back() == ',') throw ConfigError("malformed --k: trailing comma");
  if (static_cast<int>(v.size()) != dim)
    throw ConfigError("--k needs " + std::to_string(dim) + " components, got " + std::to_string(v.size()));
  return Eigen::Map<Momentum>(v.data(), dim);
}

FillingDomain parse_domain(const std::string& s) {
  if (s == "full") return FillingDomain::full();
  if (s == "half") return FillingDomain::half();
  if (s == "positive") return FillingDomain::positive();
  if (s.rfind("custom:", 0) == 0) {
    const auto rest = s.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ConfigError("custom domain must be custom:lo:hi");
    return FillingDomain::custom(parse_number(rest.substr(0, colon), "domain bound"),
                                 parse_number(rest.substr(colon + 1), "domain bound"));
  }
  throw ConfigError("unknown domain '" + s + "' (full|half|positive|custom:lo:hi)");
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
      throw ConfigError("config line " + std::to_string(lineno) + " is not key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Config entries fill only options the command line left unset.
void apply_config(CLI::App& app, CLI::App& sub, const std::map<std::string, std::string>& kv) {
  for (const auto& [key, value] : kv) {
    if (key == "config") continue;
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr) opt = app.get_option_no_throw("--" + key);
    if (opt == nullptr) {
      bool elsewhere = false;
      for (const auto* other : app.get_subcommands({}))
        elsewhere = elsewhere || other->get_option_no_throw("--" + key) != nullptr;
      if (!elsewhere) throw ConfigError("unknown config key '" + key + "'");
      continue;
    }
    if (opt->count() > 0) continue;
    opt->add_result(value);
    opt->run_callback();
  }
}

Momentum full_momentum(const ModelSpec& spec, const Momentum& k) {
  Momentum full(spec.rep.space_dim());
  full.head(k.size()) = k;
  for (std::size_t i = 0; i < spec.background.size(); ++i)
    full(k.size() + static_cast<Eigen::Index>(i)) = spec.background[i];
  return full;
}

Json header(const std::string& command, const std::string& model, Json parameters, const std::string& method,
            Json tolerance, const std::string& anchor) {
  return Json{{"command", command}, {"model", model},         {"parameters", std::move(parameters)},
              {"method", method},   {"tolerance", tolerance}, {"anchor", anchor}};
}

Json model_parameters(const ModelSpec& spec) {
  Json p{{"m", num(spec.mass)}};
  if (!spec.background.empty()) {
    Json bg = Json::array();
    for (double b : spec.background) bg.push_back(num(b));
    p["background"] = bg;
  }
  return p;
}

std::string axis_name(int i, int j) { return "F" + std::to_string(i + 1) + std::to_string(j + 1); }

CurvatureMethod curvature_method(const Representation& rep, const std::string& scheme, double step) {
  if (scheme.empty()) return has_closed_form(rep) ? CurvatureMethod::closed_form() : CurvatureMethod::analytic_diff();
  if (scheme == "closed") return CurvatureMethod::closed_form();
  if (scheme == "analytic") return CurvatureMethod::analytic_diff();
  return CurvatureMethod::finite_diff(step);
}

std::string method_name(const CurvatureMethod& m) {
  switch (m.kind) {
    case CurvatureMethod::Kind::ClosedForm: return "closed_form";
    case CurvatureMethod::Kind::AnalyticDiff: return "analytic_diff";
    case CurvatureMethod::Kind::FiniteDiff: return "finite_diff";
  }
  return "unknown";
}

Json cmd_curvature(const Settings& s) {
  const auto spec = catalog(s.model, s.m);
  const Momentum k = full_momentum(spec, parse_momentum(s.k, spec.momentum_dim()));
  const auto method = curvature_method(spec.rep, s.scheme, s.step);
  const auto f = berry_curvature(spec.rep, k, s.m, method);

  // Residual against an independent route: closed form vs finite
  // differences, or analytic vs finite differences without a closed form.
  const bool closed = has_closed_form(spec.rep);
  const auto reference = method.kind == CurvatureMethod::Kind::FiniteDiff
                             ? berry_curvature(spec.rep, k, s.m,
                                               closed ? CurvatureMethod::closed_form() : CurvatureMethod::analytic_diff())
                             : berry_curvature(spec.rep, k, s.m, CurvatureMethod::finite_diff(s.step));
  double residual = 0.0;
  Json entries = Json::array();
  const int d = spec.rep.space_dim();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      residual = std::max(residual, max_abs_diff(f.upper(i, j), reference.upper(i, j)));
      Json e = matrix_json(f.upper(i, j));
      e = Json{{"component", axis_name(i, j)}, {"real", e["real"]}, {"imag", e["imag"]},
               {"trace", num(f.upper(i, j).trace().real())}};
      entries.push_back(e);
    }
  }
  Json params = model_parameters(spec);
  params["k"] = vector_json(k);
  Json r = header("curvature", spec.name, params, method_name(method), num(kMatrixTol),
                  "Berry curvature F_IJ = d_I A_J - d_J A_I - i[A_I, A_J] on the positive-energy subspace");
  r["energy"] = num(dirac_energy(k, s.m));
  r["entries"] = entries;
  r["residual_vs_reference"] = num(residual);
  r["reference"] = method.kind == CurvatureMethod::Kind::FiniteDiff ? (closed ? "closed_form" : "analytic_diff")
                                                                    : "finite_diff";
  for (const auto& w : f.warnings) r["warnings"].push_back(w);
  return r;
}

Json cmd_connection(const Settings& s) {
  const auto spec = catalog(s.model, s.m);
  const Momentum k = full_momentum(spec, parse_momentum(s.k, spec.momentum_dim()));
  const bool pure = s.field == "pure";
  const auto a = pure ? pure_gauge_field(spec.rep, k, s.m) : berry_connection(spec.rep, k, s.m);
  Json params = model_parameters(spec);
  params["k"] = vector_json(k);
  Json r = header("connection", spec.name, params, pure ? "pure_gauge_closed_form" : "projected_connection",
                  num(kMatrixTol),
                  pure ? "pure gauge field A^U = i U d U^dag" : "Berry connection projected on the positive band");
  Json comps = Json::array();
  for (std::size_t i = 0; i < a.components.size(); ++i) {
    Json m = matrix_json(a.components[i]);
    comps.push_back(Json{{"component", "A" + std::to_string(i + 1)}, {"real", m["real"]}, {"imag", m["imag"]}});
  }
  r["components"] = comps;
  return r;
}

std::vector<std::string> block_names(const ModelSpec& spec) {
  if (spec.rep.blocks().size() == 4) return {"up+", "up-", "down+", "down-"};
  std::vector<std::string> out;
  for (std::size_t b = 0; b < spec.rep.blocks().size(); ++b)
    out.push_back(spec.rep.blocks().size() == 1 ? spec.name : "block" + std::to_string(b));
  return out;
}

int chern_order(const ModelSpec& spec) {
  if (spec.rep.space_dim() == 2) return 1;
  if (spec.rep.space_dim() == 4) return 2;
  throw ConfigError("no Chern number for this dimension");
}

std::vector<int> selected_blocks(const ModelSpec& spec, int block) {
  const int nb = static_cast<int>(spec.rep.blocks().size());
  if (block >= nb) throw ConfigError("--block out of range for model '" + spec.name + "'");
  if (block >= 0) return {block};
  std::vector<int> all(static_cast<std::size_t>(nb));
  for (int b = 0; b < nb; ++b) all[static_cast<std::size_t>(b)] = b;
  return all;
}

ChernValue antiderivative_value(const ModelSpec& spec, double m, const FillingDomain& dom, int block, Json* rows) {
  const int n = chern_order(spec);
  const auto names = block_names(spec);
  ChernValue total{0.0, 0.0, ChernMethod::Antiderivative};
  for (int b : selected_blocks(spec, block)) {
    const double v = (n == 1 ? block_chern1_energy(spec.rep, b, m, dom) : block_chern2_energy(spec.rep, b, m, dom)).value;
    total.value += v;
    if (rows) rows->push_back(Json{{"block", names[static_cast<std::size_t>(b)]}, {"value", num(v)}});
  }
  return total;
}

ChernValue quadrature_value(const ModelSpec& spec, double m, double tol, int block) {
  QuadratureScheme scheme;
  scheme.tol = tol;
  if (block >= 0) {
    selected_blocks(spec, block);
    scheme.block = block;
  }
  return chern_order(spec) == 1 ? chern1_quadrature(spec.rep, m, Band::Positive, scheme)
                                : chern2_quadrature(spec.rep, m, Band::Positive, scheme);
}

std::string chern_anchor(const ModelSpec& spec, int n, const std::string& domain, const std::string& method) {
  const std::string nn = "N" + std::to_string(n);
  if (spec.rep.blocks().size() > 1) return nn + " summed over diagonal blocks, " + domain + ", " + method;
  if (method == "quadrature") return nn + " positive band by momentum quadrature = -1/2";
  if (domain == "full") return nn + " over both energy branches = 1";
  if (domain == "half") return nn + " half-filled (E_F = m) = 1/2";
  if (domain == "positive") return nn + " positive band by the energy antiderivative = -1/2";
  return nn + " over a custom signed-energy interval";
}

Json cmd_chern(const Settings& s) {
  if (s.band != "positive") throw ConfigError("only --band positive is supported");
  const auto spec = catalog(s.model, s.m);
  if (s.report == "delta") {
    const std::string dname = s.domain.empty() ? "half" : s.domain;
    const auto dom = parse_domain(dname);
    Json params = model_parameters(spec);
    params["domain"] = dname;
    if (spec.name == "kane_mele") {
      const double dn = delta_chern_kane_mele(s.m, dom);
      Json r = header("chern", spec.name, params, "antiderivative", num(0.0), "Kane-Mele Delta N1 = 2, sigma_SH = e/2pi");
      Json blocks = Json::array();
      const auto n = kane_mele_block_cherns(s.m, dom);
      const char* labels[] = {"up+", "up-", "down+", "down-"};
      for (std::size_t i = 0; i < 4; ++i) blocks.push_back(Json{{"block", labels[i]}, {"value", num(n[i])}});
      r["blocks"] = blocks;
      r["delta_n1"] = num(dn);
      r["spin_hall_conductivity_e"] = num(spin_hall_conductivity_graphene(dn));
      return r;
    }
    if (spec.name == "tri_3p1") {
      const auto table = spin_chern_table(dom, s.m);
      Json r = header("chern", spec.name, params, "antiderivative", num(0.0),
                      "spin Chern numbers N2 (up+, up-, down+, down-), sigma_SH = e/2pi");
      Json blocks = Json::array();
      double dn = 0.0;
      for (const auto& row : table) {
        blocks.push_back(Json{{"block", row.label}, {"value", num(row.value)}});
        dn += (row.label.rfind("up", 0) == 0 ? 1.0 : -1.0) * row.value;
      }
      r["blocks"] = blocks;
      r["delta_n2"] = num(dn);
      r["spin_hall_conductivity_e"] = num(spin_hall_conductivity_3p1(table));
      return r;
    }
    throw ConfigError("--report delta needs --model kane_mele or tri_3p1");
  }
  if (!s.report.empty()) throw ConfigError("unknown report '" + s.report + "'");

  const int n = chern_order(spec);
  const std::string dname = s.domain.empty() ? "full" : s.domain;
  const auto dom = parse_domain(dname);
  Json params = model_parameters(spec);
  if (s.block >= 0) params["block"] = s.block;
  const bool anti = s.method != "quadrature";
  const bool quad = s.method != "antiderivative";
  if (anti) params["domain"] = dname;
  if (quad) params["band"] = s.band;

  Json r = header("chern", spec.name, params, s.method, num(quad ? s.tol : 0.0),
                  chern_anchor(spec, n, quad && !anti ? "positive" : dname, quad && !anti ? "quadrature" : "antiderivative"));
  r["order"] = n;
  if (anti) {
    Json rows = Json::array();
    const auto v = antiderivative_value(spec, s.m, dom, s.block, &rows);
    r["antiderivative"] = Json{{"value", num(v.value)}, {"abs_error", num(0.0)}, {"blocks", rows}};
    if (!quad) r["value"] = num(v.value);
  }
  if (quad) {
    const auto q = quadrature_value(spec, s.m, s.tol, s.block);
    r["quadrature"] = Json{{"value", num(q.value)}, {"abs_error", num(q.abs_error)}};
    if (!anti) r["value"] = num(q.value);
  }
  if (anti && quad) {
    const double positive = antiderivative_value(spec, s.m, FillingDomain::positive(), s.block, nullptr).value;
    r["positive_band_antiderivative"] = num(positive);
    r["discrepancy"] = num(std::abs(r["quadrature"]["value"].get<double>() - positive));
    r["orientation"] = num(kOrientation);
  }
  return r;
}

Json cmd_reduce(const Settings& s) {
  const std::string q = s.quantity;
  Json params = Json::object();
  Json r;
  auto make = [&](const std::string& method, const std::string& anchor) {
    return header("reduce", q == "sigma_sh" || q == "sigma_sh_graphene" ? s.model : "none", params, method,
                  num(kMatrixTol), anchor);
  };
  auto table = [&](double n, auto fn) {
    Json rows = Json::array();
    const int steps = std::max(s.steps, 2);
    for (int i = 0; i < steps; ++i) {
      const double a = 2.0 * pi * i / (steps - 1);
      rows.push_back(Json{{"angle", num(a)}, {"value", num(fn(a, n))}});
    }
    return rows;
  };

  if (q == "p") {
    params["n1"] = num(s.n1);
    if (is_set(s.theta)) params["theta"] = num(s.theta);
    r = make("linear_evaluator", "P(theta) = N1 theta / 2pi, Delta P = P(2pi) - P(0) = 1");
    if (is_set(s.theta))
      r["value"] = num(charge_polarization(s.theta, s.n1));
    else
      r["rows"] = table(s.n1, charge_polarization);
    r["delta"] = num(charge_polarization(2.0 * pi, s.n1) - charge_polarization(0.0, s.n1));
  } else if (q == "p3") {
    params["n2"] = num(s.n2);
    if (is_set(s.phi3)) params["phi3"] = num(s.phi3);
    r = make("linear_evaluator", "P3(phi3) = N2 phi3 / 2pi, Delta P3 = N2");
    if (is_set(s.phi3))
      r["value"] = num(magnetoelectric_polarization(s.phi3, s.n2));
    else
      r["rows"] = table(s.n2, magnetoelectric_polarization);
    r["delta"] = num(magnetoelectric_polarization(2.0 * pi, s.n2) - magnetoelectric_polarization(0.0, s.n2));
  } else if (q == "gw") {
    if (s.profile.empty()) throw ConfigError("--quantity gw needs --profile");
    const auto profile = DomainWallProfile::read_csv(s.profile);
    params["profile"] = s.profile;
    params["samples"] = profile.x().size();
    r = make("trapezoid_gradient", "Goldstone-Wilczek charge Q = Delta zeta / 2pi");
    r["delta"] = num(profile.delta());
    r["value"] = num(goldstone_wilczek_charge(profile));
  } else if (q == "sigma_h") {
    params["n2"] = num(s.n2);
    double dtheta = s.dtheta;
    if (!s.profile.empty()) {
      dtheta = DomainWallProfile::read_csv(s.profile).delta();
      params["profile"] = s.profile;
    }
    if (!is_set(dtheta)) throw ConfigError("--quantity sigma_h needs --dtheta or --profile");
    params["dtheta"] = num(dtheta);
    r = make("formula", "surface Hall conductivity N2 Delta theta / (2pi)^2, e^2/2h for N2 = 1/2, Delta theta = 2pi");
    r["value"] = num(surface_hall_conductivity(dtheta, s.n2));
    r["units"] = "e^2/hbar";
  } else if (q == "sigma_sh") {
    const std::string dname = s.domain.empty() ? "half" : s.domain;
    params["m"] = num(s.m);
    params["domain"] = dname;
    const auto rows = spin_chern_table(parse_domain(dname), s.m);
    r = make("spin_chern_table", "spin Hall conductivity (e/4pi)(up+ + up- - down+ - down-) = e/2pi");
    Json t = Json::array();
    for (const auto& row : rows) t.push_back(Json{{"block", row.label}, {"value", num(row.value)}});
    r["table"] = t;
    r["value"] = num(spin_hall_conductivity_3p1(rows));
    r["units"] = "e";
  } else if (q == "sigma_sh_graphene") {
    const double dn = is_set(s.dn1) ? s.dn1 : delta_chern_kane_mele(s.m, parse_domain(s.domain.empty() ? "half" : s.domain));
    params["dn1"] = num(dn);
    r = make("formula", "graphene spin Hall conductivity Delta N1 / 4pi = e/2pi");
    r["value"] = num(spin_hall_conductivity_graphene(dn));
    r["units"] = "e";
  } else if (q == "skyrmion") {
    params["n2"] = num(s.n2);
    params["grid"] = s.grid;
    const auto field = omega_field(uniform_grid(0.0, 2.0 * pi, s.grid), uniform_grid(0.0, pi, s.grid), s.n2);
    r = make("finite_difference_trapezoid", "Skyrmion charge of the Omega field = N2");
    r["value"] = num(skyrmion_charge(field));
  } else if (q == "pumped") {
    params["n2"] = num(s.n2);
    r = make("gauss_legendre", "pumped charge Delta Q = N2, 1/2 for N2 = 1/2");
    r["value"] = num(pumped_charge(s.n2));
  } else if (q == "g_theta") {
    params["n1"] = num(s.n1);
    params["m"] = num(s.m);
    const auto g = g_theta(s.n1);
    r = make("constant_evaluator", "G(theta) = N1 / 2pi, int_0^2pi G = N1");
    r["value"] = num(g(0.0));
    r["normalization"] = num(g.normalization());
    r["radial_positive_band"] = num(g_theta_radial(s.m));
  } else {
    throw ConfigError("unknown --quantity '" + q + "'");
  }
  r["parameters"] = params;
  return r;
}

Json cmd_models(const Settings&) {
  Json rows = Json::array();
  for (const auto& name : catalog_names()) {
    const auto spec = catalog(name, 1.0);
    Json masses = Json::array();
    for (double b : spec.block_masses) masses.push_back(num(b));
    Json row{{"name", name},
             {"space_dim", spec.rep.space_dim()},
             {"momentum_dim", spec.momentum_dim()},
             {"matrix_dim", static_cast<int>(spec.rep.dim())},
             {"block_masses", masses},
             {"time_reversal", spec.time_reversal.has_value()}};
    if (spec.time_reversal) row["time_reversal_invariant"] = time_reversal_check(spec);
    rows.push_back(row);
  }
  Json r = header("models", "catalog", Json{{"m", num(1.0)}}, "time_reversal_check", num(kMatrixTol),
                  "model catalog with time-reversal checks");
  r["rows"] = rows;
  return r;
}

Json cmd_sweep(const Settings& s) {
  if (s.param != "m") throw ConfigError("only --param m can be swept");
  if (s.steps < 1) throw ConfigError("--steps must be at least 1");
  if (!(s.hi >= s.lo)) throw ConfigError("--hi must not be below --lo");
  const std::string dname = s.domain.empty() ? "full" : s.domain;
  const auto dom = parse_domain(dname);
  const bool anti = s.method != "quadrature";
  const bool quad = s.method != "antiderivative";
  Json params{{"param", s.param}, {"lo", num(s.lo)}, {"hi", num(s.hi)}, {"steps", s.steps}, {"domain", dname}};
  Json r = header("sweep", s.model, params, s.method, num(quad ? s.tol : 0.0), "Chern number as a function of the mass");
  Json rows = Json::array();
  for (int i = 0; i < s.steps; ++i) {
    const double m = s.steps == 1 ? s.lo : s.lo + (s.hi - s.lo) * i / (s.steps - 1);
    const auto spec = catalog(s.model, m);
    Json row{{"m", num(m)}};
    if (anti) row["antiderivative"] = num(antiderivative_value(spec, m, dom, s.block, nullptr).value);
    if (quad) {
      const auto q = quadrature_value(spec, m, s.tol, s.block);
      row["quadrature"] = num(q.value);
      row["abs_error"] = num(q.abs_error);
    }
    rows.push_back(row);
  }
  r["rows"] = rows;
  return r;
}

void write_scalar(std::ostream& os, const Json& v) {
  if (v.is_string())
    os << v.get<std::string>();
  else if (v.is_number_float())
    os << text(v.get<double>());
  else
    os << v.dump();
}

void flatten(std::ostream& os, const std::string& prefix, const Json& v) {
  if (v.is_object()) {
    for (const auto& [key, item] : v.items()) flatten(os, prefix.empty() ? key : prefix + "." + key, item);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(os, prefix + "." + std::to_string(i), v[i]);
  } else {
    os << prefix << ",";
    write_scalar(os, v);
    os << "\n";
  }
}

// Tables (a "rows" array of flat objects) become a header plus one line per
// row, with the remaining fields as "# key,value" comments; anything else is
// flattened to path,value lines.
void write_csv(std::ostream& os, const Json& r) {
  if (!r.contains("rows") || r["rows"].empty() || !r["rows"][0].is_object()) {
    flatten(os, "", r);
    return;
  }
  for (const auto& [key, item] : r.items()) {
    if (key == "rows") continue;
    std::ostringstream line;
    flatten(line, key, item);
    std::istringstream lines(line.str());
    for (std::string l; std::getline(lines, l);) os << "# " << l << "\n";
  }
  std::vector<std::string> columns;
  for (const auto& row : r["rows"])
    for (const auto& [key, item] : row.items())
      if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << "\n";
  for (const auto& row : r["rows"]) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      os << (c ? "," : "");
      if (row.contains(columns[c])) write_scalar(os, row[columns[c]]);
    }
    os << "\n";
  }
}

void emit(const Settings& s, const Json& r, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!s.out.empty()) {
    file.open(s.out);
    if (!file) throw ConfigError("cannot write '" + s.out + "'");
    os = &file;
  }
  if (s.format == "csv")
    write_csv(*os, r);
  else
    *os << r.dump(2) << "\n";
}

int cmd_verify(const Settings& s, std::ostream& out) {
  VerifyOptions opt;
  opt.inject_sign_fault = s.inject_fault;
  const auto results = run_acceptance(opt);
  int failed = 0;
  Json claims = Json::array();
  for (const auto& c : results) {
    failed += c.passed ? 0 : 1;
    claims.push_back(Json{{"id", c.id},
                          {"anchor", c.anchor},
                          {"passed", c.passed},
                          {"detail", c.detail},
                          {"budget_ms", num(c.budget_ms)},
                          {"within_budget", c.elapsed_ms <= c.budget_ms}});
  }
  if (s.json || s.format == "csv") {
    Json r = header("verify", "all", Json{{"inject_fault", s.inject_fault}}, "acceptance_suite", "per claim",
                    "all acceptance claims");
    r["rows"] = claims;
    r["failed"] = failed;
    Settings copy = s;
    if (s.json) copy.format = "json";
    emit(copy, r, out);
  } else {
    std::ostringstream text_out;
    for (const auto& c : results)
      text_out << (c.passed ? "PASS" : "FAIL") << " [" << c.id << "] " << c.anchor << " :: " << c.detail << "\n";
    text_out << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size() << " claims passed\n";
    if (s.out.empty()) {
      out << text_out.str();
    } else {
      std::ofstream f(s.out);
      if (!f) throw ConfigError("cannot write '" + s.out + "'");
      f << text_out.str();
    }
  }
  return failed == 0 ? kOk : kClaimFailure;
}

void add_model_options(CLI::App* c, Settings& s) {
  c->add_option("--model", s.model, "Catalog model name")->capture_default_str();
  c->add_option("--m", s.m, "Dirac mass")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Settings s;
  CLI::App app{"Berry curvature, Chern numbers and dimensional-reduction observables of massive Dirac models", "fwtopo"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", s.config, "Flat key=value file; command-line flags take precedence");
  app.add_option("--format", s.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", s.out, "Write the report to this path");

  auto* curvature = app.add_subcommand("curvature", "Berry curvature at one momentum");
  add_model_options(curvature, s);
  curvature->add_option("--k", s.k, "Momentum, comma separated");
  curvature->add_option("--scheme", s.scheme, "closed | analytic | fd")
      ->check(CLI::IsMember({"closed", "analytic", "fd"}));
  curvature->add_option("--step", s.step, "Finite-difference step (0 = automatic)");

  auto* connection = app.add_subcommand("connection", "Berry connection or pure gauge field at one momentum");
  add_model_options(connection, s);
  connection->add_option("--k", s.k, "Momentum, comma separated");
  connection->add_option("--field", s.field, "berry | pure")->check(CLI::IsMember({"berry", "pure"}));

  auto* chern = app.add_subcommand("chern", "First or second Chern number");
  add_model_options(chern, s);
  chern->add_option("--domain", s.domain, "full | half | positive | custom:lo:hi");
  chern->add_option("--method", s.method, "antiderivative | quadrature | both")
      ->check(CLI::IsMember({"antiderivative", "quadrature", "both"}))
      ->capture_default_str();
  chern->add_option("--tol", s.tol, "Quadrature tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  chern->add_option("--band", s.band, "Band for quadrature (positive)");
  chern->add_option("--block", s.block, "Restrict to one diagonal block");
  chern->add_option("--report", s.report, "delta: spin-resolved Chern difference");

  auto* reduce = app.add_subcommand("reduce", "Dimensional-reduction observables");
  reduce->add_option("--quantity", s.quantity, "p | p3 | gw | sigma_h | sigma_sh | sigma_sh_graphene | skyrmion | pumped | g_theta")
      ->required();
  add_model_options(reduce, s);
  reduce->add_option("--domain", s.domain, "Filling domain for table-based quantities");
  reduce->add_option("--profile", s.profile, "Two-column CSV profile");
  reduce->add_option("--n1", s.n1, "First Chern number");
  reduce->add_option("--n2", s.n2, "Second Chern number");
  reduce->add_option("--theta", s.theta, "Angle theta in [0, 2pi]");
  reduce->add_option("--phi3", s.phi3, "Angle phi3 in [0, 2pi]");
  reduce->add_option("--dtheta", s.dtheta, "Jump of theta across the wall");
  reduce->add_option("--dn1", s.dn1, "Spin Chern difference Delta N1");
  reduce->add_option("--grid", s.grid, "Grid points per axis for the Skyrmion charge")->check(CLI::Range(3, 20000));
  reduce->add_option("--steps", s.steps, "Table length when no angle is given")->check(CLI::PositiveNumber);

  app.add_subcommand("models", "List catalog models");

  auto* verify = app.add_subcommand("verify", "Run every acceptance claim");
  verify->add_flag("--json", s.json, "Machine-readable claim list");
  verify->add_flag("--inject-fault", s.inject_fault, "Flip the sign of the full-band N1 (test hook)");

  auto* sweep = app.add_subcommand("sweep", "Chern number over a range of masses");
  add_model_options(sweep, s);
  sweep->add_option("--param", s.param, "Swept parameter (m)")->capture_default_str();
  sweep->add_option("--lo", s.lo, "Lower end")->capture_default_str();
  sweep->add_option("--hi", s.hi, "Upper end")->capture_default_str();
  sweep->add_option("--steps", s.steps, "Number of points")->capture_default_str();
  sweep->add_option("--domain", s.domain, "full | half | positive | custom:lo:hi");
  sweep->add_option("--method", s.method, "antiderivative | quadrature | both")
      ->check(CLI::IsMember({"antiderivative", "quadrature", "both"}));
  sweep->add_option("--tol", s.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
  sweep->add_option("--block", s.block, "Restrict to one diagonal block");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    CLI::App* sub = app.get_subcommands().front();
    if (!s.config.empty()) apply_config(app, *sub, read_config(s.config));

    const std::string name = sub->get_name();
    if (name == "verify") return cmd_verify(s, out);
    Json r;
    if (name == "curvature") r = cmd_curvature(s);
    else if (name == "connection") r = cmd_connection(s);
    else if (name == "chern") r = cmd_chern(s);
    else if (name == "reduce") r = cmd_reduce(s);
    else if (name == "models") r = cmd_models(s);
    else r = cmd_sweep(s);
    emit(s, r, out);
    return kOk;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const QuadratureError& e) {
    err << "numerical failure: " << e.what() << " (partial value " << text(e.partial().value) << ")\n";
    return kNumericalFailure;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace fwtopo::cli
