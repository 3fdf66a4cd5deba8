#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "cubicdelta/analytic.hpp"
#include "cubicdelta/errors.hpp"
#include "cubicdelta/expsums.hpp"
#include "cubicdelta/pointcount.hpp"
#include "report.hpp"

using namespace cubicdelta;
using namespace cubicdelta::cli;

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/// DeltaParams fields as flags; NaN means the command default.
struct DeltaFlags {
  double X = kUnset, Y = kUnset, N_max = kUnset, C_max = kUnset, P = kUnset, grid = kUnset, tol = kUnset;

  void add(CLI::App* sub) {
    sub->add_option("--X", X, "box scale");
    sub->add_option("--Y", Y, "delta-symbol parameter (default X^(3/2))");
    sub->add_option("--N-max", N_max, "largest modulus");
    sub->add_option("--C-max", C_max, "largest |c|_inf");
    sub->add_option("--P", P, "bias split parameter");
    sub->add_option("--grid", grid, "quadrature nodes per axis");
    sub->add_option("--tol", tol, "truncation tolerance of the integral expansions");
  }

  DeltaParams resolve(const Common& o, double X_default) const {
    DeltaParams p;
    p.X = std::isnan(X) ? X_default : X;
    if (!std::isnan(Y)) p.Y = Y;
    if (!std::isnan(N_max)) p.N_max = static_cast<u64>(N_max);
    if (!std::isnan(C_max)) p.C_max = static_cast<i64>(C_max);
    if (!std::isnan(P)) p.P = P;
    if (!std::isnan(grid)) p.grid = static_cast<int>(grid);
    if (!std::isnan(tol)) p.tol = tol;
    p.workers = o.workers;
    p.validate();
    return p;
  }
};

json echo_options(const CLI::App& app) {
  json out = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      out[name] = res.size() == 1 ? json(res[0]) : json(res);
    } else if (!opt->get_default_str().empty() && opt->get_default_str() != "nan") {
      out[name] = opt->get_default_str();
    }
  }
  return out;
}

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return v.is_null() ? "" : v.dump();
}

void write_csv(const std::string& path, const json& rows) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  std::vector<std::string> cols;
  for (const auto& row : rows)
    for (const auto& [k, v] : row.items())
      if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
  for (size_t i = 0; i < cols.size(); ++i) f << (i ? "," : "") << cols[i];
  f << "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < cols.size(); ++i) f << (i ? "," : "") << (row.contains(cols[i]) ? csv_cell(row[cols[i]]) : "");
    f << "\n";
  }
}

void write_output(const std::string& path, const json& doc, const json& rows) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot open " + path);
  if (path.size() > 6 && path.ends_with(".jsonl")) {
    for (const auto& row : rows) f << row.dump() << "\n";
  } else {
    f << doc.dump(2) << "\n";
  }
}

// Commands.

Result cmd_lines(const Common& o) {
  const auto F = DiagonalCubicForm::parse(o.form);
  Result r;
  r.body["records"] = json::array();
  for (const auto& L : enumerate_lines(F)) r.body["records"].push_back(json::parse(to_json(L)));
  r.body["count"] = r.body["records"].size();
  r.rows = r.body["records"];
  return r;
}

struct ExpSumFlags {
  std::string c;
  u64 n = 1;
  std::string method = "separable";
};

// Closed form for S_c(p^l), l >= 2, when (c, p) is admissible for some line.
std::optional<double> closed_value(const DiagonalCubicForm& F, const IVec& c, u64 n) {
  const auto f = factor(n);
  if (f.size() != 1 || f[0].e < 2) return std::nullopt;
  for (const auto& L : enumerate_lines(F)) {
    try {
      require_admissible(F, L, c, f[0].p);
    } catch (const std::invalid_argument&) {
      continue;
    }
    return predicted_prime_power_sum(F, L, c, f[0].p, f[0].e);
  }
  return std::nullopt;
}

Result cmd_expsum(const Common& o, const ExpSumFlags& a) {
  const auto F = DiagonalCubicForm::parse(o.form);
  const IVec c = parse_ivec(a.c);
  if (static_cast<int>(c.size()) != F.m()) throw std::invalid_argument("--c must have one entry per variable");
  if (a.n < 1) throw std::invalid_argument("--n must be positive");
  ExpSumEvaluator E(F, o.store);
  Result r;
  json values = json::object();
  auto run = [&](const std::string& name) -> std::optional<cplx> {
    if (name == "separable") return E(c, a.n).value;
    if (name == "direct") return E.separable_direct(c, a.n);
    if (name == "brute") return expsum_brute(F, c, a.n).value;
    if (name == "naive") return expsum_naive(F, c, a.n).value;
    if (name == "closed") {
      if (auto v = closed_value(F, c, a.n)) return cplx(*v, 0);
      return std::nullopt;
    }
    throw std::invalid_argument("unknown method '" + name + "'; expected separable, direct, brute, naive, closed or all");
  };
  std::vector<std::string> methods{a.method};
  if (a.method == "all") {
    methods = {"separable", "direct", "brute", "closed"};
    if (std::pow(static_cast<double>(a.n), F.m()) <= 1e8) methods.push_back("naive");
  }
  cplx ref{};
  bool have_ref = false;
  double discrepancy = 0;
  for (const auto& name : methods) {
    auto v = run(name);
    if (!v) {
      values[name] = nullptr;
      continue;
    }
    values[name] = to_json(*v);
    if (!have_ref) {
      ref = *v;
      have_ref = true;
    }
    discrepancy = std::max(discrepancy, std::abs(*v - ref));
  }
  if (!have_ref) throw std::invalid_argument("closed form needs n = p^l with l >= 2 and admissible (c, p)");
  r.body["value"] = to_json(ref);
  r.body["normalized"] = ref.real() * std::pow(static_cast<double>(a.n), -(1 + F.m()) / 2.0);
  if (a.method == "all") {
    // Rounding noise in each evaluation grows with phi(n) n^(m/2).
    const double floor = 1e-12 * static_cast<double>(euler_phi(a.n)) * std::pow(static_cast<double>(a.n), F.m() / 2.0);
    const double tolerance = std::max(1e-6 * (1 + std::abs(ref)), floor);
    r.body["values"] = values;
    r.body["discrepancy"] = discrepancy;
    r.body["tolerance"] = tolerance;
    r.body["pass"] = discrepancy <= tolerance;
    if (discrepancy > tolerance) r.status = kViolation;
  }
  return r;
}

Result cmd_classify(const Common& o, const std::string& cs) {
  const auto F = DiagonalCubicForm::parse(o.form);
  const IVec c = parse_ivec(cs);
  if (static_cast<int>(c.size()) != F.m()) throw std::invalid_argument("--c must have one entry per variable");
  const auto k = classify_c(F, c);
  Result r;
  r.body["class"] = to_string(k.kind);
  r.body["pairings"] = json::array();
  for (const auto& J : k.pairings) r.body["pairings"].push_back(J.to_string());
  r.body["vanish_count"] = k.report.vanish_count;
  r.body["jet_order"] = k.report.jet_order;
  return r;
}

Result cmd_pointcount(const Common& o, const std::string& cs, u64 p) {
  const auto F = DiagonalCubicForm::parse(o.form);
  const IVec c = parse_ivec(cs);
  if (static_cast<int>(c.size()) != F.m()) throw std::invalid_argument("--c must have one entry per variable");
  if (!is_prime(p)) throw std::invalid_argument("--p must be prime");
  const auto rep = count_Vc(F, c, p);
  Result r;
  r.body["p"] = p;
  r.body["affine_cone_count"] = rep.affine_cone_count;
  r.body["affine_count_V"] = rep.affine_count_V;
  r.body["projective_count"] = rep.projective_count;
  r.body["projective_count_V"] = rep.projective_count_V;
  r.body["E_c"] = rep.E_c;
  r.body["E"] = rep.E;
  r.body["Et_c"] = rep.Et_c;
  r.body["Et"] = rep.Et;
  for (const auto& L : enumerate_lines(F)) {
    try {
      require_admissible(F, L, c, p);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const i64 pred = predicted_cone_count(F, L, c, p);
    r.body["pairing"] = L.pairing.to_string();
    r.body["predicted_cone_count"] = pred;
    r.body["pass"] = pred == rep.affine_cone_count;
    if (pred != rep.affine_cone_count) r.status = kViolation;
    if (F.m() == 6) r.body["hyperelliptic_disc_nonzero"] = hyperelliptic_disc_check(F, L, c, p);
    break;
  }
  return r;
}

struct VerifyFlags {
  std::vector<double> Y{16};
  int samples = 200;
  u64 pmax = 37;
  int lmax = 2;
  i64 bound = 6;
  u64 nmin = 4;
  u64 nmax = 0;
};

Result cmd_verify(const std::string& suite, const Common& o, const VerifyFlags& v, const DeltaFlags& d) {
  json args;
  if (suite == "delta-identity") {
    args = {{"Y", v.Y}, {"samples", v.samples}};
  } else if (suite == "bias" || suite == "pointcount") {
    args = {{"pmax", v.pmax}, {"lmax", v.lmax}, {"bound", v.bound}};
  } else if (suite == "poisson-swap") {
    args = {{"X", std::isnan(d.X) ? 6.0 : d.X},
            {"tol", std::isnan(d.tol) ? 1e-5 : d.tol},
            {"nmin", v.nmin},
            {"nmax", v.nmax ? v.nmax : 30}};
  } else if (suite == "averages") {
    args = {{"nmax", v.nmax ? v.nmax : 50}};
  }
  return run_verify(suite, o, args);
}

struct PoissonFlags {
  u64 n = 12;
  std::vector<i64> C;
  bool reverse = false;
  int line = -1;
};

Result cmd_poisson(const Common& o, const PoissonFlags& a, const DeltaFlags& d) {
  const auto F = DiagonalCubicForm::parse(o.form);
  const auto w = weight_for(o, F.m());
  auto params = d.resolve(o, 6);
  if (std::isnan(d.tol)) params.tol = 1e-6;
  Result r;
  if (!a.reverse) {
    const auto rep = poisson_swap(F, w, params, a.n, a.C);
    r.body["n"] = rep.n;
    r.body["Y"] = rep.Y;
    r.body["modes"] = rep.modes;
    r.body["rhs"] = rep.rhs;
    r.body["scale"] = rep.scale;
    json rows = json::array();
    for (size_t i = 0; i < rep.C_values.size(); ++i) {
      const double rel = rep.residual[i] / rep.scale;
      rows.push_back({{"C", rep.C_values[i]}, {"lhs", to_json(rep.lhs[i])}, {"residual", rep.residual[i]},
                      {"relative", rel}});
    }
    r.body["rows"] = rows;
    r.rows = rows;
    const double last = rep.residual.back() / rep.scale;
    r.body["pass"] = last <= 1e-3;
    if (last > 1e-3) r.status = kViolation;
    return r;
  }
  const auto lines = enumerate_lines(F);
  json rows = json::array();
  bool all = true;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (a.line >= 0 && static_cast<size_t>(a.line) != i) continue;
    if (sigma_Lperp(lines[i], w) == 0) continue;
    const auto rep = reverse_poisson_check(F, lines[i], w, params, a.n);
    for (const auto& c : rep.classes) {
      const bool ok = c.residual <= rep.budget;
      all = all && ok;
      rows.push_back({{"pairing", lines[i].pairing.to_string()},
                      {"n0", rep.n0},
                      {"n1", rep.n1},
                      {"b_star", c.b_star},
                      {"lhs", to_json(c.lhs)},
                      {"rhs", c.rhs},
                      {"residual", c.residual},
                      {"budget", rep.budget},
                      {"pass", ok}});
    }
  }
  r.body["rows"] = rows;
  r.rows = rows;
  r.body["pass"] = all;
  if (!all) r.status = kViolation;
  return r;
}

Result cmd_sigma(const Common& o) {
  const auto F = DiagonalCubicForm::parse(o.form);
  const auto w = weight_for(o, F.m());
  Result r;
  json rows = json::array();
  for (const auto& L : enumerate_lines(F)) rows.push_back({{"pairing", L.pairing.to_string()}, {"sigma", sigma_Lperp(L, w)}});
  r.body["sigma_Lperp"] = rows;
  r.rows = rows;
  const auto s = sigma_F(F, w);
  r.body["sigma_F"] = {{"value", s.value}, {"coarea", s.coarea}, {"eps", s.eps}, {"slab", s.slab},
                       {"solved_coordinate", s.solved_coordinate}};
  return r;
}

Result cmd_singular(const Common& o, u64 nmax) {
  const auto F = DiagonalCubicForm::parse(o.form);
  const auto s = singular_series(F, nmax);
  Result r;
  r.body["n_max"] = s.n_max;
  r.body["value"] = s.value;
  r.body["checkpoints"] = s.checkpoints;
  r.body["partial_sums"] = s.partial_sums;
  r.body["block_exponent"] = s.block_exponent;
  r.body["block_abs_sum"] = s.block_abs_sum;
  r.body["slope"] = s.slope;
  r.body["tail_estimate"] = s.tail_estimate;
  if (!s.warning.empty()) r.body["warning"] = s.warning;
  for (size_t i = 0; i < s.checkpoints.size(); ++i)
    r.rows.push_back({{"n", s.checkpoints[i]}, {"partial_sum", s.partial_sums[i]}});
  return r;
}

Result cmd_count(const Common& o, const DeltaFlags& d) {
  const auto F = DiagonalCubicForm::parse(o.form);
  const auto w = weight_for(o, F.m());
  const double X = std::isnan(d.X) ? 200 : d.X;
  if (X < 1) throw std::invalid_argument("--X must be at least 1");
  const double count = direct_count(F, w, X);
  double pred = 0;
  json rows = json::array();
  for (const auto& L : enumerate_lines(F)) {
    const double s = sigma_Lperp(L, w);
    pred += s * std::pow(X, F.m() / 2.0);
    rows.push_back({{"pairing", L.pairing.to_string()}, {"sigma", s}});
  }
  Result r;
  r.body["X"] = X;
  r.body["count"] = count;
  r.body["prediction"] = pred;
  r.body["ratio"] = pred > 0 ? count / pred : NAN;
  r.body["lines"] = rows;
  r.rows = rows;
  return r;
}

Result cmd_structured(const Common& o, const DeltaFlags& d, bool experiment) {
  const auto F = DiagonalCubicForm::parse(o.form);
  const auto w = weight_for(o, F.m());
  const auto rep = structured_sum(F, w, d.resolve(o, 8), experiment);
  Result r;
  r.body = json::parse(rep.to_json());
  for (const auto& L : rep.lines)
    r.rows.push_back({{"pairing", L.pairing},
                      {"value", L.value},
                      {"predicted", L.predicted},
                      {"residual", L.residual},
                      {"shell", L.shell},
                      {"dirichlet_rel_diff", L.dirichlet_rel_diff},
                      {"c_count", L.c_count}});
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delta-method machinery for diagonal cubic forms"};
  app.set_config("--config", "", "key = value configuration file; flags override it");
  // Values such as "1,1,1,1" stay whole; lists in the file are space separated.
  app.get_config_formatter_base()->arrayDelimiter(';');
  app.require_subcommand(1);
  app.fallthrough();
  Common o;
  app.add_option("--form", o.form, "diagonal coefficients, comma separated")->capture_default_str();
  app.add_option("--weight", o.weight, "bump weight centre:radius per coordinate (default product bump)");
  app.add_option("--output", o.output, "write the report here (.jsonl writes the rows as JSON lines)");
  app.add_option("--csv", o.csv, "write the table rows as CSV");
  app.add_option("--cache", o.cache, "prime-power cache file");
  app.add_option("--workers", o.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "sampling seed")->capture_default_str();

  DeltaFlags d;
  ExpSumFlags es;
  VerifyFlags vf;
  PoissonFlags pf;
  std::string cs, suite;
  u64 p = 0, nmax = 10000;
  bool experiment = false;

  auto* lines = app.add_subcommand("lines", "permissible pairings and their lattices");
  auto* expsum = app.add_subcommand("expsum", "the exponential sum S_c(n)");
  expsum->add_option("--c", es.c, "dual vector")->required();
  expsum->add_option("--n", es.n, "modulus")->capture_default_str();
  expsum->add_option("--method", es.method, "separable, direct, brute, naive, closed or all")->capture_default_str();
  auto* classify = app.add_subcommand("classify-c", "trivial or nontrivial dual vector");
  classify->add_option("--c", cs, "dual vector")->required();
  auto* pointcount = app.add_subcommand("pointcount", "point counts of V_c over F_p");
  pointcount->add_option("--c", cs, "dual vector")->required();
  pointcount->add_option("--p", p, "prime")->required();

  auto add_verify_flags = [&](CLI::App* sub) {
    sub->add_option("--Y", vf.Y, "delta-symbol parameters")->capture_default_str()->delimiter(',');
    sub->add_option("--samples", vf.samples, "sampled t per Y")->capture_default_str();
    sub->add_option("--pmax", vf.pmax, "largest prime")->capture_default_str();
    sub->add_option("--lmax", vf.lmax, "largest prime-power exponent")->capture_default_str();
    sub->add_option("--bound", vf.bound, "max |c_i| of the enumerated dual vectors")->capture_default_str();
    sub->add_option("--nmin", vf.nmin, "smallest modulus")->capture_default_str();
    sub->add_option("--nmax", vf.nmax, "largest modulus (suite default when 0)")->capture_default_str();
    sub->add_option("--X", d.X, "box scale for poisson-swap");
    sub->add_option("--tol", d.tol, "truncation tolerance for poisson-swap");
  };
  auto* verify = app.add_subcommand("verify", "run a property suite");
  verify->add_option("suite", suite, "delta-identity, bias, pointcount, poisson-swap or averages")->required();
  add_verify_flags(verify);
  auto* bias = app.add_subcommand("bias-verify", "alias of verify bias");
  add_verify_flags(bias);
  auto* identity = app.add_subcommand("delta-identity", "alias of verify delta-identity");
  add_verify_flags(identity);

  auto* poisson = app.add_subcommand("poisson-check", "Poisson summation in c at one modulus");
  poisson->add_option("--n", pf.n, "modulus")->capture_default_str();
  poisson->add_option("--C", pf.C, "cutoffs |c|_inf <= C (default from the integral decay)")->delimiter(',');
  poisson->add_flag("--reverse", pf.reverse, "check the reverse Poisson identity on Lambda-perp");
  poisson->add_option("--line", pf.line, "restrict --reverse to one line index");
  d.add(poisson);
  auto* sigma = app.add_subcommand("sigma", "singular integrals of the lines and of F");
  auto* singular = app.add_subcommand("singular-series", "partial sums of the singular series");
  singular->add_option("--nmax", nmax, "largest modulus")->capture_default_str();
  auto* count = app.add_subcommand("count", "direct count against the structured main term");
  count->add_option("--X", d.X, "box scale (default 200)");
  auto* structured = app.add_subcommand("structured", "restricted double sums over every line");
  structured->add_flag("--experiment", experiment, "allow runs beyond the CI scale");
  std::string results_dir;
  structured->add_option("--results-dir", results_dir, "also write the report to a file named after the run here");
  d.add(structured);

  int status = kPass;
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  json doc;
  try {
    const std::string path = ExpSumCache::resolve_path(o.cache);
    o.store = std::make_shared<ExpSumCache>(path);
    Result r;
    if (sub == lines)
      r = cmd_lines(o);
    else if (sub == expsum)
      r = cmd_expsum(o, es);
    else if (sub == classify)
      r = cmd_classify(o, cs);
    else if (sub == pointcount)
      r = cmd_pointcount(o, cs, p);
    else if (sub == verify)
      r = cmd_verify(suite, o, vf, d);
    else if (sub == bias)
      r = cmd_verify("bias", o, vf, d);
    else if (sub == identity)
      r = cmd_verify("delta-identity", o, vf, d);
    else if (sub == poisson)
      r = cmd_poisson(o, pf, d);
    else if (sub == sigma)
      r = cmd_sigma(o);
    else if (sub == singular)
      r = cmd_singular(o, nmax);
    else if (sub == count)
      r = cmd_count(o, d);
    else
      r = cmd_structured(o, d, experiment);
    doc = {{"schema_version", 1}, {"command", sub->get_name()}};
    json input = echo_options(app);
    input.update(echo_options(*sub));
    if (sub == verify) input["suite"] = suite;
    doc["input"] = input;
    doc.update(r.body);
    status = r.status;
    if (!o.output.empty()) write_output(o.output, doc, r.rows);
    if (!o.csv.empty()) write_csv(o.csv, r.rows);
    if (sub == structured && !results_dir.empty()) {
      std::filesystem::create_directories(results_dir);
      std::string tag = o.form;
      std::replace(tag.begin(), tag.end(), ',', '_');
      std::ostringstream name;
      name << results_dir << "/structured_" << tag << "_X" << doc["params"]["X"].get<double>() << "_seed" << o.seed
           << ".json";
      write_output(name.str(), doc, r.rows);
      doc["results_file"] = name.str();
    }
  } catch (const InvariantViolation& e) {
    doc = {{"schema_version", 1}, {"command", sub->get_name()}, {"error", "invariant violation"}, {"detail", e.what()}};
    status = kViolation;
  } catch (const ScaleError& e) {
    doc = {{"schema_version", 1}, {"command", sub->get_name()}, {"error", "scale"}, {"detail", e.what()}};
    status = kUsage;
  } catch (const std::invalid_argument& e) {
    doc = {{"schema_version", 1}, {"command", sub->get_name()}, {"error", "usage"}, {"detail", e.what()}};
    status = kUsage;
  } catch (const std::out_of_range& e) {
    doc = {{"schema_version", 1}, {"command", sub->get_name()}, {"error", "usage"}, {"detail", e.what()}};
    status = kUsage;
  }
  std::cout << doc.dump(2) << std::endl;
  return status;
}
