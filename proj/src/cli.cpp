#include "hardylab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "hardylab/bases.hpp"
#include "hardylab/errors.hpp"
#include "hardylab/hardy.hpp"
#include "hardylab/kernels.hpp"
#include "hardylab/quadrature.hpp"
#include "hardylab/specfun.hpp"

#ifndef HARDYLAB_VERSION
#define HARDYLAB_VERSION "0.0.0"
#endif

namespace hardylab {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchema = 1;

const std::map<std::string, Command>& command_table() {
  static const std::map<std::string, Command> table = {
      {"eval", Command::Eval},           {"orthocheck", Command::Orthocheck}, {"kernel-check", Command::KernelCheck},
      {"bound-check", Command::BoundCheck}, {"hardy-sum", Command::HardySum},   {"sharpness", Command::Sharpness},
      {"parity-check", Command::ParityCheck}};
  return table;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(int v) { return std::to_string(v); }

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = command_name(c.command);
  j["alpha"] = c.alpha;
  j["lambda"] = c.lambda;
  j["dim"] = c.dim;
  j["epsilon"] = c.epsilon;
  j["r"] = c.r;
  j["tol"] = c.tol;
  j["kmax"] = c.kmax;
  j["k_grid"] = c.k_grid;
  j["k"] = c.k;
  j["u"] = c.u;
  j["basis"] = c.basis;
  j["function"] = c.function;
  j["E"] = c.E;
  j["nmax"] = c.nmax;
  j["converge"] = c.converge;
  j["K"] = c.K;
  j["delta"] = c.delta ? Json(*c.delta) : Json(nullptr);
  j["which"] = c.which;
  j["format"] = c.format == OutputFormat::Csv ? "csv" : "json";
  j["output"] = c.output;
  return j;
}

Json slope_json(const SlopeFit& s) {
  return Json{{"slope", s.slope}, {"half_width", s.half_width}, {"intercept", s.intercept}, {"points", s.points}};
}

// Everything a command produces before it is serialized.
struct Report {
  Json result = Json::object();
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::optional<std::string> failure;  // failed check: report is still written
};

std::vector<double> alpha_for_dim(const std::vector<double>& alpha, int dim) {
  if (alpha.size() == 1) return std::vector<double>(dim, alpha[0]);
  if (static_cast<int>(alpha.size()) != dim) throw ContractError("--alpha must have one value or --dim values");
  return alpha;
}

// --- eval ---------------------------------------------------------------------

Report run_eval(const RunConfig& c) {
  Report rep;
  const double a = c.alpha.front();
  const double value = phi(c.k, a, c.u);
  const double deriv = phi_derivative(c.k, a, c.u);
  rep.result = Json{{"k", c.k}, {"alpha", a}, {"u", c.u}, {"phi", value}, {"phi_derivative", deriv}};
  rep.header = {"k", "alpha", "u", "phi", "phi_derivative"};
  rep.rows.push_back({num(c.k), num(a), num(c.u), num(value), num(deriv)});
  return rep;
}

// --- orthocheck ---------------------------------------------------------------

Report run_orthocheck(const RunConfig& c) {
  Report rep;
  rep.header = {"alpha", "kmax", "max_defect", "worst_j", "worst_k", "pass"};
  Json items = Json::array();
  bool ok = true;
  for (double a : c.alpha) {
    const OrthonormalityReport o = orthonormality_defect(a, c.kmax);
    const bool pass = o.max_defect <= c.tol;
    ok = ok && pass;
    items.push_back(Json{{"alpha", a},
                         {"kmax", c.kmax},
                         {"max_defect", o.max_defect},
                         {"worst_j", o.worst_j},
                         {"worst_k", o.worst_k},
                         {"pass", pass}});
    rep.rows.push_back({num(a), num(c.kmax), num(o.max_defect), num(o.worst_j), num(o.worst_k), pass ? "1" : "0"});
  }
  rep.result = Json{{"tolerance", c.tol}, {"pass", ok}, {"alphas", items}};
  if (!ok) rep.failure = "orthonormality defect above tolerance";
  return rep;
}

// --- kernel-check -------------------------------------------------------------

Report run_kernel_check(const RunConfig& c) {
  Report rep;
  rep.header = {"alpha", "r", "u", "v", "closed", "series", "tail_bound", "N", "abs_diff"};
  constexpr int kGrid = 20;
  std::vector<double> grid;
  for (int i = 0; i < kGrid; ++i) grid.push_back(0.1 + (5.0 - 0.1) * i / (kGrid - 1));
  Json items = Json::array();
  double worst = 0.0;
  for (double a : c.alpha)
    for (double r : c.r) {
      const KernelParams p(a, r);
      double max_diff = 0.0;
      int max_terms = 0;
      for (double u : grid)
        for (double v : grid) {
          const double closed = kernel_closed(p, u, v);
          // Certify the series two orders of magnitude below the check tolerance.
          const SeriesValue s = kernel_series_auto(p, u, v, 1e-2 * c.tol);
          const double diff = std::abs(closed - s.value);
          max_diff = std::max(max_diff, diff);
          max_terms = std::max(max_terms, s.terms);
          rep.rows.push_back({num(a), num(r), num(u), num(v), num(closed), num(s.value), num(s.tail_bound),
                              num(s.terms), num(diff)});
        }
      worst = std::max(worst, max_diff);
      items.push_back(Json{{"alpha", a}, {"r", r}, {"max_abs_diff", max_diff}, {"max_terms", max_terms}});
    }
  const bool ok = worst <= c.tol;
  rep.result = Json{{"tolerance", c.tol}, {"grid", "20x20 on [0.1, 5]"}, {"max_abs_diff", worst}, {"pass", ok},
                    {"cases", items}};
  if (!ok) rep.failure = "closed form and certified series disagree beyond tolerance";
  return rep;
}

// --- bound-check --------------------------------------------------------------

Json bound_json(const BoundCheckReport& b, double alpha) {
  Json arg = Json::object();
  for (std::size_t i = 0; i < b.param_names.size() && i < b.arg_max.size(); ++i) arg[b.param_names[i]] = b.arg_max[i];
  Json extra = Json::object();
  for (const auto& [name, fit] : b.extra_slopes) extra[name] = slope_json(fit);
  return Json{{"sweep", b.name},
              {"grid_version", b.grid_version},
              {"alpha", alpha},
              {"max_ratio", b.max_ratio},
              {"arg_max", arg},
              {"samples", b.samples},
              {"fitted_constant", b.fitted_constant},
              {"driver", b.driver},
              {"driver_values", b.driver_values},
              {"driver_max_ratio", b.driver_max_ratio},
              {"slope", slope_json(b.slope)},
              {"extra_slopes", extra},
              {"bounded", b.bounded()}};
}

Report run_bound_check(const RunConfig& c) {
  Report rep;
  rep.header = {"sweep", "grid_version", "alpha", "a", "b", "c", "ratio"};
  Json items = Json::array();
  bool ok = true;
  auto add = [&](const BoundCheckReport& b, double alpha) {
    items.push_back(bound_json(b, alpha));
    ok = ok && b.bounded() && std::isfinite(b.max_ratio);
    for (const auto& row : b.rows) {
      std::vector<std::string> line = {b.name, b.grid_version, num(alpha)};
      for (double v : row.params) line.push_back(num(v));
      while (line.size() < 6) line.push_back("");
      line.push_back(num(row.ratio));
      rep.rows.push_back(std::move(line));
    }
  };
  const bool all = c.which == "all";
  for (double a : c.alpha) {
    if (all || c.which == "kernel-difference") add(kernel_difference_sweep(a), a);
    if (all || c.which == "basis-difference") add(basis_difference_sweep(a), a);
    if (all || c.which == "kernel-weighted-norm") add(kernel_weighted_norm_sweep(a), a);
  }
  rep.result = Json{{"slope_limit", 0.05},
                    {"columns", "kernel-difference: a,b,c = r,u,u'; basis-difference: a,b,c = k,u,v; "
                                "kernel-weighted-norm: a,b = r,u"},
                    {"pass", ok},
                    {"sweeps", items}};
  if (!ok) rep.failure = "a sweep failed the boundedness surrogate";
  return rep;
}

// --- hardy-sum ----------------------------------------------------------------

Function1D catalogue(const RunConfig& c, double order, bool line) {
  const std::string& name = c.function;
  Function1D f;
  if (name == "gaussian") {
    f.eval = [](double u) { return std::exp(-u * u); };
    f.decay_rate = 1.0;
  } else if (name.rfind("phi:", 0) == 0) {
    int m = 0;
    try {
      m = std::stoi(name.substr(4));
    } catch (const std::exception&) {
      throw ContractError("--function phi:<m> needs an integer degree");
    }
    if (m < 0) throw ContractError("--function phi:<m> needs m >= 0");
    if (!line) return basis_function(m, order);
    f.eval = [m, order](double u) { return gen_hermite(m, order, u); };
    f.decay_rate = 0.5;
    f.singular_points = {0.0};
  } else if (name == "inv-sqrt") {
    f.eval = [](double u) {
      const double a = std::abs(u);
      return a > 0.0 && a < 1.0 ? 1.0 / std::sqrt(a) : 0.0;
    };
    f.support_lo = line ? -1.0 : 0.0;
    f.support_hi = 1.0;
    f.singular_points = {0.0};
  } else if (name == "indicator") {
    f.eval = [](double u) { return u > -0.5 && u < 1.0 ? 1.0 : 0.0; };
    f.support_lo = line ? -0.5 : 0.0;
    f.support_hi = 1.0;
  } else if (name == "signed-quarter") {
    f.eval = [](double u) {
      if (u == 0.0) return 0.0;
      return std::copysign(std::pow(std::abs(u), -0.25) * std::exp(-u * u), u);
    };
    f.decay_rate = 1.0;
    f.singular_points = {0.0};
  } else if (name == "atom") {
    const double a = line ? order - 0.5 : order;
    const BoundConstants bc = fit_bound_constants(a, 256, true);
    const double delta = c.delta ? *c.delta : (a > -0.5 ? default_delta(bc) : kHalfIntegerDelta);
    const Atom atom = make_counterexample_atom({c.K, delta, bc.c, a});
    return line ? symmetric_extension(atom, ParityVector{0}).as_function() : atom.as_function();
  } else {
    throw ContractError("unknown --function '" + name + "'");
  }
  return f;
}

Report run_hardy_sum(const RunConfig& c) {
  Report rep;
  const bool line = c.basis == "hermite";
  HardyReport h;
  std::function<HardyReport(int)> at;
  if (line) {
    if (c.dim != 1) throw ContractError("hardy-sum: the hermite basis is one-dimensional here");
    const Function1D f = catalogue(c, c.lambda.front(), true);
    at = [f, &c](int n) { return hardy_sum_hermite(f, c.lambda.front(), c.E, n); };
  } else if (c.dim == 1) {
    const Function1D f = catalogue(c, c.alpha.front(), false);
    at = [f, &c](int n) { return hardy_sum(f, c.alpha.front(), c.E, n); };
  } else {
    const Alpha alpha(alpha_for_dim(c.alpha, c.dim));
    if (c.function == "atom") {
      const BoundConstants bc = fit_bound_constants(alpha[0], 256);
      const double delta = c.delta ? *c.delta : default_delta(bc);
      const Atom atom = tensor_atom({c.K, delta, bc.c, alpha[0]}, static_cast<std::size_t>(c.dim));
      at = [atom, alpha, &c](int n) { return hardy_sum(atom, alpha, c.E, n); };
    } else {
      SeparableFunction f;
      for (int i = 0; i < c.dim; ++i) f.factors.push_back(catalogue(c, alpha[i], false));
      at = [f, alpha, &c](int n) { return hardy_sum(f, alpha, c.E, n); };
    }
  }
  h = c.converge > 0.0 ? converge_hardy_sum(at, c.converge, std::max(2, c.nmax), 1 << 20) : at(c.nmax);

  const std::string k_cell = c.function == "atom" ? num(c.K) : "";
  rep.header = {"K", "E", "N", "partial_sum", "tail_estimate"};
  for (std::size_t i = 0; i < h.N.size(); ++i)
    rep.rows.push_back({k_cell, num(h.E), num(h.N[i]), num(h.partial_sums[i]),
                        i + 1 == h.N.size() ? num(h.tail_estimate) : ""});
  rep.result = Json{{"basis", c.basis},
                    {"function", c.function},
                    {"dim", h.dim},
                    {"E", h.E},
                    {"N", h.N.empty() ? 0 : h.N.back()},
                    {"sum", h.total()},
                    {"tail_estimate", h.tail_estimate},
                    {"tail_fit",
                     Json{{"exponent", h.tail_fit.exponent},
                          {"constant", h.tail_fit.constant},
                          {"density", h.tail_fit.density},
                          {"points", h.tail_fit.points}}},
                    {"unconverged_levels", h.unconverged_levels}};
  return rep;
}

// --- sharpness ----------------------------------------------------------------

Report run_halfinteger(const RunConfig& c, const std::vector<int>& grid) {
  Report rep;
  rep.header = {"K", "k", "ratio"};
  const double delta = c.delta ? *c.delta : kHalfIntegerDelta;
  Json items = Json::array();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int K : grid) {
    const HalfIntegerReport h = halfinteger_sweep(K, delta);
    lo = std::min(lo, h.min_ratio);
    hi = std::max(hi, h.min_ratio);
    items.push_back(Json{{"K", K}, {"min_ratio", h.min_ratio}, {"argmin", h.argmin}, {"c", h.c}});
    for (int k = 1; k <= K; ++k) rep.rows.push_back({num(K), num(k), num(h.ratios[k - 1])});
  }
  rep.result = Json{{"branch", "alpha = -1/2"},
                    {"delta", delta},
                    {"ratio", "-<a, phi_k^{-1/2}> / (K^{-1} k^{3/4})"},
                    {"min_ratio_spread", hi / lo},
                    {"samples", items}};
  return rep;
}

Report run_sharpness(const RunConfig& c) {
  const std::vector<int> grid = parse_k_grid(c.k_grid);
  if (c.dim == 1 && c.alpha.front() == -0.5) return run_halfinteger(c, grid);
  SharpnessOptions opt;
  opt.alpha = c.alpha.front();
  opt.epsilon = c.epsilon;
  opt.K_grid = grid;
  opt.delta = c.delta;
  opt.dim = static_cast<std::size_t>(c.dim);
  const HardyReport h = sharpness_experiment(opt);

  Report rep;
  rep.header = {"K", "E", "N", "partial_sum", "tail_estimate"};
  Json samples = Json::array();
  for (const auto& s : h.K_sweep) {
    rep.rows.push_back({num(s.K), num(s.E), num(s.N), num(s.partial_sum), num(s.tail_estimate)});
    rep.rows.push_back({num(s.K), num(0.75 * c.dim), num(s.N), num(s.control_sum), num(s.control_tail)});
    samples.push_back(Json{{"K", s.K},
                           {"N", s.N},
                           {"partial_sum", s.partial_sum},
                           {"tail_estimate", s.tail_estimate},
                           {"control_sum", s.control_sum},
                           {"control_tail", s.control_tail},
                           {"min_lower_ratio", s.min_lower_ratio},
                           {"all_positive", s.all_positive}});
  }
  const bool has_slope = h.fitted_slope.points > 0;
  rep.result = Json{{"E", h.E},
                    {"E_control", 0.75 * c.dim},
                    {"delta", h.delta},
                    {"bounds", Json{{"A", h.bounds.A}, {"B", h.bounds.B}, {"c", h.bounds.c},
                                    {"k_range", Json::array({h.bounds.k_lo, h.bounds.k_hi})}}},
                    {"fitted_slope", has_slope ? Json(h.fitted_slope.slope) : Json(nullptr)},
                    {"confidence_half_width", has_slope ? Json(h.fitted_slope.half_width) : Json(nullptr)},
                    {"target", Json::array({0.8 * c.epsilon, 1.2 * c.epsilon})},
                    {"control_spread", h.control_spread},
                    {"samples", samples}};
  return rep;
}

// --- parity-check -------------------------------------------------------------

Report run_parity_check(const RunConfig& c) {
  const ParityCheckReport p = parity_check(c.K, c.E, c.delta ? *c.delta : kHalfIntegerDelta);
  Report rep;
  rep.header = {"K", "N", "E", "hermite_sum", "laguerre_sum", "ratio", "lower", "upper", "max_coefficient_mismatch"};
  rep.rows.push_back({num(p.K), num(p.N), num(p.E), num(p.hermite_sum), num(p.laguerre_sum), num(p.ratio),
                      num(p.lower), num(p.upper), num(p.max_coefficient_mismatch)});
  rep.result = Json{{"K", p.K},
                    {"N", p.N},
                    {"E", p.E},
                    {"hermite_sum", p.hermite_sum},
                    {"laguerre_sum", p.laguerre_sum},
                    {"ratio", p.ratio},
                    {"interval", Json::array({p.lower, p.upper})},
                    {"max_coefficient_mismatch", p.max_coefficient_mismatch},
                    {"pass", p.passed()}};
  if (!p.passed()) rep.failure = "parity ratio outside [2^{-E}, 1]";
  return rep;
}

Report dispatch(const RunConfig& c) {
  switch (c.command) {
    case Command::Eval: return run_eval(c);
    case Command::Orthocheck: return run_orthocheck(c);
    case Command::KernelCheck: return run_kernel_check(c);
    case Command::BoundCheck: return run_bound_check(c);
    case Command::HardySum: return run_hardy_sum(c);
    case Command::Sharpness: return run_sharpness(c);
    case Command::ParityCheck: return run_parity_check(c);
  }
  throw ContractError("unknown command");
}

// JSON has no spelling for inf or nan; write them as strings rather than null.
void spell_nonfinite(Json& j) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) j = num(v);
  } else if (j.is_structured()) {
    for (auto& item : j) spell_nonfinite(item);
  }
}

void write_report(const RunConfig& c, const Report& rep, std::ostream& os) {
  if (c.format == OutputFormat::Json) {
    Json doc;
    doc["schema"] = kSchema;
    doc["version"] = HARDYLAB_VERSION;
    doc["command"] = command_name(c.command);
    doc["config"] = config_json(c);
    doc["status"] = rep.failure ? "check_failed" : "ok";
    doc["result"] = rep.result;
    spell_nonfinite(doc["result"]);
    os << doc.dump(2) << '\n';
    return;
  }
  os << "# hardylab " << HARDYLAB_VERSION << " schema " << kSchema << " command " << command_name(c.command) << '\n';
  os << "# config " << config_json(c).dump() << '\n';
  auto write_row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  write_row(rep.header);
  for (const auto& row : rep.rows) write_row(row);
}

void error_record(const RunConfig* c, const std::string& kind, const std::string& message, std::ostream& err) {
  Json doc;
  doc["schema"] = kSchema;
  doc["version"] = HARDYLAB_VERSION;
  doc["error"] = Json{{"kind", kind}, {"message", message}};
  if (c) {
    doc["command"] = command_name(c->command);
    doc["config"] = config_json(*c);
  }
  err << doc.dump() << '\n';
}

}  // namespace

const char* command_name(Command c) {
  for (const auto& [name, cmd] : command_table())
    if (cmd == c) return name.c_str();
  return "unknown";
}

void RunConfig::validate() const {
  if (alpha.empty()) throw ContractError("--alpha needs at least one value");
  for (double a : alpha) (void)Order{a};
  for (double l : lambda)
    if (!(l >= 0.0)) throw DomainError("--lambda values must be >= 0");
  if (dim < 1 || dim > 4) throw ContractError("--dim must lie in [1, 4]");
  if (!(tol > 0.0)) throw DomainError("--tol must be positive");
  if (kmax < 0) throw DomainError("--kmax must be >= 0");
  if (k < 0) throw DomainError("--k must be >= 0");
  if (!(u > 0.0)) throw DomainError("--u must be positive");
  for (double x : r)
    if (!(x > 0.0 && x < 1.0)) throw DomainError("--r values must lie in (0, 1)");
  if (!(epsilon > 0.0 && epsilon <= 0.25)) throw DomainError("--epsilon must lie in (0, 1/4]");
  if (!(E > 0.0)) throw DomainError("--E must be positive");
  if (nmax < 0) throw DomainError("--nmax must be >= 0");
  if (converge < 0.0) throw DomainError("--converge must be >= 0");
  if (K < 1) throw DomainError("--K must be >= 1");
  if (delta && !(*delta > 0.0 && *delta < 0.5)) throw DomainError("--delta must lie in (0, 1/2)");
  if (basis != "laguerre" && basis != "hermite") throw ContractError("--basis must be laguerre or hermite");
  if (which != "all" && which != "kernel-difference" && which != "basis-difference" && which != "kernel-weighted-norm")
    throw ContractError("--which must name a sweep or 'all'");
  (void)parse_k_grid(k_grid);
  const bool hardy_like = command == Command::HardySum || command == Command::Sharpness;
  if (hardy_like && basis == "laguerre")
    for (double a : alpha)
      if (a < -0.5) throw DomainError("Hardy sums need alpha >= -1/2");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {  // ContractError
    error_record(&config, "usage", e.what(), err);
    return 2;
  } catch (const std::domain_error& e) {
    error_record(&config, "usage", e.what(), err);
    return 2;
  }
  Report rep;
  try {
    rep = dispatch(config);
  } catch (const ToleranceError& e) {
    error_record(&config, "tolerance", e.what(), err);
    return 1;
  } catch (const FitError& e) {
    error_record(&config, "fit", e.what(), err);
    return 1;
  } catch (const std::invalid_argument& e) {
    error_record(&config, "usage", e.what(), err);
    return 2;
  } catch (const std::domain_error& e) {
    error_record(&config, "usage", e.what(), err);
    return 2;
  }
  if (config.output.empty()) {
    write_report(config, rep, out);
  } else {
    std::ofstream file(config.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      error_record(&config, "io", "cannot open " + config.output, err);
      return 1;
    }
    write_report(config, rep, file);
  }
  if (rep.failure) {
    error_record(&config, "check_failed", *rep.failure, err);
    return 1;
  }
  return 0;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Laguerre/Hermite expansions: Hardy sums, kernels and sharpness experiments", "hardylab"};
  app.set_version_flag("--version", HARDYLAB_VERSION);
  app.set_config("--config", "", "Key-value file mirroring the long flags; flags given on the command line win");
  app.require_subcommand(1);

  RunConfig c;
  std::string format = "json";
  double delta = 0.0;
  app.add_option("--alpha", c.alpha, "Laguerre type parameter(s), comma separated")->delimiter(',');
  app.add_option("--lambda", c.lambda, "Hermite order(s), comma separated")->delimiter(',');
  app.add_option("--dim", c.dim, "Dimension d");
  app.add_option("--epsilon", c.epsilon, "Exponent deficit for the sharpness sweep");
  app.add_option("--r", c.r, "Kernel parameter(s) in (0,1), comma separated")->delimiter(',');
  app.add_option("--tol", c.tol, "Check tolerance");
  app.add_option("--kmax", c.kmax, "Largest degree");
  app.add_option("--k-grid", c.k_grid, "Geometric grid start:stop:x<factor>");
  app.add_option("--k", c.k, "Degree for eval");
  app.add_option("--u", c.u, "Point for eval");
  app.add_option("--basis", c.basis, "laguerre or hermite");
  app.add_option("--function", c.function, "Test function name");
  app.add_option("--E", c.E, "Exponent of the Hardy sum");
  app.add_option("--nmax", c.nmax, "Truncation degree (start value when --converge is set)");
  app.add_option("--converge", c.converge, "Double N until tail <= converge * sum");
  app.add_option("--K", c.K, "Atom scale");
  auto* delta_opt = app.add_option("--delta", delta, "Atom parameter in (0, 1/2)");
  app.add_option("--which", c.which, "Sweep for bound-check");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--output", c.output, "Report path (default: standard output)");

  for (const auto& [name, cmd] : command_table()) {
    auto* sub = app.add_subcommand(name, std::string("Run ") + name);
    sub->fallthrough();
    sub->callback([&c, cmd = cmd] { c.command = cmd; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << "Run with --help for usage.\n";
    return 2;
  }
  c.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  if (delta_opt->count() > 0) c.delta = delta;
  return run(c, out, err);
}

}  // namespace hardylab
