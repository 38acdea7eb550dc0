// Command-line driver for the q-series eigenfunction library.
//
//   qvwp eval <function>   evaluate a named function at a point
//   qvwp check <identity>  run one identity check, or "all"
//   qvwp list              list available functions and identity checks
//
// Exit codes: 0 success, 1 identity-check failure, 2 usage or configuration
// error, 3 evaluation error (the error kind is named on stderr).
//
// Configuration precedence per field: command-line flag, then environment
// (QVWP_SEED, QVWP_TOL, QVWP_POINTS), then an optional JSON config file
// passed with --config, then built-in defaults.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qvwp/qvwp.hpp"
#include "qvwp/report_json.hpp"

namespace {

using qvwp::Complex;

double parse_real_strict(const std::string& t, const std::string& what) {
  if (t.empty())
    throw std::invalid_argument(what + ": empty numeric field");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": cannot parse '" + t + "'");
  }
  if (used != t.size())
    throw std::invalid_argument(what + ": trailing characters in '" + t + "'");
  return v;
}

// Complex literal "a+bi" / "a-bi"; either part may be omitted ("2", "-3i",
// "i").  The split sign is searched from the right, skipping exponent signs.
Complex parse_complex(const std::string& text, const std::string& what) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw std::invalid_argument(what + ": empty complex literal");
  if (s.back() != 'i' && s.back() != 'I')
    return {parse_real_strict(s, what), 0.0};
  std::string body = s.substr(0, s.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real_strict(t, what);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {parse_real_strict(body.substr(0, split), what),
          imag_of(body.substr(split))};
}

std::vector<Complex> parse_complex_list(const std::string& text,
                                        const std::string& what) {
  std::vector<Complex> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = comma == std::string::npos
                           ? text.substr(pos)
                           : text.substr(pos, comma - pos);
    out.push_back(parse_complex(item, what));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::uint64_t parse_u64(const std::string& t, const std::string& what) {
  if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument(what + ": cannot parse '" + t + "'");
  return std::strtoull(t.c_str(), nullptr, 10);
}

int parse_int(const std::string& t, const std::string& what) {
  double v = parse_real_strict(t, what);
  int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw std::invalid_argument(what + ": expected an integer, got '" + t +
                                "'");
  return i;
}

// Effective run settings after layering flags > environment > config file >
// defaults.
struct Settings {
  double kappa = 0.3, lambda = -0.25, upsilon = 0.2, varsigma = 0.35;
  double q = 0.5;
  qvwp::Rational s{1};
  Complex x{0.4, 0.3};
  Complex z{0.7, -0.2};
  Complex u{0.5, 0.0};
  Complex a{0.5, 0.0};
  std::uint64_t seed = 42;
  int n_points = 100;
  int n = -1;
  qvwp::Tolerance tol;
  std::string format = "table";
};

struct FlagSet {
  std::string kappa, lambda, upsilon, varsigma, q, s, x, z, u, a;
  std::string num, den;
  std::string a0, a1, a2, a3, a4, a5;
  std::string seed, n_points, n, rel_tol, term_cap, pole_guard;
  std::string format;
  std::string config_path;
};

void add_param_flags(CLI::App* cmd, FlagSet& f) {
  cmd->add_option("--kappa", f.kappa, "Hecke parameter kappa");
  cmd->add_option("--lambda", f.lambda, "Hecke parameter lambda");
  cmd->add_option("--upsilon", f.upsilon, "Hecke parameter upsilon");
  cmd->add_option("--varsigma", f.varsigma, "Hecke parameter varsigma");
  cmd->add_option("--q", f.q, "base q in (0,1)");
  cmd->add_option("--s", f.s, "step s > 0, rational 'p/q'");
}

void add_tol_flags(CLI::App* cmd, FlagSet& f) {
  cmd->add_option("--rel-tol", f.rel_tol, "target relative truncation error");
  cmd->add_option("--term-cap", f.term_cap, "series term cap");
  cmd->add_option("--pole-guard", f.pole_guard,
                  "relative distance treated as a pole hit");
  cmd->add_option("--format", f.format, "output format: table or json");
  cmd->add_option("--config", f.config_path, "JSON config file");
}

std::optional<nlohmann::json> load_config(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("config: cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: " + std::string(e.what()));
  }
}

// Layer one string-typed field: flag text (if given) wins, then environment,
// then config, then the default already stored in *slot.
template <typename T, typename Parse>
void layer(T* slot, const std::string& flag_text, const char* env_name,
           const std::optional<nlohmann::json>& cfg, const char* key,
           Parse parse) {
  if (cfg && cfg->contains(key)) {
    const nlohmann::json& v = (*cfg)[key];
    *slot = parse(v.is_string() ? v.get<std::string>() : v.dump(),
                  std::string("config field '") + key + "'");
  }
  if (env_name) {
    if (const char* e = std::getenv(env_name)) {
      if (*e) *slot = parse(e, std::string("environment ") + env_name);
    }
  }
  if (!flag_text.empty())
    *slot = parse(flag_text, std::string("flag for '") + key + "'");
}

Settings assemble(const FlagSet& f) {
  std::optional<nlohmann::json> cfg = load_config(f.config_path);
  Settings s;
  auto as_real = [](const std::string& t, const std::string& w) {
    return parse_real_strict(t, w);
  };
  auto as_int = [](const std::string& t, const std::string& w) {
    return parse_int(t, w);
  };
  auto as_complex = [](const std::string& t, const std::string& w) {
    return parse_complex(t, w);
  };
  layer(&s.kappa, f.kappa, nullptr, cfg, "kappa", as_real);
  layer(&s.lambda, f.lambda, nullptr, cfg, "lambda", as_real);
  layer(&s.upsilon, f.upsilon, nullptr, cfg, "upsilon", as_real);
  layer(&s.varsigma, f.varsigma, nullptr, cfg, "varsigma", as_real);
  layer(&s.q, f.q, nullptr, cfg, "q", as_real);
  layer(&s.s, f.s, nullptr, cfg, "s",
        [](const std::string& t, const std::string& w) {
          try {
            return qvwp::Rational::parse(t);
          } catch (const std::exception& e) {
            throw std::invalid_argument(w + ": " + e.what());
          }
        });
  layer(&s.x, f.x, nullptr, cfg, "x", as_complex);
  layer(&s.z, f.z, nullptr, cfg, "z", as_complex);
  layer(&s.u, f.u, nullptr, cfg, "u", as_complex);
  layer(&s.a, f.a, nullptr, cfg, "a", as_complex);
  layer(&s.seed, f.seed, "QVWP_SEED", cfg, "seed",
        [](const std::string& t, const std::string& w) {
          return parse_u64(t, w);
        });
  layer(&s.n_points, f.n_points, "QVWP_POINTS", cfg, "n_points", as_int);
  layer(&s.n, f.n, nullptr, cfg, "n", as_int);
  layer(&s.tol.rel_tol, f.rel_tol, "QVWP_TOL", cfg, "rel_tol", as_real);
  layer(&s.tol.term_cap, f.term_cap, nullptr, cfg, "term_cap", as_int);
  layer(&s.tol.pole_guard, f.pole_guard, nullptr, cfg, "pole_guard", as_real);
  layer(&s.format, f.format, nullptr, cfg, "format",
        [](const std::string& t, const std::string&) { return t; });
  if (s.format != "table" && s.format != "json")
    throw std::invalid_argument("format must be 'table' or 'json', got '" +
                                s.format + "'");
  if (!(s.q > 0.0 && s.q < 1.0))
    throw std::invalid_argument("q must lie in (0,1)");
  if (s.s.to_double() <= 0.0)
    throw std::invalid_argument("s must be positive");
  if (s.n_points <= 0) throw std::invalid_argument("n-points must be positive");
  return s;
}

qvwp::HeckeParams hecke_of(const Settings& s) {
  qvwp::HeckeParams p;
  p.kappa = s.kappa;
  p.lambda = s.lambda;
  p.upsilon = s.upsilon;
  p.varsigma = s.varsigma;
  p.q = s.q;
  p.s = s.s;
  return p;
}

void print_value(const qvwp::SeriesValue& v, const std::string& format) {
  if (format == "json") {
    nlohmann::json j;
    j["value"] = {{"re", v.value.real()}, {"im", v.value.imag()}};
    j["diagnostics"] = {{"terms_used", v.terms_used},
                        {"tail_estimate", v.tail_estimate},
                        {"converged", v.converged}};
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::printf("value          %.17g %s %.17g i\n", v.value.real(),
              v.value.imag() < 0 ? "-" : "+", std::abs(v.value.imag()));
  std::printf("terms_used     %d\n", v.terms_used);
  std::printf("tail_estimate  %.3g\n", v.tail_estimate);
  std::printf("converged      %s\n", v.converged ? "true" : "false");
}

int cmd_eval(const std::string& fname, const Settings& s, const FlagSet& f) {
  using namespace qvwp;
  HeckeParams p = hecke_of(s);
  const Tolerance& tol = s.tol;
  SeriesValue out;
  if (fname == "theta") {
    out = theta(s.u, s.q, tol);
  } else if (fname == "pochhammer") {
    out = s.n >= 0 ? qpochhammer(s.a, s.q, s.n)
                   : qpochhammer_inf(s.a, s.q, tol);
  } else if (fname == "phi_series") {
    std::vector<Complex> num = parse_complex_list(f.num, "--num");
    std::vector<Complex> den = parse_complex_list(f.den, "--den");
    out = phi_series(num, den, s.q, s.z, tol);
  } else if (fname == "w8_7") {
    auto need = [](const std::string& t, const char* w) {
      if (t.empty())
        throw std::invalid_argument(std::string(w) +
                                    " is required for w8_7");
      return parse_complex(t, w);
    };
    Complex a0 = need(f.a0, "--a0");
    std::vector<Complex> rest = {need(f.a1, "--a1"), need(f.a2, "--a2"),
                                 need(f.a3, "--a3"), need(f.a4, "--a4"),
                                 need(f.a5, "--a5")};
    out = w8_7(a0, rest, s.q, s.z, tol);
  } else if (fname == "W") {
    out = make_exact(W_fn(s.x, s.z, p));
  } else if (fname == "St") {
    out = St(s.x, p, tol);
  } else if (fname == "St_dual") {
    out = St_dual(s.z, p, tol);
  } else if (fname == "Psi") {
    out = Psi(s.x, s.z, p, tol);
  } else if (fname == "Phi") {
    out = Phi(s.x, s.z, p, tol);
  } else if (fname == "Phi_tilde") {
    out = Phi_tilde(s.x, s.z, p, tol);
  } else if (fname == "E") {
    out = E_aw(s.x, s.z, p, tol);
  } else if (fname == "c") {
    out = cfun(s.x, s.z, p, tol);
  } else if (fname == "P_n") {
    if (s.n < 0)
      throw std::invalid_argument("P_n requires a degree: --n <int> >= 0");
    out = aw_polynomial(s.n, s.x, p, tol);
  } else if (fname == "apply_D" || fname == "apply_L") {
    GridFunction fn = [&](Complex t) { return Phi(t, s.z, p, tol).value; };
    Complex v = fname == "apply_D" ? apply_D(fn, s.x, p, tol.pole_guard)
                                   : apply_L(fn, s.x, p, tol.pole_guard);
    out = make_exact(v);
  } else {
    std::cerr << "usage error: unknown function '" << fname
              << "' (see 'qvwp list')\n";
    return 2;
  }
  print_value(out, s.format);
  return 0;
}

int cmd_check(const std::string& id, const Settings& s) {
  using namespace qvwp;
  SamplePolicy pol;
  pol.n_points = s.n_points;
  pol.seed = s.seed;
  pol.n_max = s.n;
  std::vector<IdentityReport> reports;
  if (id == "all") {
    reports = run_all(pol, s.tol);
  } else {
    if (!find_check(id)) {
      std::cerr << "usage error: unknown identity '" << id
                << "' (see 'qvwp list')\n";
      return 2;
    }
    reports.push_back(run_check(id, pol, s.tol));
  }
  bool all_passed = true;
  if (s.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const IdentityReport& r : reports) {
      arr.push_back(to_json(r));
      all_passed = all_passed && r.passed;
    }
    std::cout << arr.dump(2) << "\n";
  } else {
    for (const IdentityReport& r : reports) {
      all_passed = all_passed && r.passed;
      std::printf("[%s] %-18s max_rel %.3e  points %d/%d  skipped %d\n",
                  r.passed ? "PASS" : "FAIL", r.identity_id.c_str(),
                  r.max_rel_residual, r.points_evaluated, r.points_requested,
                  r.points_skipped);
    }
  }
  return all_passed ? 0 : 1;
}

int cmd_list() {
  static const struct {
    const char* name;
    const char* what;
  } functions[] = {
      {"theta", "modified theta function theta(u; q)"},
      {"pochhammer", "q-shifted factorial (a; q)_n, infinite when --n absent"},
      {"phi_series", "generic basic hypergeometric series"},
      {"w8_7", "very-well-poised 8W7 series"},
      {"W", "plane-wave weight factor W(x, z)"},
      {"St", "geometric normalizing product"},
      {"St_dual", "spectral normalizing product"},
      {"Psi", "series part of the asymptotically free eigenfunction"},
      {"Phi", "asymptotically free eigenfunction"},
      {"Phi_tilde", "eigenfunction normalized by the dual spectral product"},
      {"E", "Askey-Wilson function"},
      {"c", "c-function expansion coefficient"},
      {"P_n", "Askey-Wilson polynomial of degree n"},
      {"apply_D", "second-order difference operator acting on Phi(., z)"},
      {"apply_L", "half-step operator acting on Phi(., z)"},
  };
  std::printf("functions:\n");
  for (const auto& f : functions)
    std::printf("  %-12s %s\n", f.name, f.what);
  std::printf("identities:\n");
  for (const qvwp::CheckInfo& c : qvwp::check_registry())
    std::printf("  check_%s: %s\n", c.id.c_str(), c.summary.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-series eigenfunction evaluator and identity checker"};
  app.require_subcommand(1);

  FlagSet ef, cf;
  std::string eval_fn, check_id;

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "evaluate a named function at a point");
  eval_cmd->add_option("function", eval_fn, "function name (see 'qvwp list')")
      ->required();
  add_param_flags(eval_cmd, ef);
  eval_cmd->add_option("--x", ef.x, "geometric argument, complex 'a+bi'");
  eval_cmd->add_option("--z", ef.z,
                       "spectral or series argument, complex 'a+bi'");
  eval_cmd->add_option("--u", ef.u, "theta argument, complex 'a+bi'");
  eval_cmd->add_option("--a", ef.a, "pochhammer argument, complex 'a+bi'");
  eval_cmd->add_option("--n", ef.n, "degree (P_n) or product length");
  eval_cmd->add_option("--num", ef.num,
                       "comma-separated numerator parameters (phi_series)");
  eval_cmd->add_option("--den", ef.den,
                       "comma-separated denominator parameters (phi_series)");
  eval_cmd->add_option("--a0", ef.a0, "w8_7 leading parameter");
  eval_cmd->add_option("--a1", ef.a1, "w8_7 parameter 1");
  eval_cmd->add_option("--a2", ef.a2, "w8_7 parameter 2");
  eval_cmd->add_option("--a3", ef.a3, "w8_7 parameter 3");
  eval_cmd->add_option("--a4", ef.a4, "w8_7 parameter 4");
  eval_cmd->add_option("--a5", ef.a5, "w8_7 parameter 5");
  add_tol_flags(eval_cmd, ef);

  CLI::App* check_cmd =
      app.add_subcommand("check", "run one identity check, or 'all'");
  check_cmd->add_option("identity", check_id, "identity id or 'all'")
      ->required();
  check_cmd->add_option("--seed", cf.seed, "random seed");
  check_cmd->add_option("--n-points", cf.n_points, "sample points per check");
  check_cmd->add_option("--n", cf.n, "degree cap for polynomial-family checks");
  add_tol_flags(check_cmd, cf);

  CLI::App* list_cmd =
      app.add_subcommand("list", "list functions and identity checks");
  (void)list_cmd;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eval_cmd->parsed()) return cmd_eval(eval_fn, assemble(ef), ef);
    if (check_cmd->parsed())
      return cmd_check(qvwp::normalize_check_id(check_id), assemble(cf));
    return cmd_list();
  } catch (const qvwp::eval_error& e) {
    std::string msg = e.what();
    std::string prefix = std::string(qvwp::errc_name(e.kind())) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    std::cerr << "evaluation error (" << qvwp::errc_name(e.kind())
              << "): " << msg << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
