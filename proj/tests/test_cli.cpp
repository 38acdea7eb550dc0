// End-to-end tests of the command-line driver: exit-code contract, output
// formats, configuration layering, and determinism.  Invoked with the CLI
// path as argv[1].

#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "qvwp/qvwp.hpp"
#include "qvwp/report_json.hpp"

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cmd(const std::string& cmd) {
  std::string full = cmd + " 2>&1";
  FILE* p = popen(full.c_str(), "r");
  if (!p) {
    std::perror("popen");
    std::exit(1);
  }
  RunResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = (st >= 0 && WIFEXITED(st)) ? WEXITSTATUS(st) : -1;
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-cli>\n");
    return 1;
  }
  const std::string cli = std::string("'") + argv[1] + "'";

  {
    RunResult r = run_cmd(cli + " --help");
    expect(r.code == 0, "--help exits 0");
  }
  {
    RunResult r = run_cmd(cli + " list");
    expect(r.code == 0, "list exits 0");
    expect(contains(r.out, "functions:") && contains(r.out, "identities:"),
           "list shows both sections");
    expect(contains(r.out, "check_quadratic_phi"),
           "list names check_quadratic_phi");
    int n_checks = 0;
    for (std::size_t pos = 0;
         (pos = r.out.find("  check_", pos)) != std::string::npos; ++pos)
      ++n_checks;
    expect(n_checks == 22, "list enumerates 22 identity checks");
  }
  {
    RunResult r = run_cmd(cli + " eval theta --u 0.25 --q 0.5 --format json");
    expect(r.code == 0, "eval theta exits 0");
    qvwp::Tolerance tol;
    qvwp::SeriesValue want = qvwp::theta({0.25, 0.0}, 0.5, tol);
    nlohmann::json j = nlohmann::json::parse(r.out);
    double re = j["value"]["re"].get<double>();
    double im = j["value"]["im"].get<double>();
    expect(std::abs(re - want.value.real()) <= 1e-13 * std::abs(re) &&
               std::abs(im - want.value.imag()) <= 1e-13,
           "eval theta matches the library value");
  }
  {
    RunResult r = run_cmd(cli + " eval P_n --n 0 --format json");
    nlohmann::json j = nlohmann::json::parse(r.out);
    expect(r.code == 0 && j["value"]["re"].get<double>() == 1.0 &&
               j["value"]["im"].get<double>() == 0.0,
           "eval P_n --n 0 gives exactly 1");
  }
  {
    RunResult r = run_cmd(cli + " eval P_n");
    expect(r.code == 2, "eval P_n without a degree exits 2");
  }
  {
    RunResult r = run_cmd(cli + " eval W --x '-(kappa+lambda)'");
    expect(r.code == 2 && contains(r.out, "usage error"),
           "symbolic point expressions are rejected with exit 2");
  }
  {
    RunResult r = run_cmd(cli + " eval nosuchfn");
    expect(r.code == 2, "unknown eval function exits 2");
  }
  {
    RunResult r = run_cmd(cli + " eval theta --u 0");
    expect(r.code == 3 && contains(r.out, "evaluation error (domain_error)"),
           "theta at u = 0 exits 3 naming domain_error");
  }
  {
    RunResult r = run_cmd(cli + " eval Phi --x -2.95");
    expect(r.code == 3 && contains(r.out, "evaluation error (pole)"),
           "Phi at a normalizer zero exits 3 naming pole");
  }
  {
    RunResult r = run_cmd(cli + " eval pochhammer --a 0.5 --q 0.8 --term-cap 20");
    expect(r.code == 3 && contains(r.out, "non_convergence"),
           "starved term cap exits 3 naming non_convergence");
  }
  {
    RunResult r = run_cmd(cli + " eval Phi --q 1.5");
    expect(r.code == 2, "q outside (0,1) exits 2");
  }
  {
    RunResult r = run_cmd(cli + " check bogus-name");
    expect(r.code == 2, "unknown identity exits 2");
  }
  {
    RunResult r = run_cmd(cli + " check singh --n 6 --n-points 25");
    expect(r.code == 0 && contains(r.out, "[PASS] singh"),
           "check singh --n 6 passes with exit 0");
  }
  {
    RunResult r =
        run_cmd(cli + " check eigen_phi --pole-guard 0.99 --n-points 5");
    expect(r.code == 1 && contains(r.out, "[FAIL]"),
           "a failing check exits 1 and reports FAIL");
  }
  {
    RunResult r = run_cmd("QVWP_SEED=7 " + cli +
                          " check singh --n-points 4 --format json");
    nlohmann::json j = nlohmann::json::parse(r.out);
    expect(r.code == 0 && j[0]["seed"].get<std::uint64_t>() == 7,
           "QVWP_SEED environment variable is honored");
  }
  {
    RunResult r = run_cmd("QVWP_SEED=7 " + cli +
                          " check singh --seed 42 --n-points 4 --format json");
    nlohmann::json j = nlohmann::json::parse(r.out);
    expect(r.code == 0 && j[0]["seed"].get<std::uint64_t>() == 42,
           "--seed flag overrides the environment");
  }
  {
    std::string cfg_path = "test_cli_config.json";
    FILE* f = std::fopen(cfg_path.c_str(), "w");
    std::fputs("{\"seed\": 99, \"n_points\": 3}\n", f);
    std::fclose(f);
    RunResult r = run_cmd(cli + " check singh --config " + cfg_path +
                          " --format json");
    nlohmann::json j = nlohmann::json::parse(r.out);
    expect(r.code == 0 && j[0]["seed"].get<std::uint64_t>() == 99 &&
               j[0]["points_requested"].get<int>() == 3,
           "config file supplies seed and n_points");
    RunResult r2 = run_cmd("QVWP_SEED=55 " + cli + " check singh --config " +
                           cfg_path + " --format json");
    nlohmann::json j2 = nlohmann::json::parse(r2.out);
    expect(r2.code == 0 && j2[0]["seed"].get<std::uint64_t>() == 55,
           "environment overrides the config file");
    std::remove(cfg_path.c_str());
  }
  {
    RunResult r =
        run_cmd(cli + " check eigen_phi --n-points 8 --format json");
    nlohmann::json j = nlohmann::json::parse(r.out);
    qvwp::IdentityReport rep = qvwp::report_from_json(j[0]);
    expect(qvwp::to_json(rep) == j[0],
           "JSON report round-trips through parse and emit");
    expect(contains(j[0]["worst_point"]["params"]["s"].get<std::string>(),
                    "/") ||
               !j[0]["worst_point"]["params"]["s"].get<std::string>().empty(),
           "worst point serializes s as a rational string");
  }
  {
    std::string cmd = cli + " check all --seed 42 --n-points 6 --format json";
    RunResult r1 = run_cmd(cmd);
    RunResult r2 = run_cmd(cmd);
    expect(r1.code == 0 && r1.out == r2.out,
           "two check-all runs with one seed are byte-identical");
    nlohmann::json j = nlohmann::json::parse(r1.out);
    bool ordered = j.size() == qvwp::check_registry().size();
    for (std::size_t i = 0; ordered && i < j.size(); ++i)
      ordered = j[i]["identity_id"].get<std::string>() ==
                qvwp::check_registry()[i].id;
    expect(ordered, "check all reports follow registry order");
  }

  if (failures) {
    std::printf("%d test(s) failed\n", failures);
    return 1;
  }
  std::printf("all CLI tests passed\n");
  return 0;
}
