// End-to-end checks of the command-line tool: output schemas, determinism,
// and exit codes. Talks to the real binary (path injected by the build).

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

int failures = 0;

#define EXPECT(cond, msg)                                  \
  do {                                                     \
    if (!(cond)) {                                         \
      std::printf("FAIL %s (line %d)\n", msg, __LINE__);   \
      ++failures;                                          \
    }                                                      \
  } while (0)

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(KHAV_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (p == nullptr) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int rc = pclose(p);
  if (WIFEXITED(rc)) r.exit_code = WEXITSTATUS(rc);
  return r;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

int main() {
  using nlohmann::json;

  // --- anchor value through the JSON schema -------------------------------
  {
    const RunResult r = run_cli("constant --n 3 --rho 0 --tau 0");
    EXPECT(r.exit_code == 0, "constant anchor exit code");
    const json j = json::parse(r.out, nullptr, false);
    EXPECT(!j.is_discarded(), "constant anchor output parses as JSON");
    if (!j.is_discarded()) {
      EXPECT(j["command"] == "constant", "command field");
      EXPECT(j["inputs"]["method"] == "final", "method field");
      EXPECT(j["results"][0]["name"] == "C", "first result is C");
      const double v = j["results"][0]["value"].get<double>();
      EXPECT(std::abs(v - 1.5) <= 1e-9, "anchor value 3/2");
      const double u = j["results"][1]["value"].get<double>();
      EXPECT(std::abs(u - 1.5) <= 1e-9, "un-rescaled value at rho 0");
    }
  }

  // --- byte determinism ----------------------------------------------------
  {
    const std::string args = "constant --n 4 --rho 0.7 --tau 0.6";
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    EXPECT(a.exit_code == 0, "determinism exit code");
    EXPECT(a.out == b.out, "repeated runs are byte-identical");
    EXPECT(!a.out.empty(), "output is non-empty");
  }

  // --- CSV schema ----------------------------------------------------------
  {
    const RunResult c = run_cli("constant --n 3 --rho 0.5 --tau 0 --format csv");
    const RunResult j = run_cli("constant --n 3 --rho 0.5 --tau 0");
    EXPECT(c.exit_code == 0, "csv exit code");
    const auto lines = split(c.out, '\n');
    EXPECT(lines.size() >= 2, "csv has header and one row");
    EXPECT(lines[0] == "command,n,rho,tau,method,value,err_est,seed",
           "csv header");
    if (lines.size() >= 2) {
      const auto fields = split(lines[1] + ",x", ',');  // keep empty tail
      EXPECT(fields.size() == 9, "csv row has 8 fields");
      EXPECT(fields[0] == "constant", "csv command field");
      EXPECT(fields[1] == "3", "csv n field");
      const double cv = std::strtod(fields[5].c_str(), nullptr);
      const json jj = json::parse(j.out);
      const double jv = jj["results"][0]["value"].get<double>();
      EXPECT(cv == jv, "csv and json report the same value bits");
    }
  }

  // --- point/direction form ------------------------------------------------
  {
    const RunResult r =
        run_cli("constant --x 0.3,0,0.4 --ell 0,1,0 --method double2");
    EXPECT(r.exit_code == 0, "x/ell exit code");
    const json j = json::parse(r.out, nullptr, false);
    if (!j.is_discarded()) {
      EXPECT(std::abs(j["inputs"]["rho"].get<double>() - 0.5) < 1e-12,
             "canonicalized rho");
      EXPECT(std::abs(j["inputs"]["tau"].get<double>() - kPi / 2.0) < 1e-9,
             "canonicalized tau");
      EXPECT(j["results"][0]["value"].get<double>() > 0.0, "positive value");
    }
  }

  // --- half-space domain ----------------------------------------------------
  {
    const RunResult r = run_cli("constant --domain halfspace --n 4 --tau 0");
    EXPECT(r.exit_code == 0, "halfspace exit code");
    const json j = json::parse(r.out, nullptr, false);
    if (!j.is_discarded()) {
      const double v = j["results"][0]["value"].get<double>();
      EXPECT(std::abs(v - 3.0 * std::sqrt(3.0) / (2.0 * kPi)) <= 1e-9,
             "halfspace radial anchor");
    }
  }

  // --- sweep ----------------------------------------------------------------
  {
    const RunResult r = run_cli("sweep --n 3 --rho 0.9 --grid 5 --rel-tol 1e-8");
    EXPECT(r.exit_code == 0, "sweep exit code");
    const json j = json::parse(r.out, nullptr, false);
    if (!j.is_discarded()) {
      EXPECT(j["samples"].size() >= 5, "sweep sample count");
      EXPECT(j["conjecture_holds"].get<bool>(), "sweep conjecture flag");
      EXPECT(j["argmax_tau"].get<double>() <= 1e-3, "sweep argmax at 0");
    }
  }

  // --- conjecture scan --------------------------------------------------------
  {
    const RunResult r =
        run_cli("conjecture --n 3 --rho-list 0.9,0.99 --grid 5 --rel-tol 1e-8");
    EXPECT(r.exit_code == 0, "conjecture exit code");
    const json j = json::parse(r.out, nullptr, false);
    if (!j.is_discarded()) {
      EXPECT(j["sweeps"].size() == 2, "conjecture sweep count");
      EXPECT(std::abs(j["rho_star"].get<double>() - 0.9) < 1e-12,
             "conjecture rho_star");
    }
  }

  // --- verify: passing and failing suites ------------------------------------
  {
    const RunResult ok = run_cli("verify --suite extremal_lemma --n 3");
    EXPECT(ok.exit_code == 0, "passing suite exit code");
    const json j = json::parse(ok.out, nullptr, false);
    if (!j.is_discarded()) {
      EXPECT(j["all_pass"].get<bool>(), "passing suite all_pass");
    }
    const RunResult bad =
        run_cli("verify --suite ineq_rho --n 3 --rho 0.5 --K 1.9 --grid 41");
    EXPECT(bad.exit_code == 3, "failing suite exit code");
    const json jb = json::parse(bad.out, nullptr, false);
    if (!jb.is_discarded()) {
      EXPECT(!jb["all_pass"].get<bool>(), "failing suite all_pass false");
    }
  }

  // --- exit codes for bad invocations -----------------------------------------
  {
    EXPECT(run_cli("constant --n 3 --rho 0.5 --method bogus").exit_code == 2,
           "unknown method exits 2");
    EXPECT(run_cli("constant --n 3 --rho 1.2 --tau 0").exit_code == 2,
           "out-of-range rho exits 2");
    EXPECT(run_cli("constant --n 3 --tau 0").exit_code == 2,
           "missing rho exits 2");
    EXPECT(run_cli("frobnicate").exit_code == 2, "unknown subcommand exits 2");
    EXPECT(run_cli("sweep --n 3").exit_code == 2, "missing option exits 2");
    EXPECT(run_cli("verify --suite nope").exit_code == 2,
           "unknown suite exits 2");
  }

  if (failures == 0) {
    std::printf("cli: all checks passed\n");
    return 0;
  }
  std::printf("cli: %d check(s) failed\n", failures);
  return 1;
}
