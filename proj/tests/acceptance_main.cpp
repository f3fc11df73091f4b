// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Each criterion also carries a runtime budget that is part of the pass
// condition.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "unifilt/bench/verify.hpp"

namespace {

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<std::vector<unifilt::bench::CheckResult>()> run;
};

}  // namespace

int main() {
  using unifilt::bench::CheckResult;
  namespace bench = unifilt::bench;

  const std::vector<Criterion> criteria = {
      {"gradient-correctness", 10.0, [] { return bench::suite_gradcheck(); }},
      {"strong-convexity", 30.0, [] { return bench::suite_convexity(); }},
      {"surrogate-unbiasedness", 300.0, [] { return bench::suite_unbiasedness(); }},
      {"paired-regret-inequality", 120.0, [] { return bench::suite_lemma1(); }},
      {"log-regret-scaling", 600.0, [] { return bench::acceptance_log_regret_scaling(); }},
      {"switch-adaptivity", 900.0, [] { return bench::acceptance_switch_adaptivity(); }},
      {"expert-tracking-bound", 120.0, [] { return bench::suite_claim2(); }},
      {"oracle-grid-equivalence", 60.0, [] { return bench::acceptance_oracle_grid(); }},
      {"linear-time", 120.0, [] { return bench::suite_linear_time(); }},
      {"covariance-identity", 60.0, [] { return bench::suite_covariance(); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Criterion& criterion = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckResult> checks;
    std::string error;
    try {
      checks = criterion.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    bool pass = error.empty() && elapsed <= criterion.budget_seconds;
    std::string worst;
    for (const CheckResult& c : checks) {
      if (!c.pass) pass = false;
      if (worst.empty() || !c.pass) {
        worst = c.name + "=" + bench::format_real(c.statistic) + " " + c.relation + " " +
                bench::format_real(c.threshold);
      }
    }
    if (!error.empty()) worst = "error: " + error;

    std::printf("[%2zu/10] %s %s (%.1fs of %.0fs budget): %s\n", i + 1,
                pass ? "PASS" : "FAIL", criterion.name.c_str(), elapsed,
                criterion.budget_seconds, worst.c_str());
    if (!pass) {
      ++failures;
      for (const CheckResult& c : checks) {
        if (!c.pass) {
          std::printf("        failed check %s: %s (need %s %s) %s\n", c.name.c_str(),
                      bench::format_real(c.statistic).c_str(), c.relation.c_str(),
                      bench::format_real(c.threshold).c_str(), c.detail.c_str());
        }
      }
    }
  }
  if (failures > 0) {
    std::printf("%d of 10 acceptance criteria FAILED\n", failures);
    return 1;
  }
  std::printf("all 10 acceptance criteria passed\n");
  return 0;
}
