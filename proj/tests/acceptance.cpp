#include <cstdio>

#include "CLI11.hpp"
#include "utl/verify.hpp"

int main(int argc, char** argv) {
  utl::VerifyConfig cfg;
  CLI::App app{"acceptance criteria"};
  app.add_option("--max-n", cfg.max_n, "cap every size range");
  app.add_option("--seed", cfg.seed, "base sample seed");
  app.add_flag("--inject-gamma-fault", cfg.inject_gamma_fault, "perturb one solved Gamma entry");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  utl::run_acceptance(cfg, [&](const utl::CriterionResult& r) {
    all = all && r.pass;
    std::printf("%s criterion %d (%s) [%.1fs]: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.seconds, r.detail.c_str());
    std::fflush(stdout);
  });
  return all ? 0 : 1;
}
