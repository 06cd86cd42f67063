#include <iostream>

#include "CLI11.hpp"
#include "affwalk/criteria.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> ids;
  affwalk::CriteriaOptions opts;
  app.add_option("--criterion", ids, "criterion ids (default: all)")
      ->check(CLI::Range(1, affwalk::kCriterionCount));
  app.add_option("--seed", opts.seed, "master seed");
  app.add_option("--workers", opts.workers, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  if (ids.empty()) {
    for (int i = 1; i <= affwalk::kCriterionCount; ++i) {
      ids.push_back(i);
    }
  }
  bool all = true;
  std::vector<affwalk::CriterionResult> results;
  for (int id : ids) {
    auto r = affwalk::run_criterion(id, opts);
    std::cout << affwalk::format_criterion(r) << std::endl;
    all = all && r.pass;
    results.push_back(std::move(r));
  }
  if (results.size() > 1) {
    int passed = 0;
    for (const auto& r : results) {
      passed += r.pass ? 1 : 0;
    }
    std::cout << passed << " of " << results.size() << " criteria passed\n";
  }
  return all ? 0 : 1;
}
