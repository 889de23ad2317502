#include <iostream>
#include <set>
#include <string>

#include "qbfscc/self_test.hpp"

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  bool all = true;
  for (const auto& c : qbfscc::acceptance_criteria()) {
    if (!only.empty() && !only.count(c.id)) continue;
    qbfscc::CriterionResult r = qbfscc::run_criterion(c);
    std::cout << qbfscc::format_criterion(r) << std::endl;
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
