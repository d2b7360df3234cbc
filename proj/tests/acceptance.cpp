// Runs acceptance criteria 1-10 and prints one pass/fail line per criterion.

#include <iostream>

#include "nori/acceptance.hpp"

int main() {
  auto results = nori::acceptance::run({}, std::cout, true);
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
