// Runs acceptance criteria 1..10 and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include "allee/verify.hpp"

#include <iostream>

int main() {
  int failed = 0;
  for (int id = 1; id <= 10; ++id) {
    auto c = allee::run_criterion(id);
    std::cout << allee::format_line(c) << std::endl;
    if (!c.pass) ++failed;
  }
  std::cout << (failed ? std::to_string(failed) + " criterion(s) failed" : std::string("all criteria passed")) << "\n";
  return failed ? 1 : 0;
}
