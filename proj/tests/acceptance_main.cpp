#include "rlab/acceptance.hpp"

int main() {
  auto results = rlab::acceptance::run_all();
  return rlab::acceptance::print_and_score(results) == 0 ? 0 : 1;
}
