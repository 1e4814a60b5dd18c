// Reads an LP dump, solves it with the embedded simplex and writes the
// solution file. Doubles as a reference external solver for the adapter.
#include <fstream>
#include <iostream>

#include "stackopt/error.hpp"
#include "stackopt/lp.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: lp_solve_dump <instance.lp.txt> <solution.txt>\n";
    return 2;
  }
  try {
    std::ifstream in(argv[1]);
    if (!in) throw stackopt::Error(stackopt::ErrorKind::FileNotFound, argv[1]);
    auto instance = stackopt::lp::read_dump(in);
    auto solution = stackopt::lp::solve_lp(instance);
    std::ofstream out(argv[2]);
    stackopt::lp::write_solution(out, solution);
    return out ? 0 : 5;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
}
