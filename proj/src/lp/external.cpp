#include <atomic>
#include <cstdlib>
#include <fstream>
#include <unistd.h>

#include "stackopt/error.hpp"
#include "stackopt/lp.hpp"

namespace stackopt::lp {
namespace {

std::string replace_all(std::string text, const std::string& key, const std::string& value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

std::string shell_quote(const std::string& s) { return "'" + replace_all(s, "'", "'\\''") + "'"; }

}  // namespace

ExternalSolver::ExternalSolver(std::string command_template, std::filesystem::path work_dir)
    : command_template_(std::move(command_template)), work_dir_(std::move(work_dir)) {
  if (command_template_.find("{in}") == std::string::npos || command_template_.find("{out}") == std::string::npos) {
    throw Error(ErrorKind::Config, "external solver command must contain {in} and {out}");
  }
}

LpSolution ExternalSolver::solve(const LpInstance& instance) const {
  instance.validate();
  static std::atomic<unsigned long> counter{0};
  std::filesystem::create_directories(work_dir_);
  const std::string stem = "lp_" + std::to_string(::getpid()) + "_" + std::to_string(counter++);
  const auto in_path = work_dir_ / (stem + ".lp.txt");
  const auto out_path = work_dir_ / (stem + ".sol.txt");
  {
    std::ofstream out(in_path);
    if (!out) throw Error(ErrorKind::FileNotFound, "cannot write " + in_path.string());
    write_dump(out, instance);
  }
  std::string command = replace_all(command_template_, "{in}", shell_quote(in_path.string()));
  command = replace_all(command, "{out}", shell_quote(out_path.string()));
  const int rc = std::system(command.c_str());

  LpSolution sol;
  std::ifstream in(out_path);
  if (rc != 0 || !in) {
    sol.status = Status::NumericalBreakdown;
    sol.x.assign(instance.num_variables(), 0.0);
    sol.message = "external solver failed (exit " + std::to_string(rc) + ")";
  } else {
    sol = read_solution(in, instance.num_variables(), instance.num_equalities(), instance.num_inequalities());
  }
  std::error_code ec;
  std::filesystem::remove(in_path, ec);
  std::filesystem::remove(out_path, ec);
  return sol;
}

}  // namespace stackopt::lp
