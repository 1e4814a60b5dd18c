// Plain-text exchange format.
//
//   LPDUMP 1
//   DIMS <num_vars> <num_eq> <num_le>
//   OBJ
//   0 <col> <value>            nonzero objective coefficients
//   EQ
//   <row> <col> <value>        coefficient triplets
//   <row> rhs <value>          right-hand side of each row
//   LE
//   ...                        same layout as EQ
//   BOUNDS
//   <col> <lo> <hi>            every column; infinities as inf / -inf
//   NAMES
//   <col> <name>
//   END
//
// Solutions:
//
//   LPSOLUTION 1
//   STATUS <Optimal|Infeasible|...>
//   OBJECTIVE <value>
//   ITERATIONS <count>
//   X / EQ_DUALS / LE_DUALS sections of `<index> <value>` lines
//   END

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "stackopt/error.hpp"
#include "stackopt/lp.hpp"

namespace stackopt::lp {
namespace {

std::string fmt(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& token, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size() || errno == ERANGE) {
    throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line) + ": bad number '" + token + "'");
  }
  return v;
}

std::size_t parse_index(const std::string& token, std::size_t limit, std::size_t line) {
  double v = parse_number(token, line);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)) || static_cast<std::size_t>(v) >= limit) {
    throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line) + ": index '" + token + "' out of range");
  }
  return static_cast<std::size_t>(v);
}

void write_block(std::ostream& out, const char* header, const ConstraintBlock& block) {
  out << header << '\n';
  for (std::size_t i = 0; i < block.rows(); ++i) {
    auto cols = block.row_cols(i);
    auto vals = block.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) out << i << ' ' << cols[k] << ' ' << fmt(vals[k]) << '\n';
    out << i << " rhs " << fmt(block.rhs(i)) << '\n';
  }
}

// Reads non-empty lines as whitespace-separated tokens.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      std::istringstream ss(line);
      tokens.clear();
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return true;
    }
    return false;
  }
  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

void write_dump(std::ostream& out, const LpInstance& instance) {
  const std::size_t n = instance.num_variables();
  out << "LPDUMP 1\n";
  out << "DIMS " << n << ' ' << instance.num_equalities() << ' ' << instance.num_inequalities() << '\n';
  out << "OBJ\n";
  auto c = instance.objective();
  for (std::size_t j = 0; j < n; ++j) {
    if (c[j] != 0.0) out << "0 " << j << ' ' << fmt(c[j]) << '\n';
  }
  write_block(out, "EQ", instance.equalities());
  write_block(out, "LE", instance.inequalities());
  out << "BOUNDS\n";
  for (std::size_t j = 0; j < n; ++j) out << j << ' ' << fmt(instance.lower()[j]) << ' ' << fmt(instance.upper()[j]) << '\n';
  out << "NAMES\n";
  for (std::size_t j = 0; j < n; ++j) out << j << ' ' << instance.names()[j] << '\n';
  out << "END\n";
}

LpInstance read_dump(std::istream& in) {
  LineReader reader(in);
  std::vector<std::string> tok;
  if (!reader.next(tok) || tok.size() != 2 || tok[0] != "LPDUMP" || tok[1] != "1") malformed(reader.number(), "missing LPDUMP 1 header");
  if (!reader.next(tok) || tok.size() != 4 || tok[0] != "DIMS") malformed(reader.number(), "missing DIMS line");
  const std::size_t big = static_cast<std::size_t>(1) << 40;
  const std::size_t n = parse_index(tok[1], big, reader.number());
  const std::size_t neq = parse_index(tok[2], big, reader.number());
  const std::size_t nle = parse_index(tok[3], big, reader.number());

  std::vector<double> cost(n, 0.0), lo(n, 0.0), hi(n, kInf);
  std::vector<std::string> names(n);
  for (std::size_t j = 0; j < n; ++j) names[j] = "x" + std::to_string(j);
  std::vector<std::vector<Term>> eq_rows(neq), le_rows(nle);
  std::vector<double> eq_rhs(neq, 0.0), le_rhs(nle, 0.0);

  std::string section;
  bool ended = false;
  while (reader.next(tok)) {
    const std::size_t ln = reader.number();
    if (tok.size() == 1) {
      if (tok[0] == "END") {
        ended = true;
        break;
      }
      if (tok[0] != "OBJ" && tok[0] != "EQ" && tok[0] != "LE" && tok[0] != "BOUNDS" && tok[0] != "NAMES") malformed(ln, "unknown section " + tok[0]);
      section = tok[0];
      continue;
    }
    if (section == "OBJ") {
      if (tok.size() != 3) malformed(ln, "expected '0 col value'");
      cost[parse_index(tok[1], n, ln)] = parse_number(tok[2], ln);
    } else if (section == "EQ" || section == "LE") {
      if (tok.size() != 3) malformed(ln, "expected 'row col value'");
      bool eq = section == "EQ";
      std::size_t row = parse_index(tok[0], eq ? neq : nle, ln);
      double value = parse_number(tok[2], ln);
      if (tok[1] == "rhs") {
        (eq ? eq_rhs : le_rhs)[row] = value;
      } else {
        (eq ? eq_rows : le_rows)[row].push_back({parse_index(tok[1], n, ln), value});
      }
    } else if (section == "BOUNDS") {
      if (tok.size() != 3) malformed(ln, "expected 'col lo hi'");
      std::size_t j = parse_index(tok[0], n, ln);
      lo[j] = parse_number(tok[1], ln);
      hi[j] = parse_number(tok[2], ln);
    } else if (section == "NAMES") {
      if (tok.size() != 2) malformed(ln, "expected 'col name'");
      names[parse_index(tok[0], n, ln)] = tok[1];
    } else {
      malformed(ln, "data outside a section");
    }
  }
  if (!ended) malformed(reader.number(), "missing END");

  LpInstance inst;
  for (std::size_t j = 0; j < n; ++j) inst.add_variable(names[j], lo[j], hi[j], cost[j]);
  for (std::size_t i = 0; i < neq; ++i) inst.add_equality(std::span<const Term>(eq_rows[i]), eq_rhs[i]);
  for (std::size_t i = 0; i < nle; ++i) inst.add_less_equal(std::span<const Term>(le_rows[i]), le_rhs[i]);
  return inst;
}

void write_solution(std::ostream& out, const LpSolution& solution) {
  out << "LPSOLUTION 1\n";
  out << "STATUS " << to_string(solution.status) << '\n';
  out << "OBJECTIVE " << fmt(solution.objective) << '\n';
  out << "ITERATIONS " << solution.iterations << '\n';
  auto section = [&](const char* name, const std::vector<double>& v) {
    out << name << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) out << i << ' ' << fmt(v[i]) << '\n';
  };
  section("X", solution.x);
  section("EQ_DUALS", solution.eq_duals);
  section("LE_DUALS", solution.le_duals);
  out << "END\n";
}

LpSolution read_solution(std::istream& in, std::size_t num_vars, std::size_t num_eq, std::size_t num_le) {
  LineReader reader(in);
  std::vector<std::string> tok;
  if (!reader.next(tok) || tok.size() != 2 || tok[0] != "LPSOLUTION") malformed(reader.number(), "missing LPSOLUTION header");
  LpSolution sol;
  bool have_status = false;
  bool ended = false;
  std::vector<double>* target = nullptr;
  while (reader.next(tok)) {
    const std::size_t ln = reader.number();
    if (tok[0] == "END") {
      ended = true;
      break;
    }
    if (tok[0] == "STATUS" && tok.size() == 2) {
      const Status all[] = {Status::Optimal, Status::Infeasible, Status::Unbounded, Status::IterationLimit, Status::NumericalBreakdown};
      have_status = false;
      for (Status s : all) {
        if (to_string(s) == tok[1]) sol.status = s, have_status = true;
      }
      if (!have_status) malformed(ln, "unknown status " + tok[1]);
    } else if (tok[0] == "OBJECTIVE" && tok.size() == 2) {
      sol.objective = parse_number(tok[1], ln);
    } else if (tok[0] == "ITERATIONS" && tok.size() == 2) {
      sol.iterations = parse_index(tok[1], static_cast<std::size_t>(-1), ln);
    } else if (tok.size() == 1 && (tok[0] == "X" || tok[0] == "EQ_DUALS" || tok[0] == "LE_DUALS")) {
      if (tok[0] == "X") target = &sol.x, sol.x.assign(num_vars, 0.0);
      if (tok[0] == "EQ_DUALS") target = &sol.eq_duals, sol.eq_duals.assign(num_eq, 0.0);
      if (tok[0] == "LE_DUALS") target = &sol.le_duals, sol.le_duals.assign(num_le, 0.0);
    } else if (tok.size() == 2 && target != nullptr) {
      (*target)[parse_index(tok[0], target->size(), ln)] = parse_number(tok[1], ln);
    } else {
      malformed(ln, "unexpected line");
    }
  }
  if (!ended || !have_status) malformed(reader.number(), "incomplete solution file");
  sol.x.resize(num_vars, 0.0);
  sol.eq_duals.resize(num_eq, 0.0);
  sol.le_duals.resize(num_le, 0.0);
  return sol;
}

}  // namespace stackopt::lp
