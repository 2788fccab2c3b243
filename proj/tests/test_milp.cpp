#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"

#include "coldchain/milp.hpp"

using namespace coldchain;

TEST_CASE("variables and rows get sequential ids and name lookup") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, 10.0);
  VarId y = m.add_variable("y", -1.0, 1.0);
  VarId b = m.add_variable("b", 0.0, 1.0, VarKind::Binary);
  CHECK(x == 0);
  CHECK(y == 1);
  CHECK(b == 2);
  CHECK(m.num_vars() == 3);
  CHECK(m.num_binaries() == 1);
  CHECK(m.find_variable("y") == y);
  CHECK(m.find_variable("nope") == -1);

  RowId r = m.add_constraint("cap", {{x, 1.0}, {y, 2.0}}, RowSense::LessEqual,
                             5.0);
  CHECK(r == 0);
  CHECK(m.num_rows() == 1);
  CHECK(m.row(r).terms.size() == 2);
}

TEST_CASE("row terms merge duplicates and drop zeros") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, kInf);
  VarId y = m.add_variable("y", 0.0, kInf);
  RowId r = m.add_constraint(
      "r", {{y, 1.0}, {x, 2.0}, {x, 3.0}, {y, -1.0}}, RowSense::Equal, 4.0);
  const LinRow& row = m.row(r);
  REQUIRE(row.terms.size() == 1);
  CHECK(row.terms[0].var == x);
  CHECK(row.terms[0].coef == 5.0);

  m.add_row_terms(r, {{y, 0.5}, {x, -5.0}});
  REQUIRE(m.row(r).terms.size() == 1);
  CHECK(m.row(r).terms[0].var == y);
  CHECK(m.row(r).terms[0].coef == 0.5);
}

TEST_CASE("construction validation") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, 1.0);
  CHECK_THROWS_AS(m.add_variable("x", 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(m.add_variable("bad", 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(m.add_variable("b", -0.5, 1.0, VarKind::Binary),
                  std::invalid_argument);
  CHECK_THROWS_AS(m.add_constraint("r", {{99, 1.0}}, RowSense::Equal, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      m.add_constraint("r", {{x, std::nan("")}}, RowSense::Equal, 0.0),
      std::invalid_argument);
  m.add_constraint("r", {{x, 1.0}}, RowSense::Equal, 0.0);
  CHECK_THROWS_AS(m.add_constraint("r", {{x, 1.0}}, RowSense::Equal, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(m.add_objective_term(99, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(m.set_row_rhs(42, 0.0), std::invalid_argument);
}

TEST_CASE("evaluate reports slacks, bounds and integrality") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, 4.0);
  VarId b = m.add_variable("b", 0.0, 1.0, VarKind::Binary);
  m.add_objective_term(x, 2.0);
  m.add_objective_term(b, 10.0);
  m.set_objective_constant(1.0);
  m.add_constraint("le", {{x, 1.0}, {b, 1.0}}, RowSense::LessEqual, 3.0);
  m.add_constraint("ge", {{x, 1.0}}, RowSense::GreaterEqual, 1.0);
  m.add_constraint("eq", {{x, 2.0}}, RowSense::Equal, 4.0);

  // Feasible integral point.
  EvalReport ok = m.evaluate({2.0, 1.0}, 1e-9);
  CHECK(ok.feasible());
  CHECK(ok.objective == doctest::Approx(1.0 + 4.0 + 10.0));

  // x breaks the equality and its upper bound; b is fractional.
  EvalReport bad = m.evaluate({5.0, 0.4}, 1e-9);
  CHECK_FALSE(bad.feasible());
  CHECK(bad.bound_violations == std::vector<VarId>{x});
  CHECK(bad.integrality_violations == std::vector<VarId>{b});
  REQUIRE(bad.violated_rows.size() == 2);  // "le" and "eq"
  CHECK(bad.violated_rows[0].row == 0);
  CHECK(bad.violated_rows[0].slack == doctest::Approx(3.0 - 5.4));
  CHECK(bad.violated_rows[1].row == 2);
  CHECK(bad.max_violation >= 6.0 - 1e-12);

  CHECK_THROWS_AS(m.evaluate({1.0}, 1e-9), std::invalid_argument);
}

TEST_CASE("objective terms accumulate") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.0, kInf);
  m.add_objective_term(x, 1.5);
  m.add_objective_term(x, 2.5);
  CHECK(m.objective_value({2.0}) == doctest::Approx(8.0));
}

TEST_CASE("mps dump has the expected sections and is deterministic") {
  MilpModel m;
  VarId x = m.add_variable("x", 0.5, 4.0);
  VarId f = m.add_variable("f", -kInf, kInf);
  VarId b = m.add_variable("b", 0.0, 1.0, VarKind::Binary);
  VarId p = m.add_variable("p", 2.0, 2.0);
  m.add_objective_term(x, 3.0);
  m.add_constraint("c1", {{x, 1.0}, {b, -2.0}}, RowSense::LessEqual, 7.0);
  m.add_constraint("c2", {{f, 1.0}}, RowSense::Equal, 0.0);
  (void)p;

  std::ostringstream a, c;
  write_mps(m, a);
  write_mps(m, c);
  CHECK(a.str() == c.str());

  const std::string s = a.str();
  for (const char* needle :
       {"NAME", "ROWS", " N OBJ", " L c1", " E c2", "COLUMNS", "'INTORG'",
        "'INTEND'", " x OBJ 3", " RHS c1 7", " BV BND b", " FX BND p 2",
        " MI BND f", " LO BND x 0.5", " UP BND x 4", "ENDATA"}) {
    INFO("missing: " << needle);
    CHECK(s.find(needle) != std::string::npos);
  }
}
