#pragma once

#include <string>
#include <vector>

#include "wingcrack/contact.hpp"
#include "wingcrack/lefm.hpp"
#include "wingcrack/scenario.hpp"

namespace wingcrack::benchmarks {

/// 20 x 20 plate, centre crack of half-length 1, remote tension 1, plane strain.
Scenario griffith(double h_tip = 0.1);

/// Closed flaw of half-length 1 at 45 degrees to a vertical compression of 10, mu = 0.6, c = 0.
Scenario sliding_crack(double h_tip = 0.1);

/// Two offset flaws of the sliding-crack type; the lower flaw's upper wing heads for the upper flaw.
Scenario en_echelon();

struct StaticSolve {
  Mesh mesh;
  std::vector<ContactPair> pairs;
  ContactSolution contact;
  std::vector<SifResult> sifs;
};

/// One contact solve at full load and tip evaluation, without growth.
StaticSolve solve_static(const Scenario& scenario);

struct Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Oracle comparisons printed by the command-line --verify table.
std::vector<Check> verify();

}  // namespace wingcrack::benchmarks
