#pragma once

// Seeded randomized checks of the bounds that make the minimax value exist
// (continuity, bounded variation, summation order, bilinearity), run against
// one game instance.

#include <cstdint>
#include <string>
#include <vector>

#include "qgame/saddle_solver.hpp"

namespace qgame {

struct SuiteResult {
  std::string name;
  long trials;
  double max_violation;  // largest amount by which the bound was exceeded (0 if never)
  double tolerance;
  bool passed;
};

/// Lipschitz continuity of K in each argument, total variation of spectral
/// distribution differences against the trace norm, Fubini order-swap,
/// bilinearity under mixing, response-operator consistency and the saddle
/// certificate of a solved game. `samples` trials per suite.
std::vector<SuiteResult> run_invariant_suites(const GameInstance<double>& game, long samples, std::uint64_t seed);

}  // namespace qgame
