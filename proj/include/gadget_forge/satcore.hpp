#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gadget_forge/errors.hpp"

namespace gadget_forge {

struct Literal {
  int var = 1;  // 1-based
  bool negated = false;

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Exactly three literal occurrences. A variable may repeat.
struct Clause {
  Literal lits[3];

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.lits[0] == b.lits[0] && a.lits[1] == b.lits[1] && a.lits[2] == b.lits[2];
  }
};

/// A ONE-IN-THREE 3SAT formula. Clause order is significant: gadget
/// construction walks the clauses in this order.
class Instance {
 public:
  Instance(int n_vars, std::vector<Clause> clauses);

  int n_vars() const { return n_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  int n_vars_;
  std::vector<Clause> clauses_;
};

using Assignment = std::vector<bool>;

inline constexpr int kMaxBruteForceVars = 24;

struct SatResult {
  bool satisfiable = false;
  Assignment witness;  // empty when unsatisfiable
};

/// Parses the o3s text format:
///
///   c comment
///   p o3s <n_vars> <n_clauses>
///   l1 l2 l3 0
///
/// Negative integers denote negated literals.
Instance parse_instance(std::string_view text);
Instance parse_instance(std::istream& in);

/// Inverse of parse_instance. Emits a header and one clause per line.
std::string format_instance(const Instance& inst);

/// True iff exactly one of the three literal occurrences evaluates to 1.
bool eval_one_in_three(const Clause& c, const Assignment& a);

bool satisfies(const Instance& inst, const Assignment& a);

/// Enumerates {0,1}^n with b_1 as the most significant bit and returns the
/// first satisfying assignment. Throws CapacityError if n_vars exceeds
/// kMaxBruteForceVars.
SatResult brute_force(const Instance& inst);

/// m clauses over three distinct variables each, signs fair coin flips.
/// Deterministic in `seed`. Throws std::invalid_argument for n < 3 or m < 1.
Instance random_instance(int n, int m, std::uint64_t seed);

std::string assignment_string(const Assignment& a);

}  // namespace gadget_forge
