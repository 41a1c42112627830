#include "gadget_forge/satcore.hpp"

#include <charconv>
#include <istream>
#include <iterator>
#include <random>
#include <sstream>
#include <stdexcept>

namespace gadget_forge {

Instance::Instance(int n_vars, std::vector<Clause> clauses)
    : n_vars_(n_vars), clauses_(std::move(clauses)) {
  if (n_vars_ < 1) throw ContractError("instance needs at least one variable");
  for (const Clause& c : clauses_) {
    for (const Literal& l : c.lits) {
      if (l.var < 1 || l.var > n_vars_) {
        throw ContractError("literal variable " + std::to_string(l.var) + " outside 1.." +
                            std::to_string(n_vars_));
      }
    }
  }
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<long long> to_int(std::string_view tok) {
  long long v = 0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || first == ptr) return std::nullopt;
  return v;
}

}  // namespace

Instance parse_instance(std::string_view text) {
  using K = ParseError::Kind;
  std::optional<long long> n_vars, n_clauses;
  std::vector<Clause> clauses;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;

    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks[0].front() == 'c') continue;

    if (toks[0] == "p") {
      if (n_vars) throw ParseError(K::kHeader, lineno, "duplicate header");
      if (toks.size() != 4 || toks[1] != "o3s") {
        throw ParseError(K::kHeader, lineno, "expected 'p o3s <n_vars> <n_clauses>'");
      }
      n_vars = to_int(toks[2]);
      n_clauses = to_int(toks[3]);
      if (!n_vars || !n_clauses || *n_vars < 1 || *n_clauses < 0) {
        throw ParseError(K::kHeader, lineno, "header counts must be integers, n_vars >= 1");
      }
      continue;
    }
    if (!n_vars) throw ParseError(K::kHeader, lineno, "clause before 'p o3s' header");

    std::vector<long long> vals;
    for (std::string_view t : toks) {
      auto v = to_int(t);
      if (!v) throw ParseError(K::kToken, lineno, "non-integer token '" + std::string(t) + "'");
      vals.push_back(*v);
    }
    if (vals.back() != 0) throw ParseError(K::kArity, lineno, "clause not terminated by 0");
    vals.pop_back();
    for (long long v : vals) {
      if (v == 0) throw ParseError(K::kArity, lineno, "literal 0 inside clause");
    }
    if (vals.size() != 3) {
      throw ParseError(K::kArity, lineno,
                       "clause has " + std::to_string(vals.size()) + " literals, expected 3");
    }
    Clause c;
    for (int k = 0; k < 3; ++k) {
      long long v = vals[k];
      long long var = v < 0 ? -v : v;
      if (var > *n_vars) {
        throw ParseError(K::kVarRange, lineno,
                         "variable " + std::to_string(var) + " exceeds n_vars " +
                             std::to_string(*n_vars));
      }
      c.lits[k] = Literal{static_cast<int>(var), v < 0};
    }
    clauses.push_back(c);
  }
  if (!n_vars) throw ParseError(K::kHeader, 0, "missing 'p o3s' header");
  if (static_cast<long long>(clauses.size()) != *n_clauses) {
    throw ParseError(K::kClauseCount, 0,
                     "header declares " + std::to_string(*n_clauses) + " clauses, found " +
                         std::to_string(clauses.size()));
  }
  return Instance(static_cast<int>(*n_vars), std::move(clauses));
}

Instance parse_instance(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_instance(std::string_view(text));
}

std::string format_instance(const Instance& inst) {
  std::ostringstream os;
  os << "p o3s " << inst.n_vars() << ' ' << inst.clauses().size() << '\n';
  for (const Clause& c : inst.clauses()) {
    for (const Literal& l : c.lits) os << (l.negated ? -l.var : l.var) << ' ';
    os << "0\n";
  }
  return os.str();
}

bool eval_one_in_three(const Clause& c, const Assignment& a) {
  int count = 0;
  for (const Literal& l : c.lits) count += a[l.var - 1] != l.negated ? 1 : 0;
  return count == 1;
}

bool satisfies(const Instance& inst, const Assignment& a) {
  for (const Clause& c : inst.clauses()) {
    if (!eval_one_in_three(c, a)) return false;
  }
  return true;
}

SatResult brute_force(const Instance& inst) {
  const int n = inst.n_vars();
  if (n > kMaxBruteForceVars) {
    throw CapacityError("brute force limited to " + std::to_string(kMaxBruteForceVars) +
                        " variables, instance has " + std::to_string(n));
  }
  // Literal i of clause c reads bit (n - var) of the counter so that b_1 is
  // the most significant bit.
  struct PackedLit {
    int shift;
    std::uint32_t flip;
  };
  std::vector<PackedLit> packed;
  packed.reserve(inst.clauses().size() * 3);
  for (const Clause& c : inst.clauses()) {
    for (const Literal& l : c.lits) packed.push_back({n - l.var, l.negated ? 1u : 0u});
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t k = 0; k < total; ++k) {
    bool ok = true;
    for (std::size_t j = 0; j < packed.size() && ok; j += 3) {
      std::uint32_t count = 0;
      for (std::size_t t = 0; t < 3; ++t) {
        count += ((k >> packed[j + t].shift) & 1u) ^ packed[j + t].flip;
      }
      ok = count == 1;
    }
    if (ok) {
      Assignment a(n);
      for (int i = 0; i < n; ++i) a[i] = (k >> (n - 1 - i)) & 1u;
      return {true, std::move(a)};
    }
  }
  return {false, {}};
}

Instance random_instance(int n, int m, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("random_instance: need n >= 3");
  if (m < 1) throw std::invalid_argument("random_instance: need m >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_var(1, n);
  std::vector<Clause> clauses;
  clauses.reserve(m);
  for (int c = 0; c < m; ++c) {
    Clause cl;
    int chosen[3] = {0, 0, 0};
    for (int k = 0; k < 3; ++k) {
      int v;
      do {
        v = pick_var(rng);
      } while ((k > 0 && v == chosen[0]) || (k > 1 && v == chosen[1]));
      chosen[k] = v;
      cl.lits[k] = Literal{v, (rng() >> 63) != 0};
    }
    clauses.push_back(cl);
  }
  return Instance(n, std::move(clauses));
}

std::string assignment_string(const Assignment& a) {
  std::string s;
  s.reserve(a.size());
  for (bool b : a) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace gadget_forge
