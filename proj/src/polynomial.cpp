#include "gadget_forge/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace gadget_forge {

Rational make_rational(long num, long den) {
  Rational r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::uint32_t total_degree(const Exponents& e) {
  return std::accumulate(e.begin(), e.end(), std::uint32_t{0});
}

bool GrlexGreater::operator()(const Exponents& a, const Exponents& b) const {
  const auto da = total_degree(a);
  const auto db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

void check_same_vars(const Polynomial& p, const Polynomial& q) {
  if (p.n_vars() != q.n_vars()) {
    throw DimensionError("polynomial variable counts differ: " + std::to_string(p.n_vars()) +
                         " vs " + std::to_string(q.n_vars()));
  }
}

}  // namespace

Polynomial::Polynomial(int n_vars) : n_vars_(n_vars) {
  if (n_vars < 0) throw DimensionError("negative variable count");
}

Polynomial Polynomial::constant(int n_vars, const Rational& c) {
  Polynomial p(n_vars);
  p.add_term(Exponents(n_vars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int n_vars, int index) {
  if (index < 0 || index >= n_vars) throw DimensionError("variable index out of range");
  Exponents e(n_vars, 0);
  e[index] = 1;
  return monomial(n_vars, std::move(e), Rational(1));
}

Polynomial Polynomial::monomial(int n_vars, Exponents exps, const Rational& c) {
  if (static_cast<int>(exps.size()) != n_vars) throw DimensionError("exponent length mismatch");
  Polynomial p(n_vars);
  p.add_term(exps, c);
  return p;
}

int Polynomial::degree() const {
  if (terms_.empty()) return -1;
  // Canonical order puts the highest total degree first.
  return static_cast<int>(total_degree(terms_.begin()->first));
}

Rational Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& q) {
  check_same_vars(*this, q);
  for (const auto& [e, c] : q.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q) {
  check_same_vars(*this, q);
  for (const auto& [e, c] : q.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial add(const Polynomial& p, const Polynomial& q) {
  Polynomial r = p;
  r += q;
  return r;
}

Polynomial sub(const Polynomial& p, const Polynomial& q) {
  Polynomial r = p;
  r -= q;
  return r;
}

Polynomial mul(const Polynomial& p, const Polynomial& q) {
  check_same_vars(p, q);
  const int n = p.n_vars();
  Polynomial r(n);
  Exponents e(n);
  Rational c;
  for (const auto& [ea, ca] : p.terms()) {
    for (const auto& [eb, cb] : q.terms()) {
      for (int i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
      c = ca * cb;
      r.add_term(e, c);
    }
  }
  return r;
}

Polynomial scale(const Polynomial& p, const Rational& c) {
  Polynomial r = p;
  r *= c;
  return r;
}

Polynomial pow(const Polynomial& p, unsigned k) {
  Polynomial r = Polynomial::constant(p.n_vars(), Rational(1));
  for (unsigned i = 0; i < k; ++i) r = mul(r, p);
  return r;
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) { return add(p, q); }
Polynomial operator-(const Polynomial& p, const Polynomial& q) { return sub(p, q); }
Polynomial operator-(const Polynomial& p) { return scale(p, Rational(-1)); }
Polynomial operator*(const Polynomial& p, const Polynomial& q) { return mul(p, q); }
Polynomial operator*(const Rational& c, const Polynomial& p) { return scale(p, c); }

Polynomial partial(const Polynomial& p, int index) {
  if (index < 0 || index >= p.n_vars()) throw DimensionError("partial: index out of range");
  Polynomial r(p.n_vars());
  for (const auto& [e, c] : p.terms()) {
    if (e[index] == 0) continue;
    Exponents d = e;
    --d[index];
    r.add_term(d, c * e[index]);
  }
  return r;
}

std::vector<Polynomial> gradient(const Polynomial& p) {
  std::vector<Polynomial> g;
  g.reserve(p.n_vars());
  for (int i = 0; i < p.n_vars(); ++i) g.push_back(partial(p, i));
  return g;
}

Polynomial dot(std::span<const Polynomial> a, std::span<const Polynomial> b) {
  if (a.size() != b.size() || a.empty()) throw DimensionError("dot: length mismatch");
  Polynomial r(a.front().n_vars());
  for (std::size_t i = 0; i < a.size(); ++i) r += mul(a[i], b[i]);
  return r;
}

Polynomial substitute(const Polynomial& p, int index, const Rational& value) {
  if (index < 0 || index >= p.n_vars()) throw DimensionError("substitute: index out of range");
  Polynomial r(p.n_vars());
  for (const auto& [e, c] : p.terms()) {
    Exponents d = e;
    Rational v;
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), value.get_num_mpz_t(), e[index]);
    mpz_pow_ui(den.get_mpz_t(), value.get_den_mpz_t(), e[index]);
    v = Rational(num, den);
    v.canonicalize();
    d[index] = 0;
    r.add_term(d, c * v);
  }
  return r;
}

Rational eval(const Polynomial& p, std::span<const Rational> point) {
  const int n = p.n_vars();
  if (static_cast<int>(point.size()) != n) throw DimensionError("eval: point length mismatch");
  std::vector<std::vector<Rational>> powers(n, std::vector<Rational>{Rational(1)});
  Rational sum(0), term;
  for (const auto& [e, c] : p.terms()) {
    term = c;
    for (int i = 0; i < n; ++i) {
      auto& pw = powers[i];
      while (pw.size() <= e[i]) pw.push_back(pw.back() * point[i]);
      if (e[i] != 0) term *= pw[e[i]];
    }
    sum += term;
  }
  return sum;
}

double eval_real(const Polynomial& p, std::span<const double> point) {
  if (static_cast<int>(point.size()) != p.n_vars()) {
    throw DimensionError("eval_real: point length mismatch");
  }
  return RealPolynomial(p)(point);
}

std::optional<int> is_homogeneous(const Polynomial& p) {
  if (p.is_zero()) return 0;
  const auto d = total_degree(p.terms().begin()->first);
  for (const auto& [e, c] : p.terms()) {
    if (total_degree(e) != d) return std::nullopt;
  }
  return static_cast<int>(d);
}

Polynomial euler_residual(const Polynomial& p) {
  auto d = is_homogeneous(p);
  if (!d || p.is_zero() || *d < 1) {
    throw ContractError("euler_residual needs a form of degree >= 1");
  }
  Polynomial r = scale(p, Rational(*d));
  for (int i = 0; i < p.n_vars(); ++i) {
    r -= mul(Polynomial::variable(p.n_vars(), i), partial(p, i));
  }
  return r;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << '-';
    first = false;
    Rational a = abs(c);
    bool unit = a == 1;
    bool has_var = total_degree(e) > 0;
    if (!unit || !has_var) os << a.get_str();
    bool need_star = !unit;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << '*';
      os << 'x' << (i + 1);
      if (e[i] > 1) os << '^' << e[i];
      need_star = true;
    }
  }
  return os.str();
}

// --- RealPolynomial -------------------------------------------------------

RealPolynomial::RealPolynomial(const Polynomial& p) : n_vars_(p.n_vars()) {
  std::vector<const Polynomial::TermMap::value_type*> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) terms.push_back(&t);
  root_ = build(terms, 0);
}

int RealPolynomial::build(std::vector<const Polynomial::TermMap::value_type*>& terms,
                          int first_var) {
  int var = first_var;
  while (var < n_vars_ &&
         std::none_of(terms.begin(), terms.end(), [&](auto* t) { return t->first[var] != 0; })) {
    ++var;
  }
  const int idx = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (var == n_vars_) {
    // All remaining exponents are zero: at most one term survives canonical
    // storage, but summing keeps this correct for any input.
    double c = 0.0;
    for (auto* t : terms) c += t->second.get_d();
    nodes_[idx].constant = c;
    return idx;
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [&](auto* a, auto* b) { return a->first[var] > b->first[var]; });
  std::vector<std::pair<std::uint32_t, int>> children;
  std::size_t i = 0;
  while (i < terms.size()) {
    std::size_t j = i;
    const auto e = terms[i]->first[var];
    while (j < terms.size() && terms[j]->first[var] == e) ++j;
    std::vector<const Polynomial::TermMap::value_type*> group(terms.begin() + i,
                                                              terms.begin() + j);
    const int child = build(group, var + 1);
    children.emplace_back(e, child);
    i = j;
  }
  nodes_[idx].var = var;
  nodes_[idx].children = std::move(children);
  return idx;
}

namespace {

inline double ipow(double x, std::uint32_t k) {
  double r = 1.0;
  while (k) {
    if (k & 1u) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

}  // namespace

double RealPolynomial::eval_node(int idx, const double* x) const {
  const Node& node = nodes_[idx];
  if (node.var < 0) return node.constant;
  const double xv = x[node.var];
  double result = 0.0;
  std::uint32_t prev = node.children.front().first;
  for (const auto& [e, child] : node.children) {
    result = result * ipow(xv, prev - e) + eval_node(child, x);
    prev = e;
  }
  return result * ipow(xv, prev);
}

double RealPolynomial::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_vars_) throw DimensionError("point length mismatch");
  if (root_ < 0) return 0.0;
  return eval_node(root_, x.data());
}

}  // namespace gadget_forge
