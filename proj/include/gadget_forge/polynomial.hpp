#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "gadget_forge/errors.hpp"

namespace gadget_forge {

/// Arbitrary-precision rational; gmp keeps it canonical (lowest terms,
/// positive denominator) after every arithmetic operation.
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
std::string to_string(const Rational& r);

using Exponents = std::vector<std::uint32_t>;

std::uint32_t total_degree(const Exponents& e);

/// Graded lexicographic order, highest first: larger total degree precedes,
/// ties broken lexicographically with x_1 > x_2 > ... .
struct GrlexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse multivariate polynomial with exact rational coefficients. Terms are
/// kept in canonical graded-lex order and zero coefficients are never stored,
/// so two polynomials are equal iff their term maps are equal.
class Polynomial {
 public:
  using TermMap = std::map<Exponents, Rational, GrlexGreater>;

  explicit Polynomial(int n_vars = 0);

  static Polynomial constant(int n_vars, const Rational& c);
  /// x_{index+1}; `index` is 0-based.
  static Polynomial variable(int n_vars, int index);
  static Polynomial monomial(int n_vars, Exponents exps, const Rational& c);

  int n_vars() const { return n_vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Highest total degree; -1 for the zero polynomial.
  int degree() const;
  Rational coefficient(const Exponents& e) const;

  /// Adds c * x^e in place, purging the term if it cancels.
  void add_term(const Exponents& e, const Rational& c);

  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  Polynomial& operator*=(const Rational& c);

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.n_vars_ == b.n_vars_ && a.terms_ == b.terms_;
  }

 private:
  int n_vars_;
  TermMap terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial sub(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);
Polynomial scale(const Polynomial& p, const Rational& c);
Polynomial pow(const Polynomial& p, unsigned k);

Polynomial operator+(const Polynomial& p, const Polynomial& q);
Polynomial operator-(const Polynomial& p, const Polynomial& q);
Polynomial operator-(const Polynomial& p);
Polynomial operator*(const Polynomial& p, const Polynomial& q);
Polynomial operator*(const Rational& c, const Polynomial& p);

Polynomial partial(const Polynomial& p, int index);
std::vector<Polynomial> gradient(const Polynomial& p);

/// Inner product sum_i a_i * b_i of two polynomial vectors.
Polynomial dot(std::span<const Polynomial> a, std::span<const Polynomial> b);

/// Replaces x_{index+1} by `value`; the variable count is unchanged.
Polynomial substitute(const Polynomial& p, int index, const Rational& value);

Rational eval(const Polynomial& p, std::span<const Rational> point);

/// Horner-factored double evaluation. Compiles on every call; use
/// RealPolynomial in hot loops.
double eval_real(const Polynomial& p, std::span<const double> point);

/// Degree d if every monomial has total degree d. The zero polynomial
/// reports 0.
std::optional<int> is_homogeneous(const Polynomial& p);

/// d*p - sum_i x_i dp/dx_i. Throws ContractError unless p is a form of
/// degree >= 1.
Polynomial euler_residual(const Polynomial& p);

inline bool is_zero(const Polynomial& p) { return p.is_zero(); }

std::string to_string(const Polynomial& p);

/// A polynomial compiled to a nested Horner scheme over doubles: the
/// outermost level is a univariate polynomial in the first variable that
/// occurs, whose coefficients are polynomials in later variables, and so on.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(const Polynomial& p);

  int n_vars() const { return n_vars_; }

  double operator()(std::span<const double> x) const;
  double operator()(const Eigen::VectorXd& x) const {
    return (*this)(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
  }

 private:
  struct Node {
    int var = -1;  // -1 marks a constant leaf
    double constant = 0.0;
    std::vector<std::pair<std::uint32_t, int>> children;  // descending exponent
  };

  int build(std::vector<const Polynomial::TermMap::value_type*>& terms, int first_var);
  double eval_node(int idx, const double* x) const;

  int n_vars_ = 0;
  int root_ = -1;
  std::vector<Node> nodes_;
};

}  // namespace gadget_forge
