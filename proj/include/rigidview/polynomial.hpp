#pragma once

#include <cstddef>
#include <vector>

namespace rigidview {

/// Real polynomial with coefficients in ascending degree.
class UnivariatePolynomial {
 public:
  UnivariatePolynomial() = default;
  explicit UnivariatePolynomial(std::vector<double> coefficients);

  static UnivariatePolynomial constant(double c) { return UnivariatePolynomial({c}); }
  static UnivariatePolynomial linear(double c0, double c1) { return UnivariatePolynomial({c0, c1}); }

  /// Degree after dropping exact trailing zeros; -1 for the zero polynomial.
  int degree() const;
  bool is_zero() const { return degree() < 0; }
  const std::vector<double>& coefficients() const { return c_; }
  double coefficient(size_t i) const { return i < c_.size() ? c_[i] : 0.0; }

  double operator()(double x) const;
  /// Sum of |c_i| |x|^i, the magnitude against which rounding in p(x) is judged.
  double magnitude_at(double x) const;
  double max_abs_coefficient() const;

  UnivariatePolynomial derivative() const;
  /// Drops leading coefficients below rel_tol * max |c_i|.
  UnivariatePolynomial trimmed(double rel_tol) const;
  /// Scaled to unit max-norm (unchanged if zero).
  UnivariatePolynomial normalized() const;
  /// x^n p(1/x) for n = degree().
  UnivariatePolynomial reversed() const;

  /// Quotient of division by (x - root); the remainder is discarded.
  UnivariatePolynomial deflate(double root) const;
  /// How many times (x - root) divides p, judged by |p(root)| being at
  /// rounding level relative to magnitude_at(root).
  int root_multiplicity(double root, double rel_tol = 1e-9, int max_mult = 16) const;

  friend UnivariatePolynomial operator+(const UnivariatePolynomial& a, const UnivariatePolynomial& b);
  friend UnivariatePolynomial operator-(const UnivariatePolynomial& a, const UnivariatePolynomial& b);
  friend UnivariatePolynomial operator*(const UnivariatePolynomial& a, const UnivariatePolynomial& b);
  friend UnivariatePolynomial operator*(double s, const UnivariatePolynomial& a);

 private:
  std::vector<double> c_;
};

UnivariatePolynomial pow(const UnivariatePolynomial& p, unsigned n);

/// Polynomial in (u, v) stored as a dense grid: coefficient(i, j) multiplies
/// u^i v^j.
class BivariatePoly {
 public:
  BivariatePoly() : BivariatePoly(0, 0) {}
  BivariatePoly(size_t deg_u, size_t deg_v);

  /// c0 + cu*u + cv*v + cuv*u*v.
  static BivariatePoly bilinear(double c0, double cu, double cv, double cuv);
  static BivariatePoly constant(double c) { return bilinear(c, 0.0, 0.0, 0.0); }

  double coefficient(size_t i, size_t j) const;
  double& at(size_t i, size_t j) { return c_[i * (deg_v_ + 1) + j]; }

  /// Degrees ignoring all-zero rows/columns.
  int degree_u() const;
  int degree_v() const;

  double operator()(double u, double v) const;
  double max_abs_coefficient() const;

  /// Coefficient of v^j as a polynomial in u.
  UnivariatePolynomial v_coefficient(size_t j) const;
  BivariatePoly derivative_u() const;
  BivariatePoly derivative_v() const;

  friend BivariatePoly operator+(const BivariatePoly& a, const BivariatePoly& b);
  friend BivariatePoly operator-(const BivariatePoly& a, const BivariatePoly& b);
  friend BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b);
  friend BivariatePoly operator*(double s, const BivariatePoly& a);

  size_t storage_deg_u() const { return deg_u_; }
  size_t storage_deg_v() const { return deg_v_; }

 private:
  size_t deg_u_;
  size_t deg_v_;
  std::vector<double> c_;
};

/// All real roots in ascending order. Roots of p' split the line into
/// monotone pieces; each piece with a sign change holds exactly one root,
/// found by safeguarded Newton. Only exact zero leading coefficients are
/// dropped, so tiny but genuine ones keep their large roots. Critical
/// points where |p| is at rounding level are reported as
/// (even-multiplicity) roots.
std::vector<double> real_roots(const UnivariatePolynomial& p);

}  // namespace rigidview
