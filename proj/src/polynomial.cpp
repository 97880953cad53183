#include "rigidview/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/roots.hpp>

#include "rigidview/error.hpp"

namespace rigidview {

UnivariatePolynomial::UnivariatePolynomial(std::vector<double> coefficients) : c_(std::move(coefficients)) {}

int UnivariatePolynomial::degree() const {
  for (size_t i = c_.size(); i-- > 0;) {
    if (c_[i] != 0.0) return static_cast<int>(i);
  }
  return -1;
}

double UnivariatePolynomial::operator()(double x) const {
  double acc = 0.0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

double UnivariatePolynomial::magnitude_at(double x) const {
  const double ax = std::abs(x);
  double acc = 0.0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * ax + std::abs(c_[i]);
  return acc;
}

double UnivariatePolynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (double c : c_) m = std::max(m, std::abs(c));
  return m;
}

UnivariatePolynomial UnivariatePolynomial::derivative() const {
  if (c_.size() <= 1) return constant(0.0);
  std::vector<double> d(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return UnivariatePolynomial(std::move(d));
}

UnivariatePolynomial UnivariatePolynomial::trimmed(double rel_tol) const {
  const double cutoff = rel_tol * max_abs_coefficient();
  std::vector<double> c = c_;
  while (!c.empty() && std::abs(c.back()) <= cutoff) c.pop_back();
  if (c.empty()) c.push_back(0.0);
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial UnivariatePolynomial::normalized() const {
  const double m = max_abs_coefficient();
  if (m == 0.0) return *this;
  return (1.0 / m) * *this;
}

UnivariatePolynomial UnivariatePolynomial::reversed() const {
  const int n = degree();
  if (n < 0) return *this;
  std::vector<double> c(c_.begin(), c_.begin() + n + 1);
  std::reverse(c.begin(), c.end());
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial UnivariatePolynomial::deflate(double root) const {
  const int n = degree();
  if (n <= 0) return constant(0.0);
  std::vector<double> q(static_cast<size_t>(n));
  double carry = c_[static_cast<size_t>(n)];
  for (int i = n - 1; i >= 0; --i) {
    q[static_cast<size_t>(i)] = carry;
    carry = c_[static_cast<size_t>(i)] + carry * root;
  }
  return UnivariatePolynomial(std::move(q));
}

int UnivariatePolynomial::root_multiplicity(double root, double rel_tol, int max_mult) const {
  int m = 0;
  UnivariatePolynomial p = *this;
  while (m < max_mult && p.degree() > 0) {
    const double mag = p.magnitude_at(root);
    if (!(std::abs(p(root)) <= rel_tol * mag)) break;
    p = p.deflate(root);
    ++m;
  }
  return m;
}

UnivariatePolynomial operator+(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
  std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial operator-(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
  return a + (-1.0) * b;
}

UnivariatePolynomial operator*(const UnivariatePolynomial& a, const UnivariatePolynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return UnivariatePolynomial::constant(0.0);
  std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  }
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial operator*(double s, const UnivariatePolynomial& a) {
  std::vector<double> c = a.c_;
  for (double& x : c) x *= s;
  return UnivariatePolynomial(std::move(c));
}

UnivariatePolynomial pow(const UnivariatePolynomial& p, unsigned n) {
  UnivariatePolynomial out = UnivariatePolynomial::constant(1.0);
  for (unsigned i = 0; i < n; ++i) out = out * p;
  return out;
}

// ---------------------------------------------------------------------------

BivariatePoly::BivariatePoly(size_t deg_u, size_t deg_v)
    : deg_u_(deg_u), deg_v_(deg_v), c_((deg_u + 1) * (deg_v + 1), 0.0) {}

BivariatePoly BivariatePoly::bilinear(double c0, double cu, double cv, double cuv) {
  BivariatePoly p(1, 1);
  p.at(0, 0) = c0;
  p.at(1, 0) = cu;
  p.at(0, 1) = cv;
  p.at(1, 1) = cuv;
  return p;
}

double BivariatePoly::coefficient(size_t i, size_t j) const {
  if (i > deg_u_ || j > deg_v_) return 0.0;
  return c_[i * (deg_v_ + 1) + j];
}

int BivariatePoly::degree_u() const {
  for (size_t i = deg_u_ + 1; i-- > 0;) {
    for (size_t j = 0; j <= deg_v_; ++j) {
      if (coefficient(i, j) != 0.0) return static_cast<int>(i);
    }
  }
  return -1;
}

int BivariatePoly::degree_v() const {
  for (size_t j = deg_v_ + 1; j-- > 0;) {
    for (size_t i = 0; i <= deg_u_; ++i) {
      if (coefficient(i, j) != 0.0) return static_cast<int>(j);
    }
  }
  return -1;
}

double BivariatePoly::operator()(double u, double v) const {
  double acc = 0.0;
  for (size_t i = deg_u_ + 1; i-- > 0;) {
    double row = 0.0;
    for (size_t j = deg_v_ + 1; j-- > 0;) row = row * v + coefficient(i, j);
    acc = acc * u + row;
  }
  return acc;
}

double BivariatePoly::max_abs_coefficient() const {
  double m = 0.0;
  for (double c : c_) m = std::max(m, std::abs(c));
  return m;
}

UnivariatePolynomial BivariatePoly::v_coefficient(size_t j) const {
  std::vector<double> c(deg_u_ + 1, 0.0);
  for (size_t i = 0; i <= deg_u_; ++i) c[i] = coefficient(i, j);
  return UnivariatePolynomial(std::move(c));
}

BivariatePoly BivariatePoly::derivative_u() const {
  BivariatePoly d(deg_u_ == 0 ? 0 : deg_u_ - 1, deg_v_);
  for (size_t i = 1; i <= deg_u_; ++i) {
    for (size_t j = 0; j <= deg_v_; ++j) d.at(i - 1, j) = static_cast<double>(i) * coefficient(i, j);
  }
  return d;
}

BivariatePoly BivariatePoly::derivative_v() const {
  BivariatePoly d(deg_u_, deg_v_ == 0 ? 0 : deg_v_ - 1);
  for (size_t i = 0; i <= deg_u_; ++i) {
    for (size_t j = 1; j <= deg_v_; ++j) d.at(i, j - 1) = static_cast<double>(j) * coefficient(i, j);
  }
  return d;
}

BivariatePoly operator+(const BivariatePoly& a, const BivariatePoly& b) {
  BivariatePoly out(std::max(a.deg_u_, b.deg_u_), std::max(a.deg_v_, b.deg_v_));
  for (size_t i = 0; i <= out.deg_u_; ++i) {
    for (size_t j = 0; j <= out.deg_v_; ++j) out.at(i, j) = a.coefficient(i, j) + b.coefficient(i, j);
  }
  return out;
}

BivariatePoly operator-(const BivariatePoly& a, const BivariatePoly& b) { return a + (-1.0) * b; }

BivariatePoly operator*(const BivariatePoly& a, const BivariatePoly& b) {
  BivariatePoly out(a.deg_u_ + b.deg_u_, a.deg_v_ + b.deg_v_);
  for (size_t i = 0; i <= a.deg_u_; ++i) {
    for (size_t j = 0; j <= a.deg_v_; ++j) {
      const double x = a.coefficient(i, j);
      if (x == 0.0) continue;
      for (size_t k = 0; k <= b.deg_u_; ++k) {
        for (size_t l = 0; l <= b.deg_v_; ++l) out.at(i + k, j + l) += x * b.coefficient(k, l);
      }
    }
  }
  return out;
}

BivariatePoly operator*(double s, const BivariatePoly& a) {
  BivariatePoly out = a;
  for (double& c : out.c_) c *= s;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// Root of p in [lo, hi] given p(lo), p(hi) of opposite sign.
double bracketed_root(const UnivariatePolynomial& p, const UnivariatePolynomial& dp, double lo, double hi,
                      int digits) {
  boost::uintmax_t max_iter = 200;
  try {
    return boost::math::tools::newton_raphson_iterate([&](double x) { return std::pair{p(x), dp(x)}; },
                                                      0.5 * (lo + hi), lo, hi, digits, max_iter);
  } catch (const boost::math::evaluation_error&) {
    // Newton stalls on a flat stretch; the bracket still holds a root.
    max_iter = 400;
    const auto [a, b] = boost::math::tools::toms748_solve([&](double x) { return p(x); }, lo, hi,
                                                          boost::math::tools::eps_tolerance<double>(digits), max_iter);
    return 0.5 * (a + b);
  }
}

std::vector<double> roots_low_degree(const UnivariatePolynomial& p, int n) {
  if (n == 1) return {-p.coefficient(0) / p.coefficient(1)};
  // n == 2, cancellation-free form.
  const double a = p.coefficient(2);
  const double b = p.coefficient(1);
  const double c = p.coefficient(0);
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    // A tangency lost to rounding still counts when the vertex value is at noise level.
    const double xv = -b / (2.0 * a);
    if (std::abs(p(xv)) <= 1e-12 * p.magnitude_at(xv)) return {xv};
    return {};
  }
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  std::vector<double> r;
  if (q != 0.0) r = {q / a, c / q};
  else r = {0.0, 0.0};
  std::sort(r.begin(), r.end());
  return r;
}


// Knots only need to separate monotone pieces, so the inner levels of the
// recursion run at reduced precision.
std::vector<double> real_roots_to(const UnivariatePolynomial& input, int digits) {
  const UnivariatePolynomial p = input.trimmed(0.0);
  const int n = p.degree();
  if (n <= 0) return {};
  if (n <= 2) return roots_low_degree(p, n);

  const UnivariatePolynomial dp = p.derivative();
  const std::vector<double> crit = real_roots_to(dp, 36);

  // Fujiwara bound on root magnitude, slightly widened.
  const double lead = p.coefficient(static_cast<size_t>(n));
  double bound = 0.0;
  for (int k = 1; k <= n; ++k) {
    double r = std::abs(p.coefficient(static_cast<size_t>(n - k)) / lead);
    if (k == n) r *= 0.5;
    bound = std::max(bound, std::pow(r, 1.0 / k));
  }
  bound = 2.0 * bound * (1.0 + 1e-9) + std::numeric_limits<double>::min();

  std::vector<double> knots;
  knots.reserve(crit.size() + 2);
  knots.push_back(-bound);
  for (double c : crit) {
    if (c > -bound && c < bound) knots.push_back(c);
  }
  knots.push_back(bound);

  std::vector<double> roots;
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double lo = knots[k];
    const double hi = knots[k + 1];
    const double plo = p(lo);
    const double phi = p(hi);
    if (plo == 0.0 || phi == 0.0) continue;  // handled at the knot below
    if ((plo < 0.0) != (phi < 0.0)) roots.push_back(bracketed_root(p, dp, lo, hi, digits));
  }
  for (size_t k = 1; k + 1 < knots.size(); ++k) {
    const double x = knots[k];
    if (std::abs(p(x)) <= 1e-12 * p.magnitude_at(x)) roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  // Merge duplicates produced by a knot root next to a bracketed one.
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty() && std::abs(r - merged.back()) <= 1e-12 * std::max(1.0, std::abs(r))) continue;
    merged.push_back(r);
  }
  return merged;
}

}  // namespace

std::vector<double> real_roots(const UnivariatePolynomial& p) { return real_roots_to(p, 52); }

}  // namespace rigidview
