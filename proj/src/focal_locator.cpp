#include "rigidview/focal_locator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <tuple>

#include "rigidview/epipolar_predictor.hpp"
#include "rigidview/error.hpp"

namespace rigidview {

namespace {

using Homogeneous = std::array<BivariatePoly, 3>;

// Auxiliary point (v_X - 1, u_X - 1, u_X v_X - 1) with u_X = p0 + p1 u and
// v_X = q0 + q1 v.
Homogeneous auxiliary_point(const TracedLine& t) {
  return {BivariatePoly::bilinear(t.q0 - 1.0, 0.0, t.q1, 0.0),
          BivariatePoly::bilinear(t.p0 - 1.0, t.p1, 0.0, 0.0),
          BivariatePoly::bilinear(t.p0 * t.q0 - 1.0, t.p1 * t.q0, t.p0 * t.q1, t.p1 * t.q1)};
}

Homogeneous cross3(const Homogeneous& a, const Homogeneous& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Line through (x, y, 1) and the auxiliary point.
Homogeneous traced_line(const TracedLine& t) {
  const Homogeneous k{BivariatePoly::constant(t.known.x), BivariatePoly::constant(t.known.y),
                      BivariatePoly::constant(1.0)};
  return cross3(k, auxiliary_point(t));
}

UnivariatePolynomial strip_unit_root(UnivariatePolynomial p, int times) {
  if (p.is_zero()) return p;
  for (int i = 0; i < times; ++i) p = p.deflate(1.0);
  return p;
}

// Golden-section minimum of |p| on [a, b].
double argmin_abs(const UnivariatePolynomial& p, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = std::abs(p(x1));
  double f2 = std::abs(p(x2));
  for (int i = 0; i < 80 && b - a > 1e-14 * (1.0 + std::abs(a)); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = std::abs(p(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = std::abs(p(x2));
    }
  }
  return 0.5 * (a + b);
}

double bisect(const UnivariatePolynomial& p, double a, double b, double fa) {
  while (b - a > 1e-12) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = p(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Grid scan on [lo, hi] with n steps; x_i computed from i to avoid drift.
std::vector<ScannedRoot> scan_grid(const UnivariatePolynomial& p, double lo, double hi, size_t n, double tan_tol) {
  std::vector<ScannedRoot> roots;
  const double h = (hi - lo) / static_cast<double>(n);
  auto x_at = [&](size_t i) { return i == n ? hi : lo + h * static_cast<double>(i); };
  double x_prev2 = 0.0;
  double f_prev2 = 0.0;
  double x_prev = x_at(0);
  double f_prev = p(x_prev);
  if (f_prev == 0.0) roots.push_back({x_prev, false});
  for (size_t i = 1; i <= n; ++i) {
    const double x = x_at(i);
    const double f = p(x);
    if (f == 0.0) {
      roots.push_back({x, false});
    } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
      roots.push_back({bisect(p, x_prev, x, f_prev), false});
    } else if (i >= 2 && f_prev != 0.0 && f_prev2 != 0.0 && (f < 0.0) == (f_prev < 0.0) &&
               (f_prev < 0.0) == (f_prev2 < 0.0) && std::abs(f_prev) <= std::abs(f) &&
               std::abs(f_prev) <= std::abs(f_prev2)) {
      const double xm = argmin_abs(p, x_prev2, x);
      const double fm = p(xm);
      if (fm != 0.0 && (fm < 0.0) != (f < 0.0)) {
        // Two simple roots inside one window.
        roots.push_back({bisect(p, x_prev2, xm, f_prev2), false});
        roots.push_back({bisect(p, xm, x, fm), false});
      } else if (std::abs(fm) <= tan_tol * p.magnitude_at(xm)) {
        roots.push_back({xm, true});
      }
    }
    x_prev2 = x_prev;
    f_prev2 = f_prev;
    x_prev = x;
    f_prev = f;
  }
  return roots;
}

// Reduced equation as a 3x3 grid, evaluated with both partials in one pass.
struct Biquadratic {
  std::array<double, 9> c{};

  explicit Biquadratic(const BivariatePoly& p) {
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) c[i * 3 + j] = p.coefficient(i, j);
  }
  // Coefficients of t^2, t, 1 at fixed s.
  std::array<double, 3> in_t(double s) const {
    const double sp[3] = {1.0, s, s * s};
    std::array<double, 3> k{};
    for (int j = 0; j < 3; ++j) k[2 - j] = c[j] * sp[0] + c[3 + j] * sp[1] + c[6 + j] * sp[2];
    return k;
  }
  void eval(double s, double t, double& f, double& fs, double& ft) const {
    const double sp[3] = {1.0, s, s * s}, tp[3] = {1.0, t, t * t};
    const double dsp[3] = {0.0, 1.0, 2.0 * s}, dtp[3] = {0.0, 1.0, 2.0 * t};
    f = fs = ft = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double k = c[i * 3 + j];
        f += k * sp[i] * tp[j];
        fs += k * dsp[i] * tp[j];
        ft += k * sp[i] * dtp[j];
      }
  }
};

// Newton on (e1, e2) = 0, keeping a step only while it lowers the residual
// and stays within a small neighborhood of the starting root.
std::pair<double, double> polish(const Biquadratic& e1, const Biquadratic& e2, double s, double t, int steps) {
  const double s0 = s, t0 = t;
  const double reach_s = 5e-2 * (1.0 + std::abs(s)), reach_t = 5e-2 * (1.0 + std::abs(t));
  double a, as, at, b, bs, bt;
  e1.eval(s, t, a, as, at);
  e2.eval(s, t, b, bs, bt);
  double r = a * a + b * b;
  for (int i = 0; i < steps && r > 0.0; ++i) {
    const double det = as * bt - at * bs;
    if (det == 0.0 || !std::isfinite(det)) break;
    const double ns = s - (a * bt - b * at) / det;
    const double nt = t - (as * b - bs * a) / det;
    if (!(std::abs(ns - s0) <= reach_s && std::abs(nt - t0) <= reach_t)) break;
    double na, nas, nat, nb, nbs, nbt;
    e1.eval(ns, nt, na, nas, nat);
    e2.eval(ns, nt, nb, nbs, nbt);
    const double nr = na * na + nb * nb;
    if (!(nr < r)) break;
    s = ns;
    t = nt;
    a = na, as = nas, at = nat, b = nb, bs = nbs, bt = nbt;
    r = nr;
  }
  return {s, t};
}

struct ExtraPoint {
  std::string label;
  Frame1Coordinates coords;
  Point2D image2;
};

}  // namespace

Point2D trace_to_point(double u, double v) {
  const double denom = u * v - 1.0;
  if (std::abs(denom) <= tolerance::kDegeneracy * (1.0 + std::abs(u * v))) {
    throw Error(ErrorKind::DegenerateTraces, "u*v = 1: trace lines are parallel");
  }
  return {(v - 1.0) / denom, (u - 1.0) / denom};
}

TraceParams point_to_traces(Point2D x) {
  // X P'' with P'' = (0,1) meets y = 0 at x/(1-y); X Q'' meets x = 0 at y/(1-x).
  if (std::abs(x.x) <= tolerance::kDegeneracy || std::abs(x.y) <= tolerance::kDegeneracy) {
    throw Error(ErrorKind::DegenerateTraces, "point lies on a canonical axis");
  }
  return {(1.0 - x.y) / x.x, (1.0 - x.x) / x.y};
}

ChainedTraces chained_traces(double u, double v, const FrameQuotients& q) {
  auto chain = [&](double qp, double qq) { return TraceParams{(1.0 - qp) + qp * u, (1.0 - qq) + qq * v}; };
  return {chain(q.cp, q.cq), chain(q.ep, q.eq), chain(q.gp, q.gq)};
}

BivariatePoly concurrency_poly(const TracedLine& first, const TracedLine& second, const TracedLine& third) {
  const Homogeneous l1 = traced_line(first);
  const Homogeneous m = cross3(traced_line(second), traced_line(third));
  return l1[0] * m[0] + l1[1] * m[1] + l1[2] * m[2];
}

double EliminatedQuadratic::vstar(double u) const {
  const double lead = c2_reduced(u);
  if (std::abs(lead) <= 1e-12 * c2_reduced.magnitude_at(u) || lead == 0.0) {
    throw Error(ErrorKind::LeadingCoefficientVanishes, "c2(u) vanishes at u = " + std::to_string(u));
  }
  return c0_reduced(u) / lead;
}

EliminatedQuadratic eliminate_v(const BivariatePoly& eq1, const BivariatePoly& eq2) {
  std::array<UnivariatePolynomial, 4> a, b;
  for (size_t j = 0; j < 4; ++j) {
    a[j] = eq1.v_coefficient(j);
    b[j] = eq2.v_coefficient(j);
  }
  EliminatedQuadratic out;
  out.c0 = b[3] * a[0] - a[3] * b[0];
  out.c1 = b[3] * a[1] - a[3] * b[1];
  out.c2 = b[3] * a[2] - a[3] * b[2];
  // Every a_j and b_j carries one (u - 1), so each c_i carries two.
  out.c0_reduced = strip_unit_root(out.c0, 2);
  out.c2_reduced = strip_unit_root(out.c2, 2);
  return out;
}

UnivariatePolynomial final_polynomial(const BivariatePoly& eq, const EliminatedQuadratic& quad) {
  const int n = eq.degree_v();
  if (n < 0) return {};
  std::vector<UnivariatePolynomial> a(static_cast<size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) a[j] = eq.v_coefficient(static_cast<size_t>(j));
  UnivariatePolynomial sum;
  for (int j = 0; j <= n; ++j) {
    sum = sum + strip_unit_root(a[j], 1) * pow(quad.c0_reduced, static_cast<unsigned>(j)) *
                    pow(quad.c2_reduced, static_cast<unsigned>(n - j));
  }
  // The sum itself keeps a (u - 1)^2 factor on top of the stripped ones.
  return strip_unit_root(sum, 2).normalized();
}

BivariatePoly reduced_concurrency_poly(const TracedLine& first, const TracedLine& second, const TracedLine& third) {
  // Fixed-size arithmetic: this runs once per basis selection in the matcher.
  using Bilinear = std::array<std::array<double, 2>, 2>;
  using Line = std::array<Bilinear, 3>;
  auto line = [](const TracedLine& x) {
    // K x aux with K = (kx, ky, 1) and aux = (q1 t, p1 s, p1 s + q1 t + p1 q1 s t).
    const Bilinear ax{{{0.0, x.q1}, {0.0, 0.0}}};
    const Bilinear ay{{{0.0, 0.0}, {x.p1, 0.0}}};
    const Bilinear aw{{{0.0, x.q1}, {x.p1, x.p1 * x.q1}}};
    Line l{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        l[0][i][j] = x.known.y * aw[i][j] - ay[i][j];
        l[1][i][j] = ax[i][j] - x.known.x * aw[i][j];
        l[2][i][j] = x.known.x * ay[i][j] - x.known.y * ax[i][j];
      }
    return l;
  };
  using Biquad = std::array<std::array<double, 3>, 3>;
  auto mul = [](const Bilinear& a, const Bilinear& b) {
    Biquad out{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) out[i + k][j + l] += a[i][j] * b[k][l];
    return out;
  };
  const Line l1 = line(first), l2 = line(second), l3 = line(third);
  std::array<Biquad, 3> m{};
  for (int c = 0; c < 3; ++c) {
    const Biquad p = mul(l2[(c + 1) % 3], l3[(c + 2) % 3]);
    const Biquad q = mul(l2[(c + 2) % 3], l3[(c + 1) % 3]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[c][i][j] = p[i][j] - q[i][j];
  }
  std::array<std::array<double, 4>, 4> full{};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) full[i + k][j + l] += l1[c][i][j] * m[c][k][l];
  // Row s^0 and column t^0 vanish identically, and so does the s t term.
  BivariatePoly out(2, 2);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 3; ++j) out.at(i, j) = (i == 0 && j == 0) ? 0.0 : full[i + 1][j + 1];
  return out;
}

double ReducedElimination::tstar(double s) const {
  const double lead = c1(s);
  if (lead == 0.0 || std::abs(lead) <= 1e-12 * c1.magnitude_at(s)) {
    throw Error(ErrorKind::LeadingCoefficientVanishes, "c1 vanishes at u = " + std::to_string(1.0 + s));
  }
  return -s * c0(s) / lead;
}

ReducedElimination eliminate_reduced(const BivariatePoly& e1, const BivariatePoly& e2) {
  auto drop_s = [](const UnivariatePolynomial& p) {
    const auto& c = p.coefficients();
    return c.size() <= 1 ? UnivariatePolynomial{} : UnivariatePolynomial(std::vector<double>(c.begin() + 1, c.end()));
  };
  const UnivariatePolynomial a0 = drop_s(e1.v_coefficient(0)), a1 = e1.v_coefficient(1), a2 = e1.v_coefficient(2);
  const UnivariatePolynomial b0 = drop_s(e2.v_coefficient(0)), b1 = e2.v_coefficient(1), b2 = e2.v_coefficient(2);
  ReducedElimination out;
  out.c0 = b2 * a0 - a2 * b0;
  out.c1 = b2 * a1 - a2 * b1;
  const UnivariatePolynomial s = UnivariatePolynomial::linear(0.0, 1.0);
  out.final_poly = (a0 * out.c1 * out.c1 - a1 * out.c0 * out.c1 + s * a2 * out.c0 * out.c0).normalized();
  return out;
}

std::vector<ScannedRoot> solve_u(const UnivariatePolynomial& p, const ScanOptions& scan) {
  if (!(scan.hi > scan.lo) || !(scan.step > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "scan needs lo < hi and a positive step");
  }
  std::vector<ScannedRoot> roots;
  if (p.is_zero()) throw Error(ErrorKind::NoRootInInterval, "polynomial vanishes identically");
  const auto n = static_cast<size_t>(std::ceil((scan.hi - scan.lo) / scan.step));
  roots = scan_grid(p, scan.lo, scan.hi, std::max<size_t>(n, 1), scan.tangency_rel_tol);

  if (scan.include_tail && p.degree() > 0) {
    // Roots beyond the window are roots of x^n p(1/x) near zero. The u-step
    // at the window edge maps to a w-step of step / R^2.
    const double reach = std::max(std::abs(scan.lo), std::abs(scan.hi));
    const double w_max = 1.0 / reach;
    const double w_step = scan.step / (reach * reach);
    const auto m = std::min<size_t>(static_cast<size_t>(std::ceil(2.0 * w_max / w_step)), 400000);
    const UnivariatePolynomial q = p.reversed();
    for (const ScannedRoot& r : scan_grid(q, -w_max, w_max, std::max<size_t>(m, 2), scan.tangency_rel_tol)) {
      if (r.u == 0.0) continue;
      const double u = 1.0 / r.u;
      if (u < scan.lo || u > scan.hi) roots.push_back({u, r.tangent});
    }
  }
  if (roots.empty()) {
    std::ostringstream msg;
    msg << "no root of the final polynomial in [" << scan.lo << ", " << scan.hi << "]";
    throw Error(ErrorKind::NoRootInInterval, msg.str());
  }
  std::sort(roots.begin(), roots.end(), [](const ScannedRoot& x, const ScannedRoot& y) { return x.u < y.u; });
  return roots;
}

Point2D least_squares_intersection(const std::vector<Line2D>& lines) {
  double saa = 0.0, sab = 0.0, sbb = 0.0, sac = 0.0, sbc = 0.0;
  for (const Line2D& l : lines) {
    saa += l.a() * l.a();
    sab += l.a() * l.b();
    sbb += l.b() * l.b();
    sac += l.a() * l.c();
    sbc += l.b() * l.c();
  }
  const double det = saa * sbb - sab * sab;
  const double tr = saa + sbb;
  if (lines.size() < 2 || std::abs(det) <= tolerance::kDegeneracy * tr * tr) {
    throw Error(ErrorKind::ParallelLines, "lines are (nearly) parallel");
  }
  return {(-sac * sbb + sbc * sab) / det, (-sbc * saa + sac * sab) / det};
}

namespace {

// Everything about a polished (s, t) but the extra-point residual; returns
// the rejection reason for an invalid one.
std::optional<std::string> finish_candidate(RootCandidate& cand, double s, double t, const FocalAnalysis& an,
                                            const std::array<Point2D, 7>& basis, const FocalOptions& options) {
  const double tol = options.degenerate_rel_tol;
  cand.u = 1.0 + s;
  cand.v = 1.0 + t;
  if (std::abs(s) <= tol * (1.0 + std::abs(cand.u))) return "u = 1: auxiliary points collapse onto Q''";
  if (std::abs(t) <= tol * (1.0 + std::abs(cand.v))) return "v = 1: auxiliary points collapse onto P''";

  const FrameQuotients& q = an.quotients;
  const AffineMap2D to_frame = an.to_canonical.inverse();
  const std::array<std::pair<double, double>, 4> traces{
      {{s, t}, {q.cp * s, q.cq * t}, {q.ep * s, q.eq * t}, {q.gp * s, q.gq * t}}};
  std::array<Point2D, 4> aux;
  for (size_t k = 0; k < 4; ++k) {
    const auto [sx, tx] = traces[k];
    const double denom = sx + tx + sx * tx;
    if (std::abs(denom) <= tolerance::kDegeneracy * (std::abs(sx) + std::abs(tx) + std::abs(sx * tx))) {
      return "auxiliary point at infinity (u v = 1)";
    }
    aux[k] = to_frame.apply({tx / denom, sx / denom});
  }
  cand.b = aux[0];
  cand.d = aux[1];
  cand.f = aux[2];
  cand.h = aux[3];
  std::vector<Line2D> lines;
  lines.reserve(4);
  for (size_t k = 0; k < 4; ++k) {
    const Point2D known = basis[3 + k];  // A, C, E, G
    if (!(distance(known, aux[k]) > tolerance::kCollinear * an.frame_scale)) {
      return "auxiliary point coincides with its image point";
    }
    const Point2D d = aux[k] - known;
    lines.push_back(Line2D::from_coefficients(-d.y, d.x, d.y * known.x - d.x * known.y));
  }
  double saa = 0.0, sab = 0.0, sbb = 0.0, sac = 0.0, sbc = 0.0;
  for (const Line2D& l : lines) {
    saa += l.a() * l.a();
    sab += l.a() * l.b();
    sbb += l.b() * l.b();
    sac += l.a() * l.c();
    sbc += l.b() * l.c();
  }
  const double det = saa * sbb - sab * sab;
  if (!(std::abs(det) > tolerance::kDegeneracy * (saa + sbb) * (saa + sbb))) return "lines AB, CD, EF, GH are parallel";
  cand.f1pp = {(-sac * sbb + sbc * sab) / det, (-sbc * saa + sac * sab) / det};
  cand.concurrency_residual = 0.0;
  for (const Line2D& l : lines) {
    cand.concurrency_residual = std::max(cand.concurrency_residual, point_line_distance(cand.f1pp, l));
  }
  if (!std::isfinite(cand.f1pp.x) || !std::isfinite(cand.f1pp.y) ||
      !(cand.concurrency_residual <= options.residual_rel_gate * an.frame_scale)) {
    return "lines AB, CD, EF, GH are not concurrent";
  }
  return std::nullopt;
}

// Kept free of exceptions: the matcher runs this for tens of thousands of
// mostly spurious roots. t from the eliminant is tried first; it degrades
// when c1 shares the root, as in tight root clusters, so the roots of the
// quadratics e1(s, .) and e2(s, .) are fallback seeds. A residual alone
// cannot rank seeds since the spurious factors are common zeros too.
std::optional<std::string> build_candidate(RootCandidate& cand, double s, const FocalAnalysis& an,
                                           const std::array<Point2D, 7>& basis, const Biquadratic& e1,
                                           const Biquadratic& e2, const FocalOptions& options) {
  cand.u = 1.0 + s;
  if (std::abs(s) <= options.degenerate_rel_tol * (1.0 + std::abs(cand.u)))
    return "u = 1: auxiliary points collapse onto Q''";
  std::array<double, 5> seeds;
  size_t n = 0;
  const double lead = an.elimination.c1(s);
  if (lead != 0.0 && std::abs(lead) > 1e-12 * an.elimination.c1.magnitude_at(s))
    seeds[n++] = -s * an.elimination.c0(s) / lead;
  for (const Biquadratic* e : {&e1, &e2}) {
    const auto [k2, k1, k0] = e->in_t(s);
    if (k2 != 0.0) {
      const double disc = k1 * k1 - 4.0 * k2 * k0;
      if (disc >= 0.0) {
        const double qq = -0.5 * (k1 + std::copysign(std::sqrt(disc), k1));
        seeds[n++] = qq / k2;
        if (qq != 0.0) seeds[n++] = k0 / qq;
      } else {
        seeds[n++] = -k1 / (2.0 * k2);
      }
    } else if (k1 != 0.0) {
      seeds[n++] = -k0 / k1;
    }
  }
  std::optional<RootCandidate> first;
  std::optional<std::string> first_why;
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(seeds[i])) continue;
    const auto [ps, pt] = polish(e1, e2, s, seeds[i], options.newton_polish_steps);
    auto why = finish_candidate(cand, ps, pt, an, basis, options);
    if (!why) return std::nullopt;
    if (!first) first = cand, first_why = std::move(why);
  }
  if (!first) {
    cand.v = std::numeric_limits<double>::quiet_NaN();
    return "v is undetermined";
  }
  cand = *first;
  return first_why;
}

void select_candidate(FocalAnalysis& an) {
  auto key = [](const RootCandidate& x) {
    return std::tuple{x.extra_point_residual, x.concurrency_residual, std::abs(x.u)};
  };
  an.selected.reset();
  for (size_t i = 0; i < an.candidates.size(); ++i) {
    const RootCandidate& c = an.candidates[i];
    if (c.valid && (!an.selected || key(c) < key(an.candidates[*an.selected]))) an.selected = i;
  }
}

}  // namespace

FocalAnalysis analyze_focal_basis(const FrameQuotients& quotients, const std::array<Point2D, 7>& basis,
                                  const FocalOptions& options) {
  FocalAnalysis out;
  out.quotients = quotients;
  const Point2D r2 = basis[0], p2 = basis[1], q2 = basis[2];
  out.to_canonical = canonical_frame_map(r2, q2, p2);
  out.frame_scale = coordinate_scale({basis[0], basis[1], basis[2], basis[3], basis[4], basis[5], basis[6]});

  const FrameQuotients& q = out.quotients;
  const TracedLine la = TracedLine::through_b(out.to_canonical.apply(basis[3]));
  const TracedLine lc = TracedLine::chained(out.to_canonical.apply(basis[4]), q.cp, q.cq);
  const TracedLine le = TracedLine::chained(out.to_canonical.apply(basis[5]), q.ep, q.eq);
  const TracedLine lg = TracedLine::chained(out.to_canonical.apply(basis[6]), q.gp, q.gq);
  out.reduced_ace = reduced_concurrency_poly(la, lc, le);
  out.reduced_acg = reduced_concurrency_poly(la, lc, lg);

  auto weight = [](const TracedLine& l) {
    const double m = std::max({1.0, std::abs(l.p1), std::abs(l.q1)});
    return (1.0 + std::abs(l.known.x) + std::abs(l.known.y)) * m * m;
  };
  const double ref = weight(la) * weight(lc);
  if (out.reduced_ace.max_abs_coefficient() <= 1e-10 * ref * weight(le) ||
      out.reduced_acg.max_abs_coefficient() <= 1e-10 * ref * weight(lg)) {
    throw Error(ErrorKind::DegenerateConfiguration, "concurrency condition holds identically");
  }
  out.elimination = eliminate_reduced(out.reduced_ace, out.reduced_acg);
  const UnivariatePolynomial& final_s = out.elimination.final_poly;
  if (final_s.degree() <= 0) {
    throw Error(ErrorKind::DegenerateConfiguration, "eliminated polynomial carries no information");
  }

  // Roots are found in s and reported in u.
  std::vector<ScannedRoot> roots;
  if (options.search == RootSearch::Scan) {
    ScanOptions shifted = options.scan;
    shifted.lo -= 1.0;
    shifted.hi -= 1.0;
    try {
      roots = solve_u(final_s, shifted);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoRootInInterval) throw;
    }
  } else {
    for (double r : real_roots(final_s)) roots.push_back({r, false});
  }

  const Biquadratic e1(out.reduced_ace), e2(out.reduced_acg);
  auto add_candidates = [&](const std::vector<ScannedRoot>& found) {
    for (const ScannedRoot& root : found) {
      RootCandidate cand;
      cand.tangent = root.tangent;
      if (auto why = build_candidate(cand, root.u, out, basis, e1, e2, options)) {
        cand.rejection = std::move(*why);
      } else {
        cand.valid = true;
      }
      // Nearby roots (a double root split by rounding) polish to one point.
      const bool repeated = std::any_of(out.candidates.begin(), out.candidates.end(), [&](const RootCandidate& c) {
        return std::abs(c.u - cand.u) <= 1e-9 * (1.0 + std::abs(cand.u)) &&
               std::abs(c.v - cand.v) <= 1e-9 * (1.0 + std::abs(cand.v));
      });
      if (!repeated) out.candidates.push_back(std::move(cand));
    }
  };
  add_candidates(roots);
  const auto any_valid = [&] {
    return std::any_of(out.candidates.begin(), out.candidates.end(), [](const RootCandidate& c) { return c.valid; });
  };
  // A grid step can hide a cluster of three roots behind one sign change.
  if (options.search == RootSearch::Scan && options.isolate_on_scan_failure && !any_valid()) {
    std::vector<ScannedRoot> isolated;
    for (double r : real_roots(final_s)) isolated.push_back({r, false});
    add_candidates(isolated);
    std::stable_sort(out.candidates.begin(), out.candidates.end(),
                     [](const RootCandidate& x, const RootCandidate& y) { return x.u < y.u; });
    out.used_isolation_fallback = true;
  }
  select_candidate(out);
  return out;
}

FocalAnalysis analyze_focal(const LabeledFrame& frame1, const LabeledFrame& frame2, const FocalOptions& options) {
  std::array<Point2D, 7> basis;
  for (size_t i = 0; i < 7; ++i) {
    (void)frame1.at(basis_labels()[i]);
    basis[i] = frame2.at(basis_labels()[i]);
  }
  FocalAnalysis out = analyze_focal_basis(frame1_quotients(frame1), basis, options);
  if (!options.disambiguate_with_extra_points) return out;

  std::vector<ExtraPoint> extras;
  const auto& labels = basis_labels();
  for (const auto& label : frame1.labels()) {
    if (std::find(labels.begin(), labels.end(), label) != labels.end()) continue;
    if (const auto z2 = frame2.find(label)) extras.push_back({label, frame1_coordinates(frame1.at(label), frame1), *z2});
  }
  if (extras.empty()) return out;
  const Frame2Plane plane{basis[1], basis[2], basis[0]};
  for (RootCandidate& cand : out.candidates) {
    if (!cand.valid) continue;
    for (const ExtraPoint& x : extras) {
      try {
        const PredictedLine pl = predict_from_coordinates(x.coords, plane, cand.f1pp, cand.b, cand.d);
        cand.extra_point_residual += line_residual(x.image2, pl);
      } catch (const Error&) {
        cand.extra_point_residual = std::numeric_limits<double>::infinity();
      }
    }
  }
  select_candidate(out);
  return out;
}

FocalSolution to_solution(const FocalAnalysis& analysis) {
  if (!analysis.selected) {
    std::ostringstream msg;
    msg << analysis.candidates.size() << " root(s) of the final polynomial, none valid";
    for (const RootCandidate& c : analysis.candidates) msg << "; u=" << c.u << ": " << c.rejection;
    throw Error(ErrorKind::NoValidRoot, msg.str());
  }
  const RootCandidate& c = analysis.candidates[*analysis.selected];
  FocalSolution s;
  s.f1pp = c.f1pp;
  s.b = c.b;
  s.d = c.d;
  s.f = c.f;
  s.h = c.h;
  s.u_root = c.u;
  s.v_root = c.v;
  s.concurrency_residual = c.concurrency_residual;
  s.all_roots = analysis.candidates;
  return s;
}

FocalSolution locate_projected_focal(const LabeledFrame& frame1, const LabeledFrame& frame2,
                                     const FocalOptions& options) {
  return to_solution(analyze_focal(frame1, frame2, options));
}

}  // namespace rigidview
