#include "atlas/conditions.hpp"

#include <cmath>
#include <sstream>

namespace atlas {

const char* to_string(LClass c) {
  switch (c) {
    case LClass::L1: return "L1";
    case LClass::L2: return "L2";
    default: return "fails";
  }
}

double phase_real_integral(const ExponentPolynomialDiagonal& L, int i, int j, const OrientedLine& line,
                           const CoverPoint& w, const CoverPoint& z) {
  auto ord = line_order(line, w, z);
  if (ord == Ordering::Greater) throw domain_error("phase integral needs w <= z along the line");
  int bi = L.block_of(i), bj = L.block_of(j);
  if (bi == bj) return 0.0;
  return std::real(L.q_difference(bi, bj, z) - L.q_difference(bi, bj, w));
}

namespace {

// smallest integer k with lo < base + k*step < hi, if any
std::optional<int> first_k(double lo, double hi, double base, double step) {
  double k = std::floor((lo - base) / step) + 1;
  double v = base + k * step;
  if (v - lo < 1e-12) {
    k += 1;
    v = base + k * step;
  }
  if (v < hi - 1e-12) return static_cast<int>(k);
  return std::nullopt;
}

bool on_grid(double x, double base, double step) {
  double r = (x - base) / step;
  return std::abs(r - std::round(r)) * step < 1e-12;
}

}  // namespace

PhaseBoundData classify_direction(Complex lambda, double sigma, double tau) {
  if (lambda == 0.0) return {0, 0, tau, LClass::L2, std::nullopt};
  double eta = std::arg(lambda);
  double tau_star = (3 * pi / 2 - eta) / sigma;
  double step = pi / sigma;
  if (on_grid(tau, tau_star, step) || on_grid(tau + pi, tau_star, step)) {
    std::ostringstream os;
    os << "on-ray: direction " << tau << " (or its opposite) is a Stokes direction";
    throw domain_error(os.str());
  }
  PhaseBoundData out;
  out.tau = tau;
  auto k = first_k(tau, tau + pi, tau_star, step);
  if (!k) {
    out.classification = LClass::Fails;
    return out;
  }
  out.witness = k;
  auto f = [&](double th) { return std::cos(sigma * th + eta) / std::pow(std::sin(th - tau), sigma); };
  double f1 = f(tau + pi / 4), f2 = f(tau + pi / 2), f3 = f(tau + 3 * pi / 4);
  bool inc = f1 < f2 && f2 < f3;
  bool dec = f1 > f2 && f2 > f3;
  if (!inc && !dec) {
    // the derivative changes sign only at the boundary angles in the monotone case
    inc = f3 > f1;
  }
  // along the line z > w means arg z < arg w; increasing f keeps the real part bounded above
  out.classification = inc ? LClass::L1 : LClass::L2;
  return out;
}

PhaseBoundData classify_tau_star(double tau_star, double sigma, double tau) {
  Complex lambda = std::polar(1.0, 3 * pi / 2 - sigma * tau_star);
  return classify_direction(lambda, sigma, tau);
}

PhaseBoundData classify_pair(const ExponentPolynomialDiagonal& L, int bi, int bj, double tau) {
  PhaseBoundData out;
  if (bi == bj) {
    out.classification = LClass::L2;
  } else {
    auto lp = leading_pair(L, bi, bj);
    out = classify_direction(lp.lambda, lp.sigma, tau);
  }
  out.i = bi;
  out.j = bj;
  out.tau = tau;
  return out;
}

bool subdominant_condition(const ExponentPolynomialDiagonal& L, int j_o, double tau) {
  for (int i = 0; i < L.block_count(); ++i) {
    if (i == j_o) continue;
    auto lp = leading_pair(L, i, j_o);
    double s = lp.sigma;
    double t = (3 * pi / 2 - std::arg(lp.lambda)) / s;
    double step2 = 2 * pi / s;
    // tau < t + (2k+1)pi/s < tau + pi
    if (!first_k(tau, tau + pi, t + pi / s, step2)) return false;
    // tau - pi < t + 2k pi/s < tau
    if (!first_k(tau - pi, tau, t, step2)) return false;
    // t + 2k pi/s < tau < t + (2k+1) pi/s
    double r = (tau - t) / step2;
    double frac = (r - std::floor(r)) * step2;
    if (!(frac > 1e-12 && frac < pi / s - 1e-12)) return false;
  }
  return true;
}

namespace {

// integral of |R| over t = origin + s e^{i tau}, s from s0 to infinity (or from -infinity
// when two_sided), with s = s_c + rho sinh(u)
double contour_norm(const Perturbation& R, const StraightContour& c, bool two_sided, double rho,
                    const QuadratureConfig& q) {
  if (R.is_zero()) return 0.0;
  if (!(R.decay().delta > 0)) throw domain_error("divergence: perturbation is not integrable along lines");
  auto integrand = [&](double u) -> Complex {
    double s = rho * std::sinh(u);
    CoverPoint t = c.at(two_sided ? s : s);
    return inf_norm(R(t)) * rho * std::cosh(u);
  };
  // numeric tail slope check, guards black boxes that decay slower than declared
  {
    double s1 = rho * 1e3 + c.origin.modulus, s2 = rho * 1e6 + c.origin.modulus;
    double v1 = inf_norm(R(c.at(s1))), v2 = inf_norm(R(c.at(s2)));
    if (v1 > 0 && v2 > 0) {
      double slope = std::log(v2 / v1) / std::log(s2 / s1);
      if (slope >= -1.0 - 1e-4) throw domain_error("divergence: fitted tail exponent is >= -1");
    }
  }
  double lo = two_sided ? -8.0 : 0.0, hi = 8.0;
  double total = std::abs(integrate_gk(integrand, lo, hi, 1e-300, q.panel_tol, q.max_panels).value);
  double span = std::abs(c.origin.argument) + pi;
  auto tail = [&](double u) { return R.tail_bound(c.origin.modulus + rho * std::sinh(u), span); };
  while (hi < 700 && tail(hi) > q.tail_threshold * std::max(total, 1e-300)) {
    double nh = hi + 8.0;
    total += std::abs(integrate_gk(integrand, hi, nh, 1e-300, q.panel_tol, q.max_panels).value);
    if (two_sided) total += std::abs(integrate_gk(integrand, -nh, -hi, 1e-300, q.panel_tol, q.max_panels).value);
    hi = nh;
  }
  if (hi >= 700) throw domain_error("divergence: tail did not fall below the truncation threshold");
  return total;
}

}  // namespace

double good_decay_norm(const Perturbation& R, const OrientedLine& line, const QuadratureConfig& q) {
  StraightContour c{line.foot(), line.tau()};
  return contour_norm(R, c, true, line.b, q);
}

double iota_decay_norm(const Perturbation& R, const IotaCurve& curve, const QuadratureConfig& q) {
  switch (curve.kind()) {
    case IotaCase::Line: return good_decay_norm(R, OrientedLine(curve.phi, curve.b), q);
    case IotaCase::LowerLine: return good_decay_norm(R, OrientedLine(curve.phi - pi, -curve.b), q);
    default: {
      auto j = curve.junction();
      StraightContour c{*j, curve.phi - pi / 2};
      return contour_norm(R, c, false, curve.a, q);
    }
  }
}

DecayReport decay_supremum(const Perturbation& R, double phi_lo, double phi_hi, double a, int probes,
                           const QuadratureConfig& q, bool with_iota) {
  DecayReport rep;
  rep.delta = R.decay().delta;
  if (R.is_zero()) return rep;
  probes = std::max(probes, 2);
  const double bs[] = {1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0};
  for (int p = 0; p < probes; ++p) {
    double phi = phi_lo + (phi_hi - phi_lo) * p / (probes - 1);
    for (double f : bs) {
      double v = good_decay_norm(R, OrientedLine(phi, f * a), q);
      std::ostringstream os;
      os.precision(17);
      os << "line(phi=" << phi << ",b=" << f * a << ")";
      rep.norms.emplace_back(os.str(), v);
      rep.M_RaJ = std::max(rep.M_RaJ, v);
      if (f >= 2.0) rep.M_double_a = std::max(rep.M_double_a, v);
    }
    if (with_iota) {
      const double ib[] = {-4.0, -2.0, -1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0, 2.0, 4.0};
      for (double f : ib) {
        double v = iota_decay_norm(R, IotaCurve{phi, a, f * a}, q);
        std::ostringstream os;
        os.precision(17);
        os << "iota(phi=" << phi << ",a=" << a << ",b=" << f * a << ")";
        rep.norms.emplace_back(os.str(), v);
        rep.M_tilde = std::max(rep.M_tilde, v);
      }
    }
  }
  return rep;
}

}  // namespace atlas
