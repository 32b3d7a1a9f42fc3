#include "atlas/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace atlas {

namespace {
constexpr double tie_tol = 1e-10;

bool same_vector(const Block& x, const Block& y) {
  for (size_t k = 0; k < x.lambda.size(); ++k)
    if (x.lambda[k] != y.lambda[k]) return false;
  return true;
}

// argument of z shifted into ]hi - width, hi]
double determination(Complex z, double hi) {
  double a = std::arg(z);
  return a + 2 * pi * std::floor((hi - a) / (2 * pi));
}
}  // namespace

ExponentPolynomialDiagonal::ExponentPolynomialDiagonal(std::vector<double> exponents, std::vector<Block> blocks)
    : exponents_(std::move(exponents)), blocks_(std::move(blocks)) {
  if (exponents_.empty()) throw input_error("exponents: at least one exponent is required");
  for (size_t k = 0; k < exponents_.size(); ++k) {
    if (!(exponents_[k] > 0) || !std::isfinite(exponents_[k]))
      throw input_error("exponents[" + std::to_string(k) + "]: exponents must be positive");
    if (k > 0 && !(exponents_[k] < exponents_[k - 1]))
      throw input_error("exponents[" + std::to_string(k) + "]: exponents must be strictly decreasing");
  }
  if (blocks_.empty()) throw input_error("blocks: at least one block is required");
  for (size_t i = 0; i < blocks_.size(); ++i) {
    auto& b = blocks_[i];
    if (b.size < 1) throw input_error("blocks[" + std::to_string(i) + "].size must be >= 1");
    if (b.lambda.size() != exponents_.size())
      throw input_error("blocks[" + std::to_string(i) + "].lambda must have one entry per exponent");
    for (size_t j = 0; j < i; ++j)
      if (same_vector(blocks_[j], b))
        throw input_error("blocks[" + std::to_string(i) + "]: coefficient vector equals blocks[" +
                          std::to_string(j) + "]; merge equal blocks");
    block_start_.push_back(dim_);
    for (int s = 0; s < b.size; ++s) entry_block_.push_back(static_cast<int>(i));
    dim_ += b.size;
  }
}

ExponentPolynomialDiagonal ExponentPolynomialDiagonal::constant_diagonal(const std::vector<Complex>& d) {
  std::vector<Block> blocks;
  for (auto v : d) {
    bool merged = false;
    for (auto& b : blocks)
      if (b.lambda[0] == v) {
        ++b.size;
        merged = true;
      }
    if (!merged) blocks.push_back({1, {v}, 0.0});
  }
  return ExponentPolynomialDiagonal({1.0}, blocks);
}

bool ExponentPolynomialDiagonal::has_log() const {
  for (auto& b : blocks_)
    if (b.log_coeff != 0.0) return true;
  return false;
}

Complex ExponentPolynomialDiagonal::lambda(int block, const CoverPoint& z) const {
  const auto& b = blocks_.at(block);
  Complex lz = z.log();
  Complex s = 0.0;
  for (size_t k = 0; k < exponents_.size(); ++k)
    if (b.lambda[k] != 0.0) s += exponents_[k] * b.lambda[k] * std::exp((exponents_[k] - 1) * lz);
  if (b.log_coeff != 0.0) s += b.log_coeff * std::exp(-lz);
  return s;
}

Complex ExponentPolynomialDiagonal::q(int block, const CoverPoint& z) const {
  const auto& b = blocks_.at(block);
  Complex lz = z.log();
  Complex s = 0.0;
  for (size_t k = 0; k < exponents_.size(); ++k)
    if (b.lambda[k] != 0.0) s += b.lambda[k] * std::exp(exponents_[k] * lz);
  if (b.log_coeff != 0.0) s += b.log_coeff * lz;
  return s;
}

Complex ExponentPolynomialDiagonal::q_difference(int bi, int bj, const CoverPoint& z) const {
  const auto& x = blocks_.at(bi);
  const auto& y = blocks_.at(bj);
  Complex lz = z.log();
  Complex s = 0.0;
  for (size_t k = 0; k < exponents_.size(); ++k) {
    Complex d = x.lambda[k] - y.lambda[k];
    if (d != 0.0) s += d * std::exp(exponents_[k] * lz);
  }
  Complex dl = x.log_coeff - y.log_coeff;
  if (dl != 0.0) s += dl * lz;
  return s;
}

Complex ExponentPolynomialDiagonal::lambda_difference(int bi, int bj, const CoverPoint& z) const {
  return lambda(bi, z) - lambda(bj, z);
}

CVector ExponentPolynomialDiagonal::diagonal(const CoverPoint& z) const {
  CVector v(dim_);
  for (int i = 0; i < block_count(); ++i) {
    Complex x = lambda(i, z);
    for (int s = 0; s < blocks_[i].size; ++s) v(block_start_[i] + s) = x;
  }
  return v;
}

CVector ExponentPolynomialDiagonal::q_entries(const CoverPoint& z) const {
  CVector v(dim_);
  for (int i = 0; i < block_count(); ++i) {
    Complex x = q(i, z);
    for (int s = 0; s < blocks_[i].size; ++s) v(block_start_[i] + s) = x;
  }
  return v;
}

LeadingPair leading_pair(const ExponentPolynomialDiagonal& L, int i, int j) {
  if (i == j) throw domain_error("leading_pair needs distinct blocks");
  const auto& bi = L.blocks().at(i);
  const auto& bj = L.blocks().at(j);
  for (size_t k = 0; k < L.exponents().size(); ++k) {
    Complex d = bi.lambda[k] - bj.lambda[k];
    if (d != 0.0) return {static_cast<int>(k), d, L.exponents()[k]};
  }
  throw input_error("blocks " + std::to_string(i) + " and " + std::to_string(j) + " have equal coefficients");
}

bool eta_is_generic(const ExponentPolynomialDiagonal& L, double eta) {
  for (int i = 0; i < L.block_count(); ++i)
    for (int j = i + 1; j < L.block_count(); ++j) {
      double a = std::arg(leading_pair(L, i, j).lambda);
      double r = (eta - a) / pi;
      if (std::abs(r - std::round(r)) < 1e-12) return false;
    }
  return true;
}

namespace {

struct Entry {
  double tau, sigma;
  std::pair<int, int> pair;
};

std::vector<RayLabel> label(std::vector<Entry> e) {
  std::sort(e.begin(), e.end(), [](const Entry& x, const Entry& y) {
    if (std::abs(x.tau - y.tau) > tie_tol) return x.tau < y.tau;
    if (std::abs(x.sigma - y.sigma) > tie_tol) return x.sigma > y.sigma;
    return x.pair < y.pair;
  });
  std::vector<RayLabel> out;
  for (auto& x : e) {
    if (!out.empty() && std::abs(out.back().tau - x.tau) <= tie_tol &&
        std::abs(out.back().sigma - x.sigma) <= tie_tol) {
      out.back().pairs.push_back(x.pair);
      continue;
    }
    out.push_back({x.tau, x.sigma, {x.pair}});
  }
  return out;
}

bool leading_generic(const ExponentPolynomialDiagonal& L) { return generic_check(L); }

}  // namespace

StokesRayFamily stokes_rays(const ExponentPolynomialDiagonal& L, double eta) {
  if (!eta_is_generic(L, eta)) {
    std::ostringstream os;
    os << "eta-on-ray: eta = " << eta << " coincides with a ray determination; perturb eta";
    throw input_error(os.str());
  }
  std::vector<Entry> e;
  for (int i = 0; i < L.block_count(); ++i)
    for (int j = 0; j < L.block_count(); ++j) {
      if (i == j) continue;
      auto lp = leading_pair(L, i, j);
      double a = determination(lp.lambda, eta);
      if (a > eta - pi && a < eta) e.push_back({(3 * pi / 2 - a) / lp.sigma, lp.sigma, {i, j}});
    }
  StokesRayFamily f;
  f.rays = label(std::move(e));
  f.eta = eta;
  f.generic = leading_generic(L);
  f.leading_sigma = L.exponents()[0];
  return f;
}

StokesRayFamily stokes_rays(const ExponentPolynomialDiagonal& L) {
  double eta = default_eta;
  for (int attempt = 0; attempt < 1000; ++attempt, eta += 1e-3)
    if (eta_is_generic(L, eta)) return stokes_rays(L, eta);
  throw input_error("eta-on-ray: no generic eta found after 1000 perturbations");
}

std::vector<RayDirection> all_ray_directions(const StokesRayFamily& f, double lo, double hi, bool inclusive) {
  std::vector<RayDirection> out;
  if (!(hi >= lo)) return out;
  for (int r = 0; r < f.mu(); ++r) {
    const auto& ray = f.rays[r];
    double step = pi / ray.sigma;
    long k0 = static_cast<long>(std::ceil((lo - ray.tau) / step - 1e-9));
    long k1 = static_cast<long>(std::floor((hi - ray.tau) / step + 1e-9));
    for (long k = k0; k <= k1; ++k) {
      double d = ray.tau + k * step;
      double eps = inclusive ? -1e-12 : 1e-12;
      if (d < lo + eps || d > hi - eps) continue;
      out.push_back({d, r, static_cast<int>(k)});
    }
  }
  std::sort(out.begin(), out.end(), [](const RayDirection& x, const RayDirection& y) {
    if (std::abs(x.direction - y.direction) > 1e-12) return x.direction < y.direction;
    return x.rho < y.rho;
  });
  return out;
}

KWindow k_window_for_directions(const StokesRayFamily& f, double lo, double hi) {
  KWindow w;
  for (auto& ray : f.rays) {
    double step = pi / ray.sigma;
    w.kmin.push_back(static_cast<int>(std::ceil((lo - ray.tau) / step - 1e-9)));
    w.kmax.push_back(static_cast<int>(std::floor((hi - ray.tau) / step + 1e-9)));
  }
  return w;
}

KWindow default_k_window(const StokesRayFamily& f, double center) {
  double m = 0.0;
  for (auto& ray : f.rays) m = std::max(m, 1.0 / ray.sigma);
  return k_window_for_directions(f, center - 4 * pi * m, center + 4 * pi * m);
}

std::vector<AdequateTuple> adequate_tuples(const StokesRayFamily& f, double width, const KWindow& w) {
  std::vector<AdequateTuple> out;
  int mu = f.mu();
  if (mu == 0 || !(width > 0)) return out;
  std::vector<int> k(mu);
  std::vector<double> d(mu);
  // depth-first with pruning on the spread of the chosen directions
  auto rec = [&](auto&& self, int r, double dmin, double dmax) -> void {
    if (r == mu) {
      AdequateTuple t{k, dmax - width, dmin};
      if (t.b - t.a > 1e-10) out.push_back(t);
      return;
    }
    double step = pi / f.rays[r].sigma;
    for (int kk = w.kmin[r]; kk <= w.kmax[r]; ++kk) {
      double dir = f.rays[r].tau + kk * step;
      double nmin = std::min(dmin, dir), nmax = std::max(dmax, dir);
      if (nmax - nmin >= width - 1e-10) continue;
      k[r] = kk;
      self(self, r + 1, nmin, nmax);
    }
  };
  rec(rec, 0, INFINITY, -INFINITY);
  return out;
}

std::vector<AdequateTuple> adequate_tuples(const StokesRayFamily& f, double width) {
  return adequate_tuples(f, width, default_k_window(f));
}

Sector sector_of_tuple(const AdequateTuple& t, double width, double a) { return Sector(t.a, t.b + width, a); }

bool generic_check(const ExponentPolynomialDiagonal& L) {
  for (int i = 0; i < L.block_count(); ++i)
    for (int j = i + 1; j < L.block_count(); ++j)
      if (L.blocks()[i].lambda[0] == L.blocks()[j].lambda[0]) return false;
  return true;
}

double generic_tau(const StokesRayFamily& f, long nu) {
  if (!f.generic) throw domain_error("generic sectors need a generic Lambda");
  long mu = f.mu();
  if (mu == 0) throw domain_error("no Stokes rays");
  long rho = ((nu % mu) + mu) % mu;
  long k = (nu - rho) / mu;
  return f.rays[rho].tau + k * pi / f.rays[rho].sigma;
}

Sector generic_sector(const StokesRayFamily& f, long nu, double a) {
  if (!f.generic) throw domain_error("generic sectors need a generic Lambda");
  double w = pi / f.leading_sigma;
  for (int r = 0; r < f.mu(); ++r) {
    double next = (r + 1 < f.mu()) ? f.rays[r + 1].tau : f.rays[0].tau + w;
    if (!(f.rays[r].tau < next)) throw domain_error("generic ray directions are not strictly ordered");
  }
  return Sector(generic_tau(f, nu - 1), generic_tau(f, nu) + w, a);
}

StokesRayFamily subdominant_rays(const ExponentPolynomialDiagonal& L, int j_o, double eta) {
  if (j_o < 0 || j_o >= L.block_count()) throw domain_error("subdominant block index out of range");
  std::vector<Entry> e;
  for (int i = 0; i < L.block_count(); ++i) {
    if (i == j_o) continue;
    auto lp = leading_pair(L, i, j_o);
    double a = determination(lp.lambda, eta);
    if (!(a < eta) || std::abs(a - eta) < 1e-12 || std::abs(a - (eta - 2 * pi)) < 1e-12) {
      throw input_error("eta-on-ray: eta coincides with a determination of arg lambda");
    }
    e.push_back({(3 * pi / 2 - a) / lp.sigma, lp.sigma, {i, j_o}});
  }
  StokesRayFamily f;
  f.rays = label(std::move(e));
  f.eta = eta;
  f.generic = leading_generic(L);
  f.leading_sigma = L.exponents()[0];
  f.j_o = j_o;
  return f;
}

StokesRayFamily subdominant_rays(const ExponentPolynomialDiagonal& L, int j_o) {
  double eta = default_eta;
  for (int attempt = 0; attempt < 1000; ++attempt, eta += 1e-3) {
    try {
      return subdominant_rays(L, j_o, eta);
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::Input) throw;
    }
  }
  throw input_error("eta-on-ray: no generic eta found after 1000 perturbations");
}

SubdominantSector subdominant_sector(const StokesRayFamily& rays, long k) {
  if (!rays.generic) throw domain_error("subdominant sectors are certified only for generic Lambda");
  SubdominantSector out;
  if (rays.mu() == 0) {
    out.reason = "no rays";
    return out;
  }
  double s = rays.leading_sigma;
  double period = 2 * pi / s;
  std::vector<double> t;
  for (auto& r : rays.rays) t.push_back(r.tau);
  std::sort(t.begin(), t.end());
  // choose the cyclic run of consecutive directions with the smallest spread
  size_t m = t.size();
  size_t best = 0;
  double best_spread = t[m - 1] - t[0];
  for (size_t i = 1; i < m; ++i) {
    double sp = t[i - 1] + period - t[i];
    if (sp < best_spread - 1e-12) {
      best_spread = sp;
      best = i;
    }
  }
  out.first = t[best];
  out.last = best == 0 ? t[m - 1] : t[best - 1] + period;
  out.spread = best_spread;
  if (!(best_spread < pi / s - 1e-12)) {
    std::ostringstream os;
    os << "spread of subdominant directions " << best_spread << " is not below " << pi / s;
    out.reason = os.str();
    return out;
  }
  double shift = k * period;
  out.sector = Sector(out.last - pi / s + shift, out.first + 2 * pi / s + shift);
  out.phi_interval = std::make_pair(out.last + pi / 2 + shift, out.first + pi / s + pi / 2 + shift);
  return out;
}

std::optional<std::pair<double, double>> subdominant_interval_diagnostic(const StokesRayFamily& rays,
                                                                         const std::vector<int>& k) {
  if (k.size() != rays.rays.size()) throw domain_error("k tuple length must match the ray count");
  double lo = -INFINITY, hi = INFINITY;
  for (size_t b = 0; b < k.size(); ++b) {
    double t = rays.rays[b].tau, s = rays.rays[b].sigma;
    lo = std::max(lo, t + 2 * k[b] * pi / s);
    hi = std::min(hi, t + 2 * k[b] * pi / s + pi);
    lo = std::max(lo, t + (2 * k[b] + 1) * pi / s - pi);
    hi = std::min(hi, t + (2 * k[b] + 1) * pi / s);
  }
  if (!(hi - lo > 1e-12)) return std::nullopt;
  return std::make_pair(lo, hi);
}

}  // namespace atlas
