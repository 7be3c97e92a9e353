#include "induced/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace induced {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_data(const CauchyData& data) {
  if (data.x.size() == 0 || data.x.size() != data.v.size()) {
    throw Error(ErrorCode::DegenerateData, "Cauchy data needs equally many positions and velocities");
  }
  if (!data.x.allFinite() || !data.v.allFinite()) throw Error(ErrorCode::DegenerateData, "Cauchy data is not finite");
  for (Index i = 0; i < data.x.size(); ++i) {
    for (Index j = i + 1; j < data.x.size(); ++j) {
      if (data.x[i] == data.x[j]) throw Error(ErrorCode::DegenerateData, "coincident positions in Cauchy data");
    }
  }
}

CVector velocities(Dispersion d, const CVector& p) {
  CVector out(p.size());
  for (Index j = 0; j < p.size(); ++j) out[j] = velocity(d, p[j]);
  return out;
}

// The factor that vanishes at x (the whole f for unfactorized models).
Jet root_jet(const ModelSpec& model, const PhasePoint& point, double x, int order) {
  if (!is_factorized(model)) return jet(model, point, x, order);
  std::optional<Jet> best;
  double best_ratio = kInf;
  for (int f = 0; f < factor_count(model); ++f) {
    Jet j = jet(model, point, x, order, f);
    const double ratio = std::abs(j.value) / std::max(std::abs(j.grad.sum()), std::numeric_limits<double>::min());
    if (!best || ratio < best_ratio) {
      best_ratio = ratio;
      best = std::move(j);
    }
  }
  return *best;
}

// Real parameters: (q_i, p_i) at fixed indices, (Re q_i, Im q_i, Re p_i, Im p_i)
// for the lower index of each pair.
struct Layout {
  std::vector<Index> pairing;
  std::vector<int> epsilon;
  std::vector<std::optional<int>> factor;  // per data root; empty means the full f

  Index n() const { return static_cast<Index>(pairing.size()); }

  RVector pack(const PhasePoint& pt) const {
    std::vector<double> out;
    for (Index i = 0; i < n(); ++i) {
      const Index j = pairing[static_cast<size_t>(i)];
      if (j == i) {
        out.push_back(pt.q[i].real());
        out.push_back(pt.p[i].real());
      } else if (i < j) {
        out.insert(out.end(), {pt.q[i].real(), pt.q[i].imag(), pt.p[i].real(), pt.p[i].imag()});
      }
    }
    return Eigen::Map<RVector>(out.data(), static_cast<Index>(out.size()));
  }

  PhasePoint unpack(const RVector& v) const {
    CVector q(n()), p(n());
    Index k = 0;
    for (Index i = 0; i < n(); ++i) {
      const Index j = pairing[static_cast<size_t>(i)];
      if (j == i) {
        q[i] = v[k++];
        p[i] = v[k++];
      } else if (i < j) {
        q[i] = Complex(v[k], v[k + 1]);
        p[i] = Complex(v[k + 2], v[k + 3]);
        q[j] = std::conj(q[i]);
        p[j] = std::conj(p[i]);
        k += 4;
      }
    }
    return PhasePoint::make(q, p, pairing, epsilon);
  }
};

// Dimensionless residual: root offsets f / f_x and velocity mismatches.
RVector normalized_residual(const ModelSpec& model, Dispersion d, const PhasePoint& point, const CauchyData& data,
                            const std::vector<std::optional<int>>& factor = {}) {
  const Index n = data.x.size();
  const CVector h1 = velocities(d, point.p);
  RVector r(2 * n);
  for (Index i = 0; i < n; ++i) {
    const Jet j = jet(model, point, data.x[i], 1, factor.empty() ? std::nullopt : factor[static_cast<size_t>(i)]);
    const Complex s = j.grad.sum();
    if (s == 0.0) return RVector::Constant(2 * n, kInf);
    r[i] = (j.value / s).real();
    r[n + i] = ((j.grad.array() * h1.array()).sum() / s).real() - data.v[i];
  }
  if (!r.allFinite()) return RVector::Constant(2 * n, kInf);
  return r;
}

std::optional<PhasePoint> newton(const ModelSpec& model, Dispersion d, const CauchyData& data, const Layout& layout,
                                 const PhasePoint& start, const CauchyOptions& opts) {
  const double scale = std::max({1.0, data.x.cwiseAbs().maxCoeff(), data.v.cwiseAbs().maxCoeff()});
  const auto residual = [&](const RVector& params) -> RVector {
    try {
      return normalized_residual(model, d, layout.unpack(params), data, layout.factor);
    } catch (const Error&) {
      return RVector::Constant(2 * data.x.size(), kInf);
    }
  };
  RVector params = layout.pack(start);
  RVector r = residual(params);
  double norm = r.norm();
  if (!std::isfinite(norm)) return std::nullopt;
  const Index m = params.size();
  int stalled = 0;  // consecutive steps that barely reduce the residual
  for (int it = 0; it < opts.max_iter && norm > opts.tol * scale && stalled < 3; ++it) {
    RMatrix J(m, m);
    for (Index k = 0; k < m; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(params[k]));
      RVector hi = params;
      hi[k] += h;
      J.col(k) = (residual(hi) - r) / h;
    }
    if (!J.allFinite()) return std::nullopt;
    const RVector step = J.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) return std::nullopt;
    bool accepted = false;
    for (double lambda = 1.0; lambda >= std::ldexp(1.0, -20); lambda *= 0.5) {
      const RVector trial = params + lambda * step;
      const RVector rt = residual(trial);
      const double nt = rt.norm();
      if (nt < norm) {
        stalled = nt > 0.9 * norm ? stalled + 1 : 0;
        params = trial;
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(norm <= opts.tol * scale)) return std::nullopt;
  PhasePoint out = layout.unpack(params);
  try {
    validate(out, model);
  } catch (const Error&) {
    return std::nullopt;
  }
  return out;
}

// Real p with h'(p) = v, or the nearest admissible value.
double invert_velocity(Dispersion d, double v) {
  switch (d) {
    case Dispersion::Quadratic: return v;
    case Dispersion::Cubic: return std::sqrt(std::max(v, 1e-2));
    case Dispersion::Inverse: return v < 0.0 ? 1.0 / std::sqrt(-v) : 1.0;
  }
  return v;
}

std::vector<PhasePoint> starts(const ModelSpec& model, Dispersion d, const CauchyData& data,
                               const std::vector<int>& eps) {
  const Index n = data.x.size();
  std::vector<PhasePoint> out;
  const bool distinct_p = family(model) == ModelFamily::Characteristic;

  CVector q = data.x.cast<Complex>(), p(n);
  for (Index i = 0; i < n; ++i) p[i] = invert_velocity(d, data.v[i]);
  if (distinct_p) {
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < i; ++j) {
        if (std::abs(p[i] - p[j]) < 1e-3) p[i] += 1e-2 * static_cast<double>(i);
      }
    }
  }
  std::vector<Index> id(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) id[static_cast<size_t>(i)] = i;
  out.push_back(PhasePoint::make(q, p, id, eps));

  // One conjugate pair on any two roots.
  for (Index i = 0; i < n; ++i) {
   for (Index j = i + 1; j < n; ++j) {
    if (eps[static_cast<size_t>(i)] != eps[static_cast<size_t>(j)]) continue;
    const double xm = 0.5 * (data.x[i] + data.x[j]);
    const double vm = 0.5 * (data.v[i] + data.v[j]);
    const double dx = std::max(0.5 * std::abs(data.x[j] - data.x[i]), 0.25);
    const double dv = std::max(0.5 * std::abs(data.v[j] - data.v[i]), 0.25);
    const double pm = invert_velocity(d, vm);
    auto pairing = id;
    pairing[static_cast<size_t>(i)] = j;
    pairing[static_cast<size_t>(j)] = i;
    std::vector<Complex> pair_p;
    if (d == Dispersion::Quadratic) {
      for (double sp : {0.25, 0.5, 1.0, 2.0, 4.0}) pair_p.emplace_back(pm, sp * dv);
    } else {
      // The real part of p says little about the mean velocity here: sweep a polar grid.
      const double r0 = std::max(std::abs(pm), 0.5);
      for (double r : {0.5 * r0, r0, 2.0 * r0}) {
        for (int k = 1; k <= 5; ++k) {
          const double phi = k * std::numbers::pi / 12.0;
          pair_p.push_back(std::polar(r, phi));
          pair_p.push_back(std::polar(r, std::numbers::pi - phi));
        }
      }
    }
    if (family(model) == ModelFamily::SolitonDeterminant) {
      // q enters through w = -2 p q only, periodic in Im w: centre the pair on
      // its roots and sweep the phase.
      for (const Complex pp : pair_p) {
        for (int k = 0; k < 8; ++k) {
          const Complex w(-2.0 * pp.real() * xm, k * std::numbers::pi / 4.0);
          CVector qs = q, ps = p;
          qs[i] = -w / (2.0 * pp);
          qs[j] = std::conj(qs[i]);
          ps[i] = pp;
          ps[j] = std::conj(pp);
          out.push_back(PhasePoint::make(qs, ps, pairing, eps));
        }
      }
      continue;
    }
    for (double sq : {0.2, 0.5, 1.0, 2.0}) {
      for (const Complex pp : pair_p) {
        for (double sign : {1.0, -1.0}) {
          CVector qs = q, ps = p;
          qs[i] = Complex(xm, sq * dx);
          qs[j] = std::conj(qs[i]);
          ps[i] = Complex(pp.real(), sign * pp.imag());
          ps[j] = std::conj(ps[i]);
          out.push_back(PhasePoint::make(qs, ps, pairing, eps));
        }
      }
    }
   }
  }
  return out;
}

bool same_solution(Dispersion d, const PhasePoint& a, const PhasePoint& b, double tol) {
  auto key = [&](const PhasePoint& pt) {
    std::vector<Complex> v;
    for (Index j = 0; j < pt.size(); ++j) v.push_back(velocity(d, pt.p[j]));
    std::sort(v.begin(), v.end(), [](Complex x, Complex y) {
      return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return v;
  };
  const auto ka = key(a), kb = key(b);
  for (size_t j = 0; j < ka.size(); ++j) {
    if (std::abs(ka[j] - kb[j]) > tol * (1.0 + std::abs(ka[j]))) return false;
  }
  return true;
}

}  // namespace

RVector residual_system(const ModelSpec& model, Dispersion d, const PhasePoint& point, const CauchyData& data) {
  check_data(data);
  const Index n = data.x.size();
  const CVector h1 = velocities(d, point.p);
  RVector r(2 * n);
  for (Index i = 0; i < n; ++i) {
    const Jet j = jet(model, point, data.x[i], 1);
    r[i] = j.value.real();
    r[n + i] = ((h1.array() - data.v[i]) * j.grad.array()).sum().real();
  }
  return r;
}

std::vector<PhasePoint> solve_cauchy_all(const ModelSpec& model, Dispersion d, const CauchyData& data,
                                         const CauchyOptions& opts) {
  check_data(data);
  const Index n = data.x.size();
  std::vector<int> eps = opts.epsilon;
  if (eps.empty()) eps.assign(static_cast<size_t>(n), 1);
  if (static_cast<Index>(eps.size()) != n) throw Error(ErrorCode::DegenerateData, "epsilon has the wrong length");

  std::vector<PhasePoint> candidates;
  if (opts.guess) candidates.push_back(*opts.guess);
  for (auto& s : starts(model, d, data, eps)) candidates.push_back(std::move(s));

  // Factorized models: each root is a zero of one factor, and the residual of
  // that factor alone is far better behaved than the product.
  std::vector<std::vector<std::optional<int>>> assignments;
  if (factor_count(model) > 1) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::optional<int>> a;
      for (Index i = 0; i < n; ++i) a.emplace_back(static_cast<int>((mask >> i) & 1u));
      assignments.push_back(std::move(a));
    }
  } else {
    assignments.emplace_back();
  }

  std::vector<PhasePoint> found;
  for (const auto& start : candidates) {
    if (start.size() != n) continue;
    if (opts.pairing && start.pairing != *opts.pairing) continue;
    for (const auto& assignment : assignments) {
      const Layout layout{start.pairing, eps, assignment};
      const auto sol = newton(model, d, data, layout, start, opts);
      if (!sol) continue;
      const bool seen = std::any_of(found.begin(), found.end(),
                                    [&](const PhasePoint& f) { return same_solution(d, f, *sol, 1e-6); });
      if (!seen) found.push_back(*sol);
    }
  }
  return found;
}

PhasePoint solve_cauchy(const ModelSpec& model, Dispersion d, const CauchyData& data, const CauchyOptions& opts) {
  const auto all = solve_cauchy_all(model, d, data, opts);
  if (all.empty()) throw Error(ErrorCode::NoConvergence, "no start converged for the Cauchy data");
  if (all.size() > 1) {
    throw Error(ErrorCode::AmbiguousBranch,
                std::to_string(all.size()) + " distinct phase points reproduce the Cauchy data");
  }
  return all.front();
}

namespace {

void check_pair(const CauchyData& data) {
  check_data(data);
  if (data.x.size() != 2) throw Error(ErrorCode::DegenerateData, "closed forms need N = 2");
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(b)); }

// Both particles from sums and a difference (real, or imaginary for a pair).
PhasePoint from_differences(double qsum, Complex q12, double psum, Complex p12) {
  CVector q(2), p(2);
  q << 0.5 * (qsum + q12), 0.5 * (qsum - q12);
  p << 0.5 * (psum + p12), 0.5 * (psum - p12);
  if (q12.imag() == 0.0) {
    q = q.real().cast<Complex>();
    p = p.real().cast<Complex>();
    return PhasePoint::make(q, p);
  }
  q[1] = std::conj(q[0]);
  p[1] = std::conj(p[0]);
  return PhasePoint::make(q, p, {1, 0});
}

}  // namespace

PhasePoint cauchy_poly2(double C, const CauchyData& data) {
  check_pair(data);
  const double x12 = data.x[0] - data.x[1], v12 = data.v[0] - data.v[1];
  if (x12 == 0.0) throw Error(ErrorCode::ZeroSeparation, "x12 = 0");
  const double disc = x12 * x12 - C;
  if (near(x12 * x12, C)) throw Error(ErrorCode::ZeroQ12, "x12^2 = C: the data sit at an event");
  const Complex q12 = disc > 0.0 ? Complex(std::copysign(std::sqrt(disc), x12), 0.0) : Complex(0.0, std::sqrt(-disc));
  const Complex p12 = v12 * x12 / q12;
  return from_differences(data.x.sum(), q12, data.v.sum(), p12);
}

PhasePoint cauchy_sinh2(double C, const CauchyData& data) {
  check_pair(data);
  const double x12 = data.x[0] - data.x[1], v12 = data.v[0] - data.v[1];
  if (x12 == 0.0) throw Error(ErrorCode::ZeroSeparation, "x12 = 0");
  const double c = std::cosh(x12) - 2.0 * C;
  if (near(c, 1.0) || near(c, -1.0)) throw Error(ErrorCode::BranchPoint, "cosh q12 = +-1");
  if (c < -1.0) throw Error(ErrorCode::DomainError, "cosh x12 - 2C < -1 has no paired preimage");
  const Complex q12 = c > 1.0 ? Complex(std::copysign(std::acosh(c), x12), 0.0) : Complex(0.0, std::acos(c));
  const Complex p12 = std::sinh(x12) * v12 / std::sinh(q12);
  return from_differences(data.x.sum(), q12, data.v.sum(), c > 1.0 ? Complex(p12.real(), 0.0) : Complex(0.0, p12.imag()));
}

double implied_velocity(const ModelSpec& model, Dispersion d, const PhasePoint& point, double x) {
  const Jet j = root_jet(model, point, x, 1);
  const Complex s = j.grad.sum();
  if (!(std::abs(s) > 0.0) || !std::isfinite(std::abs(s))) {
    throw Error(ErrorCode::VanishingDenominator, "sum of f_q vanishes at the root");
  }
  return ((j.grad.array() * velocities(d, point.p).array()).sum() / s).real();
}

double acceleration_from_implicit(const ModelSpec& model, Dispersion d, const PhasePoint& point, double x, double v) {
  const Jet j = root_jet(model, point, x, 2);
  const Complex s = j.grad.sum();
  if (!(std::abs(s) > 0.0) || !std::isfinite(std::abs(s))) {
    throw Error(ErrorCode::VanishingDenominator, "sum of f_q vanishes at the root");
  }
  const CVector w = velocities(d, point.p).array() - v;
  return ((w.transpose() * j.hess * w)(0, 0) / s).real();
}

}  // namespace induced
