#include "induced/models.hpp"

#include <cmath>
#include <string>

#include "induced/linalg.hpp"

namespace induced {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct ScaledJet {
  Jet jet;
  double dlog_scale_dx = 0.0;  // d/dx log of the positive factor applied to f
};

// det(diag(d) + B) where only diagonal entry j depends on q_j, with
// d1 = dd/dq and d2 = d^2 d/dq^2.
Jet diagonal_affine_jet(const CVector& d, const CVector& d1, const CVector& d2, const CMatrix& b,
                        int order) {
  const Index n = d.size();
  CMatrix a = b;
  a.diagonal() += d;
  Jet out;
  out.value = determinant(a);
  if (order < 1) return out;
  out.grad.resize(n);
  CVector minors(n);
  for (Index j = 0; j < n; ++j) {
    minors[j] = principal_minor(a, {j});
    out.grad[j] = d1[j] * minors[j];
  }
  if (order < 2) return out;
  out.hess = CMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    out.hess(j, j) = d2[j] * minors[j];
    for (Index k = j + 1; k < n; ++k) {
      const Complex h = d1[j] * d1[k] * principal_minor(a, {j, k});
      out.hess(j, k) = h;
      out.hess(k, j) = h;
    }
  }
  return out;
}

Jet product_jet(const Jet& a, const Jet& b, int order) {
  Jet out;
  out.value = a.value * b.value;
  if (order >= 1) out.grad = a.grad * b.value + b.grad * a.value;
  if (order >= 2) {
    out.hess = a.hess * b.value + b.hess * a.value + a.grad * b.grad.transpose() +
               b.grad * a.grad.transpose();
  }
  return out;
}

void require_arity(const PhasePoint& point, Index n, std::string_view name) {
  if (point.size() != n) {
    throw Error(ErrorCode::InvalidPoint,
                std::string(name) + " requires N = " + std::to_string(n) + ", got " + std::to_string(point.size()));
  }
}

// Rescaled soliton matrices. Row i of E0 +- v is multiplied by exp(-s(L_i)),
// L_i = logsumexp(Re z_i, log max_j |v_ij|), z_i = -2 p_i (q_i - x), with s
// zero for moderate rows. The factor is positive and identical for conjugate
// partner rows.
constexpr double kScaleOnset = 30.0;
constexpr double kScaleRamp = 10.0;

struct SolitonRows {
  CVector diag;
  CVector d1;
  CVector d2;
  CMatrix v;
  double dlog_dx = 0.0;  // per factor
};

SolitonRows soliton_rows(const PhasePoint& point, double x) {
  const Index n = point.size();
  SolitonRows rows;
  rows.diag.resize(n);
  rows.d1.resize(n);
  rows.d2.resize(n);
  rows.v.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    const Complex pi = point.p[i];
    double vmax = 0.0;
    for (Index j = 0; j < n; ++j) {
      rows.v(i, j) = 2.0 * pi / (pi + point.p[j]);
      vmax = std::max(vmax, std::abs(rows.v(i, j)));
    }
    const Complex z = -2.0 * pi * (point.q[i] - x);
    const double a = z.real();
    const double b = std::log(vmax);
    const double lse = std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
    // Rows are left alone below exp(kScaleOnset); a quadratic ramp of width
    // kScaleRamp keeps the log-scale continuously differentiable.
    const double over = lse - kScaleOnset;
    double shrink = 0.0, weight = 0.0;
    if (over >= kScaleRamp) {
      shrink = over - 0.5 * kScaleRamp;
      weight = 1.0;
    } else if (over > 0.0) {
      shrink = 0.5 * over * over / kScaleRamp;
      weight = over / kScaleRamp;
    }
    const double eps = static_cast<double>(point.epsilon[static_cast<size_t>(i)]);
    rows.diag[i] = eps * std::exp(z - shrink);
    rows.d1[i] = -2.0 * pi * rows.diag[i];
    rows.d2[i] = 4.0 * pi * pi * rows.diag[i];
    rows.v.row(i) *= std::exp(-shrink);
    rows.dlog_dx -= weight * std::exp(a - lse) * 2.0 * pi.real();
  }
  return rows;
}

ScaledJet soliton_jet(const PhasePoint& point, double x, int order, std::optional<int> factor) {
  const SolitonRows rows = soliton_rows(point, x);
  auto factor_jet = [&](int f) {
    const CMatrix b = f == 0 ? CMatrix(rows.v) : CMatrix(-rows.v);
    return diagonal_affine_jet(rows.diag, rows.d1, rows.d2, b, order);
  };
  ScaledJet out;
  if (factor) {
    if (*factor != 0 && *factor != 1) throw Error(ErrorCode::InvalidPoint, "factor id must be 0 or 1");
    out.jet = factor_jet(*factor);
    out.dlog_scale_dx = rows.dlog_dx;
  } else {
    out.jet = product_jet(factor_jet(0), factor_jet(1), order);
    out.dlog_scale_dx = 2.0 * rows.dlog_dx;
  }
  return out;
}

Jet polynomial_jet(const PolynomialProduct& model, const PhasePoint& point, double x, int order) {
  const Index n = point.size();
  const CVector d = point.q.array() - x;
  auto product_without = [&](Index skip1, Index skip2) {
    Complex prod = 1.0;
    for (Index i = 0; i < n; ++i) {
      if (i != skip1 && i != skip2) prod *= d[i];
    }
    return prod;
  };
  Jet out;
  out.value = product_without(-1, -1) - polynomial_constant(model, n);
  if (order >= 1) {
    out.grad.resize(n);
    for (Index j = 0; j < n; ++j) out.grad[j] = product_without(j, -1);
  }
  if (order >= 2) {
    out.hess = CMatrix::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index k = j + 1; k < n; ++k) {
        out.hess(j, k) = out.hess(k, j) = product_without(j, k);
      }
    }
  }
  return out;
}

Jet sinh_jet(const SinhPair& model, const PhasePoint& point, double x, int order) {
  require_arity(point, 2, "SinhPair");
  const Complex s1 = std::sinh(point.q[0] - x), s2 = std::sinh(point.q[1] - x);
  const Complex c1 = std::cosh(point.q[0] - x), c2 = std::cosh(point.q[1] - x);
  Jet out;
  out.value = s1 * s2 - model.C;
  if (order >= 1) {
    out.grad.resize(2);
    out.grad << c1 * s2, s1 * c2;
  }
  if (order >= 2) {
    out.hess.resize(2, 2);
    out.hess << s1 * s2, c1 * c2, c1 * c2, s1 * s2;
  }
  return out;
}

Jet relativistic_jet(const RelativisticPair& model, const PhasePoint& point, double x, int order) {
  require_arity(point, 2, "RelativisticPair");
  const Complex d1 = point.q[0] - x, d2 = point.q[1] - x;
  const Complex k = 0.25 * model.C * (1.0 / (point.p[0] * point.p[0]) + 1.0 / (point.p[1] * point.p[1]));
  Jet out;
  out.value = d1 * d2 - k;
  if (order >= 1) {
    out.grad.resize(2);
    out.grad << d2, d1;
  }
  if (order >= 2) {
    out.hess.resize(2, 2);
    out.hess << 0.0, 1.0, 1.0, 0.0;
  }
  return out;
}

Jet characteristic_jet(const ModelSpec& model, const PhasePoint& point, double x, int order) {
  const Index n = point.size();
  const CMatrix w = build_W(model, point.p);
  const CVector d = point.q.array() - x;
  return diagonal_affine_jet(d, CVector::Ones(n), CVector::Zero(n), w, order);
}

ScaledJet compute(const ModelSpec& model, const PhasePoint& point, double x, int order,
                  std::optional<int> factor) {
  if (factor && !is_factorized(model) && *factor != 0) {
    throw Error(ErrorCode::NotFactorizable, std::string(model_name(model)) + " has a single factor");
  }
  return std::visit(
      overloaded{
          [&](const PolynomialProduct& m) { return ScaledJet{polynomial_jet(m, point, x, order)}; },
          [&](const SinhPair& m) { return ScaledJet{sinh_jet(m, point, x, order)}; },
          [&](const KdVDeterminant&) { return soliton_jet(point, x, order, factor); },
          [&](const SinhGordonDeterminant&) { return soliton_jet(point, x, order, factor); },
          [&](const CharacteristicCM&) { return ScaledJet{characteristic_jet(model, point, x, order)}; },
          [&](const CharacteristicRS&) { return ScaledJet{characteristic_jet(model, point, x, order)}; },
          [&](const RelativisticPair& m) { return ScaledJet{relativistic_jet(m, point, x, order)}; },
      },
      model);
}

double checked_real(Complex value) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw Error(ErrorCode::NumericalOverflow, "non-finite generating function value");
  }
  return value.real();
}

double dx_from(const ScaledJet& s) {
  return checked_real(-s.jet.grad.sum() + s.jet.value * s.dlog_scale_dx);
}

}  // namespace

std::string_view model_name(const ModelSpec& model) noexcept {
  return std::visit(overloaded{
                        [](const PolynomialProduct&) { return std::string_view("polynomial"); },
                        [](const SinhPair&) { return std::string_view("sinh_pair"); },
                        [](const KdVDeterminant&) { return std::string_view("kdv"); },
                        [](const SinhGordonDeterminant&) { return std::string_view("sinh_gordon"); },
                        [](const CharacteristicCM&) { return std::string_view("cm"); },
                        [](const CharacteristicRS&) { return std::string_view("rs"); },
                        [](const RelativisticPair&) { return std::string_view("relativistic_pair"); },
                    },
                    model);
}

ModelFamily family(const ModelSpec& model) noexcept {
  if (std::holds_alternative<KdVDeterminant>(model) || std::holds_alternative<SinhGordonDeterminant>(model)) {
    return ModelFamily::SolitonDeterminant;
  }
  if (std::holds_alternative<CharacteristicCM>(model) || std::holds_alternative<CharacteristicRS>(model)) {
    return ModelFamily::Characteristic;
  }
  return ModelFamily::Flat;
}

Dispersion default_dispersion(const ModelSpec& model) noexcept {
  if (std::holds_alternative<KdVDeterminant>(model)) return Dispersion::Cubic;
  if (is_relativistic(model)) return Dispersion::Inverse;
  return Dispersion::Quadratic;
}

bool is_factorized(const ModelSpec& model) noexcept {
  return family(model) == ModelFamily::SolitonDeterminant;
}

int factor_count(const ModelSpec& model) noexcept { return is_factorized(model) ? 2 : 1; }

bool is_relativistic(const ModelSpec& model) noexcept {
  return std::holds_alternative<SinhGordonDeterminant>(model) || std::holds_alternative<RelativisticPair>(model);
}

double polynomial_constant(const PolynomialProduct& model, Index n) noexcept {
  const bool quarter = model.normalization == Normalization::Quarter ||
                       (model.normalization == Normalization::Auto && n == 2);
  return quarter ? model.C / 4.0 : model.C;
}

void validate(const PhasePoint& point, const ModelSpec& model) {
  validate(point, family(model));
  if (std::holds_alternative<SinhPair>(model)) require_arity(point, 2, "SinhPair");
  if (std::holds_alternative<RelativisticPair>(model)) {
    require_arity(point, 2, "RelativisticPair");
    for (Index i = 0; i < 2; ++i) {
      if (point.p[i] == Complex(0.0)) throw Error(ErrorCode::ZeroMomentum, "RelativisticPair needs p != 0");
    }
  }
}

Evaluation eval_f(const ModelSpec& model, const PhasePoint& point, double x) {
  const Complex value = compute(model, point, x, 0, std::nullopt).jet.value;
  return {checked_real(value), std::abs(value.imag())};
}

std::vector<double> eval_factors(const ModelSpec& model, const PhasePoint& point, double x) {
  if (!is_factorized(model)) {
    throw Error(ErrorCode::NotFactorizable, std::string(model_name(model)) + " does not factorize");
  }
  return factor_values(model, point, x);
}

double eval_f_dx(const ModelSpec& model, const PhasePoint& point, double x) {
  return dx_from(compute(model, point, x, 1, std::nullopt));
}

std::vector<double> factor_values(const ModelSpec& model, const PhasePoint& point, double x) {
  if (!is_factorized(model)) return {eval_f(model, point, x).value};
  return {factor_value(model, point, x, 0), factor_value(model, point, x, 1)};
}

double factor_value(const ModelSpec& model, const PhasePoint& point, double x, int factor) {
  if (!is_factorized(model)) return eval_f(model, point, x).value;
  if (factor != 0 && factor != 1) throw Error(ErrorCode::InvalidPoint, "factor id must be 0 or 1");
  const SolitonRows rows = soliton_rows(point, x);
  CMatrix a = factor == 0 ? CMatrix(rows.v) : CMatrix(-rows.v);
  a.diagonal() += rows.diag;
  return checked_real(determinant(a));
}

FactorSample factor_sample(const ModelSpec& model, const PhasePoint& point, double x, int factor) {
  const ScaledJet s = compute(model, point, x, 1, is_factorized(model) ? std::optional<int>(factor) : std::nullopt);
  return {checked_real(s.jet.value), dx_from(s)};
}

Jet jet(const ModelSpec& model, const PhasePoint& point, double x, int order, std::optional<int> factor) {
  return compute(model, point, x, order, factor).jet;
}

CMatrix build_W(const ModelSpec& model, const CVector& p) {
  const bool rs = std::holds_alternative<CharacteristicRS>(model);
  if (!rs && !std::holds_alternative<CharacteristicCM>(model)) {
    throw Error(ErrorCode::InvalidPoint, "build_W needs a CM or RS model");
  }
  const double gamma = rs ? std::get<CharacteristicRS>(model).gamma : std::get<CharacteristicCM>(model).gamma;
  const Index n = p.size();
  CMatrix w = CMatrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      if (j == k) continue;
      const Complex diff = p[j] - p[k];
      if (diff == Complex(0.0)) {
        throw Error(ErrorCode::DegenerateMomenta, "p_" + std::to_string(j) + " == p_" + std::to_string(k));
      }
      w(j, k) = rs ? gamma * p[j] / diff : gamma / diff;
    }
  }
  return w;
}

}  // namespace induced
