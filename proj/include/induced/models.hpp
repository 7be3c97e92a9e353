#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "induced/phase_space.hpp"

namespace induced {

/// Constant term convention for the polynomial product.
enum class Normalization {
  Auto,     ///< Quarter for N = 2, Plain otherwise
  Quarter,  ///< prod (q_i - x) - C/4
  Plain,    ///< prod (q_i - x) - C
};

struct PolynomialProduct {
  double C = 0.0;
  Normalization normalization = Normalization::Auto;
};

/// sinh(q1 - x) sinh(q2 - x) - C, N = 2.
struct SinhPair {
  double C = 0.0;
};

/// det(E0 + v) det(E0 - v), E0 = diag(eps_i exp(-2 p_i (q_i - x))), v_ij = 2 p_i / (p_i + p_j).
struct KdVDeterminant {};

/// Same generating function as KdV, read in cone variables (roots xi, time eta).
struct SinhGordonDeterminant {};

/// det(Q + W_CM - x I), (W_CM)_jk = gamma / (p_j - p_k).
struct CharacteristicCM {
  double gamma = 1.0;
};

/// det(Q + W_RS - x I), (W_RS)_jk = gamma p_j / (p_j - p_k).
struct CharacteristicRS {
  double gamma = 1.0;
};

/// (q1 - xi)(q2 - xi) - (C/4)(1/p1^2 + 1/p2^2), N = 2.
struct RelativisticPair {
  double C = 0.0;
};

using ModelSpec = std::variant<PolynomialProduct, SinhPair, KdVDeterminant, SinhGordonDeterminant,
                               CharacteristicCM, CharacteristicRS, RelativisticPair>;

std::string_view model_name(const ModelSpec& model) noexcept;
ModelFamily family(const ModelSpec& model) noexcept;
Dispersion default_dispersion(const ModelSpec& model) noexcept;
bool is_factorized(const ModelSpec& model) noexcept;
int factor_count(const ModelSpec& model) noexcept;
bool is_relativistic(const ModelSpec& model) noexcept;

/// Constant subtracted from the product for the given N.
double polynomial_constant(const PolynomialProduct& model, Index n) noexcept;

/// Family constraints plus the model's own arity requirements.
void validate(const PhasePoint& point, const ModelSpec& model);

struct Evaluation {
  double value = 0.0;
  double imag_residue = 0.0;
};

/// f(q - x e, p) at real x. Soliton determinants are evaluated after a smooth
/// positive row rescaling, which keeps the zero set and the sign.
Evaluation eval_f(const ModelSpec& model, const PhasePoint& point, double x);

/// det(E0 + v) and det(E0 - v) (same positive rescaling as eval_f).
std::vector<double> eval_factors(const ModelSpec& model, const PhasePoint& point, double x);

/// Exact x-derivative of eval_f.
double eval_f_dx(const ModelSpec& model, const PhasePoint& point, double x);

/// Value of factor `factor` (0 for unfactorized models) and its exact x-derivative.
struct FactorSample {
  double value = 0.0;
  double dx = 0.0;
};
std::vector<double> factor_values(const ModelSpec& model, const PhasePoint& point, double x);
double factor_value(const ModelSpec& model, const PhasePoint& point, double x, int factor);
FactorSample factor_sample(const ModelSpec& model, const PhasePoint& point, double x, int factor);

/// Value and partial derivatives with respect to the coordinates q_j of
/// f(q - x e, p). The rescaling factor of the determinant models is held
/// fixed at (point, x), so the derivatives belong to a single function that
/// differs from f by a positive constant.
struct Jet {
  Complex value;
  CVector grad;
  CMatrix hess;  ///< empty unless order >= 2
};

/// `factor` selects a single determinant factor; std::nullopt means the full f.
Jet jet(const ModelSpec& model, const PhasePoint& point, double x, int order = 1,
        std::optional<int> factor = std::nullopt);

CMatrix build_W(const ModelSpec& model, const CVector& p);

}  // namespace induced
