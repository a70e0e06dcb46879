#pragma once

#include "mcm/poly.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace mcm {

/// coeff / (z - at)^order
struct PoleTerm {
    Complex at;
    int order = 1;
    Complex coeff{1.0, 0.0};
};

/// One factor (z - at)^order of a product denominator.
struct PoleFactor {
    Complex at;
    int order = 1;
};

/// P(z) + sum_k coeff_k / (z - a_k)^{d_k}
struct SimplePoles {
    std::vector<PoleTerm> terms;
};

/// P(z) + lambda / prod_k (z - a_k)^{d_k}
struct ProductPole {
    Complex lambda{1.0, 0.0};
    std::vector<PoleFactor> factors;
};

using Perturbation = std::variant<SimplePoles, ProductPole>;

/// A polynomial perturbed by poles. An empty SimplePoles list is the
/// unperturbed polynomial itself.
class RationalMapExpr {
public:
    RationalMapExpr() = default;
    explicit RationalMapExpr(ComplexPoly base) : base_(std::move(base)) {}
    RationalMapExpr(ComplexPoly base, SimplePoles poles);
    RationalMapExpr(ComplexPoly base, ProductPole pole);

    const ComplexPoly& base() const { return base_; }
    const Perturbation& perturbation() const { return pert_; }
    bool is_product() const { return std::holds_alternative<ProductPole>(pert_); }

    std::size_t pole_count() const;
    Complex pole_location(std::size_t k) const;
    int pole_order(std::size_t k) const;
    /// Sum of pole orders.
    int total_pole_degree() const;
    /// Sum of |lambda_k| (|lambda| for the product form).
    double lambda_abs_sum() const;

    /// max(2, 1 + sum|base coeffs| + sum|lambda_k|)
    double auto_radius() const;

    /// Common-denominator form N/D.
    ComplexPoly numerator() const;
    ComplexPoly denominator() const;

    /// Polynomial whose roots are exactly the finite critical points that are
    /// not poles. Its degree is (n - 1) + sum(d_k + 1) for the simple form and
    /// (n - 1) + sum d_k + K for the product form.
    ComplexPoly critical_numerator() const;

private:
    void validate() const;
    ComplexPoly base_;
    Perturbation pert_{SimplePoles{}};
};

struct PoleHit {
    std::size_t pole;
};

/// Result of evaluating a map: a finite value, or the index of the pole it hit.
struct Evaluation {
    Complex value;
    std::optional<PoleHit> hit;
    bool is_pole() const { return hit.has_value(); }
};

/// |z - a| <= 1e-13 (1 + |a|)
double pole_collision_tol(Complex a);

Evaluation eval(const RationalMapExpr& f, Complex z);
inline Complex eval(const ComplexPoly& p, Complex z) { return p(z); }

/// Value and derivative at z. Returns nullopt at a pole or on overflow.
std::optional<std::pair<Complex, Complex>> eval_with_derivative(const RationalMapExpr& f, Complex z);

/// Quotient of two polynomials.
struct PolyRatio {
    ComplexPoly numerator;
    ComplexPoly denominator;
    Complex operator()(Complex z) const { return numerator(z) / denominator(z); }
};

/// Exact symbolic derivative. The simple-pole form stays a simple-pole
/// expression (orders raised by one); the product form comes back as
/// (P' D^2 - lambda D') / D^2.
using MapDerivative = std::variant<RationalMapExpr, PolyRatio>;
MapDerivative derivative(const RationalMapExpr& f);
inline ComplexPoly derivative(const ComplexPoly& p) { return p.derivative(); }

} // namespace mcm
