#include "mcm/rational_map.hpp"

#include <cmath>
#include <limits>

namespace mcm {

namespace {

Complex ipow(Complex z, int k) {
    Complex result{1.0, 0.0};
    while (k > 0) {
        if (k & 1) result *= z;
        z *= z;
        k >>= 1;
    }
    return result;
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

std::size_t nearest_pole(const RationalMapExpr& f, Complex z) {
    std::size_t best = 0;
    double bestDist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < f.pole_count(); ++k) {
        const double d = std::abs(z - f.pole_location(k));
        if (d < bestDist) {
            bestDist = d;
            best = k;
        }
    }
    return best;
}

} // namespace

RationalMapExpr::RationalMapExpr(ComplexPoly base, SimplePoles poles)
    : base_(std::move(base)), pert_(std::move(poles)) {
    validate();
}

RationalMapExpr::RationalMapExpr(ComplexPoly base, ProductPole pole)
    : base_(std::move(base)), pert_(std::move(pole)) {
    validate();
}

void RationalMapExpr::validate() const {
    for (std::size_t k = 0; k < pole_count(); ++k) {
        if (pole_order(k) < 1) throw std::invalid_argument("pole order must be >= 1");
        if (!finite(pole_location(k))) throw std::invalid_argument("pole location must be finite");
        for (std::size_t l = 0; l < k; ++l)
            if (std::abs(pole_location(k) - pole_location(l)) <= pole_collision_tol(pole_location(k)))
                throw std::invalid_argument("pole locations must be pairwise distinct");
    }
    if (const auto* s = std::get_if<SimplePoles>(&pert_)) {
        for (const auto& t : s->terms)
            if (t.coeff == Complex{}) throw std::invalid_argument("pole coefficient must be nonzero");
    } else {
        const auto& p = std::get<ProductPole>(pert_);
        if (p.lambda == Complex{}) throw std::invalid_argument("lambda must be nonzero");
        if (p.factors.empty()) throw std::invalid_argument("product pole needs at least one factor");
    }
}

std::size_t RationalMapExpr::pole_count() const {
    return std::visit([](const auto& p) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, SimplePoles>) return p.terms.size();
        else return p.factors.size();
    }, pert_);
}

Complex RationalMapExpr::pole_location(std::size_t k) const {
    if (const auto* s = std::get_if<SimplePoles>(&pert_)) return s->terms.at(k).at;
    return std::get<ProductPole>(pert_).factors.at(k).at;
}

int RationalMapExpr::pole_order(std::size_t k) const {
    if (const auto* s = std::get_if<SimplePoles>(&pert_)) return s->terms.at(k).order;
    return std::get<ProductPole>(pert_).factors.at(k).order;
}

int RationalMapExpr::total_pole_degree() const {
    int d = 0;
    for (std::size_t k = 0; k < pole_count(); ++k) d += pole_order(k);
    return d;
}

double RationalMapExpr::lambda_abs_sum() const {
    if (const auto* s = std::get_if<SimplePoles>(&pert_)) {
        double acc = 0.0;
        for (const auto& t : s->terms) acc += std::abs(t.coeff);
        return acc;
    }
    return std::abs(std::get<ProductPole>(pert_).lambda);
}

double RationalMapExpr::auto_radius() const {
    return std::max(2.0, 1.0 + base_.abs_coeff_sum() + lambda_abs_sum());
}

ComplexPoly RationalMapExpr::denominator() const {
    ComplexPoly d = ComplexPoly::constant(1.0);
    for (std::size_t k = 0; k < pole_count(); ++k) d = d * ComplexPoly::linear_power(pole_location(k), pole_order(k));
    return d;
}

ComplexPoly RationalMapExpr::numerator() const {
    const ComplexPoly den = denominator();
    ComplexPoly num = base_ * den;
    if (const auto* s = std::get_if<SimplePoles>(&pert_)) {
        for (std::size_t k = 0; k < s->terms.size(); ++k) {
            ComplexPoly others = ComplexPoly::constant(s->terms[k].coeff);
            for (std::size_t l = 0; l < s->terms.size(); ++l)
                if (l != k) others = others * ComplexPoly::linear_power(s->terms[l].at, s->terms[l].order);
            num += others;
        }
    } else {
        num += ComplexPoly::constant(std::get<ProductPole>(pert_).lambda);
    }
    return num;
}

ComplexPoly RationalMapExpr::critical_numerator() const {
    const ComplexPoly dp = base_.derivative();
    if (const auto* s = std::get_if<SimplePoles>(&pert_)) {
        // f' = P' - sum d_k c_k / (z-a_k)^{d_k+1}; multiply through by prod (z-a_k)^{d_k+1}.
        ComplexPoly e = ComplexPoly::constant(1.0);
        for (const auto& t : s->terms) e = e * ComplexPoly::linear_power(t.at, t.order + 1);
        ComplexPoly result = dp * e;
        for (std::size_t k = 0; k < s->terms.size(); ++k) {
            ComplexPoly others = ComplexPoly::constant(-static_cast<double>(s->terms[k].order) * s->terms[k].coeff);
            for (std::size_t l = 0; l < s->terms.size(); ++l)
                if (l != k) others = others * ComplexPoly::linear_power(s->terms[l].at, s->terms[l].order + 1);
            result += others;
        }
        return result;
    }
    // f' = P' - lambda sum_k d_k/(z-a_k) / D; multiply by D prod (z-a_k).
    const auto& pp = std::get<ProductPole>(pert_);
    ComplexPoly simple = ComplexPoly::constant(1.0);
    for (const auto& fct : pp.factors) simple = simple * ComplexPoly::linear_power(fct.at, 1);
    ComplexPoly result = dp * denominator() * simple;
    for (std::size_t k = 0; k < pp.factors.size(); ++k) {
        ComplexPoly others = ComplexPoly::constant(-static_cast<double>(pp.factors[k].order) * pp.lambda);
        for (std::size_t l = 0; l < pp.factors.size(); ++l)
            if (l != k) others = others * ComplexPoly::linear_power(pp.factors[l].at, 1);
        result += others;
    }
    return result;
}

double pole_collision_tol(Complex a) { return 1e-13 * (1.0 + std::abs(a)); }

Evaluation eval(const RationalMapExpr& f, Complex z) {
    for (std::size_t k = 0; k < f.pole_count(); ++k)
        if (std::abs(z - f.pole_location(k)) <= pole_collision_tol(f.pole_location(k))) return {Complex{}, PoleHit{k}};

    Complex value = f.base()(z);
    if (const auto* s = std::get_if<SimplePoles>(&f.perturbation())) {
        for (const auto& t : s->terms) value += t.coeff / ipow(z - t.at, t.order);
    } else {
        const auto& pp = std::get<ProductPole>(f.perturbation());
        Complex den{1.0, 0.0};
        for (const auto& fct : pp.factors) den *= ipow(z - fct.at, fct.order);
        value += pp.lambda / den;
    }
    if (!finite(value)) return {Complex{}, PoleHit{nearest_pole(f, z)}};
    return {value, std::nullopt};
}

std::optional<std::pair<Complex, Complex>> eval_with_derivative(const RationalMapExpr& f, Complex z) {
    for (std::size_t k = 0; k < f.pole_count(); ++k)
        if (std::abs(z - f.pole_location(k)) <= pole_collision_tol(f.pole_location(k))) return std::nullopt;

    Complex v, dv;
    f.base().eval_with_derivative(z, v, dv);
    if (const auto* s = std::get_if<SimplePoles>(&f.perturbation())) {
        for (const auto& t : s->terms) {
            const Complex w = z - t.at;
            const Complex term = t.coeff / ipow(w, t.order);
            v += term;
            dv -= static_cast<double>(t.order) * term / w;
        }
    } else {
        const auto& pp = std::get<ProductPole>(f.perturbation());
        Complex den{1.0, 0.0};
        Complex logDeriv{};
        for (const auto& fct : pp.factors) {
            const Complex w = z - fct.at;
            den *= ipow(w, fct.order);
            logDeriv += static_cast<double>(fct.order) / w;
        }
        const Complex term = pp.lambda / den;
        v += term;
        dv -= term * logDeriv;
    }
    if (!finite(v) || !finite(dv)) return std::nullopt;
    return std::make_pair(v, dv);
}

MapDerivative derivative(const RationalMapExpr& f) {
    if (const auto* s = std::get_if<SimplePoles>(&f.perturbation())) {
        SimplePoles d;
        for (const auto& t : s->terms)
            d.terms.push_back({t.at, t.order + 1, -static_cast<double>(t.order) * t.coeff});
        if (d.terms.empty()) return RationalMapExpr(f.base().derivative());
        return RationalMapExpr(f.base().derivative(), std::move(d));
    }
    const auto& pp = std::get<ProductPole>(f.perturbation());
    const ComplexPoly den = f.denominator();
    const ComplexPoly den2 = den * den;
    return PolyRatio{f.base().derivative() * den2 - den.derivative() * pp.lambda, den2};
}

} // namespace mcm
