#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcm {

using Complex = std::complex<double>;

/// Dense complex polynomial, coefficients stored in ascending degree order.
/// Trailing zero coefficients are trimmed on construction so degree() is
/// always the index of the last nonzero coefficient (0 for the zero
/// polynomial).
class ComplexPoly {
public:
    ComplexPoly() : coeffs_{Complex{0.0, 0.0}} {}
    explicit ComplexPoly(std::vector<Complex> coeffs);
    ComplexPoly(std::initializer_list<Complex> coeffs)
        : ComplexPoly(std::vector<Complex>(coeffs)) {}

    static ComplexPoly monomial(int degree, Complex coeff = {1.0, 0.0});
    static ComplexPoly constant(Complex c) { return ComplexPoly({c}); }
    /// (z - a)^k
    static ComplexPoly linear_power(Complex a, int k);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Complex{}; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Complex{}; }
    Complex leading() const { return coeffs_.back(); }

    Complex operator()(Complex z) const;
    /// Horner evaluation returning p(z) and p'(z) together.
    void eval_with_derivative(Complex z, Complex& value, Complex& deriv) const;
    ComplexPoly derivative() const;

    /// Sum of |a_k| over all coefficients.
    double abs_coeff_sum() const;
    /// Euclidean norm of the coefficient vector.
    double coeff_norm() const;

    ComplexPoly& operator+=(const ComplexPoly& o);
    ComplexPoly& operator-=(const ComplexPoly& o);
    ComplexPoly& operator*=(Complex s);

    friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
    friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
    friend ComplexPoly operator*(ComplexPoly a, Complex s) { return a *= s; }
    friend ComplexPoly operator*(Complex s, ComplexPoly a) { return a *= s; }
    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);

    /// Composition p(q(z)).
    ComplexPoly compose(const ComplexPoly& inner) const;

    std::string to_string() const;

private:
    void trim();
    std::vector<Complex> coeffs_;
};

struct RootInfo {
    Complex root;
    int multiplicity = 1;
};

struct RootOptions {
    int maxIterations = 500;
    double clusterTol = 1e-7;
    unsigned long long seed = 0x5eed'2024ULL;
};

class NonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All roots of p with multiplicities, via Aberth-Ehrlich simultaneous
/// iteration from Newton-polygon radii with a perturbed angular start,
/// then cluster detection and Newton polishing of simple roots.
/// Sum of multiplicities always equals p.degree(). Output sorted by (re, im).
std::vector<RootInfo> find_roots(const ComplexPoly& p, const RootOptions& opts = {});

} // namespace mcm
