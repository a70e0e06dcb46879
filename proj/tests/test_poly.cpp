#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mcm/poly.hpp"
#include "mcm/rational_map.hpp"

#include <cmath>
#include <random>

using namespace mcm;

namespace {
const ComplexPoly Q({1.0, 0.0, -3.0, 2.0});

int total_multiplicity(const std::vector<RootInfo>& r) {
    int s = 0;
    for (const auto& x : r) s += x.multiplicity;
    return s;
}
} // namespace

TEST_CASE("evaluation of the cubic Q at 3/2 gives 1") {
    CHECK(std::abs(Q(1.5) - Complex(1.0)) < 1e-15);
    CHECK(ComplexPoly::monomial(3)(2.0) == Complex(8.0));
}

TEST_CASE("trailing zeros are trimmed and degree is consistent") {
    ComplexPoly p({1.0, 2.0, 0.0, 0.0});
    CHECK(p.degree() == 1);
    CHECK(ComplexPoly({0.0, 0.0}).is_zero());
    CHECK(ComplexPoly().degree() == 0);
}

TEST_CASE("derivative of Q is 6z^2 - 6z") {
    const ComplexPoly d = Q.derivative();
    REQUIRE(d.degree() == 2);
    CHECK(d[0] == Complex(0.0));
    CHECK(d[1] == Complex(-6.0));
    CHECK(d[2] == Complex(6.0));
    CHECK(ComplexPoly::constant(5.0).derivative().is_zero());
}

TEST_CASE("Horner value and derivative agree with separate evaluation") {
    Complex v, dv;
    const Complex z(0.3, -0.7);
    Q.eval_with_derivative(z, v, dv);
    CHECK(std::abs(v - Q(z)) < 1e-15);
    CHECK(std::abs(dv - Q.derivative()(z)) < 1e-14);
}

TEST_CASE("composition and linear powers") {
    const ComplexPoly sq = ComplexPoly::monomial(2);
    const ComplexPoly comp = sq.compose(ComplexPoly({1.0, 1.0}));  // (z+1)^2
    CHECK(comp[0] == Complex(1.0));
    CHECK(comp[1] == Complex(2.0));
    CHECK(comp[2] == Complex(1.0));
    const ComplexPoly lp = ComplexPoly::linear_power(2.0, 3);
    CHECK(lp[0] == Complex(-8.0));
    CHECK(lp[3] == Complex(1.0));
}

TEST_CASE("roots of z^2 - 1 are +-1, simple") {
    const auto r = find_roots(ComplexPoly({-1.0, 0.0, 1.0}));
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0].root - Complex(-1.0)) < 1e-14);
    CHECK(std::abs(r[1].root - Complex(1.0)) < 1e-14);
    CHECK(r[0].multiplicity == 1);
    CHECK(r[1].multiplicity == 1);
}

TEST_CASE("(z-2)^3 yields a triple root at 2") {
    const ComplexPoly p = ComplexPoly::linear_power(2.0, 3);
    // p, p', p'' all vanish at 2
    CHECK(std::abs(p(2.0)) < 1e-14);
    CHECK(std::abs(p.derivative()(2.0)) < 1e-14);
    CHECK(std::abs(p.derivative().derivative()(2.0)) < 1e-14);
    const auto r = find_roots(p);
    REQUIRE(r.size() == 1);
    CHECK(r[0].multiplicity == 3);
    CHECK(std::abs(r[0].root - Complex(2.0)) < 1e-6);
}

TEST_CASE("critical points of the perturbed cubic match high-precision roots") {
    // 6z^3(z-1) - 1e-5, roots computed independently at 40 digits.
    const double lam = 1e-5;
    const ComplexPoly p({-lam, 0.0, 0.0, -6.0, 6.0});
    const auto r = find_roots(p);
    REQUIRE(r.size() == 4);
    const Complex expected[] = {
        {-0.01181000080748608, 0.0},
        {0.0059041670745763384, -0.010308438684068506},
        {0.0059041670745763384, 0.010308438684068506},
        {1.0000016666583334, 0.0},
    };
    for (int k = 0; k < 4; ++k) {
        CHECK(r[static_cast<std::size_t>(k)].multiplicity == 1);
        CHECK(std::abs(r[static_cast<std::size_t>(k)].root - expected[k]) < 1e-13);
    }
}

TEST_CASE("exact zero roots are split off with full multiplicity") {
    const ComplexPoly p = ComplexPoly::monomial(4) * ComplexPoly({-1.0, 1.0});
    const auto r = find_roots(p);
    REQUIRE(r.size() == 2);
    CHECK(r[0].root == Complex(0.0));
    CHECK(r[0].multiplicity == 4);
    CHECK(std::abs(r[1].root - Complex(1.0)) < 1e-14);
}

TEST_CASE("property: multiplicities sum to the degree and residuals are small") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> deg(1, 14);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Complex> c(static_cast<std::size_t>(deg(rng)) + 1);
        for (auto& x : c) x = {u(rng), u(rng)};
        const ComplexPoly p(c);
        const auto r = find_roots(p);
        CHECK(total_multiplicity(r) == p.degree());
        for (const auto& x : r) CHECK(std::abs(p(x.root)) <= 1e-10 * (1.0 + p.coeff_norm()) * std::pow(1.0 + std::abs(x.root), p.degree()));
    }
}

TEST_CASE("property: McMullen critical points solve z^(n+d) = lambda d / n") {
    for (int n = 2; n <= 4; ++n)
        for (int d = 1; d <= 4; ++d) {
            const Complex lam(-0.01, 0.003);
            const RationalMapExpr f(ComplexPoly::monomial(n), SimplePoles{{{0.0, d, lam}}});
            const auto r = find_roots(f.critical_numerator());
            CHECK(total_multiplicity(r) == n + d);
            for (const auto& x : r) CHECK(std::abs(std::pow(x.root, n + d) - lam * static_cast<double>(d) / static_cast<double>(n)) <= 1e-9);
        }
}

TEST_CASE("root finder is deterministic") {
    const ComplexPoly p({0.3, -1.0, 0.0, 2.0, Complex(0.0, 1.0)});
    const auto a = find_roots(p);
    const auto b = find_roots(p);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].root == b[k].root);
}
