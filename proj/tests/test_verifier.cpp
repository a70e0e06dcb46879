#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "mcm/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace mcm;

namespace {

RationalMapExpr f_lambda(double lambda) {
    return RationalMapExpr(ComplexPoly::monomial(3), SimplePoles{{PoleTerm{0.0, 3, lambda}}});
}

RationalMapExpr q_lambda(double lambda) {
    return RationalMapExpr(ComplexPoly({1.0, 0.0, -3.0, 2.0}), SimplePoles{{PoleTerm{0.0, 1, lambda}}});
}

int total_multiplicity(const CriticalCensus& c) {
    int s = 0;
    for (const auto& r : c.criticalPoints) s += r.multiplicity;
    return s;
}

} // namespace

TEST_CASE("map degree of the common-denominator form") {
    CHECK(map_degree(q_lambda(1e-5)) == 4);
    CHECK(map_degree(f_lambda(-0.01)) == 6);
    CHECK(map_degree(RationalMapExpr(ComplexPoly::monomial(3))) == 3);
    const ModelFile h = fixtures::load("h_family");
    CHECK(map_degree(fixtures::family_map(h)) == 14);
}

TEST_CASE("q census: four free criticals near the predicted asymptotics") {
    const double lambda = 1e-5;
    const CriticalCensus c = critical_census(q_lambda(lambda));
    CHECK(c.mapDegree == 4);
    CHECK(c.infinityMultiplicity == 2);
    CHECK(c.poleMultiplicity == std::vector<int>{0});
    CHECK(total_multiplicity(c) == 4);
    CHECK(c.total == 6);
    const double r0 = std::cbrt(lambda / 6.0);  // cube roots of -lambda/6
    int near0 = 0, near1 = 0;
    for (const auto& r : c.criticalPoints) {
        for (int k = 0; k < 3; ++k) {
            const Complex w = std::polar(r0, std::numbers::pi * (2.0 * k + 1.0) / 3.0);
            if (std::abs(r.root - w) < 1e-3) ++near0;
        }
        if (std::abs(r.root - (1.0 + lambda / 6.0)) < 1e-3) ++near1;
    }
    CHECK(near0 == 3);
    CHECK(near1 == 1);
}

TEST_CASE("f census: six criticals on the circle of radius 0.01^(1/6) with 6-fold symmetry") {
    const CriticalCensus c = critical_census(f_lambda(-0.01));
    REQUIRE(c.criticalPoints.size() == 6);
    CHECK(c.total == 10);
    CHECK(c.poleMultiplicity == std::vector<int>{2});
    CHECK(c.infinityMultiplicity == 2);
    const double r = 0.46415888336127789;
    const Complex rot = std::polar(1.0, std::numbers::pi / 3.0);
    for (const auto& cp : c.criticalPoints) {
        CHECK(std::abs(std::abs(cp.root) - r) < 1e-6);
        const Complex image = cp.root * rot;
        double best = 1e9;
        for (const auto& other : c.criticalPoints) best = std::min(best, std::abs(other.root - image));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("pure polynomial census") {
    const CriticalCensus c = critical_census(RationalMapExpr(ComplexPoly::monomial(3)));
    CHECK(c.criticalPoints.size() == 1);
    CHECK(c.criticalPoints[0].multiplicity == 2);
    CHECK(c.total == 4);
}

TEST_CASE("verify q at lambda 1e-5") {
    const ModelFile m = fixtures::load("q_family");
    const HpcfpModel model = m.model();
    const VerificationVerdict v = verify_family(fixtures::family_map(m), model, *m.poleData, fixtures::verify_params(m));
    CHECK(v.conditionHolds);
    CHECK(v.degreeOk);
    CHECK(v.censusOk);
    CHECK(v.allFreeCriticalsConsistent);
    CHECK(v.untouchedCyclesPersist);
    CHECK(v.pass());
    for (const auto& o : v.orbits.orbits)
        if (const auto* e = std::get_if<EscapesViaTrapDoor>(&o.cls)) CHECK(e->distance <= 0.1);
}

TEST_CASE("verify z^3 + i with lambda -1e-7") {
    const ModelFile m = fixtures::load("g_family");
    const VerificationVerdict v = verify_family(fixtures::family_map(m), m.model(), *m.poleData, fixtures::verify_params(m));
    CHECK(v.pass());
}

TEST_CASE("verify the doubly-pinched quadratic at lambda 1e-22") {
    const ModelFile m = fixtures::load("h_family");
    const VerificationVerdict v = verify_family(fixtures::family_map(m), m.model(), *m.poleData, fixtures::verify_params(m));
    CHECK(v.conditionHolds);
    CHECK(v.pass());
    for (const auto& o : v.orbits.orbits)
        if (const auto* e = std::get_if<EscapesViaTrapDoor>(&o.cls)) CHECK(e->distance <= 0.1);
}

TEST_CASE("verify z^3 - 0.01/z^3 with the fixture's pole ball") {
    const ModelFile m = fixtures::load("mcmullen_33_family");
    const VerificationVerdict v = verify_family(fixtures::family_map(m), m.model(), *m.poleData, fixtures::verify_params(m));
    CHECK(v.pass());
    int trap = 0;
    for (const auto& o : v.orbits.orbits) trap += std::holds_alternative<EscapesViaTrapDoor>(o.cls);
    CHECK(trap == 6);
}

TEST_CASE("two-cycle cubic: the free critical at i sqrt 2 stays bounded") {
    const ModelFile m = fixtures::load("r_family");
    const HpcfpModel model = m.model();
    REQUIRE(model.cycles.size() == 2);
    const VerificationVerdict v = verify_family(fixtures::family_map(m), model, *m.poleData, fixtures::verify_params(m));
    CHECK(v.pass());
    const Complex target(0.0, std::sqrt(2.0));
    bool sawBounded = false;
    for (const auto& o : v.orbits.orbits) {
        if (std::abs(o.critical.root - target) < 1e-3) {
            const auto* c = std::get_if<ConvergesToBoundedCycle>(&o.cls);
            REQUIRE(c != nullptr);
            CHECK(c->cycle == 2);
            CHECK(c->period == 1);
            sawBounded = true;
        } else {
            const auto* e = std::get_if<EscapesViaTrapDoor>(&o.cls);
            REQUIRE(e != nullptr);
            CHECK(e->pole == 0);
        }
    }
    CHECK(sawBounded);
    REQUIRE(v.persistence.size() == 1);
    CHECK(v.persistence[0].converged);
    CHECK(v.persistence[0].multiplier < 1.0);
    CHECK(std::abs(v.persistence[0].point - target) < 1e-3);
}

TEST_CASE("boundary model fails its condition and is reported as such") {
    const ModelFile m = fixtures::load("mcmullen_22_family");
    const VerificationVerdict v = verify_family(fixtures::family_map(m), m.model(), *m.poleData, fixtures::verify_params(m));
    CHECK_FALSE(v.conditionHolds);
}

TEST_CASE("refine_cycle on a super-attracting fixed point") {
    const CyclePersistence p = refine_cycle(RationalMapExpr(ComplexPoly::monomial(2)), Complex(1e-4, 0.0), 1);
    CHECK(p.converged);
    CHECK(std::abs(p.point) < 1e-6);
    CHECK(p.multiplier < 1e-5);
}

TEST_CASE("mismatched pole data shows up as a degree failure") {
    ModelFile m = fixtures::load("q_family");
    PoleData wrong{{{1, 1}, 1}};
    const VerificationVerdict v = verify_family(fixtures::family_map(m), m.model(), wrong, fixtures::verify_params(m));
    CHECK_FALSE(v.degreeOk);
    CHECK_FALSE(v.pass());
}

TEST_CASE("describe names each class") {
    CHECK(describe(CriticalClass{InBasinOfInfinityDirectly{}}).find("without passing a pole") != std::string::npos);
    CHECK(describe(CriticalClass{OrbitUndecided{}}).find("undecided") != std::string::npos);
}

TEST_CASE("property: passage distance at the smallest lambda is within the ball") {
    for (double lambda : {1e-3, 1e-5, 1e-7, 1e-9}) {
        const ModelFile m = fixtures::load("q_family");
        const RationalMapExpr f = q_lambda(lambda);
        const VerificationVerdict v = verify_family(f, m.model(), *m.poleData, fixtures::verify_params(m));
        if (lambda == 1e-9) {
            CHECK(v.pass());
            for (const auto& o : v.orbits.orbits)
                if (const auto* e = std::get_if<EscapesViaTrapDoor>(&o.cls)) CHECK(e->distance <= 0.1);
        }
    }
}
