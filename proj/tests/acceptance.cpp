// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "fixtures.hpp"
#include "mcm/hpcfp.hpp"
#include "mcm/pole_arith.hpp"
#include "mcm/renderer.hpp"
#include "mcm/skew.hpp"
#include "mcm/surgery.hpp"
#include "mcm/verifier.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mcm;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream notes;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes << " [" << what << "]";
        }
    }
};

HpcfpModel abstract_model(int degree, std::vector<std::vector<int>> cycles) {
    HpcfpModel m;
    m.degree = degree;
    int i = 1;
    for (auto& c : cycles) {
        CycleSpec s;
        s.index = i++;
        s.period = static_cast<int>(c.size());
        s.degrees = c;
        m.cycles.push_back(s);
    }
    return m;
}

const ComplexPoly kQ({1.0, 0.0, -3.0, 2.0});

void criterion1(Outcome& o) {
    auto prod = [](const HpcfpModel& m, const PoleData& d, int c) { return check_condition(m, d).perCycle.at(c - 1); };
    const auto q = prod(abstract_model(3, {{2, 2}}), PoleData{{{1, 0}, 1}}, 1);
    o.expect(q.product == ExactRational(3, 4) && q.holds, "q-type 3/4");
    const auto h = prod(abstract_model(2, {{2, 1}}), PoleData{{{1, 0}, 3}, {{1, 1}, 6}}, 1);
    o.expect(h.product == ExactRational(35, 36) && h.holds, "h-type 35/36");
    const auto b = prod(abstract_model(2, {{2}}), PoleData{{{1, 0}, 2}}, 1);
    o.expect(b.product == ExactRational(1) && !b.holds, "n=d=2 gives 1 and fails");
    const auto t = prod(abstract_model(3, {{3}}), PoleData{{{1, 0}, 3}}, 1);
    o.expect(t.product == ExactRational(2, 3) && t.holds, "n=d=3 gives 2/3");
    const ConditionReport r = check_condition(abstract_model(3, {{2}, {2}}), PoleData{{{1, 0}, 3}});
    o.expect(r.perCycle.size() == 2 && r.perCycle[0].product == ExactRational(5, 6) &&
                 r.perCycle[1].product == ExactRational(1, 2) && r.overall,
             "r-type {5/6, 1/2}");
    o.notes << " products 3/4, 35/36, 1/1, 2/3, {5/6, 1/2}";
}

void criterion2(Outcome& o) {
    std::mt19937_64 rng(20261014);
    std::uniform_int_distribution<int> period(1, 6), deg(1, 5), coin(0, 1);
    double worst = 0.0;
    int equivalence = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int p = period(rng);
        std::vector<int> n(static_cast<std::size_t>(p));
        for (auto& x : n) x = deg(rng);
        n[0] = std::max(n[0], 2);
        const HpcfpModel m = abstract_model(8, {n});
        PoleData d;
        for (int j = 0; j < p; ++j)
            if (coin(rng)) d.set({1, j}, deg(rng));
        if (d.empty()) d.set({1, 0}, deg(rng));
        const TransitionMatrix t = transition_matrix(m, d, 1);
        worst = std::max(worst, std::abs(leading_eigenvalue(t) - power_iteration_eigenvalue(t)));
        const ExactEigenvalue ex = leading_eigenvalue_exact(t);
        equivalence += (ex.product < ExactRational(1)) == check_condition(m, d).perCycle[0].holds;
    }
    o.expect(worst <= 1e-12, "eigenvalue mismatch");
    o.expect(equivalence == 100, "eigenvalue/product equivalence");
    o.notes << " max diff " << worst << ", equivalence " << equivalence << "/100";
}

void criterion3(Outcome& o) {
    auto shape = [](const HpcfpModel& m) {
        std::ostringstream s;
        s << "N=" << m.cycles.size();
        for (const auto& c : m.cycles) {
            s << " p=" << c.period << " (";
            for (std::size_t j = 0; j < c.degrees.size(); ++j) s << (j ? "," : "") << c.degrees[j];
            s << ")";
        }
        return s.str();
    };
    const HpcfpModel q = classify_polynomial(kQ);
    const HpcfpModel h = classify_polynomial(ComplexPoly({-1.0, 0.0, 1.0}));
    const HpcfpModel r = classify_polynomial(ComplexPoly({0.0, 0.0, Complex(0.0, -3.0 / std::sqrt(2.0)), 1.0}));
    o.expect(shape(q) == "N=1 p=2 (2,2)", "Q skeleton " + shape(q));
    o.expect(shape(h) == "N=1 p=2 (2,1)", "z^2-1 skeleton " + shape(h));
    o.expect(shape(r) == "N=2 p=1 (2) p=1 (2)", "R skeleton " + shape(r));
    for (const HpcfpModel* m : {&q, &h, &r}) o.expect(riemann_hurwitz_check(*m).holds, "Riemann-Hurwitz");
    o.notes << " Q: " << shape(q) << "; z^2-1: " << shape(h) << "; R: " << shape(r);
}

void criterion4(Outcome& o) {
    const double lambda = 1e-5;
    const RationalMapExpr q(kQ, SimplePoles{{PoleTerm{0.0, 1, lambda}}});
    const CriticalCensus c = critical_census(q);
    int near0 = 0, near1 = 0, count = 0;
    for (const auto& cp : c.criticalPoints) {
        count += cp.multiplicity;
        for (int k = 0; k < 3; ++k)
            near0 += std::abs(cp.root - std::polar(std::cbrt(lambda / 6.0), std::numbers::pi * (2.0 * k + 1.0) / 3.0)) < 1e-3;
        near1 += std::abs(cp.root - (1.0 + lambda / 6.0)) < 1e-3;
    }
    o.expect(count == 4 && near0 == 3 && near1 == 1, "q free criticals");
    o.expect(c.total == 6 && c.infinityMultiplicity == 2, "q census 6 with infinity x2");

    const RationalMapExpr f(ComplexPoly::monomial(3), SimplePoles{{PoleTerm{0.0, 3, -0.01}}});
    const CriticalCensus cf = critical_census(f);
    double radial = 0.0, rot = 0.0;
    for (const auto& cp : cf.criticalPoints) {
        radial = std::max(radial, std::abs(std::abs(cp.root) - std::pow(0.01, 1.0 / 6.0)));
        const Complex img = cp.root * std::polar(1.0, std::numbers::pi / 3.0);
        double best = 1e300;
        for (const auto& other : cf.criticalPoints) best = std::min(best, std::abs(other.root - img));
        rot = std::max(rot, best);
    }
    o.expect(cf.criticalPoints.size() == 6, "f has 6 free criticals");
    o.expect(radial < 1e-6, "f critical radius");
    o.expect(rot < 1e-9, "f order-6 matching");
    o.notes << " q nu=" << c.total << "; f radius err " << radial << ", rotation err " << rot;
}

void criterion5(Outcome& o) {
    auto run = [&](const std::string& name, const std::string& label) {
        const ModelFile m = fixtures::load(name);
        VerifyParams p = fixtures::verify_params(m);
        p.poleBall = 0.1;
        p.maxIter = 2000;
        const VerificationVerdict v = verify_family(fixtures::family_map(m), m.model(), *m.poleData, p);
        double worst = 0.0;
        bool allTrap = true;
        for (const auto& orb : v.orbits.orbits) {
            if (const auto* e = std::get_if<EscapesViaTrapDoor>(&orb.cls)) worst = std::max(worst, e->distance);
            else if (std::holds_alternative<InBasinOfInfinityDirectly>(orb.cls)) allTrap = false;
        }
        const bool good = v.pass() && allTrap && worst <= 0.1;
        o.expect(good, label + " verify");
        o.notes << " " << label << ": " << (good ? "pass" : "fail") << " (max passage " << worst << ")";
        return v;
    };
    run("q_family", "q");
    run("mcmullen_33_family", "z^3-0.01/z^3");
    run("g_family", "z^3+i");
    run("h_family", "h");

    const VerificationVerdict r = run("r_family", "r");
    bool bounded = false, zeroSide = true;
    for (const auto& orb : r.orbits.orbits) {
        if (std::abs(orb.critical.root - Complex(0.0, std::sqrt(2.0))) < 1e-3) {
            const auto* c = std::get_if<ConvergesToBoundedCycle>(&orb.cls);
            bounded = c && c->cycle == 2;
        } else {
            const auto* e = std::get_if<EscapesViaTrapDoor>(&orb.cls);
            zeroSide = zeroSide && e && e->pole == 0;
        }
    }
    const bool persist = r.persistence.size() == 1 && r.persistence[0].converged && r.persistence[0].multiplier < 1.0 &&
                         std::abs(r.persistence[0].point - Complex(0.0, std::sqrt(2.0))) < 1e-3;
    o.expect(bounded && persist, "r: i sqrt 2 orbit converges to a persistent fixed point");
    o.expect(zeroSide, "r: 0-side criticals escape via pole 0");
}

void criterion6(Outcome& o) {
    const HpcfpModel q = abstract_model(3, {{2, 2}});
    const PoleData qd{{{1, 0}, 1}};
    const SurgeryConstants sc = compute_alpha_beta(q, qd, 1);
    o.expect(std::abs(sc.M - 2.0 / std::sqrt(3.0)) <= 1e-12, "M = 2/sqrt 3");
    const double rs = r_threshold(sc, 1.0);
    o.expect(check_non_recurrence(plan_levels(sc, rs / 2.0, 1.0), sc), "plan at r*/2 succeeds");
    o.expect(!check_non_recurrence(plan_levels(sc, 2.0 * rs, 1.0), sc), "plan at 2r* fails");
    bool czero = true;
    for (double r : {0.9, 0.5, 1e-2, 1e-6, 1e-12}) czero = czero && check_non_recurrence(plan_levels(sc, r, 0.0), sc);
    o.expect(czero && sc.chain_holds(), "C=0 reduces to the chain inequality");

    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> period(1, 6), deg(1, 5), coin(0, 1);
    int tested = 0, closed = 0, chain = 0;
    double worstClosure = 0.0;
    while (tested < 100) {
        const int p = period(rng);
        std::vector<int> n(static_cast<std::size_t>(p));
        for (auto& x : n) x = deg(rng);
        n[0] = std::max(n[0], 2);
        PoleData d;
        for (int j = 0; j < p; ++j)
            if (coin(rng)) d.set({1, j}, deg(rng));
        if (d.empty()) d.set({1, 0}, deg(rng));
        const HpcfpModel m = abstract_model(10, {n});
        if (!check_condition(m, d).overall) continue;
        ++tested;
        const SurgeryConstants s = compute_alpha_beta(m, d, 1);
        worstClosure = std::max(worstClosure, s.closureError);
        closed += s.closureError <= 1e-12;
        chain += s.chain_holds();
    }
    o.expect(closed == 100, "closure");
    o.expect(chain == 100, "chain inequality");
    o.notes << " M=" << sc.M << " r*=" << rs << " closure max " << worstClosure << " chain " << chain << "/100";
}

void criterion7(Outcome& o) {
    bool onesFixed = true;
    for (int k = 2; k <= 20; ++k) onesFixed = onesFixed && code_step(CodeWord{(std::uint64_t{1} << k) - 1, k}).all_ones();
    o.expect(onesFixed, "all-ones fixed");
    const SkewState s0{CodeWord::from_string("01010101010101"), 0.3141592653589793};
    const SkewState s2 = skew_step(skew_step(s0, 3, 3), 3, 3);
    const double want = std::fmod(9.0 * s0.theta, 1.0);
    o.expect(skew_step(s0, 3, 3).code.to_string() == "0101010101010" && std::abs(s2.theta - want) <= 1e-15,
             "alternating cylinder");
    bool conserve = true;
    for (int k = 1; k <= 20; ++k) conserve = conserve && census_at_depth(k, k - 1).total() == (std::uint64_t{1} << k);
    o.expect(conserve, "census conservation");
    const std::vector<int> oracle = unburied_by_preimages(12, 11);
    int mismatch = 0;
    for (std::uint64_t b = 0; b < 4096; ++b) {
        const CurveClass c = classify_code(CodeWord{b, 12}, 11);
        const auto* u = std::get_if<Unburied>(&c);
        mismatch += (u ? u->hitTime : -1) != oracle[b];
    }
    o.expect(mismatch == 0, "oracle agreement");
    o.notes << " oracle mismatches " << mismatch;
}

void criterion8(Outcome& o) {
    const std::string g1 = ppm_bytes(ClassGrid{1, 1, {Cell::undecided()}});
    o.expect(g1 == std::string("P6\n1 1\n255\n") + std::string(3, '\0'), "1x1 golden");
    std::string want2 = "P6\n2 1\n255\n";
    for (unsigned char b : {255, 255, 255, 230, 25, 75}) want2.push_back(static_cast<char>(b));
    o.expect(ppm_bytes(ClassGrid{2, 1, {Cell::escaped(0), Cell::basin(0, 0)}}) == want2, "2x1 golden");

    RenderSpec f;
    f.map = RationalMapExpr(ComplexPoly::monomial(3), SimplePoles{{PoleTerm{0.0, 3, -0.01}}});
    f.width = f.height = 512;
    f.maxIter = 512;
    const auto t0 = std::chrono::steady_clock::now();
    const ClassGrid grid = classify_grid(f);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double sym = rotational_symmetry_score(grid, 6);
    const int alt = radial_profile(f, 0.1, 1e-3, 1.6, 4096).alternations;
    RenderSpec z3 = f;
    z3.map = RationalMapExpr(ComplexPoly::monomial(3));
    const int altZ3 = radial_profile(z3, 0.1, 1e-3, 1.6, 4096).alternations;
    o.expect(sym >= 0.995, "symmetry score");
    o.expect(alt >= 3, "radial alternations");
    o.expect(altZ3 == 1, "z^3 control alternation");
    o.expect(secs < 30.0, "render time");

    const std::string bytes = ppm_bytes(grid);
    o.expect(ppm_bytes(classify_grid(f)) == bytes, "determinism");
    RenderSpec single = f;
    single.threads = 1;
    o.expect(ppm_bytes(classify_grid(single)) == bytes, "parallel vs single thread");
    o.notes << " symmetry " << sym << ", alternations " << alt << ", z^3 alternations " << altZ3 << ", render " << secs
            << " s";
}

void criterion9(Outcome& o) {
    const HpcfpModel mq = classify_polynomial(kQ);
    const PoleData dq{{{1, 0}, 1}};
    const NormalizedType tq = normalize_type(mq, dq);
    const NormalizedType again = normalize_type(tq.polynomial(), tq.pole_data());
    o.expect(types_equal(tq, again), "idempotent");

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int equal = 0;
    const int trials = 20;
    for (int k = 0; k < trials; ++k) {
        Complex a(u(rng), u(rng));
        if (std::abs(a) < 0.3) a += 1.0;
        const Complex b(u(rng), u(rng));
        const HpcfpModel mc = classify_polynomial(affine_conjugate(kQ, a, b));
        const Complex w = (mq.cycle(1).points[0] - b) / a;
        const auto key = locate_domain(mc, w);
        if (!key) continue;
        equal += types_equal(tq, normalize_type(mc, PoleData{{*key, 1}}));
    }
    o.expect(equal == trials, "conjugates equal");
    const bool differ = !types_equal(normalize_type(ComplexPoly::monomial(3), PoleData{{{1, 0}, 3}}),
                                     normalize_type(ComplexPoly::monomial(3), PoleData{{{1, 0}, 4}}));
    const bool differQ = !types_equal(tq, normalize_type(mq, PoleData{{{1, 0}, 2}}));
    o.expect(differ && differQ, "differing pole degrees");
    o.notes << " conjugates equal " << equal << "/" << trials;
}

} // namespace

int main() {
    const std::vector<std::function<void(Outcome&)>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                                 criterion6, criterion7, criterion8, criterion9};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i](o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.notes << " exception: " << e.what();
        }
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.ok;
        std::printf("criterion %zu: %s (%.1f ms)%s\n", i + 1, o.ok ? "PASS" : "FAIL", ms, o.notes.str().c_str());
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
