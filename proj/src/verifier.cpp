#include "mcm/verifier.hpp"

#include "mcm/pole_arith.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mcm {

namespace {

std::string fmt(Complex z) {
    std::ostringstream os;
    os.precision(10);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

bool untouched(const HpcfpModel& m, const PoleData& d, int cycle) {
    for (int j = 0; j < m.cycle(cycle).period; ++j)
        if (d.contains({cycle, j})) return false;
    return true;
}

} // namespace

int map_degree(const RationalMapExpr& f) { return std::max(f.numerator().degree(), f.denominator().degree()); }

CriticalCensus critical_census(const RationalMapExpr& f) {
    CriticalCensus c;
    c.mapDegree = map_degree(f);
    const ComplexPoly num = f.critical_numerator();
    if (num.degree() >= 1) c.criticalPoints = find_roots(num);
    int finite = 0;
    for (const auto& r : c.criticalPoints) finite += r.multiplicity;
    int poles = 0;
    for (std::size_t k = 0; k < f.pole_count(); ++k) {
        c.poleMultiplicity.push_back(f.pole_order(k) - 1);
        poles += f.pole_order(k) - 1;
    }
    // f behaves like its base polynomial near infinity.
    c.infinityMultiplicity = std::max(0, f.base().degree() - 1);
    c.total = finite + poles + c.infinityMultiplicity;
    if (c.total != 2 * c.mapDegree - 2)
        throw CensusMismatch("critical census " + std::to_string(c.total) + " differs from 2*deg-2 = " +
                             std::to_string(2 * c.mapDegree - 2));
    return c;
}

CriticalOrbitReport classify_critical_orbits(const RationalMapExpr& f, const HpcfpModel& model,
                                             const PoleData& poleData, const VerifyParams& params) {
    (void)poleData;
    CriticalOrbitReport rep;
    for (std::size_t k = 0; k < f.pole_count(); ++k)
        rep.poleDomains.push_back(locate_domain(model, f.pole_location(k), params.classify));

    OrbitParams op;
    op.maxIter = params.maxIter;
    op.escapeRadius = params.escapeRadius;
    op.poleBall = params.poleBall;
    op.cycleTol = params.cycleTol;

    const ComplexPoly num = f.critical_numerator();
    const std::vector<RootInfo> crit = num.degree() >= 1 ? find_roots(num) : std::vector<RootInfo>{};
    for (const auto& c : crit) {
        CriticalOrbit o;
        o.critical = c;
        o.record = iterate_orbit(f, c.root, op);
        for (std::size_t k = 1; k < o.record.samples.size() && !o.tc; ++k)
            for (std::size_t p = 0; p < f.pole_count(); ++p)
                if (std::abs(o.record.samples[k] - f.pole_location(p)) <= params.poleBall) {
                    o.tc = static_cast<int>(k);
                    break;
                }

        if (const auto* e = std::get_if<Escaped>(&o.record.outcome)) {
            if (e->nearestPole && e->poleDistance <= params.poleBall)
                o.cls = EscapesViaTrapDoor{*e->nearestPole, e->poleDistance};
            else
                o.cls = InBasinOfInfinityDirectly{};
        } else if (const auto* cy = std::get_if<ConvergedToCycle>(&o.record.outcome)) {
            ConvergesToBoundedCycle b{0, cy->period, cy->representative};
            double best = std::numeric_limits<double>::infinity();
            for (const auto& spec : model.cycles) {
                if (spec.period != cy->period) continue;
                for (auto pt : spec.points) {
                    const double dist = std::abs(pt - cy->representative) / (1.0 + std::abs(pt));
                    if (dist <= params.cycleMatchTol && dist < best) {
                        best = dist;
                        b.cycle = spec.index;
                    }
                }
            }
            o.cls = b;
        } else {
            o.cls = OrbitUndecided{};
        }
        rep.orbits.push_back(std::move(o));
    }
    return rep;
}

CyclePersistence refine_cycle(const RationalMapExpr& f, Complex seed, int period, int cycle) {
    CyclePersistence res;
    res.cycle = cycle;
    Complex z = seed;
    for (int it = 0; it < 100; ++it) {
        Complex w = z;
        Complex dw{1.0, 0.0};
        bool ok = true;
        for (int k = 0; k < period && ok; ++k) {
            const auto vd = eval_with_derivative(f, w);
            if (!vd) ok = false;
            else {
                dw *= vd->second;
                w = vd->first;
            }
        }
        if (!ok || dw == Complex{1.0, 0.0}) break;
        const Complex step = (w - z) / (dw - 1.0);
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
        if (std::abs(step) <= 1e-10 * (1.0 + std::abs(z))) {
            Complex mult{1.0, 0.0};
            Complex u = z;
            bool fine = true;
            for (int k = 0; k < period && fine; ++k) {
                const auto vd = eval_with_derivative(f, u);
                if (!vd) fine = false;
                else {
                    mult *= vd->second;
                    u = vd->first;
                }
            }
            if (!fine) break;
            res.point = z;
            res.multiplier = std::abs(mult);
            res.converged = std::abs(u - z) <= 1e-10 * (1.0 + std::abs(z));
            return res;
        }
    }
    res.point = z;
    return res;
}

std::string describe(const CriticalClass& c) {
    std::ostringstream os;
    std::visit([&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, InBasinOfInfinityDirectly>) os << "escapes without passing a pole";
        else if constexpr (std::is_same_v<T, EscapesViaTrapDoor>)
            os << "escapes via pole " << v.pole << " (passage distance " << v.distance << ")";
        else if constexpr (std::is_same_v<T, ConvergesToBoundedCycle>) {
            if (v.cycle > 0) os << "converges to cycle " << v.cycle << " (period " << v.period << ")";
            else os << "converges to an unmatched cycle of period " << v.period << " at " << fmt(v.representative);
        } else os << "undecided";
    }, c);
    return os.str();
}

VerificationVerdict verify_family(const RationalMapExpr& f, const HpcfpModel& model, const PoleData& poleData,
                                  const VerifyParams& params) {
    VerificationVerdict v;

    try {
        v.conditionHolds = check_condition(model, poleData).overall;
        if (!v.conditionHolds) v.details.push_back("arithmetic condition fails: not expected to pass");
    } catch (const std::exception& e) {
        v.details.push_back(std::string("condition check failed: ") + e.what());
    }

    const int deg = map_degree(f);
    const int expected = model.degree + pole_data_degree(poleData);
    v.degreeOk = deg == expected;
    v.details.push_back("map degree " + std::to_string(deg) + ", expected " + std::to_string(expected));

    try {
        v.census = critical_census(f);
        v.censusOk = true;
        v.details.push_back("critical census " + std::to_string(v.census->total) + " = 2*" +
                            std::to_string(v.census->mapDegree) + "-2");
    } catch (const std::exception& e) {
        v.details.push_back(e.what());
    }

    try {
        v.orbits = classify_critical_orbits(f, model, poleData, params);
    } catch (const std::exception& e) {
        v.details.push_back(std::string("critical orbit classification failed: ") + e.what());
        return v;
    }

    // Each pole must sit in a picked domain with matching degree.
    for (std::size_t k = 0; k < v.orbits.poleDomains.size(); ++k) {
        const auto& key = v.orbits.poleDomains[k];
        if (!key || !poleData.contains(*key) || poleData.at(*key) != f.pole_order(k)) {
            v.degreeOk = false;
            v.details.push_back("pole " + std::to_string(k) + " at " + fmt(f.pole_location(k)) +
                                " does not match the pole data");
        }
    }
    std::vector<DomainKey> covered;
    for (const auto& key : v.orbits.poleDomains)
        if (key) covered.push_back(*key);
    for (const auto& [key, d] : poleData.entries)
        if (std::find(covered.begin(), covered.end(), key) == covered.end()) {
            v.degreeOk = false;
            v.details.push_back("picked domain (" + std::to_string(key.cycle) + "," + std::to_string(key.phase) +
                                ") carries no pole");
        }

    v.allFreeCriticalsConsistent = true;
    for (const auto& o : v.orbits.orbits) {
        bool ok = false;
        if (const auto* e = std::get_if<EscapesViaTrapDoor>(&o.cls)) {
            const auto& key = v.orbits.poleDomains.at(e->pole);
            ok = key && poleData.contains(*key);
        } else if (const auto* c = std::get_if<ConvergesToBoundedCycle>(&o.cls)) {
            ok = c->cycle > 0 && untouched(model, poleData, c->cycle);
        }
        if (!ok) v.allFreeCriticalsConsistent = false;
        v.details.push_back("critical point " + fmt(o.critical.root) + (o.critical.multiplicity > 1 ? " (x" + std::to_string(o.critical.multiplicity) + ")" : "") +
                            ": " + describe(o.cls) + (ok ? "" : " [inconsistent]"));
    }

    v.untouchedCyclesPersist = true;
    for (const auto& c : model.cycles) {
        if (!untouched(model, poleData, c.index)) continue;
        if (c.points.empty()) {
            v.untouchedCyclesPersist = false;
            v.details.push_back("cycle " + std::to_string(c.index) + " has no points to refine");
            continue;
        }
        CyclePersistence p = refine_cycle(f, c.points.front(), c.period, c.index);
        const bool ok = p.converged && p.multiplier < 1.0;
        v.untouchedCyclesPersist = v.untouchedCyclesPersist && ok;
        std::ostringstream os;
        os << "untouched cycle " << c.index << ": " << (ok ? "persists" : "lost") << " near " << fmt(p.point)
           << ", multiplier " << p.multiplier;
        v.details.push_back(os.str());
        v.persistence.push_back(p);
    }
    return v;
}

} // namespace mcm
