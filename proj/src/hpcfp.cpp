#include "mcm/hpcfp.hpp"

#include "mcm/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace mcm {

namespace {

// Tolerant lexicographic comparison on (re, im): -1, 0, +1.
int lex_compare(Complex a, Complex b, double tol) {
    if (std::abs(a.real() - b.real()) > tol) return a.real() < b.real() ? -1 : 1;
    if (std::abs(a.imag() - b.imag()) > tol) return a.imag() < b.imag() ? -1 : 1;
    return 0;
}

int lex_compare(const std::vector<Complex>& a, const std::vector<Complex>& b, double tol) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t k = 0; k < n; ++k)
        if (int c = lex_compare(a[k], b[k], tol); c != 0) return c;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

double rel(double tol, Complex z) { return tol * (1.0 + std::abs(z)); }

std::string fmt(Complex z) {
    std::ostringstream os;
    os.precision(12);
    os << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

struct Landing {
    int cycle = -1;  // 0-based into the cycle list
    int phase = 0;
    int index = 0;
    bool asymptotic = false;
};

std::optional<Landing> find_landing(const std::vector<Complex>& samples, const std::vector<CycleSpec>& cycles,
                                    const ClassifyParams& params) {
    bool inspected = false;
    bool asymptotic = false;
    for (std::size_t k = 0; k < samples.size(); ++k) {
        double best = std::numeric_limits<double>::infinity();
        Landing at;
        for (std::size_t i = 0; i < cycles.size(); ++i)
            for (std::size_t j = 0; j < cycles[i].points.size(); ++j) {
                const double d = std::abs(samples[k] - cycles[i].points[j]) / (1.0 + std::abs(cycles[i].points[j]));
                if (d < best) {
                    best = d;
                    at = Landing{static_cast<int>(i), static_cast<int>(j), static_cast<int>(k), false};
                }
            }
        if (!inspected && best <= params.nearTol) {
            inspected = true;
            asymptotic = best > params.landTol;
        }
        if (best <= params.landTol) {
            at.asymptotic = asymptotic;
            return at;
        }
    }
    return std::nullopt;
}

} // namespace

HpcfpModel classify_polynomial(const ComplexPoly& p, const ClassifyParams& params) {
    if (p.degree() < 2) throw std::invalid_argument("classify_polynomial: degree must be >= 2");

    const auto crit = find_roots(p.derivative());
    const ComplexPoly dp = p.derivative();

    OrbitParams op;
    op.maxIter = params.maxIter;
    op.cycleTol = params.tol;

    HpcfpModel model;
    model.degree = p.degree();
    model.source = p;

    std::vector<CycleSpec> raw;
    std::vector<OrbitRecord> records;
    bool failed = false;
    std::ostringstream why;

    for (const auto& c : crit) {
        CriticalAssignment a;
        a.point = c.root;
        a.multiplicity = c.multiplicity;
        OrbitRecord rec = iterate_orbit(p, c.root, op);
        if (rec.escaped()) {
            a.bounded = false;
            failed = true;
            why << " critical point " << fmt(c.root) << " escapes;";
        } else if (rec.undecided()) {
            failed = true;
            why << " critical orbit of " << fmt(c.root) << " undecided after " << params.maxIter << " iterations;";
        } else {
            const auto& cyc = std::get<ConvergedToCycle>(rec.outcome);
            std::vector<Complex> pts{cyc.representative};
            for (int k = 1; k < cyc.period; ++k) pts.push_back(p(pts.back()));
            Complex mult{1.0, 0.0};
            for (auto z : pts) mult *= dp(z);
            if (std::abs(mult) >= params.multiplierTol) {
                std::ostringstream os;
                os << "cycle through " << fmt(pts[0]) << " of period " << cyc.period << " has multiplier modulus "
                   << std::abs(mult) << " (not super-attracting)";
                throw MultiplierNotZero(os.str(), std::abs(mult));
            }
            const bool known = std::any_of(raw.begin(), raw.end(), [&](const CycleSpec& s) {
                return std::any_of(s.points.begin(), s.points.end(),
                                   [&](Complex q) { return std::abs(q - pts[0]) <= rel(1e-6, q); });
            });
            if (!known) {
                CycleSpec s;
                s.period = cyc.period;
                s.points = std::move(pts);
                raw.push_back(std::move(s));
            }
        }
        model.critical.push_back(a);
        records.push_back(std::move(rec));
    }
    if (failed) throw NotHpcfp("not a hyperbolic postcritically finite polynomial:" + why.str(), model.critical);

    const double tol = 1e-9;
    // Canonical phase 0: lexicographically least critical cycle point.
    for (auto& s : raw) {
        std::optional<std::size_t> zero;
        for (std::size_t j = 0; j < s.points.size(); ++j) {
            const bool isCrit = std::any_of(crit.begin(), crit.end(), [&](const RootInfo& r) {
                return std::abs(r.root - s.points[j]) <= rel(params.landTol, s.points[j]);
            });
            if (isCrit && (!zero || lex_compare(s.points[j], s.points[*zero], tol) < 0)) zero = j;
        }
        if (!zero) {
            model.warnings.push_back("cycle through " + fmt(s.points[0]) + " contains no located critical point");
            zero = 0;
            for (std::size_t j = 1; j < s.points.size(); ++j)
                if (lex_compare(s.points[j], s.points[*zero], tol) < 0) zero = j;
        }
        std::rotate(s.points.begin(), s.points.begin() + static_cast<std::ptrdiff_t>(*zero), s.points.end());
        s.degrees.assign(s.points.size(), 1);
    }
    std::sort(raw.begin(), raw.end(), [&](const CycleSpec& a, const CycleSpec& b) {
        if (a.period != b.period) return a.period < b.period;
        return lex_compare(a.points[0], b.points[0], tol) < 0;
    });
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i].index = static_cast<int>(i) + 1;

    for (std::size_t c = 0; c < crit.size(); ++c) {
        auto& a = model.critical[c];
        const auto landing = find_landing(records[c].samples, raw, params);
        if (!landing) {
            // Converged to a cycle but never within landing tolerance: treat as undecided.
            throw NotHpcfp("critical orbit of " + fmt(a.point) + " never lands on its cycle", model.critical);
        }
        a.cycle = landing->cycle + 1;
        a.phase = landing->phase;
        a.preperiod = landing->index;
        if (landing->asymptotic)
            model.warnings.push_back("critical point " + fmt(a.point) +
                                     " converges to its cycle without landing; domain membership not certified");
        if (a.preperiod == 0) raw[static_cast<std::size_t>(landing->cycle)].degrees[static_cast<std::size_t>(a.phase)] += a.multiplicity;
    }
    model.cycles = std::move(raw);

    if (!riemann_hurwitz_check(model).holds)
        model.warnings.push_back("Riemann-Hurwitz count over periodic domains does not match n-1 "
                                 "(strictly preperiodic critical points present)");
    return model;
}

RiemannHurwitzReport riemann_hurwitz_check(const HpcfpModel& m) {
    RiemannHurwitzReport r;
    r.expected = m.degree - 1;
    for (const auto& c : m.cycles)
        for (int n : c.degrees) r.observed += n - 1;
    r.holds = r.expected == r.observed;
    return r;
}

std::optional<DomainKey> locate_domain(const HpcfpModel& m, Complex z, const ClassifyParams& params) {
    if (!m.source) return std::nullopt;
    OrbitParams op;
    op.maxIter = params.maxIter;
    op.cycleTol = params.tol;
    const OrbitRecord rec = iterate_orbit(*m.source, z, op);
    if (rec.escaped()) return std::nullopt;
    const auto landing = find_landing(rec.samples, m.cycles, params);
    if (!landing) return std::nullopt;
    const int period = m.cycles[static_cast<std::size_t>(landing->cycle)].period;
    const int phase = ((landing->phase - landing->index) % period + period) % period;
    return DomainKey{landing->cycle + 1, phase};
}

ComplexPoly affine_conjugate(const ComplexPoly& p, Complex a, Complex b) {
    ComplexPoly q = p.compose(ComplexPoly({b, a})) - ComplexPoly::constant(b);
    return q * (1.0 / a);
}

PoleData NormalizedType::pole_data() const {
    PoleData d;
    for (std::size_t i = 0; i < poleDegrees.size(); ++i)
        for (std::size_t j = 0; j < poleDegrees[i].size(); ++j)
            if (poleDegrees[i][j] > 0) d.set({static_cast<int>(i) + 1, static_cast<int>(j)}, poleDegrees[i][j]);
    return d;
}

NormalizedType normalize_type(const ComplexPoly& p, const PoleData& d, const ClassifyParams& params) {
    return normalize_type(classify_polynomial(p, params), d, params);
}

NormalizedType normalize_type(const HpcfpModel& m, const PoleData& d, const ClassifyParams& params) {
    if (!m.source) throw std::invalid_argument("normalize_type: model has no source polynomial");
    for (const auto& [k, deg] : d.entries)
        if (!m.valid_key(k))
            throw InvalidPoleDataKey("pole data key (" + std::to_string(k.cycle) + "," + std::to_string(k.phase) +
                                     ") is not a periodic domain of the model");

    const ComplexPoly& p = *m.source;
    const int n = p.degree();
    const Complex an = p.leading();
    const Complex beta = -p[static_cast<std::size_t>(n - 1)] / (static_cast<double>(n) * an);
    const Complex alpha0 = std::pow(1.0 / an, 1.0 / static_cast<double>(n - 1));

    struct Candidate {
        Complex alpha;
        std::vector<Complex> coeffs;
    };
    std::vector<Candidate> cands;
    for (int k = 0; k < n - 1; ++k) {
        const Complex omega = std::polar(1.0, 2.0 * std::numbers::pi * k / (n - 1));
        const Complex alpha = alpha0 * omega;
        std::vector<Complex> c = affine_conjugate(p, alpha, beta).coeffs();
        c.resize(static_cast<std::size_t>(n) + 1);
        c[static_cast<std::size_t>(n)] = 1.0;
        c[static_cast<std::size_t>(n - 1)] = 0.0;
        cands.push_back({alpha, std::move(c)});
    }
    double scale = 1.0;
    for (const auto& c : cands[0].coeffs) scale = std::max(scale, std::abs(c));
    const double tol = 1e-9 * scale;
    for (auto& cand : cands)
        for (auto& c : cand.coeffs) {
            // Flush rounding residue so the canonical vector is reproducible.
            const double re = std::abs(c.real()) < 1e-14 * scale ? 0.0 : c.real();
            const double im = std::abs(c.imag()) < 1e-14 * scale ? 0.0 : c.imag();
            c = {re, im};
        }

    std::size_t best = 0;
    for (std::size_t k = 1; k < cands.size(); ++k)
        if (lex_compare(cands[k].coeffs, cands[best].coeffs, tol) < 0) best = k;

    std::optional<NormalizedType> winner;
    for (const auto& cand : cands) {
        if (lex_compare(cand.coeffs, cands[best].coeffs, tol) != 0) continue;
        const ComplexPoly q(cand.coeffs);
        const HpcfpModel qm = classify_polynomial(q, params);

        NormalizedType t;
        t.coeffs = cand.coeffs;
        for (const auto& c : qm.cycles) {
            t.cycles.push_back({c.period, c.degrees});
            t.poleDegrees.emplace_back(static_cast<std::size_t>(c.period), 0);
        }
        for (const auto& [key, deg] : d.entries) {
            const Complex w = (m.cycle(key.cycle).points[static_cast<std::size_t>(key.phase)] - beta) / cand.alpha;
            std::optional<std::pair<std::size_t, std::size_t>> hit;
            double bestDist = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < qm.cycles.size(); ++i)
                for (std::size_t j = 0; j < qm.cycles[i].points.size(); ++j) {
                    const double dist = std::abs(qm.cycles[i].points[j] - w);
                    if (dist < bestDist) {
                        bestDist = dist;
                        hit = {i, j};
                    }
                }
            if (!hit || bestDist > rel(1e-6, w))
                throw std::runtime_error("normalize_type: cycle point did not survive the affine change");
            t.poleDegrees[hit->first][hit->second] = deg;
        }
        if (!winner || t.poleDegrees < winner->poleDegrees) winner = std::move(t);
    }
    return *winner;
}

bool types_equal(const NormalizedType& a, const NormalizedType& b) {
    if (a.coeffs.size() != b.coeffs.size()) return false;
    for (std::size_t k = 0; k < a.coeffs.size(); ++k)
        if (std::abs(a.coeffs[k] - b.coeffs[k]) > 1e-8) return false;
    return a.cycles == b.cycles && a.poleDegrees == b.poleDegrees;
}

} // namespace mcm
