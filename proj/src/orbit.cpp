#include "mcm/orbit.hpp"

#include <cmath>
#include <limits>

namespace mcm {

OrbitRecord iterate_orbit(const RationalMapExpr& f, Complex z0, const OrbitParams& params) {
    const double radius = params.escapeRadius > 0.0 ? params.escapeRadius : f.auto_radius();
    const int maxPeriod = std::max(1, params.maxPeriod);
    const bool hasPoles = f.pole_count() > 0;

    OrbitRecord rec;
    std::vector<Complex> ring(static_cast<std::size_t>(maxPeriod) + 1);
    auto ringAt = [&](int k) -> Complex& { return ring[static_cast<std::size_t>(k % (maxPeriod + 1))]; };

    std::optional<Complex> inBall;
    std::size_t inBallPole = 0;
    double inBallDist = 0.0;
    std::optional<Complex> closest;
    std::size_t closestPole = 0;
    double closestDist = std::numeric_limits<double>::infinity();
    auto observe = [&](Complex z) {
        if (!hasPoles) return;
        std::size_t bestK = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < f.pole_count(); ++k) {
            const double d = std::abs(z - f.pole_location(k));
            if (d < best) {
                best = d;
                bestK = k;
            }
        }
        if (best <= params.poleBall) {
            inBall = z;
            inBallPole = bestK;
            inBallDist = best;
        }
        if (best < closestDist) {
            closestDist = best;
            closest = z;
            closestPole = bestK;
        }
    };

    auto finishEscape = [&](int m, std::optional<Complex> last, bool hit) {
        Escaped e;
        e.index = m;
        e.lastBounded = last;
        e.poleHit = hit;
        if (hasPoles && last) {
            if (inBall) {
                e.passage = inBall;
                e.nearestPole = inBallPole;
                e.poleDistance = inBallDist;
            } else {
                e.passage = closest;
                e.nearestPole = closestPole;
                e.poleDistance = closestDist;
            }
        } else {
            e.passage = last;
        }
        rec.outcome = e;
    };

    Complex z = z0;
    if (params.recordSamples) rec.samples.push_back(z);
    if (std::abs(z) > radius) {
        finishEscape(0, std::nullopt, false);
        return rec;
    }
    ringAt(0) = z;
    observe(z);

    for (int k = 1; k <= params.maxIter; ++k) {
        const Evaluation ev = eval(f, z);
        if (ev.is_pole()) {
            // Pole collision: the passage is the colliding iterate itself.
            inBall = z;
            inBallPole = ev.hit->pole;
            inBallDist = std::abs(z - f.pole_location(ev.hit->pole));
            finishEscape(k, z, true);
            return rec;
        }
        const Complex prev = z;
        z = ev.value;
        if (params.recordSamples) rec.samples.push_back(z);
        if (std::abs(z) > radius) {
            finishEscape(k, prev, false);
            return rec;
        }
        ringAt(k) = z;
        observe(z);

        if (k >= params.transient) {
            const int pmax = std::min(maxPeriod, k);
            for (int p = 1; p <= pmax; ++p) {
                if (std::abs(z - ringAt(k - p)) < params.cycleTol) {
                    rec.outcome = ConvergedToCycle{p, z, k};
                    return rec;
                }
            }
        }
    }
    rec.outcome = Undecided{params.maxIter};
    return rec;
}

OrbitRecord iterate_orbit(const ComplexPoly& p, Complex z0, const OrbitParams& params) {
    return iterate_orbit(RationalMapExpr(p), z0, params);
}

} // namespace mcm
