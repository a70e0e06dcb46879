#pragma once

#include "mcm/rational_map.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace mcm {

struct OrbitParams {
    double escapeRadius = 0.0;  ///< 0 selects the map's auto radius
    int maxIter = 2000;
    double cycleTol = 1e-9;
    int transient = 20;         ///< no cycle test before this index
    int maxPeriod = 64;
    /// Radius around a pole within which an iterate counts as passing
    /// through that pole's neighbourhood.
    double poleBall = 0.1;
    bool recordSamples = true;
};

struct Escaped {
    int index = 0;                    ///< first m with |z_m| > R (or pole hit at m-1)
    std::optional<Complex> lastBounded;  ///< z_{m-1}; empty when m == 0
    std::optional<Complex> passage;      ///< trap-door passage point, see iterate_orbit
    std::optional<std::size_t> nearestPole;
    double poleDistance = 0.0;        ///< |passage - nearest pole|
    bool poleHit = false;
};

struct ConvergedToCycle {
    int period = 1;
    Complex representative;  ///< z at the detection index
    int index = 0;           ///< detection index
};

struct Undecided {
    int iterations = 0;
};

using OrbitOutcome = std::variant<Escaped, ConvergedToCycle, Undecided>;

struct OrbitRecord {
    std::vector<Complex> samples;  ///< z_0 .. z_last (finite iterates only)
    OrbitOutcome outcome;

    bool escaped() const { return std::holds_alternative<Escaped>(outcome); }
    bool converged() const { return std::holds_alternative<ConvergedToCycle>(outcome); }
    bool undecided() const { return std::holds_alternative<Undecided>(outcome); }
};

/// Iterate z0 until escape, cycle closure, or maxIter.
///
/// Escape: |z_m| > escapeRadius, or z_{m-1} collides with a pole. Cycle: after
/// the transient, the smallest p <= maxPeriod with |z_k - z_{k-p}| < cycleTol.
///
/// For escaping orbits of maps with poles the passage point is the last
/// bounded iterate lying within poleBall of a pole; when the orbit never
/// comes that close it is the bounded iterate of closest pole approach. For
/// pole-free maps it is z_{m-1}.
OrbitRecord iterate_orbit(const RationalMapExpr& f, Complex z0, const OrbitParams& params);
OrbitRecord iterate_orbit(const ComplexPoly& p, Complex z0, const OrbitParams& params);

} // namespace mcm
