#pragma once

#include "mcm/hpcfp.hpp"
#include "mcm/orbit.hpp"
#include "mcm/pole_data.hpp"
#include "mcm/rational_map.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mcm {

class CensusMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degree of the common-denominator form N/D: max(deg N, deg D).
int map_degree(const RationalMapExpr& f);

struct CriticalCensus {
    std::vector<RootInfo> criticalPoints;  ///< finite critical points that are not poles
    std::vector<int> poleMultiplicity;     ///< d_k - 1 per pole
    int infinityMultiplicity = 0;
    int total = 0;                         ///< nu
    int mapDegree = 0;
};

/// Throws CensusMismatch when nu != 2 deg - 2.
CriticalCensus critical_census(const RationalMapExpr& f);

struct InBasinOfInfinityDirectly {};
struct EscapesViaTrapDoor {
    std::size_t pole = 0;
    double distance = 0.0;  ///< |passage - pole|
};
struct ConvergesToBoundedCycle {
    int cycle = 0;   ///< model cycle index, 0 when no model cycle matches
    int period = 1;
    Complex representative;
};
struct OrbitUndecided {};

using CriticalClass = std::variant<InBasinOfInfinityDirectly, EscapesViaTrapDoor, ConvergesToBoundedCycle, OrbitUndecided>;

struct CriticalOrbit {
    RootInfo critical;
    OrbitRecord record;
    CriticalClass cls;
    std::optional<int> tc;  ///< first k >= 1 with f^k(c) within poleBall of a pole
};

struct VerifyParams {
    int maxIter = 2000;
    double escapeRadius = 0.0;  ///< 0 selects the auto radius
    double poleBall = 0.1;
    double cycleTol = 1e-9;
    double cycleMatchTol = 1e-3;  ///< relative distance to a model cycle point
    ClassifyParams classify{};
};

struct CriticalOrbitReport {
    std::vector<CriticalOrbit> orbits;
    /// Model domain containing each pole, nullopt when it lies in none.
    std::vector<std::optional<DomainKey>> poleDomains;
};

CriticalOrbitReport classify_critical_orbits(const RationalMapExpr& f, const HpcfpModel& model,
                                             const PoleData& poleData, const VerifyParams& params = {});

struct CyclePersistence {
    int cycle = 0;
    bool converged = false;
    Complex point;
    double multiplier = 0.0;  ///< |(f^p)'| at the refined point
};

/// Newton's method on f^p(z) - z seeded at the polynomial cycle point.
CyclePersistence refine_cycle(const RationalMapExpr& f, Complex seed, int period, int cycle = 0);

struct VerificationVerdict {
    bool degreeOk = false;
    bool censusOk = false;
    bool allFreeCriticalsConsistent = false;
    bool untouchedCyclesPersist = false;
    bool conditionHolds = false;  ///< false means the verdict is not expected to pass
    std::vector<std::string> details;
    std::optional<CriticalCensus> census;
    CriticalOrbitReport orbits;
    std::vector<CyclePersistence> persistence;

    bool pass() const { return degreeOk && censusOk && allFreeCriticalsConsistent && untouchedCyclesPersist; }
};

/// Necessary-condition check that f behaves like a McMullen-like perturbation
/// of the model with the given pole data. Never throws on well-formed input;
/// problems are collected in details.
VerificationVerdict verify_family(const RationalMapExpr& f, const HpcfpModel& model, const PoleData& poleData,
                                  const VerifyParams& params = {});

std::string describe(const CriticalClass& c);

} // namespace mcm
