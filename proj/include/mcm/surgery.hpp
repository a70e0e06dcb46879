#pragma once

#include "mcm/hpcfp.hpp"
#include "mcm/pole_data.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcm {

class EmptyPoleSet : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class ConditionFails : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class ClosureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NoSlack : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class LevelOrderViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class ThresholdViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Constants of one cycle with picked phases J. All maps are keyed by phase.
struct SurgeryConstants {
    int cycle = 1;
    int period = 1;
    std::vector<int> J;             ///< picked phases, ascending
    std::map<int, int> tGaps;       ///< first return gap to the next picked phase
    double M = 1.0;
    std::map<int, double> alpha;
    std::map<int, double> beta;
    std::vector<int> degrees;       ///< n_j for every phase
    std::map<int, int> poleDegrees; ///< d_j for picked phases
    double closureError = 0.0;      ///< relative mismatch of the recursion after one lap

    int next(int j) const { return (j + tGaps.at(j)) % period; }
    /// n_j n_{j+1} ... n_{j+t-1}
    double degree_product(int j) const;
    /// Slack of the chain inequality at j:
    /// prod n * alpha_j - (n_{j+t}/d_{j+t} alpha_{j+t} + beta_{j+t}).
    double chain_gap(int j) const;
    bool chain_holds() const;
};

/// [cycle product]^(-1/(2|J|)); exactly 1 when the product is exactly 1.
double compute_M(const HpcfpModel& m, const PoleData& d, int cycle);

/// Run the alpha recursion around J from the seed and derive beta. Requires
/// the cycle to satisfy the arithmetic condition.
SurgeryConstants compute_alpha_beta(const HpcfpModel& m, const PoleData& d, int cycle, double seed = 1.0);

/// Same construction with no condition check, for diagnosing failing cycles.
SurgeryConstants build_surgery_constants(const HpcfpModel& m, const PoleData& d, int cycle, double seed = 1.0);

struct AnnulusModulus {
    double levelHigh = 1.0;
    double levelLow = 0.5;
};

/// (1/2 pi) log(levelHigh / levelLow); requires levelHigh > levelLow > 0.
double modulus_same_domain(const AnnulusModulus& a);

struct Levels {
    double out = 0.0;  ///< r^alpha
    double in = 0.0;   ///< r^beta
    double inf = 0.0;  ///< r^delta
};

enum class PlanStatus { Ok, LevelOrderViolation, ThresholdViolation };

struct LevelPlan {
    double r = 0.0;
    double groetzschC = 0.0;
    bool usedOracle = false;
    std::map<int, Levels> levels;
    std::map<int, double> delta;
    std::map<int, double> modulus;  ///< modulus used for the cross-domain annulus at j
    double rThreshold = 0.0;        ///< 0 when no slack
    bool levelOrderOk = false;      ///< alpha < beta < delta at every picked phase
    double modulusIdentityResidual = 0.0;
    bool thresholdOk = false;       ///< delta_{j+t} < prod n * alpha_j at every picked phase
    PlanStatus status = PlanStatus::Ok;
    std::vector<std::string> messages;

    /// Throws the exception matching a failed status.
    void require_ok() const;
};

/// Place the three equipotential levels in every picked domain at scale r.
/// Without an oracle the cross-domain modulus is replaced by its Groetzsch
/// upper bound C + (n_j / 2 pi) alpha_j ln(1/r). A zero modulus from the
/// oracle puts the innermost curve on the inner one; that degenerate case is
/// accepted as ordered. Failures are reported in status, not thrown.
LevelPlan plan_levels(const SurgeryConstants& sc, double r, double groetzschC,
                      const std::optional<std::map<int, double>>& modOracle = std::nullopt);

/// Largest r* below which plan_levels meets the threshold condition for C.
double r_threshold(const SurgeryConstants& sc, double groetzschC);

/// Level-arithmetic inclusion: delta_{j+t} < prod n * alpha_j for every j.
bool check_non_recurrence(const LevelPlan& plan, const SurgeryConstants& sc);

} // namespace mcm
