#include "mcm/surgery.hpp"

#include "mcm/pole_arith.hpp"

#include <cmath>
#include <numbers>

namespace mcm {

namespace {

std::vector<int> picked_phases(const HpcfpModel& m, const PoleData& d, int cycle) {
    std::vector<int> J;
    for (int j = 0; j < m.cycle(cycle).period; ++j)
        if (d.contains({cycle, j})) J.push_back(j);
    return J;
}

} // namespace

double SurgeryConstants::degree_product(int j) const {
    double prod = 1.0;
    for (int k = 0; k < tGaps.at(j); ++k) prod *= degrees.at(static_cast<std::size_t>((j + k) % period));
    return prod;
}

double SurgeryConstants::chain_gap(int j) const {
    const int nx = next(j);
    const double lhs = static_cast<double>(degrees.at(static_cast<std::size_t>(nx))) / poleDegrees.at(nx) * alpha.at(nx) +
                       beta.at(nx);
    return degree_product(j) * alpha.at(j) - lhs;
}

bool SurgeryConstants::chain_holds() const {
    for (int j : J)
        if (!(chain_gap(j) > 0.0)) return false;
    return true;
}

double compute_M(const HpcfpModel& m, const PoleData& d, int cycle) {
    validate_pole_data(m, d);
    const auto J = picked_phases(m, d, cycle);
    if (J.empty()) throw EmptyPoleSet("cycle " + std::to_string(cycle) + " has no phase in the pole data");
    const ExactRational prod = cycle_product(m, d, cycle);
    if (prod == ExactRational(1)) return 1.0;
    return std::pow(prod.to_double(), -1.0 / (2.0 * static_cast<double>(J.size())));
}

SurgeryConstants build_surgery_constants(const HpcfpModel& m, const PoleData& d, int cycle, double seed) {
    if (!(seed > 0.0)) throw std::invalid_argument("seed must be positive");
    SurgeryConstants sc;
    sc.cycle = cycle;
    sc.period = m.cycle(cycle).period;
    sc.degrees = m.cycle(cycle).degrees;
    sc.M = compute_M(m, d, cycle);
    sc.J = picked_phases(m, d, cycle);
    for (int j : sc.J) sc.poleDegrees[j] = d.at({cycle, j});
    for (std::size_t k = 0; k < sc.J.size(); ++k) {
        const int j = sc.J[k];
        const int nx = sc.J[(k + 1) % sc.J.size()];
        sc.tGaps[j] = ((nx - j) % sc.period + sc.period) % sc.period;
        if (sc.tGaps[j] == 0) sc.tGaps[j] = sc.period;
    }

    const double M2inv = 1.0 / (sc.M * sc.M);
    auto n = [&](int j) { return static_cast<double>(sc.degrees.at(static_cast<std::size_t>(j % sc.period))); };
    auto step = [&](int j, double a) {
        const int t = sc.tGaps.at(j);
        const int nx = (j + t) % sc.period;
        double bracket = 1.0;
        for (int k = 1; k < t; ++k) bracket /= n(j + k);
        bracket *= 1.0 / n(nx) + 1.0 / sc.poleDegrees.at(nx);
        return M2inv * (n(j) / n(nx)) / bracket * a;
    };

    double a = seed;
    sc.alpha[sc.J.front()] = seed;
    for (std::size_t k = 0; k < sc.J.size(); ++k) {
        a = step(sc.J[k], a);
        if (k + 1 < sc.J.size()) sc.alpha[sc.J[k + 1]] = a;
    }
    sc.closureError = std::abs(a - seed) / seed;

    for (int j : sc.J) {
        const double al = sc.alpha.at(j);
        sc.beta[j] = sc.M * al + (sc.M - 1.0) * (n(j) / sc.poleDegrees.at(j)) * al;
    }
    return sc;
}

SurgeryConstants compute_alpha_beta(const HpcfpModel& m, const PoleData& d, int cycle, double seed) {
    validate_pole_data(m, d);
    const ExactRational prod = cycle_product(m, d, cycle);
    if (!(prod < ExactRational(1)))
        throw ConditionFails("cycle " + std::to_string(cycle) + " product " + prod.str() + " is not < 1");
    SurgeryConstants sc = build_surgery_constants(m, d, cycle, seed);
    if (sc.closureError > 1e-12)
        throw ClosureError("alpha recursion does not close: relative error " + std::to_string(sc.closureError));
    return sc;
}

double modulus_same_domain(const AnnulusModulus& a) {
    if (!(a.levelLow > 0.0) || !(a.levelHigh > a.levelLow))
        throw std::invalid_argument("annulus levels must satisfy levelHigh > levelLow > 0");
    return std::log(a.levelHigh / a.levelLow) / (2.0 * std::numbers::pi);
}

void LevelPlan::require_ok() const {
    switch (status) {
    case PlanStatus::Ok: return;
    case PlanStatus::LevelOrderViolation: throw LevelOrderViolation(messages.empty() ? "level order" : messages.front());
    case PlanStatus::ThresholdViolation: throw ThresholdViolation(messages.empty() ? "threshold" : messages.front());
    }
}

LevelPlan plan_levels(const SurgeryConstants& sc, double r, double groetzschC,
                      const std::optional<std::map<int, double>>& modOracle) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0,1)");
    if (!modOracle && groetzschC < 0.0) throw std::invalid_argument("Groetzsch constant must be >= 0");

    LevelPlan plan;
    plan.r = r;
    plan.groetzschC = groetzschC;
    plan.usedOracle = modOracle.has_value();
    const double L = std::log(1.0 / r);
    const double twoPi = 2.0 * std::numbers::pi;
    try {
        plan.rThreshold = r_threshold(sc, groetzschC);
    } catch (const NoSlack&) {
        plan.rThreshold = 0.0;
    }

    plan.levelOrderOk = true;
    for (int j : sc.J) {
        const double a = sc.alpha.at(j);
        const double b = sc.beta.at(j);
        const double dj = sc.poleDegrees.at(j);
        const double nj = sc.degrees.at(static_cast<std::size_t>(j));
        double mod;
        if (modOracle) {
            const auto it = modOracle->find(j);
            if (it == modOracle->end()) throw std::invalid_argument("modulus oracle lacks phase " + std::to_string(j));
            mod = it->second;
        } else {
            mod = groetzschC + nj / twoPi * a * L;
        }
        const double delta = b + twoPi / dj * mod / L;
        plan.modulus[j] = mod;
        plan.delta[j] = delta;
        plan.levels[j] = {std::pow(r, a), std::pow(r, b), std::pow(r, delta)};

        const bool innerOk = delta > b || (mod == 0.0 && delta == b);
        if (!(a < b) || !innerOk) {
            plan.levelOrderOk = false;
            plan.messages.push_back("level order fails at phase " + std::to_string(j));
        }
        // mod(gamma_in, gamma_inf) against mod / d_j.
        const double same = (delta - b) * L / twoPi;
        plan.modulusIdentityResidual = std::max(plan.modulusIdentityResidual, std::abs(same - mod / dj));
    }

    plan.thresholdOk = true;
    for (int j : sc.J) {
        if (!(plan.delta.at(sc.next(j)) < sc.degree_product(j) * sc.alpha.at(j))) {
            plan.thresholdOk = false;
            plan.messages.push_back("threshold fails: delta at phase " + std::to_string(sc.next(j)) +
                                    " is not below the pushed-forward outer level of phase " + std::to_string(j));
        }
    }
    if (!plan.levelOrderOk) plan.status = PlanStatus::LevelOrderViolation;
    else if (!plan.thresholdOk) plan.status = PlanStatus::ThresholdViolation;
    return plan;
}

double r_threshold(const SurgeryConstants& sc, double groetzschC) {
    if (groetzschC < 0.0) throw std::invalid_argument("Groetzsch constant must be >= 0");
    double worst = 0.0;
    for (int j : sc.J) {
        const double gap = sc.chain_gap(j);
        if (!(gap > 0.0))
            throw NoSlack("chain inequality has no slack at phase " + std::to_string(j));
        worst = std::max(worst, 2.0 * std::numbers::pi * groetzschC / (sc.poleDegrees.at(sc.next(j)) * gap));
    }
    return std::exp(-worst);
}

bool check_non_recurrence(const LevelPlan& plan, const SurgeryConstants& sc) {
    for (int j : sc.J)
        if (!(plan.delta.at(sc.next(j)) < sc.degree_product(j) * sc.alpha.at(j))) return false;
    return true;
}

} // namespace mcm
