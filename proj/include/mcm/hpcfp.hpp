#pragma once

#include "mcm/pole_data.hpp"
#include "mcm/poly.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcm {

/// One bounded super-attracting cycle. points[j] maps to points[j+1];
/// points is empty for models that were not extracted from a polynomial.
struct CycleSpec {
    int index = 1;
    int period = 1;
    std::vector<Complex> points;
    std::vector<int> degrees;  ///< n_{i,j}
};

struct CriticalAssignment {
    Complex point;
    int multiplicity = 1;
    bool bounded = true;  ///< false: the orbit escapes
    int cycle = 0;        ///< 1-based, valid when bounded
    int phase = 0;        ///< cycle point the orbit lands on
    int preperiod = 0;    ///< first iterate within landing tolerance of the cycle
};

struct HpcfpModel {
    int degree = 2;
    std::vector<CycleSpec> cycles;
    std::optional<ComplexPoly> source;
    std::vector<CriticalAssignment> critical;
    std::vector<std::string> warnings;

    const CycleSpec& cycle(int i) const { return cycles.at(static_cast<std::size_t>(i - 1)); }
    bool valid_key(DomainKey k) const {
        return k.cycle >= 1 && k.cycle <= static_cast<int>(cycles.size()) && k.phase >= 0 &&
               k.phase < cycle(k.cycle).period;
    }
};

class NotHpcfp : public std::runtime_error {
public:
    NotHpcfp(const std::string& what, std::vector<CriticalAssignment> partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const std::vector<CriticalAssignment>& partial() const { return partial_; }

private:
    std::vector<CriticalAssignment> partial_;
};

class MultiplierNotZero : public std::runtime_error {
public:
    MultiplierNotZero(const std::string& what, double multiplier)
        : std::runtime_error(what), multiplier_(multiplier) {}
    double multiplier() const { return multiplier_; }

private:
    double multiplier_;
};

struct ClassifyParams {
    int maxIter = 2000;
    double tol = 1e-9;              ///< cycle closure tolerance
    double multiplierTol = 1e-6;
    double landTol = 1e-8;          ///< relative distance counted as "on the cycle"
    double nearTol = 1e-3;          ///< relative distance where approach is inspected
};

/// Extract the cycle skeleton of a hyperbolic postcritically finite polynomial.
///
/// Labelling is deterministic: inside a cycle, phase 0 is the lexicographically
/// least (re, im) cycle point that is a critical point; cycles are sorted by
/// period, then by their phase-0 point.
HpcfpModel classify_polynomial(const ComplexPoly& p, const ClassifyParams& params = {});

struct RiemannHurwitzReport {
    bool holds = false;
    int expected = 0;   ///< n - 1
    int observed = 0;   ///< sum (n_{i,j} - 1)
};

RiemannHurwitzReport riemann_hurwitz_check(const HpcfpModel& m);

/// Which periodic domain's immediate basin contains z, decided by iterating
/// the source polynomial until the orbit lands on a cycle point and reading
/// off the phase lag. nullopt if the orbit escapes or never lands.
std::optional<DomainKey> locate_domain(const HpcfpModel& m, Complex z, const ClassifyParams& params = {});

/// Affine conjugacy class of (P, D): monic centred coefficients chosen
/// canonically over the residual rotations, plus the cycle structure and
/// pole degrees in canonical labelling.
struct NormalizedType {
    struct Cycle {
        int period = 1;
        std::vector<int> degrees;
        bool operator==(const Cycle&) const = default;
    };

    std::vector<Complex> coeffs;
    std::vector<Cycle> cycles;
    /// poleDegrees[i][j] = d_{i+1,j}, 0 when U_{i+1,j} is not picked.
    std::vector<std::vector<int>> poleDegrees;

    ComplexPoly polynomial() const { return ComplexPoly(coeffs); }
    PoleData pole_data() const;
};

NormalizedType normalize_type(const ComplexPoly& p, const PoleData& d, const ClassifyParams& params = {});
NormalizedType normalize_type(const HpcfpModel& m, const PoleData& d, const ClassifyParams& params = {});

/// Coefficients equal within 1e-8, combinatorial data exactly equal.
bool types_equal(const NormalizedType& a, const NormalizedType& b);

/// (P(a w + b) - b) / a
ComplexPoly affine_conjugate(const ComplexPoly& p, Complex a, Complex b);

} // namespace mcm
