#pragma once

#include "mcm/hpcfp.hpp"
#include "mcm/pole_data.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace mcm {

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
class ExactRational {
public:
    using Rep = boost::multiprecision::cpp_rational;

    ExactRational() = default;
    ExactRational(long long num, long long den = 1);
    explicit ExactRational(Rep v) : v_(std::move(v)) {}

    const Rep& rep() const { return v_; }
    std::string numerator() const;
    std::string denominator() const;
    /// "num/den", denominator printed even when it is 1.
    std::string str() const;
    double to_double() const;

    friend ExactRational operator+(const ExactRational& a, const ExactRational& b) { return ExactRational(a.v_ + b.v_); }
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b) { return ExactRational(a.v_ - b.v_); }
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b) { return ExactRational(a.v_ * b.v_); }
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b);
    friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.v_ == b.v_; }
    friend bool operator<(const ExactRational& a, const ExactRational& b) { return a.v_ < b.v_; }
    friend bool operator>(const ExactRational& a, const ExactRational& b) { return b < a; }
    friend bool operator<=(const ExactRational& a, const ExactRational& b) { return !(b < a); }
    friend bool operator>=(const ExactRational& a, const ExactRational& b) { return !(a < b); }

private:
    Rep v_{0};
};

/// Sum of all pole degrees.
int pole_data_degree(const PoleData& d);

struct CycleCondition {
    int cycle = 1;
    ExactRational product;
    bool holds = false;
    bool picked = false;  ///< some phase of the cycle is in the pole data
};

struct ConditionReport {
    std::vector<CycleCondition> perCycle;
    bool overall = false;
    int degree = 0;
};

/// Throws InvalidPoleDataKey on a key outside the model, std::invalid_argument
/// on empty pole data.
void validate_pole_data(const HpcfpModel& m, const PoleData& d);

/// Per cycle: prod over unpicked phases of 1/n times prod over picked phases
/// of (1/n + 1/d), compared exactly against 1. Cycles without picked phases
/// always hold; their product is still reported.
ConditionReport check_condition(const HpcfpModel& m, const PoleData& d);

/// Exact per-cycle product without the validity checks.
ExactRational cycle_product(const HpcfpModel& m, const PoleData& d, int cycle);

/// Cyclic weighted permutation matrix of one cycle's canonical multicurve.
/// The only nonzero entry of row j-1 sits in column j.
struct TransitionMatrix {
    int cycle = 1;
    int size = 1;
    std::vector<ExactRational> entries;  ///< entries[j] = m_{j-1,j}, j mod size

    ExactRational at(int row, int col) const;
    std::vector<std::vector<double>> to_dense() const;
};

TransitionMatrix transition_matrix(const HpcfpModel& m, const PoleData& d, int cycle);

struct ExactEigenvalue {
    ExactRational product;  ///< product of the cyclic entries
    int root = 1;           ///< the eigenvalue is product^(1/root)
    double value() const;
};

ExactEigenvalue leading_eigenvalue_exact(const TransitionMatrix& t);
double leading_eigenvalue(const TransitionMatrix& t);

/// Spectral radius by power iteration on t^size (floating point), so that
/// the rotating eigenvalues of the cyclic pattern collapse onto one modulus.
/// Throws NonConvergence when the estimate has not settled within iters.
double power_iteration_eigenvalue(const TransitionMatrix& t, int iters = 1000, double tol = 1e-15);

} // namespace mcm
