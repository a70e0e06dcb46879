#include "mcm/pole_arith.hpp"

#include <cmath>
#include <stdexcept>

namespace mcm {

ExactRational::ExactRational(long long num, long long den) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    v_ = Rep(num, den);
}

ExactRational operator/(const ExactRational& a, const ExactRational& b) {
    if (b.v_ == 0) throw std::domain_error("division by zero");
    return ExactRational(a.v_ / b.v_);
}

std::string ExactRational::numerator() const { return boost::multiprecision::numerator(v_).str(); }
std::string ExactRational::denominator() const { return boost::multiprecision::denominator(v_).str(); }
std::string ExactRational::str() const { return numerator() + "/" + denominator(); }
double ExactRational::to_double() const { return v_.convert_to<double>(); }

int pole_data_degree(const PoleData& d) {
    int s = 0;
    for (const auto& [k, deg] : d.entries) s += deg;
    return s;
}

void validate_pole_data(const HpcfpModel& m, const PoleData& d) {
    if (d.empty()) throw std::invalid_argument("pole data is empty");
    for (const auto& [k, deg] : d.entries) {
        if (!m.valid_key(k))
            throw InvalidPoleDataKey("pole data key (cycle " + std::to_string(k.cycle) + ", phase " +
                                     std::to_string(k.phase) + ") does not name a periodic domain");
        if (deg < 1) throw InvalidPoleDataKey("pole degree must be >= 1");
    }
}

ExactRational cycle_product(const HpcfpModel& m, const PoleData& d, int cycle) {
    const CycleSpec& c = m.cycle(cycle);
    ExactRational prod(1);
    for (int j = 0; j < c.period; ++j) {
        ExactRational factor(1, c.degrees.at(static_cast<std::size_t>(j)));
        const DomainKey key{cycle, j};
        if (d.contains(key)) factor = factor + ExactRational(1, d.at(key));
        prod = prod * factor;
    }
    return prod;
}

ConditionReport check_condition(const HpcfpModel& m, const PoleData& d) {
    validate_pole_data(m, d);
    ConditionReport r;
    r.degree = pole_data_degree(d);
    r.overall = true;
    for (const auto& c : m.cycles) {
        CycleCondition cc;
        cc.cycle = c.index;
        cc.product = cycle_product(m, d, c.index);
        for (int j = 0; j < c.period; ++j) cc.picked = cc.picked || d.contains({c.index, j});
        cc.holds = !cc.picked || cc.product < ExactRational(1);
        r.overall = r.overall && cc.holds;
        r.perCycle.push_back(std::move(cc));
    }
    return r;
}

ExactRational TransitionMatrix::at(int row, int col) const {
    const int j = ((row + 1) % size + size) % size;
    return col == j ? entries.at(static_cast<std::size_t>(j)) : ExactRational(0);
}

std::vector<std::vector<double>> TransitionMatrix::to_dense() const {
    std::vector<std::vector<double>> a(static_cast<std::size_t>(size), std::vector<double>(static_cast<std::size_t>(size), 0.0));
    for (int j = 0; j < size; ++j)
        a[static_cast<std::size_t>((j - 1 + size) % size)][static_cast<std::size_t>(j)] =
            entries[static_cast<std::size_t>(j)].to_double();
    return a;
}

TransitionMatrix transition_matrix(const HpcfpModel& m, const PoleData& d, int cycle) {
    const CycleSpec& c = m.cycle(cycle);
    TransitionMatrix t;
    t.cycle = cycle;
    t.size = c.period;
    for (int j = 0; j < c.period; ++j) {
        const int prev = (j - 1 + c.period) % c.period;
        ExactRational e(1, c.degrees.at(static_cast<std::size_t>(prev)));
        if (d.contains({cycle, prev})) e = e + ExactRational(1, d.at({cycle, prev}));
        t.entries.push_back(e);
    }
    return t;
}

double ExactEigenvalue::value() const { return std::pow(product.to_double(), 1.0 / root); }

ExactEigenvalue leading_eigenvalue_exact(const TransitionMatrix& t) {
    ExactRational prod(1);
    for (const auto& e : t.entries) prod = prod * e;
    return {prod, t.size};
}

double leading_eigenvalue(const TransitionMatrix& t) { return leading_eigenvalue_exact(t).value(); }

namespace {

using Dense = std::vector<std::vector<double>>;

Dense multiply(const Dense& a, const Dense& b) {
    const std::size_t n = a.size();
    Dense c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a[i][k] != 0.0)
                for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

} // namespace

double power_iteration_eigenvalue(const TransitionMatrix& t, int iters, double tol) {
    const Dense a = t.to_dense();
    Dense ap = a;
    for (int k = 1; k < t.size; ++k) ap = multiply(ap, a);

    const std::size_t n = ap.size();
    std::vector<double> v(n, 1.0);
    double prev = -1.0;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += ap[i][j] * v[j];
        double norm = 0.0;
        for (double x : w) norm = std::max(norm, std::abs(x));
        if (norm == 0.0) return 0.0;
        for (auto& x : w) x /= norm;
        v = std::move(w);
        if (prev >= 0.0 && std::abs(norm - prev) <= tol * std::max(1.0, norm))
            return std::pow(norm, 1.0 / t.size);
        prev = norm;
    }
    throw NonConvergence("power iteration did not converge");
}

} // namespace mcm
