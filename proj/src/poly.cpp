#include "mcm/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

namespace mcm {

ComplexPoly::ComplexPoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(Complex{});
    trim();
}

ComplexPoly ComplexPoly::monomial(int degree, Complex coeff) {
    std::vector<Complex> c(static_cast<std::size_t>(degree) + 1, Complex{});
    c.back() = coeff;
    return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::linear_power(Complex a, int k) {
    ComplexPoly result = constant(1.0);
    const ComplexPoly factor({-a, Complex{1.0, 0.0}});
    for (int i = 0; i < k; ++i) result = result * factor;
    return result;
}

void ComplexPoly::trim() {
    while (coeffs_.size() > 1 && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

Complex ComplexPoly::operator()(Complex z) const {
    Complex acc = coeffs_.back();
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
}

void ComplexPoly::eval_with_derivative(Complex z, Complex& value, Complex& deriv) const {
    value = coeffs_.back();
    deriv = Complex{};
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
        deriv = deriv * z + value;
        value = value * z + coeffs_[k];
    }
}

ComplexPoly ComplexPoly::derivative() const {
    if (coeffs_.size() <= 1) return ComplexPoly();
    std::vector<Complex> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
    return ComplexPoly(std::move(d));
}

double ComplexPoly::abs_coeff_sum() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::abs(c);
    return s;
}

double ComplexPoly::coeff_norm() const {
    double s = 0.0;
    for (const auto& c : coeffs_) s += std::norm(c);
    return std::sqrt(s);
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Complex{});
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
}

ComplexPoly& ComplexPoly::operator-=(const ComplexPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Complex{});
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
}

ComplexPoly& ComplexPoly::operator*=(Complex s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, Complex{});
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::compose(const ComplexPoly& inner) const {
    ComplexPoly acc = constant(coeffs_.back());
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) acc = acc * inner + constant(coeffs_[k]);
    return acc;
}

std::string ComplexPoly::to_string() const {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        if (coeffs_[k] == Complex{} && coeffs_.size() > 1) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coeffs_[k].real() << (coeffs_[k].imag() < 0 ? "-" : "+")
           << std::abs(coeffs_[k].imag()) << "i)";
        if (k >= 1) os << "z";
        if (k >= 2) os << "^" << k;
    }
    return os.str();
}

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Starting radii from the upper convex hull of (k, log|a_k|).
std::vector<Complex> newton_polygon_start(const ComplexPoly& p, std::mt19937_64& rng) {
    const int n = p.degree();
    std::vector<int> idx;
    std::vector<double> logs;
    for (int k = 0; k <= n; ++k) {
        const double m = std::abs(p[k]);
        if (m > 0.0) {
            idx.push_back(k);
            logs.push_back(std::log(m));
        }
    }
    std::vector<std::size_t> hull;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull.back();
            const double cross = (idx[b] - idx[a]) * (logs[i] - logs[a]) - (logs[b] - logs[a]) * (idx[i] - idx[a]);
            if (cross >= 0.0) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }

    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    const double sigma = 0.7 + jitter(rng);
    std::vector<Complex> z;
    z.reserve(static_cast<std::size_t>(n));
    for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
        const int k0 = idx[hull[h]], k1 = idx[hull[h + 1]];
        const int count = k1 - k0;
        const double radius = std::exp((logs[hull[h]] - logs[hull[h + 1]]) / count);
        for (int j = 0; j < count; ++j) {
            const double angle = 2.0 * std::numbers::pi * (static_cast<double>(j) / count) +
                                 2.0 * std::numbers::pi * static_cast<double>(k0) / n + sigma + jitter(rng);
            const double rr = radius * (1.0 + jitter(rng));
            z.push_back(std::polar(rr, angle));
        }
    }
    return z;
}

double horner_error_bound(const ComplexPoly& p, Complex z) {
    const double az = std::abs(z);
    double acc = 0.0;
    for (std::size_t k = p.coeffs().size(); k-- > 0;) acc = acc * az + std::abs(p.coeffs()[k]);
    return 8.0 * (p.degree() + 1) * kEps * acc;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

std::vector<RootInfo> find_roots(const ComplexPoly& input, const RootOptions& opts) {
    if (input.degree() < 1) throw std::invalid_argument("find_roots: degree must be >= 1");

    // Exact zero roots come off first.
    int zeroMult = 0;
    while (input[static_cast<std::size_t>(zeroMult)] == Complex{}) ++zeroMult;
    std::vector<Complex> rest(input.coeffs().begin() + zeroMult, input.coeffs().end());
    const ComplexPoly p(std::move(rest));
    const int n = p.degree();

    std::vector<RootInfo> out;
    if (zeroMult > 0) out.push_back({Complex{}, zeroMult});

    if (n == 1) {
        out.push_back({-p[0] / p[1], 1});
    } else if (n >= 2) {
        std::mt19937_64 rng(opts.seed);
        std::vector<Complex> z = newton_polygon_start(p, rng);
        std::vector<bool> done(z.size(), false);
        std::vector<double> residual(z.size(), 0.0), bound(z.size(), 0.0);

        int iter = 0;
        for (; iter < opts.maxIterations; ++iter) {
            bool all = true;
            for (std::size_t i = 0; i < z.size(); ++i) {
                if (done[i]) continue;
                Complex v, dv;
                p.eval_with_derivative(z[i], v, dv);
                residual[i] = std::abs(v);
                bound[i] = horner_error_bound(p, z[i]);
                if (residual[i] <= bound[i]) {
                    done[i] = true;
                    continue;
                }
                all = false;
                const Complex ratio = v / dv;
                Complex sum{};
                for (std::size_t j = 0; j < z.size(); ++j)
                    if (j != i) sum += 1.0 / (z[i] - z[j]);
                const Complex w = ratio / (1.0 - ratio * sum);
                if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
                    z[i] += std::polar(1e-8 * (1.0 + std::abs(z[i])), 0.3 * static_cast<double>(i + 1));
                    continue;
                }
                z[i] -= w;
                if (std::abs(w) <= 4.0 * kEps * std::abs(z[i])) done[i] = true;
            }
            if (all) break;
        }
        if (iter == opts.maxIterations &&
            !std::all_of(done.begin(), done.end(), [](bool b) { return b; }))
            throw NonConvergence("find_roots: Aberth iteration exceeded " +
                                 std::to_string(opts.maxIterations) + " iterations");

        // Cluster: either within clusterTol, or overlapping inclusion discs.
        std::vector<double> radius(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double r = std::max(std::abs(p(z[i])), horner_error_bound(p, z[i]));
            double prod = std::abs(p.leading());
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != i && z[j] != z[i]) prod *= std::abs(z[i] - z[j]);
            radius[i] = prod > 0.0 ? n * r / prod : std::numeric_limits<double>::infinity();
        }
        UnionFind uf(z.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            for (std::size_t j = i + 1; j < z.size(); ++j) {
                const double dist = std::abs(z[i] - z[j]);
                if (dist <= opts.clusterTol * (1.0 + std::abs(z[i])) || dist <= radius[i] + radius[j])
                    uf.unite(i, j);
            }
        std::vector<std::vector<std::size_t>> groups(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) groups[uf.find(i)].push_back(i);
        for (const auto& g : groups) {
            if (g.empty()) continue;
            Complex c{};
            for (auto i : g) c += z[i];
            c /= static_cast<double>(g.size());
            if (g.size() == 1) {
                for (int k = 0; k < 3; ++k) {
                    Complex v, dv;
                    p.eval_with_derivative(c, v, dv);
                    if (dv == Complex{}) break;
                    const Complex next = c - v / dv;
                    if (std::abs(p(next)) < std::abs(v)) c = next;
                    else break;
                }
            } else {
                // An m-fold cluster is a simple root of the (m-1)-th derivative.
                double spread = 0.0;
                for (auto i : g) spread = std::max(spread, std::abs(z[i] - c));
                ComplexPoly q = p;
                for (std::size_t k = 1; k < g.size(); ++k) q = q.derivative();
                const Complex start = c;
                for (int k = 0; k < 5; ++k) {
                    Complex v, dv;
                    q.eval_with_derivative(c, v, dv);
                    if (dv == Complex{}) break;
                    const Complex next = c - v / dv;
                    if (std::abs(next - start) > spread || !(std::abs(q(next)) < std::abs(v))) break;
                    c = next;
                }
            }
            out.push_back({c, static_cast<int>(g.size())});
        }
    }

    std::sort(out.begin(), out.end(), [](const RootInfo& a, const RootInfo& b) {
        if (a.root.real() != b.root.real()) return a.root.real() < b.root.real();
        return a.root.imag() < b.root.imag();
    });
    return out;
}

} // namespace mcm
