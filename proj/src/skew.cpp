#include "mcm/skew.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>

namespace mcm {

namespace {

std::uint64_t mask(int depth) { return depth >= 64 ? ~0ULL : ((1ULL << depth) - 1); }

double wrap(double x) {
    double r = std::fmod(x, 1.0);
    if (r < 0.0) r += 1.0;
    if (r >= 1.0) r = 0.0;
    return r;
}

} // namespace

CodeWord CodeWord::from_string(const std::string& s) {
    if (s.empty() || s.size() > 64) throw std::invalid_argument("code length must be in 1..64");
    CodeWord c;
    c.depth = static_cast<int>(s.size());
    for (char ch : s) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("code must consist of 0 and 1");
        c.bits = (c.bits << 1) | static_cast<std::uint64_t>(ch - '0');
    }
    return c;
}

std::string CodeWord::to_string() const {
    std::string s;
    for (int k = depth - 1; k >= 0; --k) s.push_back(((bits >> k) & 1u) ? '1' : '0');
    return s;
}

bool CodeWord::all_ones() const { return bits == mask(depth); }

CodeWord code_step(const CodeWord& c) {
    if (c.depth < 2) throw DepthExhausted("cannot shift a depth-1 cylinder");
    const int depth = c.depth - 1;
    std::uint64_t tail = c.bits & mask(depth);
    if (c.leading() == 0) tail = ~tail & mask(depth);
    return {tail, depth};
}

SkewState skew_step(const SkewState& s, int n, int d) {
    if (n < 1 || d < 1) throw std::invalid_argument("n and d must be >= 1");
    SkewState out;
    out.code = code_step(s.code);
    out.theta = s.code.leading() == 1 ? wrap(n * s.theta) : wrap(-d * s.theta);
    return out;
}

std::string describe(const CurveClass& c) {
    std::ostringstream os;
    if (const auto* u = std::get_if<Unburied>(&c)) os << "unburied(" << u->hitTime << ")";
    else if (const auto* p = std::get_if<BuriedPreperiodic>(&c)) os << "buried-preperiodic(" << p->preperiod << "," << p->period << ")";
    else os << "buried-wandering";
    return os.str();
}

CurveClass classify_code(const CodeWord& c, int horizon) {
    if (horizon < 0 || horizon > c.depth - 1) throw std::invalid_argument("horizon must lie in 0..depth-1");
    std::vector<CodeWord> orbit{c};
    for (int s = 1; s <= horizon; ++s) orbit.push_back(code_step(orbit.back()));
    for (int h = 0; h <= horizon; ++h)
        if (orbit[static_cast<std::size_t>(h)].all_ones()) return Unburied{h};
    for (int b = 1; b <= horizon; ++b) {
        const CodeWord& cb = orbit[static_cast<std::size_t>(b)];
        for (int a = 0; a < b; ++a) {
            const CodeWord& ca = orbit[static_cast<std::size_t>(a)];
            if ((ca.bits >> (ca.depth - cb.depth)) == cb.bits) return BuriedPreperiodic{a, b - a};
        }
    }
    return BuriedWandering{};
}

int resolve_threads(int requested) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("MCM_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, n);
}

SkewCensus census_at_depth(int k, int horizon, int threads) {
    if (k < 1 || k > 20) throw std::invalid_argument("census depth must lie in 1..20");
    const std::uint64_t total = 1ULL << k;
    const int workers = static_cast<int>(std::min<std::uint64_t>(static_cast<std::uint64_t>(resolve_threads(threads)), total));
    std::vector<SkewCensus> parts(static_cast<std::size_t>(workers));
    auto work = [&](int w) {
        SkewCensus& part = parts[static_cast<std::size_t>(w)];
        const std::uint64_t lo = total * static_cast<std::uint64_t>(w) / static_cast<std::uint64_t>(workers);
        const std::uint64_t hi = total * static_cast<std::uint64_t>(w + 1) / static_cast<std::uint64_t>(workers);
        for (std::uint64_t b = lo; b < hi; ++b) {
            const CurveClass cls = classify_code({b, k}, horizon);
            if (std::holds_alternative<Unburied>(cls)) ++part.unburied;
            else if (std::holds_alternative<BuriedPreperiodic>(cls)) ++part.preperiodic;
            else ++part.wandering;
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();

    SkewCensus out;
    out.depth = k;
    out.horizon = horizon;
    for (const auto& p : parts) {
        out.unburied += p.unburied;
        out.preperiodic += p.preperiodic;
        out.wandering += p.wandering;
    }
    return out;
}

std::vector<int> unburied_by_preimages(int k, int horizon) {
    if (k < 1 || k > 24) throw std::invalid_argument("oracle depth must lie in 1..24");
    if (horizon < 0 || horizon > k - 1) throw std::invalid_argument("horizon must lie in 0..depth-1");
    std::vector<int> hit(1ULL << k, -1);
    for (int h = 0; h <= horizon; ++h) {
        // Codes of depth k - h + s whose image after s steps is all ones.
        std::vector<std::uint64_t> layer{mask(k - h)};
        for (int s = 0; s < h; ++s) {
            const int depth = k - h + s;
            std::vector<std::uint64_t> next;
            next.reserve(layer.size() * 2);
            for (std::uint64_t w : layer) {
                next.push_back((1ULL << depth) | w);
                next.push_back(~w & mask(depth));
            }
            layer = std::move(next);
        }
        for (std::uint64_t c : layer)
            if (hit[c] < 0) hit[c] = h;
    }
    return hit;
}

} // namespace mcm
