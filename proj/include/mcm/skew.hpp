#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mcm {

/// Depth-k cylinder of the two-symbol shift. Bit k-1 of `bits` is the
/// leading symbol, bit 0 the last one.
struct CodeWord {
    std::uint64_t bits = 0;
    int depth = 1;

    static CodeWord from_string(const std::string& s);
    std::string to_string() const;
    int leading() const { return static_cast<int>((bits >> (depth - 1)) & 1u); }
    bool all_ones() const;
    bool operator==(const CodeWord&) const = default;
};

struct SkewState {
    CodeWord code;
    double theta = 0.0;  ///< in [0, 1)
};

class DepthExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Leading 1: shift, theta -> n theta. Leading 0: shift and flip every
/// remaining symbol, theta -> -d theta. Angles are taken mod 1.
SkewState skew_step(const SkewState& s, int n, int d);

/// Code part of skew_step.
CodeWord code_step(const CodeWord& c);

struct Unburied {
    int hitTime = 0;
    bool operator==(const Unburied&) const = default;
};
struct BuriedPreperiodic {
    int preperiod = 0;
    int period = 1;
    bool operator==(const BuriedPreperiodic&) const = default;
};
struct BuriedWandering {
    bool operator==(const BuriedWandering&) const = default;
};
using CurveClass = std::variant<Unburied, BuriedPreperiodic, BuriedWandering>;

std::string describe(const CurveClass& c);

/// Iterate the code map up to `horizon` steps (horizon <= depth - 1).
/// Unburied(h) for the least h whose image is all ones. Otherwise
/// BuriedPreperiodic(a, b - a) for the least b whose image is a prefix of an
/// earlier image a (least such a). Otherwise BuriedWandering.
CurveClass classify_code(const CodeWord& c, int horizon);

struct SkewCensus {
    int depth = 0;
    int horizon = 0;
    std::uint64_t unburied = 0;
    std::uint64_t preperiodic = 0;
    std::uint64_t wandering = 0;
    std::uint64_t total() const { return unburied + preperiodic + wandering; }
};

/// Classify all 2^k codes of depth k (k <= 20), split over `threads`
/// workers (0 = hardware concurrency, overridden by MCM_THREADS).
SkewCensus census_at_depth(int k, int horizon, int threads = 0);

/// Independent count of unburied codes: breadth-first preimages of the
/// all-ones cylinder under the code map. Entry c holds the least hit time of
/// code c, or -1 when it is not reached within horizon.
std::vector<int> unburied_by_preimages(int k, int horizon);

/// Worker count from an explicit request, MCM_THREADS, or the hardware.
int resolve_threads(int requested);

} // namespace mcm
