#pragma once

#include "mcm/rational_map.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace mcm {

struct Attractor {
    std::vector<Complex> points;  ///< cycle points in dynamical order
    int period = 1;
};

struct RenderSpec {
    RationalMapExpr map;
    int width = 512;
    int height = 512;
    Complex center{0.0, 0.0};
    double halfWidth = 1.5;
    int maxIter = 512;
    double escapeRadius = 0.0;  ///< 0 selects the auto radius
    double cycleTol = 1e-9;
    std::optional<std::vector<Attractor>> attractors;
    int threads = 0;  ///< 0: MCM_THREADS or hardware concurrency

    double pitch() const { return 2.0 * halfWidth / width; }
    /// Centre of pixel (col, row), row 0 at the top.
    Complex pixel(int col, int row) const;
};

struct Cell {
    enum class Kind : unsigned char { Escaped, Basin, Undecided };
    Kind kind = Kind::Undecided;
    int iterations = 0;  ///< escape index for Escaped
    int id = 0;          ///< attractor index for Basin
    int phase = 0;

    static Cell escaped(int k) { return {Kind::Escaped, k, 0, 0}; }
    static Cell basin(int id, int phase) { return {Kind::Basin, 0, id, phase}; }
    static Cell undecided() { return {}; }
    bool operator==(const Cell&) const = default;
};

struct ClassGrid {
    int width = 0;
    int height = 0;
    std::vector<Cell> cells;  ///< row-major, top row first

    const Cell& at(int col, int row) const { return cells[static_cast<std::size_t>(row) * width + col]; }
    Cell& at(int col, int row) { return cells[static_cast<std::size_t>(row) * width + col]; }
};

/// Classify one starting point. Converged orbits are matched to the listed
/// attractors; an unmatched cycle gets id = attractors.size(). The phase is
/// the cycle position of z0's own domain.
Cell classify_point(const RenderSpec& spec, Complex z0);

/// Parallel over row bands; output independent of the thread count.
ClassGrid classify_grid(const RenderSpec& spec);

/// RGB triple for one cell.
std::array<unsigned char, 3> cell_color(const Cell& c);
std::string ppm_bytes(const ClassGrid& grid);
/// Throws std::runtime_error naming the path on I/O failure.
void write_ppm(const ClassGrid& grid, const std::string& path);
/// Rows of comma-separated tags: E<k>, B<id>.<phase>, U.
std::string grid_to_text(const ClassGrid& grid);

struct RadialProfile {
    double angle = 0.0;
    std::vector<std::pair<double, Cell>> samples;
    int alternations = 0;  ///< Escaped vs non-escaped switches
};

/// Geometric sampling of center + t e^{i angle}, t in [rMin, rMax].
RadialProfile radial_profile(const RenderSpec& spec, double angle, double rMin, double rMax, int samples);

/// Fraction of pixels matching their partner rotated by 2 pi / m about the
/// grid centre. Both non-escaped, or both escaped with iteration counts
/// within 1, counts as a match; partners outside the grid are skipped.
double rotational_symmetry_score(const ClassGrid& grid, int m);

} // namespace mcm
