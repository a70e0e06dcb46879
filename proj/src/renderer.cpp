#include "mcm/renderer.hpp"

#include "mcm/orbit.hpp"
#include "mcm/skew.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace mcm {

namespace {

constexpr std::array<std::array<unsigned char, 3>, 8> kPalette{{
    {230, 25, 75},
    {60, 180, 75},
    {255, 225, 25},
    {0, 130, 200},
    {245, 130, 48},
    {145, 30, 180},
    {70, 240, 240},
    {240, 50, 230},
}};

} // namespace

Complex RenderSpec::pixel(int col, int row) const {
    const double p = pitch();
    return {center.real() - halfWidth + (col + 0.5) * p, center.imag() + (height / 2.0 - row - 0.5) * p};
}

Cell classify_point(const RenderSpec& spec, Complex z0) {
    OrbitParams op;
    op.maxIter = spec.maxIter;
    op.escapeRadius = spec.escapeRadius;
    op.cycleTol = spec.cycleTol;
    op.recordSamples = false;
    const OrbitRecord rec = iterate_orbit(spec.map, z0, op);
    if (const auto* e = std::get_if<Escaped>(&rec.outcome)) return Cell::escaped(e->index);
    if (const auto* c = std::get_if<ConvergedToCycle>(&rec.outcome)) {
        const std::size_t count = spec.attractors ? spec.attractors->size() : 0;
        int bestId = -1;
        int bestPos = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < count; ++a) {
            const Attractor& at = (*spec.attractors)[a];
            if (at.period != c->period) continue;
            for (std::size_t j = 0; j < at.points.size(); ++j) {
                const double d = std::abs(at.points[j] - c->representative) / (1.0 + std::abs(at.points[j]));
                if (d <= 1e-3 && d < best) {
                    best = d;
                    bestId = static_cast<int>(a);
                    bestPos = static_cast<int>(j);
                }
            }
        }
        if (bestId < 0) return Cell::basin(static_cast<int>(count), 0);
        const int p = c->period;
        return Cell::basin(bestId, ((bestPos - c->index) % p + p) % p);
    }
    return Cell::undecided();
}

ClassGrid classify_grid(const RenderSpec& spec) {
    if (spec.width < 1 || spec.height < 1) throw std::invalid_argument("grid dimensions must be >= 1");
    if (!(spec.halfWidth > 0.0)) throw std::invalid_argument("halfWidth must be positive");
    ClassGrid g;
    g.width = spec.width;
    g.height = spec.height;
    g.cells.resize(static_cast<std::size_t>(spec.width) * spec.height);

    const int workers = std::min(resolve_threads(spec.threads), spec.height);
    auto band = [&](int w) {
        const int lo = spec.height * w / workers;
        const int hi = spec.height * (w + 1) / workers;
        for (int row = lo; row < hi; ++row)
            for (int col = 0; col < spec.width; ++col) g.at(col, row) = classify_point(spec, spec.pixel(col, row));
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(band, w);
    band(0);
    for (auto& t : pool) t.join();
    return g;
}

std::array<unsigned char, 3> cell_color(const Cell& c) {
    switch (c.kind) {
    case Cell::Kind::Escaped: {
        const auto v = static_cast<unsigned char>(255 - std::min(255, 8 * c.iterations));
        return {v, v, 255};
    }
    case Cell::Kind::Basin: return kPalette[static_cast<std::size_t>((2 * c.id + c.phase) % 8)];
    case Cell::Kind::Undecided: break;
    }
    return {0, 0, 0};
}

std::string ppm_bytes(const ClassGrid& grid) {
    std::string out = "P6\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n255\n";
    out.reserve(out.size() + grid.cells.size() * 3);
    for (const Cell& c : grid.cells) {
        const auto rgb = cell_color(c);
        out.append(reinterpret_cast<const char*>(rgb.data()), 3);
    }
    return out;
}

void write_ppm(const ClassGrid& grid, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    const std::string bytes = ppm_bytes(grid);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed for " + path);
}

std::string grid_to_text(const ClassGrid& grid) {
    std::ostringstream os;
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            if (col) os << ',';
            const Cell& c = grid.at(col, row);
            switch (c.kind) {
            case Cell::Kind::Escaped: os << 'E' << c.iterations; break;
            case Cell::Kind::Basin: os << 'B' << c.id << '.' << c.phase; break;
            case Cell::Kind::Undecided: os << 'U'; break;
            }
        }
        os << '\n';
    }
    return os.str();
}

RadialProfile radial_profile(const RenderSpec& spec, double angle, double rMin, double rMax, int samples) {
    if (samples < 2) throw std::invalid_argument("radial profile needs at least 2 samples");
    if (!(rMin > 0.0) || !(rMax > rMin)) throw std::invalid_argument("radial range must satisfy 0 < rMin < rMax");
    RadialProfile prof;
    prof.angle = angle;
    const Complex dir = std::polar(1.0, angle);
    const double ratio = std::log(rMax / rMin);
    for (int k = 0; k < samples; ++k) {
        const double t = rMin * std::exp(ratio * k / (samples - 1));
        prof.samples.emplace_back(t, classify_point(spec, spec.center + t * dir));
    }
    for (std::size_t k = 1; k < prof.samples.size(); ++k) {
        const bool a = prof.samples[k - 1].second.kind == Cell::Kind::Escaped;
        const bool b = prof.samples[k].second.kind == Cell::Kind::Escaped;
        if (a != b) ++prof.alternations;
    }
    return prof;
}

double rotational_symmetry_score(const ClassGrid& grid, int m) {
    if (m < 2) throw std::invalid_argument("symmetry order must be >= 2");
    const double c = std::cos(2.0 * std::numbers::pi / m);
    const double s = std::sin(2.0 * std::numbers::pi / m);
    const double cx = grid.width / 2.0;
    const double cy = grid.height / 2.0;
    std::size_t counted = 0;
    std::size_t matched = 0;
    for (int row = 0; row < grid.height; ++row)
        for (int col = 0; col < grid.width; ++col) {
            // Pixel centre relative to the grid centre, y upwards.
            const double x = col + 0.5 - cx;
            const double y = cy - row - 0.5;
            const double xr = c * x - s * y;
            const double yr = s * x + c * y;
            const int col2 = static_cast<int>(std::floor(xr + cx));
            const int row2 = static_cast<int>(std::floor(cy - yr));
            if (col2 < 0 || col2 >= grid.width || row2 < 0 || row2 >= grid.height) continue;
            const Cell& a = grid.at(col, row);
            const Cell& b = grid.at(col2, row2);
            const bool ea = a.kind == Cell::Kind::Escaped;
            const bool eb = b.kind == Cell::Kind::Escaped;
            ++counted;
            if (ea != eb) continue;
            if (!ea || std::abs(a.iterations - b.iterations) <= 1) ++matched;
        }
    return counted ? static_cast<double>(matched) / static_cast<double>(counted) : 1.0;
}

} // namespace mcm
