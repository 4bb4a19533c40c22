#ifndef VOSKIT_GRID_HPP
#define VOSKIT_GRID_HPP

#include <filesystem>
#include <vector>

#include "voskit/mask.hpp"

namespace voskit {

/// Per-pixel real-valued score map for one object in one frame, pre-threshold.
/// Scores are kept in double precision in memory; the on-disk exchange format
/// is 32-bit floats behind a little-endian uint32 width/height header.
struct LogitGrid {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    LogitGrid() = default;
    LogitGrid(int w, int h, double fill = 0.0);

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, double v) { values[static_cast<std::size_t>(y) * width + x] = v; }
    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    bool operator==(const LogitGrid&) const = default;
};

/// Mirrors the grid left-to-right (column x maps to width-1-x).
LogitGrid mirror_horizontal(const LogitGrid& grid);

/// Pixels with value strictly greater than `threshold`.
BinaryMask threshold_grid(const LogitGrid& grid, double threshold);

/// Row-major position of the maximum value; ties resolve to the first
/// (lowest y, then lowest x).
std::pair<int, int> grid_argmax(const LogitGrid& grid);

void save_grid(const LogitGrid& grid, const std::filesystem::path& path);
LogitGrid load_grid(const std::filesystem::path& path);

}  // namespace voskit

#endif  // VOSKIT_GRID_HPP
