#include "voskit/grid.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace voskit {

LogitGrid::LogitGrid(int w, int h, double fill) : width(w), height(h) {
    if (w < 1 || h < 1)
        throw std::invalid_argument("LogitGrid: dimensions must be >= 1, got " +
                                    std::to_string(w) + "x" + std::to_string(h));
    values.assign(static_cast<std::size_t>(w) * h, fill);
}

LogitGrid mirror_horizontal(const LogitGrid& grid) {
    LogitGrid out(grid.width, grid.height);
    for (int y = 0; y < grid.height; ++y)
        for (int x = 0; x < grid.width; ++x) out.set(grid.width - 1 - x, y, grid.at(x, y));
    return out;
}

BinaryMask threshold_grid(const LogitGrid& grid, double threshold) {
    BinaryMask out(grid.width, grid.height);
    for (std::size_t i = 0; i < grid.values.size(); ++i)
        out.data[i] = grid.values[i] > threshold ? 1 : 0;
    return out;
}

std::pair<int, int> grid_argmax(const LogitGrid& grid) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.values.size(); ++i)
        if (grid.values[i] > grid.values[best]) best = i;
    return {static_cast<int>(best % grid.width), static_cast<int>(best / grid.width)};
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(v & 0xff),
        static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff),
        static_cast<unsigned char>((v >> 24) & 0xff),
    };
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void save_grid(const LogitGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    put_u32(out, static_cast<std::uint32_t>(grid.width));
    put_u32(out, static_cast<std::uint32_t>(grid.height));
    for (double v : grid.values) {
        const float f = static_cast<float>(v);
        std::uint32_t bits;
        static_assert(sizeof bits == sizeof f);
        std::memcpy(&bits, &f, sizeof bits);
        put_u32(out, bits);
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

LogitGrid load_grid(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    const std::uint32_t w = get_u32(in);
    const std::uint32_t h = get_u32(in);
    if (!in || w < 1 || h < 1 || w > 1u << 20 || h > 1u << 20)
        throw std::runtime_error("malformed grid header: " + path.string());
    LogitGrid grid(static_cast<int>(w), static_cast<int>(h));
    for (double& v : grid.values) {
        const std::uint32_t bits = get_u32(in);
        float f;
        std::memcpy(&f, &bits, sizeof f);
        v = f;
    }
    if (!in) throw std::runtime_error("truncated grid: " + path.string());
    return grid;
}

}  // namespace voskit
