#include "voskit/mask.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace voskit {

BinaryMask::BinaryMask(int w, int h, std::uint8_t fill) : width(w), height(h) {
    if (w < 1 || h < 1)
        throw std::invalid_argument("BinaryMask: dimensions must be >= 1, got " +
                                    std::to_string(w) + "x" + std::to_string(h));
    data.assign(static_cast<std::size_t>(w) * h, fill ? 1 : 0);
}

long long BinaryMask::foreground_area() const {
    long long n = 0;
    for (std::uint8_t v : data) n += v != 0;
    return n;
}

LabeledFrame::LabeledFrame(int w, int h, std::uint16_t fill) : width(w), height(h) {
    if (w < 1 || h < 1)
        throw std::invalid_argument("LabeledFrame: dimensions must be >= 1, got " +
                                    std::to_string(w) + "x" + std::to_string(h));
    labels.assign(static_cast<std::size_t>(w) * h, fill);
}

std::vector<int> LabeledFrame::object_ids() const {
    std::set<int> ids;
    for (std::uint16_t v : labels)
        if (v != 0) ids.insert(v);
    return {ids.begin(), ids.end()};
}

void VideoSequence::validate() const {
    if (frames.empty()) throw std::invalid_argument("VideoSequence: needs at least one frame");
    for (std::size_t t = 0; t < frames.size(); ++t) {
        if (frames[t].width != width() || frames[t].height != height())
            throw std::invalid_argument("VideoSequence: frame " + std::to_string(t) +
                                        " is " + std::to_string(frames[t].width) + "x" +
                                        std::to_string(frames[t].height) + ", expected " +
                                        std::to_string(width()) + "x" + std::to_string(height()));
    }
}

std::vector<int> VideoSequence::object_ids() const {
    std::set<int> ids;
    for (const auto& f : frames)
        for (std::uint16_t v : f.labels)
            if (v != 0) ids.insert(v);
    return {ids.begin(), ids.end()};
}

BinaryMask extract_object(const LabeledFrame& frame, int id) {
    if (id < 1) throw std::invalid_argument("extract_object: object ID must be >= 1");
    BinaryMask out(frame.width, frame.height);
    const std::size_t n = frame.pixel_count();
    for (std::size_t i = 0; i < n; ++i) out.data[i] = frame.labels[i] == id ? 1 : 0;
    return out;
}

BinaryMask boundary_pixels(const BinaryMask& mask) {
    BinaryMask out(mask.width, mask.height);
    const int w = mask.width, h = mask.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            const bool edge = x == 0 || !mask.at(x - 1, y) || x == w - 1 || !mask.at(x + 1, y) ||
                              y == 0 || !mask.at(x, y - 1) || y == h - 1 || !mask.at(x, y + 1);
            if (edge) out.set(x, y, true);
        }
    }
    return out;
}

namespace {

constexpr double kEdtInf = 1e18;

// 1D squared distance transform via the lower envelope of parabolas.
// f/d have length n; v (parabola sites) and z (envelope breakpoints) are
// caller-provided scratch of length n and n+1.
void edt_1d(const double* f, int n, double* d, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -kEdtInf;
    z[1] = kEdtInf;
    for (int q = 1; q < n; ++q) {
        double s;
        for (;;) {
            const int p = v[k];
            s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
                (2.0 * q - 2.0 * p);
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kEdtInf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

std::vector<std::int64_t> squared_distance_transform(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    const int n = std::max(w, h);
    std::vector<double> grid(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = mask.data[i] ? 0.0 : kEdtInf;

    std::vector<double> f(n), d(n), z(n + 1);
    std::vector<int> v(n);

    // Pass 1: columns.
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = grid[static_cast<std::size_t>(y) * w + x];
        edt_1d(f.data(), h, d.data(), v.data(), z.data());
        for (int y = 0; y < h; ++y) grid[static_cast<std::size_t>(y) * w + x] = d[y];
    }
    // Pass 2: rows.
    for (int y = 0; y < h; ++y) {
        double* row = grid.data() + static_cast<std::size_t>(y) * w;
        edt_1d(row, w, d.data(), v.data(), z.data());
        std::copy(d.begin(), d.begin() + w, row);
    }

    std::vector<std::int64_t> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        out[i] = grid[i] >= kEdtInf ? kUnreachable : static_cast<std::int64_t>(grid[i] + 0.5);
    return out;
}

BinaryMask dilate(const BinaryMask& mask, double radius) {
    if (radius < 0) throw std::invalid_argument("dilate: radius must be >= 0");
    const auto dist2 = squared_distance_transform(mask);
    const double r2 = radius * radius;
    BinaryMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < dist2.size(); ++i)
        out.data[i] = (dist2[i] != kUnreachable && static_cast<double>(dist2[i]) <= r2) ? 1 : 0;
    return out;
}

}  // namespace voskit
