#ifndef VOSKIT_MASK_HPP
#define VOSKIT_MASK_HPP

#include <cstdint>
#include <limits>
#include <vector>

namespace voskit {

/// Single-object foreground raster. data is row-major, one byte per pixel,
/// 0 = background, 1 = foreground. Index (x, y) maps to data[y * width + x].
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0);

    bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    long long foreground_area() const;
    bool empty_foreground() const { return foreground_area() == 0; }

    bool operator==(const BinaryMask&) const = default;
};

/// Multi-object raster: one non-negative object ID per pixel, 0 = background.
/// IDs partition the pixels by construction (a pixel holds exactly one label).
struct LabeledFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> labels;

    LabeledFrame() = default;
    LabeledFrame(int w, int h, std::uint16_t fill = 0);

    std::uint16_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, std::uint16_t id) { labels[static_cast<std::size_t>(y) * width + x] = id; }

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }

    /// Sorted IDs present in this frame, background excluded.
    std::vector<int> object_ids() const;

    bool operator==(const LabeledFrame&) const = default;
};

/// Ordered list of frames sharing one resolution.
struct VideoSequence {
    std::vector<LabeledFrame> frames;

    int frame_count() const { return static_cast<int>(frames.size()); }
    int width() const { return frames.empty() ? 0 : frames.front().width; }
    int height() const { return frames.empty() ? 0 : frames.front().height; }

    /// Throws if empty or if frames disagree on dimensions.
    void validate() const;

    /// Sorted union of object IDs over all frames.
    std::vector<int> object_ids() const;

    bool operator==(const VideoSequence&) const = default;
};

/// Mask of pixels labeled `id`. An ID absent from the frame yields the
/// all-background mask: absence is a first-class state, not an error.
BinaryMask extract_object(const LabeledFrame& frame, int id);

/// Foreground pixels with at least one 4-neighbor that is background or out
/// of bounds.
BinaryMask boundary_pixels(const BinaryMask& mask);

/// Marks pixels with no foreground pixel anywhere in the mask.
inline constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max();

/// Exact squared Euclidean distance from every pixel to the nearest
/// foreground pixel (Felzenszwalb-Huttenlocher two-pass transform).
/// All-background input yields kUnreachable everywhere.
std::vector<std::int64_t> squared_distance_transform(const BinaryMask& mask);

/// True Euclidean dilation: output pixel is set iff some input foreground
/// pixel lies within distance <= radius. radius 0 is the identity.
BinaryMask dilate(const BinaryMask& mask, double radius);

}  // namespace voskit

#endif  // VOSKIT_MASK_HPP
