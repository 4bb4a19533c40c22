#ifndef VOSKIT_IMAGE_HPP
#define VOSKIT_IMAGE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "voskit/mask.hpp"

namespace voskit {

/// Row-major 8-bit RGB raster.
struct ColorFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;  // 3 bytes per pixel

    ColorFrame() = default;
    ColorFrame(int w, int h, std::array<int, 3> fill = {0, 0, 0});

    std::array<std::uint8_t, 3> at(int x, int y) const {
        const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {data[i], data[i + 1], data[i + 2]};
    }
    void set(int x, int y, std::array<int, 3> rgb) {
        const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        data[i] = static_cast<std::uint8_t>(rgb[0]);
        data[i + 1] = static_cast<std::uint8_t>(rgb[1]);
        data[i + 2] = static_cast<std::uint8_t>(rgb[2]);
    }

    bool operator==(const ColorFrame&) const = default;
};

/// Hue in [0,360), saturation and value in [0,1].
struct Hsv {
    double h = 0;
    double s = 0;
    double v = 0;
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Label rasters travel as binary PGM (one byte per pixel, pixel value =
/// object ID, so IDs must stay <= 255 on disk). Color frames travel as
/// binary PPM.
void save_pgm(const LabeledFrame& frame, const std::filesystem::path& path);
LabeledFrame load_pgm(const std::filesystem::path& path);

void save_ppm(const ColorFrame& frame, const std::filesystem::path& path);
ColorFrame load_ppm(const std::filesystem::path& path);

/// Writes frames as 00000.pgm, 00001.pgm, ... into `dir` (created if needed).
void save_sequence(const VideoSequence& seq, const std::filesystem::path& dir);

/// Loads every *.pgm in `dir` in filename order. Throws if none are found or
/// dimensions disagree.
VideoSequence load_sequence(const std::filesystem::path& dir);

void save_color_sequence(const std::vector<ColorFrame>& frames, const std::filesystem::path& dir);
std::vector<ColorFrame> load_color_sequence(const std::filesystem::path& dir);

}  // namespace voskit

#endif  // VOSKIT_IMAGE_HPP
