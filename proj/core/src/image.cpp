#include "voskit/image.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace voskit {

namespace {

// Reads one whitespace-delimited token, skipping '#' comments (netpbm headers).
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            break;
        }
    }
    while ((c = in.get()) != EOF && !std::isspace(c)) tok.push_back(static_cast<char>(c));
    return tok;
}

struct PnmHeader {
    std::string magic;
    int width = 0;
    int height = 0;
    int maxval = 0;
};

PnmHeader read_header(std::istream& in, const std::filesystem::path& path) {
    PnmHeader h;
    h.magic = next_token(in);
    try {
        h.width = std::stoi(next_token(in));
        h.height = std::stoi(next_token(in));
        h.maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw std::runtime_error("malformed image header: " + path.string());
    }
    if (h.width < 1 || h.height < 1 || h.maxval < 1 || h.maxval > 255)
        throw std::runtime_error("unsupported image header in " + path.string());
    return h;
}

std::string frame_name(int index, const char* ext) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%05d%s", index, ext);
    return buf;
}

}  // namespace

ColorFrame::ColorFrame(int w, int h, std::array<int, 3> fill) : width(w), height(h) {
    if (w < 1 || h < 1)
        throw std::invalid_argument("ColorFrame: dimensions must be >= 1, got " +
                                    std::to_string(w) + "x" + std::to_string(h));
    data.resize(static_cast<std::size_t>(w) * h * 3);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        data[i] = static_cast<std::uint8_t>(fill[0]);
        data[i + 1] = static_cast<std::uint8_t>(fill[1]);
        data[i + 2] = static_cast<std::uint8_t>(fill[2]);
    }
}

Hsv rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8 / 255.0, g = g8 / 255.0, b = b8 / 255.0;
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;
    Hsv out;
    out.v = mx;
    out.s = mx == 0 ? 0 : delta / mx;
    if (delta == 0) {
        out.h = 0;  // hue undefined for grays; pin to 0
    } else if (mx == r) {
        out.h = 60.0 * ((g - b) / delta);
        if (out.h < 0) out.h += 360.0;
    } else if (mx == g) {
        out.h = 60.0 * ((b - r) / delta + 2.0);
    } else {
        out.h = 60.0 * ((r - g) / delta + 4.0);
    }
    if (out.h >= 360.0) out.h -= 360.0;
    return out;
}

void save_pgm(const LabeledFrame& frame, const std::filesystem::path& path) {
    for (std::uint16_t v : frame.labels)
        if (v > 255)
            throw std::runtime_error("object ID " + std::to_string(v) +
                                     " exceeds the 8-bit mask format: " + path.string());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "P5\n" << frame.width << ' ' << frame.height << "\n255\n";
    std::vector<std::uint8_t> bytes(frame.labels.begin(), frame.labels.end());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

LabeledFrame load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    const PnmHeader h = read_header(in, path);
    if (h.magic != "P5") throw std::runtime_error("not a binary PGM: " + path.string());
    LabeledFrame frame(h.width, h.height);
    std::vector<std::uint8_t> bytes(frame.pixel_count());
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw std::runtime_error("truncated image: " + path.string());
    std::copy(bytes.begin(), bytes.end(), frame.labels.begin());
    return frame;
}

void save_ppm(const ColorFrame& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << "P6\n" << frame.width << ' ' << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.data.data()),
              static_cast<std::streamsize>(frame.data.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

ColorFrame load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    const PnmHeader h = read_header(in, path);
    if (h.magic != "P6") throw std::runtime_error("not a binary PPM: " + path.string());
    ColorFrame frame(h.width, h.height);
    in.read(reinterpret_cast<char*>(frame.data.data()),
            static_cast<std::streamsize>(frame.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(frame.data.size()))
        throw std::runtime_error("truncated image: " + path.string());
    return frame;
}

void save_sequence(const VideoSequence& seq, const std::filesystem::path& dir) {
    seq.validate();
    std::filesystem::create_directories(dir);
    for (int t = 0; t < seq.frame_count(); ++t)
        save_pgm(seq.frames[t], dir / frame_name(t, ".pgm"));
}

VideoSequence load_sequence(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".pgm")
            files.push_back(entry.path());
    if (files.empty()) throw std::runtime_error("no .pgm frames in " + dir.string());
    std::sort(files.begin(), files.end());
    VideoSequence seq;
    seq.frames.reserve(files.size());
    for (const auto& f : files) seq.frames.push_back(load_pgm(f));
    seq.validate();
    return seq;
}

void save_color_sequence(const std::vector<ColorFrame>& frames, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t t = 0; t < frames.size(); ++t)
        save_ppm(frames[t], dir / frame_name(static_cast<int>(t), ".ppm"));
}

std::vector<ColorFrame> load_color_sequence(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".ppm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<ColorFrame> frames;
    frames.reserve(files.size());
    for (const auto& f : files) frames.push_back(load_ppm(f));
    return frames;
}

}  // namespace voskit
