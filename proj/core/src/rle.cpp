#include "voskit/rle.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace voskit {

namespace {

[[noreturn]] void fragment_error(int frame, int object, const std::string& what) {
    throw std::runtime_error("RLE fragment (frame " + std::to_string(frame) + ", object " +
                             std::to_string(object) + "): " + what);
}

}  // namespace

std::vector<long long> encode_rle(const BinaryMask& mask) {
    std::vector<long long> runs;
    std::uint8_t cur = 0;  // background first
    long long len = 0;
    for (std::uint8_t v : mask.data) {
        const std::uint8_t bit = v ? 1 : 0;
        if (bit == cur) {
            ++len;
        } else {
            runs.push_back(len);
            cur = bit;
            len = 1;
        }
    }
    runs.push_back(len);
    return runs;
}

BinaryMask decode_rle(const std::vector<long long>& runs, int width, int height) {
    BinaryMask mask(width, height);
    const long long total = static_cast<long long>(width) * height;
    long long pos = 0;
    std::uint8_t cur = 0;
    for (long long run : runs) {
        if (run < 0) throw std::runtime_error("RLE: negative run length");
        if (pos + run > total) throw std::runtime_error("RLE: runs exceed pixel count");
        if (cur)
            std::fill(mask.data.begin() + pos, mask.data.begin() + pos + run, std::uint8_t{1});
        pos += run;
        cur ^= 1;
    }
    if (pos != total)
        throw std::runtime_error("RLE: runs sum to " + std::to_string(pos) + ", expected " +
                                 std::to_string(total));
    return mask;
}

std::vector<RleFragment> encode_frame(const LabeledFrame& frame, int frame_idx,
                                      const std::vector<int>& ids) {
    std::vector<RleFragment> out;
    out.reserve(ids.size());
    for (int id : ids) {
        RleFragment frag;
        frag.frame = frame_idx;
        frag.object_id = id;
        frag.runs = encode_rle(extract_object(frame, id));
        out.push_back(std::move(frag));
    }
    return out;
}

LabeledFrame decode_frame(const std::vector<RleFragment>& fragments, int width, int height) {
    LabeledFrame frame(width, height);
    for (const auto& frag : fragments) {
        BinaryMask mask(1, 1);
        try {
            mask = decode_rle(frag.runs, width, height);
        } catch (const std::exception& e) {
            fragment_error(frag.frame, frag.object_id, e.what());
        }
        for (std::size_t i = 0; i < mask.data.size(); ++i) {
            if (!mask.data[i]) continue;
            if (frame.labels[i] != 0)
                fragment_error(frag.frame, frag.object_id,
                               "overlaps object " + std::to_string(frame.labels[i]));
            frame.labels[i] = static_cast<std::uint16_t>(frag.object_id);
        }
    }
    return frame;
}

RleManifest encode_sequence(const VideoSequence& seq) {
    seq.validate();
    RleManifest m;
    m.width = seq.width();
    m.height = seq.height();
    m.frame_count = seq.frame_count();
    m.object_ids = seq.object_ids();
    for (int t = 0; t < m.frame_count; ++t) {
        auto frags = encode_frame(seq.frames[t], t, m.object_ids);
        m.fragments.insert(m.fragments.end(), frags.begin(), frags.end());
    }
    return m;
}

VideoSequence decode_sequence(const RleManifest& manifest) {
    if (manifest.frame_count < 1) throw std::runtime_error("RLE manifest: frame count < 1");
    std::vector<std::vector<RleFragment>> by_frame(manifest.frame_count);
    for (const auto& frag : manifest.fragments) {
        if (frag.frame < 0 || frag.frame >= manifest.frame_count)
            fragment_error(frag.frame, frag.object_id, "frame index out of range");
        by_frame[frag.frame].push_back(frag);
    }
    VideoSequence seq;
    seq.frames.reserve(manifest.frame_count);
    for (int t = 0; t < manifest.frame_count; ++t)
        seq.frames.push_back(decode_frame(by_frame[t], manifest.width, manifest.height));
    return seq;
}

std::string write_rle_text(const RleManifest& manifest) {
    std::ostringstream out;
    out << manifest.width << ' ' << manifest.height << ' ' << manifest.frame_count;
    for (int id : manifest.object_ids) out << ' ' << id;
    out << '\n';
    for (const auto& frag : manifest.fragments) {
        out << frag.frame << ' ' << frag.object_id;
        for (long long run : frag.runs) out << ' ' << run;
        out << '\n';
    }
    return out.str();
}

RleManifest parse_rle_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("RLE manifest: empty document");
    std::istringstream header(line);
    RleManifest m;
    if (!(header >> m.width >> m.height >> m.frame_count))
        throw std::runtime_error("RLE manifest: malformed header: " + line);
    int id;
    while (header >> id) m.object_ids.push_back(id);
    std::set<int> roster(m.object_ids.begin(), m.object_ids.end());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        RleFragment frag;
        if (!(row >> frag.frame >> frag.object_id))
            throw std::runtime_error("RLE manifest: malformed fragment line: " + line);
        if (!roster.count(frag.object_id))
            fragment_error(frag.frame, frag.object_id, "object not in header roster");
        long long run;
        while (row >> run) frag.runs.push_back(run);
        if (frag.runs.empty()) fragment_error(frag.frame, frag.object_id, "no runs");
        m.fragments.push_back(std::move(frag));
    }
    return m;
}

void save_rle(const VideoSequence& seq, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << write_rle_text(encode_sequence(seq));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

VideoSequence load_rle(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_sequence(parse_rle_text(buf.str()));
}

}  // namespace voskit
