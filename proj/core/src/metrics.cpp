#include "voskit/metrics.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>

namespace voskit {

namespace {

struct PixelBox {
    int x0 = INT_MAX, y0 = INT_MAX, x1 = -1, y1 = -1;

    bool empty() const { return x1 < 0; }
    void expand(int x, int y) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
    }
    void merge(const PixelBox& o) {
        if (o.empty()) return;
        expand(o.x0, o.y0);
        expand(o.x1, o.y1);
    }
};

void require_same_shape(const BinaryMask& a, const BinaryMask& b, const char* op) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                    std::to_string(a.width) + "x" + std::to_string(a.height) +
                                    " vs " + std::to_string(b.width) + "x" +
                                    std::to_string(b.height));
}

PixelBox scan_box(const BinaryMask& mask) {
    PixelBox box;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) box.expand(x, y);
    return box;
}

BinaryMask crop(const BinaryMask& mask, const PixelBox& box) {
    BinaryMask out(box.x1 - box.x0 + 1, box.y1 - box.y0 + 1);
    for (int y = box.y0; y <= box.y1; ++y)
        std::copy(mask.data.begin() + static_cast<std::size_t>(y) * mask.width + box.x0,
                  mask.data.begin() + static_cast<std::size_t>(y) * mask.width + box.x1 + 1,
                  out.data.begin() + static_cast<std::size_t>(y - box.y0) * out.width);
    return out;
}

// Pixels of `query` within tolerance of `target`, per tolerance, both rasters
// already cropped to the same window.
struct MatchCounts {
    long long total = 0;
    long long within_a = 0;
    long long within_b = 0;
};

MatchCounts count_matches(const BinaryMask& query, const std::vector<std::int64_t>& target_d2,
                          double tol2_a, double tol2_b) {
    MatchCounts c;
    for (std::size_t i = 0; i < query.data.size(); ++i) {
        if (!query.data[i]) continue;
        ++c.total;
        const std::int64_t d2 = target_d2[i];
        if (d2 == kUnreachable) continue;
        const double d2d = static_cast<double>(d2);
        if (d2d <= tol2_a) ++c.within_a;
        if (d2d <= tol2_b) ++c.within_b;
    }
    return c;
}

double harmonic(double precision, double recall) {
    const double s = precision + recall;
    return s == 0 ? 0.0 : 2.0 * precision * recall / s;
}

// Boundary F for two tolerances sharing one distance-transform pair. The
// transform runs on the union bounding box of both boundary sets (plus a
// margin); every boundary pixel of either mask lies inside that box, so the
// cropped distances equal the full-frame ones exactly.
std::pair<double, double> boundary_f_two(const BinaryMask& gt_boundary, const PixelBox& gt_box,
                                         const BinaryMask& pred_boundary, const PixelBox& pred_box,
                                         double tol_a, double tol_b) {
    PixelBox box = gt_box;
    box.merge(pred_box);
    const int margin = static_cast<int>(std::ceil(std::max(tol_a, tol_b))) + 1;
    box.x0 = std::max(0, box.x0 - margin);
    box.y0 = std::max(0, box.y0 - margin);
    box.x1 = std::min(gt_boundary.width - 1, box.x1 + margin);
    box.y1 = std::min(gt_boundary.height - 1, box.y1 + margin);

    const BinaryMask gt_crop = crop(gt_boundary, box);
    const BinaryMask pred_crop = crop(pred_boundary, box);
    const auto gt_d2 = squared_distance_transform(gt_crop);
    const auto pred_d2 = squared_distance_transform(pred_crop);

    const double tol2_a = tol_a * tol_a;
    const double tol2_b = tol_b * tol_b;
    const MatchCounts p = count_matches(pred_crop, gt_d2, tol2_a, tol2_b);
    const MatchCounts r = count_matches(gt_crop, pred_d2, tol2_a, tol2_b);

    const double f_a = harmonic(static_cast<double>(p.within_a) / p.total,
                                static_cast<double>(r.within_a) / r.total);
    const double f_b = harmonic(static_cast<double>(p.within_b) / p.total,
                                static_cast<double>(r.within_b) / r.total);
    return {f_a, f_b};
}

double adaptive_tolerance(long long area, double k_adapt) {
    return std::max(1.0, std::round(k_adapt * std::sqrt(static_cast<double>(area))));
}

}  // namespace

double region_similarity(const BinaryMask& gt, const BinaryMask& pred) {
    require_same_shape(gt, pred, "region_similarity");
    long long inter = 0, uni = 0;
    for (std::size_t i = 0; i < gt.data.size(); ++i) {
        const bool g = gt.data[i] != 0, p = pred.data[i] != 0;
        inter += g && p;
        uni += g || p;
    }
    if (uni == 0) return 1.0;  // both empty: absence correctly predicted
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double boundary_accuracy(const BinaryMask& gt, const BinaryMask& pred, double tolerance) {
    require_same_shape(gt, pred, "boundary_accuracy");
    if (tolerance < 0) throw std::invalid_argument("boundary_accuracy: tolerance must be >= 0");
    const bool gt_empty = gt.empty_foreground();
    const bool pred_empty = pred.empty_foreground();
    if (gt_empty && pred_empty) return 1.0;
    if (gt_empty || pred_empty) return 0.0;
    const BinaryMask gtb = boundary_pixels(gt);
    const BinaryMask prb = boundary_pixels(pred);
    return boundary_f_two(gtb, scan_box(gtb), prb, scan_box(prb), tolerance, tolerance).first;
}

int default_tolerance(int width, int height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("default_tolerance: dimensions must be >= 1");
    const double diagonal = std::hypot(static_cast<double>(width), static_cast<double>(height));
    return static_cast<int>(std::max<long long>(1, std::llround(0.008 * diagonal)));
}

double adaptive_boundary_accuracy(const BinaryMask& gt, const BinaryMask& pred, double k_adapt) {
    require_same_shape(gt, pred, "adaptive_boundary_accuracy");
    const long long gt_area = gt.foreground_area();
    const long long pred_area = pred.foreground_area();
    if (gt_area == 0 && pred_area == 0) return 1.0;
    const long long basis = gt_area > 0 ? gt_area : pred_area;
    return boundary_accuracy(gt, pred, adaptive_tolerance(basis, k_adapt));
}

namespace {

// Boundary rasters for every tracked label of one frame in a single pass.
// A pixel is a boundary pixel of its label when some 4-neighbor (out of
// bounds included) carries a different label.
void mark_boundaries(const LabeledFrame& frame, const std::vector<int>& slot_of_label,
                     std::vector<BinaryMask>& rasters, std::vector<PixelBox>& boxes) {
    const int w = frame.width, h = frame.height;
    const std::uint16_t* labels = frame.labels.data();
    for (int y = 0; y < h; ++y) {
        const std::uint16_t* row = labels + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            const std::uint16_t l = row[x];
            if (l == 0) continue;
            const int slot = slot_of_label[l];
            if (slot < 0) continue;
            const bool edge = x == 0 || row[x - 1] != l || x == w - 1 || row[x + 1] != l ||
                              y == 0 || labels[static_cast<std::size_t>(y - 1) * w + x] != l ||
                              y == h - 1 || labels[static_cast<std::size_t>(y + 1) * w + x] != l;
            if (edge) {
                rasters[slot].data[static_cast<std::size_t>(y) * w + x] = 1;
                boxes[slot].expand(x, y);
            }
        }
    }
}

std::vector<ObjectReport> evaluate_ids(const VideoSequence& gt, const VideoSequence& pred,
                                       const std::vector<int>& ids, const MetricConfig& config) {
    gt.validate();
    pred.validate();
    if (gt.frame_count() != pred.frame_count())
        throw std::invalid_argument("sequence frame counts differ: " +
                                    std::to_string(gt.frame_count()) + " vs " +
                                    std::to_string(pred.frame_count()));
    if (gt.width() != pred.width() || gt.height() != pred.height())
        throw std::invalid_argument("sequence dimensions differ: " + std::to_string(gt.width()) +
                                    "x" + std::to_string(gt.height()) + " vs " +
                                    std::to_string(pred.width()) + "x" +
                                    std::to_string(pred.height()));
    if (gt.frame_count() < 2)
        throw std::invalid_argument(
            "sequence has no frames to evaluate (frame 0 is the given annotation)");

    const int w = gt.width(), h = gt.height();
    const int frame_count = gt.frame_count();
    const int k = static_cast<int>(ids.size());
    const double tol_fixed =
        config.fixed_tolerance < 0 ? default_tolerance(w, h) : config.fixed_tolerance;

    std::vector<int> slot_of_label(65536, -1);
    for (int s = 0; s < k; ++s) {
        if (ids[s] < 1 || ids[s] > 65535)
            throw std::invalid_argument("object ID out of range: " + std::to_string(ids[s]));
        slot_of_label[ids[s]] = s;
    }

    std::vector<ObjectReport> reports(k);
    std::vector<bool> seen_absent(k, false);
    struct Sums {
        double j = 0, f = 0, fa = 0;
        int count = 0;
        double j_d = 0, jfa_d = 0;
        double j_r = 0, jfa_r = 0;
    };
    std::vector<Sums> sums(k);
    for (int s = 0; s < k; ++s) {
        reports[s].object_id = ids[s];
        bool in_first = false;
        for (std::uint16_t l : gt.frames[0].labels)
            if (l == ids[s]) {
                in_first = true;
                break;
            }
        if (!in_first)
            reports[s].warnings.push_back("object " + std::to_string(ids[s]) +
                                          " is absent from the first frame's annotation");
    }

    std::vector<BinaryMask> gt_b(k, BinaryMask(w, h)), pred_b(k, BinaryMask(w, h));
    std::vector<PixelBox> gt_box(k), pred_box(k);
    std::vector<long long> gt_area(k), pred_area(k), inter(k);

    for (int t = 1; t < frame_count; ++t) {
        for (int s = 0; s < k; ++s) {
            std::fill(gt_b[s].data.begin(), gt_b[s].data.end(), std::uint8_t{0});
            std::fill(pred_b[s].data.begin(), pred_b[s].data.end(), std::uint8_t{0});
            gt_box[s] = PixelBox{};
            pred_box[s] = PixelBox{};
            gt_area[s] = pred_area[s] = inter[s] = 0;
        }

        const std::uint16_t* gl = gt.frames[t].labels.data();
        const std::uint16_t* pl = pred.frames[t].labels.data();
        const std::size_t n = gt.frames[t].pixel_count();
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint16_t g = gl[i], p = pl[i];
            if (g != 0) {
                const int s = slot_of_label[g];
                if (s >= 0) {
                    ++gt_area[s];
                    if (g == p) ++inter[s];
                }
            }
            if (p != 0) {
                const int s = slot_of_label[p];
                if (s >= 0) ++pred_area[s];
            }
        }
        mark_boundaries(gt.frames[t], slot_of_label, gt_b, gt_box);
        mark_boundaries(pred.frames[t], slot_of_label, pred_b, pred_box);

        for (int s = 0; s < k; ++s) {
            const bool gt_empty = gt_area[s] == 0;
            const bool pred_empty = pred_area[s] == 0;
            const bool excluded = gt_empty && pred_empty &&
                                  config.empty_empty == EmptyEmptyRule::kExclude;

            FrameScore score;
            score.frame = t;
            score.gt_present = !gt_empty;
            score.pred_present = !pred_empty;
            if (gt_empty && pred_empty) {
                score.j = score.f = score.f_adaptive = 1.0;
            } else if (gt_empty || pred_empty) {
                score.j = score.f = score.f_adaptive = 0.0;
            } else {
                const long long uni = gt_area[s] + pred_area[s] - inter[s];
                score.j = static_cast<double>(inter[s]) / static_cast<double>(uni);
                const double tol_adapt =
                    adaptive_tolerance(gt_area[s], config.k_adapt);
                const auto [f_fixed, f_adapt] = boundary_f_two(gt_b[s], gt_box[s], pred_b[s],
                                                               pred_box[s], tol_fixed, tol_adapt);
                score.f = f_fixed;
                score.f_adaptive = f_adapt;
            }

            const bool reappeared = !gt_empty && seen_absent[s];
            if (!excluded) {
                reports[s].frames.push_back(score);
                sums[s].j += score.j;
                sums[s].f += score.f;
                sums[s].fa += score.f_adaptive;
                ++sums[s].count;
                const double jfa = (score.j + score.f_adaptive) / 2.0;
                if (gt_empty) {
                    ++reports[s].disappear_frames;
                    sums[s].j_d += score.j;
                    sums[s].jfa_d += jfa;
                } else if (reappeared) {
                    ++reports[s].reappear_frames;
                    sums[s].j_r += score.j;
                    sums[s].jfa_r += jfa;
                }
            }
            if (gt_empty) seen_absent[s] = true;
        }
    }

    for (int s = 0; s < k; ++s) {
        ObjectReport& r = reports[s];
        r.evaluated_frames = sums[s].count;
        if (sums[s].count > 0) {
            r.j = sums[s].j / sums[s].count;
            r.f = sums[s].f / sums[s].count;
            r.f_adaptive = sums[s].fa / sums[s].count;
        } else {
            r.warnings.push_back("object " + std::to_string(ids[s]) + " has no scored frames");
        }
        if (r.disappear_frames > 0) {
            r.j_disappear = sums[s].j_d / r.disappear_frames;
            r.jf_adaptive_disappear = sums[s].jfa_d / r.disappear_frames;
        }
        if (r.reappear_frames > 0) {
            r.j_reappear = sums[s].j_r / r.reappear_frames;
            r.jf_adaptive_reappear = sums[s].jfa_r / r.reappear_frames;
        }
    }
    return reports;
}

}  // namespace

ObjectReport sequence_scores(const VideoSequence& gt, const VideoSequence& pred, int id,
                             const MetricConfig& config) {
    if (id < 1) throw std::invalid_argument("object ID must be >= 1");
    return evaluate_ids(gt, pred, {id}, config).front();
}

std::vector<ObjectReport> evaluate_sequence(const VideoSequence& gt, const VideoSequence& pred,
                                            const MetricConfig& config) {
    return evaluate_ids(gt, pred, gt.object_ids(), config);
}

AggregateReport dataset_aggregate(const std::vector<ObjectReport>& rows) {
    if (rows.empty()) throw std::invalid_argument("dataset_aggregate: no rows");
    AggregateReport agg;
    agg.row_count = static_cast<int>(rows.size());
    double jfa_d = 0, jfa_r = 0;
    int n_d = 0, n_r = 0;
    for (const ObjectReport& r : rows) {
        agg.j += r.j;
        agg.f += r.f;
        agg.f_adaptive += r.f_adaptive;
        if (r.jf_adaptive_disappear) {
            jfa_d += *r.jf_adaptive_disappear;
            ++n_d;
        }
        if (r.jf_adaptive_reappear) {
            jfa_r += *r.jf_adaptive_reappear;
            ++n_r;
        }
    }
    agg.j /= agg.row_count;
    agg.f /= agg.row_count;
    agg.f_adaptive /= agg.row_count;
    if (n_d > 0) agg.jf_adaptive_disappear = jfa_d / n_d;
    if (n_r > 0) agg.jf_adaptive_reappear = jfa_r / n_r;
    return agg;
}

}  // namespace voskit
