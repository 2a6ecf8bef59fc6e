#include "pmvos/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace pmvos {

std::uint8_t LabelMask::max_label() const {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
}

std::vector<std::uint8_t> object_mask(const LabelMask& mask, std::uint8_t object_id) {
  std::vector<std::uint8_t> out(mask.labels.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask.labels[i] == object_id ? 1 : 0;
  return out;
}

std::vector<std::uint8_t> boundary_pixels(const std::vector<std::uint8_t>& binary,
                                          std::size_t height, std::size_t width) {
  std::vector<std::uint8_t> out(binary.size(), 0);
  auto inside = [&](std::ptrdiff_t y, std::ptrdiff_t x) {
    if (y < 0 || x < 0 || y >= static_cast<std::ptrdiff_t>(height) ||
        x >= static_cast<std::ptrdiff_t>(width))
      return false;
    return binary[static_cast<std::size_t>(y) * width + static_cast<std::size_t>(x)] != 0;
  };
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      if (!binary[y * width + x]) continue;
      const auto yy = static_cast<std::ptrdiff_t>(y);
      const auto xx = static_cast<std::ptrdiff_t>(x);
      if (!inside(yy - 1, xx) || !inside(yy + 1, xx) || !inside(yy, xx - 1) || !inside(yy, xx + 1))
        out[y * width + x] = 1;
    }
  }
  return out;
}

namespace {

void check_pair(const LabelMask& pred, const LabelMask& gt) {
  require(pred.height == gt.height && pred.width == gt.width, Errc::invalid_argument,
          "prediction and ground truth masks differ in shape");
}

// Marks every pixel within Euclidean distance r of a set pixel.
std::vector<std::uint8_t> dilate_disk(const std::vector<std::uint8_t>& src, std::size_t height,
                                      std::size_t width, std::size_t r) {
  if (r == 0) return src;
  const auto ri = static_cast<std::ptrdiff_t>(r);
  const auto h = static_cast<std::ptrdiff_t>(height);
  const auto w = static_cast<std::ptrdiff_t>(width);
  std::vector<std::pair<std::ptrdiff_t, std::ptrdiff_t>> offsets;
  for (std::ptrdiff_t dy = -ri; dy <= ri; ++dy)
    for (std::ptrdiff_t dx = -ri; dx <= ri; ++dx)
      if (dy * dy + dx * dx <= ri * ri) offsets.emplace_back(dy, dx);

  std::vector<std::uint8_t> out(src.size(), 0);
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      if (!src[static_cast<std::size_t>(y * w + x)]) continue;
      for (auto [dy, dx] : offsets) {
        const std::ptrdiff_t ny = y + dy;
        const std::ptrdiff_t nx = x + dx;
        if (ny >= 0 && nx >= 0 && ny < h && nx < w) out[static_cast<std::size_t>(ny * w + nx)] = 1;
      }
    }
  }
  return out;
}

}  // namespace

double region_j(const LabelMask& pred, const LabelMask& gt, std::uint8_t object_id) {
  check_pair(pred, gt);
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < pred.labels.size(); ++i) {
    const bool a = pred.labels[i] == object_id;
    const bool b = gt.labels[i] == object_id;
    inter += a && b;
    uni += a || b;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

std::size_t default_boundary_tolerance(std::size_t height, std::size_t width) {
  const double diag = std::hypot(static_cast<double>(height), static_cast<double>(width));
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(0.0075 * diag)));
}

double boundary_f(const LabelMask& pred, const LabelMask& gt, std::uint8_t object_id,
                  std::size_t tolerance_px) {
  check_pair(pred, gt);
  const std::size_t h = pred.height;
  const std::size_t w = pred.width;
  const auto pb = boundary_pixels(object_mask(pred, object_id), h, w);
  const auto gb = boundary_pixels(object_mask(gt, object_id), h, w);

  const auto count = [](const std::vector<std::uint8_t>& v) {
    return static_cast<std::size_t>(std::count(v.begin(), v.end(), std::uint8_t{1}));
  };
  const std::size_t n_pred = count(pb);
  const std::size_t n_gt = count(gb);
  if (n_pred == 0 && n_gt == 0) return 1.0;
  if (n_pred == 0 || n_gt == 0) return 0.0;

  const auto gt_zone = dilate_disk(gb, h, w, tolerance_px);
  const auto pred_zone = dilate_disk(pb, h, w, tolerance_px);
  std::size_t pred_hit = 0;
  std::size_t gt_hit = 0;
  for (std::size_t i = 0; i < pb.size(); ++i) {
    pred_hit += pb[i] && gt_zone[i];
    gt_hit += gb[i] && pred_zone[i];
  }
  const double precision = static_cast<double>(pred_hit) / static_cast<double>(n_pred);
  const double recall = static_cast<double>(gt_hit) / static_cast<double>(n_gt);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

EvalReport jf_mean(std::vector<FrameScore> rows) {
  EvalReport report;
  report.rows = std::move(rows);

  // Preserve first-appearance order for sequences and objects.
  std::vector<std::string> seq_order;
  for (const auto& r : report.rows)
    if (std::find(seq_order.begin(), seq_order.end(), r.sequence) == seq_order.end())
      seq_order.push_back(r.sequence);

  double j_total = 0.0;
  double f_total = 0.0;
  for (const auto& seq : seq_order) {
    std::vector<std::size_t> objects;
    for (const auto& r : report.rows)
      if (r.sequence == seq && std::find(objects.begin(), objects.end(), r.object) == objects.end())
        objects.push_back(r.object);
    double sj = 0.0;
    double sf = 0.0;
    for (std::size_t obj : objects) {
      double oj = 0.0;
      double of = 0.0;
      std::size_t frames = 0;
      for (const auto& r : report.rows) {
        if (r.sequence != seq || r.object != obj) continue;
        oj += r.j;
        of += r.f;
        ++frames;
      }
      sj += oj / static_cast<double>(frames);
      sf += of / static_cast<double>(frames);
    }
    const double nobj = static_cast<double>(objects.size());
    report.sequences.push_back({seq, sj / nobj, sf / nobj});
    j_total += sj / nobj;
    f_total += sf / nobj;
  }
  if (!seq_order.empty()) {
    report.j_mean = j_total / static_cast<double>(seq_order.size());
    report.f_mean = f_total / static_cast<double>(seq_order.size());
  }
  report.jf = 0.5 * (report.j_mean + report.f_mean);
  return report;
}

std::vector<FrameScore> evaluate_sequence(const std::string& name,
                                          const std::vector<LabelMask>& pred,
                                          const std::vector<LabelMask>& gt,
                                          std::size_t object_count, std::size_t tolerance_px) {
  require(pred.size() == gt.size(), Errc::invalid_argument,
          "prediction and ground truth frame counts differ");
  std::vector<FrameScore> rows;
  for (std::size_t obj = 1; obj <= object_count; ++obj) {
    const auto id = static_cast<std::uint8_t>(obj);
    for (std::size_t i = 0; i < gt.size(); ++i)
      rows.push_back({name, obj, i, region_j(pred[i], gt[i], id),
                      boundary_f(pred[i], gt[i], id, tolerance_px)});
  }
  return rows;
}

}  // namespace pmvos
