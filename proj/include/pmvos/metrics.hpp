#pragma once

// Region accuracy (J, intersection over union) and contour accuracy (F,
// boundary precision/recall F-measure) on integer label masks, plus the usual
// frame -> object -> sequence averaging.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pmvos/error.hpp"

namespace pmvos {

struct LabelMask {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> labels;

  LabelMask() = default;
  LabelMask(std::size_t h, std::size_t w) : height(h), width(w), labels(h * w, 0) {}
  LabelMask(std::size_t h, std::size_t w, std::vector<std::uint8_t> l)
      : height(h), width(w), labels(std::move(l)) {
    require(labels.size() == h * w, Errc::invalid_argument, "label count does not match H*W");
  }

  std::uint8_t& at(std::size_t y, std::size_t x) { return labels[y * width + x]; }
  std::uint8_t at(std::size_t y, std::size_t x) const { return labels[y * width + x]; }
  std::uint8_t max_label() const;

  friend bool operator==(const LabelMask&, const LabelMask&) = default;
};

/// Binary mask of one object, as 0/1 bytes.
std::vector<std::uint8_t> object_mask(const LabelMask& mask, std::uint8_t object_id);

/// Foreground pixels with a 4-neighbour outside the object (the image edge
/// counts as outside).
std::vector<std::uint8_t> boundary_pixels(const std::vector<std::uint8_t>& binary,
                                          std::size_t height, std::size_t width);

/// |pred & gt| / |pred | gt|; 1 when both are empty.
double region_j(const LabelMask& pred, const LabelMask& gt, std::uint8_t object_id);

/// ceil(0.0075 * image diagonal), at least 1.
std::size_t default_boundary_tolerance(std::size_t height, std::size_t width);

/// Boundary F-measure. A boundary pixel of one mask counts as matched when a
/// boundary pixel of the other lies within Euclidean distance `tolerance_px`
/// (a disk dilation), independently for precision and recall.
double boundary_f(const LabelMask& pred, const LabelMask& gt, std::uint8_t object_id,
                  std::size_t tolerance_px);

struct FrameScore {
  std::string sequence;
  std::size_t object = 0;
  std::size_t frame = 0;
  double j = 0.0;
  double f = 0.0;
};

struct EvalReport {
  std::vector<FrameScore> rows;

  struct SequenceSummary {
    std::string sequence;
    double j_mean = 0.0;
    double f_mean = 0.0;
  };
  std::vector<SequenceSummary> sequences;

  double j_mean = 0.0;
  double f_mean = 0.0;
  double jf = 0.0;
};

/// Means over frames, then objects, then sequences (each in order of first
/// appearance in `rows`); jf = (J + F) / 2.
EvalReport jf_mean(std::vector<FrameScore> rows);

/// Scores every frame of one sequence for objects 1..object_count.
std::vector<FrameScore> evaluate_sequence(const std::string& name,
                                          const std::vector<LabelMask>& pred,
                                          const std::vector<LabelMask>& gt,
                                          std::size_t object_count, std::size_t tolerance_px);

}  // namespace pmvos
