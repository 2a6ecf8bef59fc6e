#pragma once

// On-disk formats.
//
// Tensor (.pmt):  "PMT1" | u32 C | u32 H | u32 W | C*H*W float32
//                 all little-endian, payload in (channel, row, column) order.
// Mask (.pgm):    binary PGM (P5), 8-bit, pixel value = object label.
// State (.pms):   tracker snapshot, float64 throughout so that a restored
//                 tracker continues bit-identically.
// Config:         line-oriented `key = value`, `#` starts a comment, unknown
//                 keys are rejected.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pmvos/fusion.hpp"
#include "pmvos/grid.hpp"
#include "pmvos/metrics.hpp"
#include "pmvos/synth.hpp"
#include "pmvos/tracker.hpp"

namespace pmvos::io {

namespace fs = std::filesystem;

/// Writes `bytes` to a sibling temp file and renames it over `path`.
void write_atomic(const fs::path& path, std::string_view bytes);
std::string read_file(const fs::path& path);

std::string encode_tensor(const FeatureGrid& grid);
FeatureGrid decode_tensor(std::string_view bytes);
void write_tensor(const fs::path& path, const FeatureGrid& grid);
/// Throws bad_magic, truncated_payload or non_finite on malformed input.
FeatureGrid read_tensor(const fs::path& path);

std::string encode_mask(const LabelMask& mask);
/// `max_label`: declared object count; labels above it raise label_range.
LabelMask decode_mask(std::string_view bytes, std::optional<std::size_t> max_label = {});
void write_mask(const fs::path& path, const LabelMask& mask);
LabelMask read_mask(const fs::path& path, std::optional<std::size_t> max_label = {});

std::string encode_state(const TrackerState& state);
TrackerState decode_state(std::string_view bytes);
void write_state(const fs::path& path, const TrackerState& state);
TrackerState read_state(const fs::path& path);

/// Parsed `key = value` lines, keyed by name. Duplicate keys are an error.
using ConfigMap = std::map<std::string, std::string, std::less<>>;
ConfigMap parse_config(std::string_view text);

SynthSpec synth_spec_from_config(const ConfigMap& config);
std::string synth_spec_to_config(const SynthSpec& spec);
SynthSpec read_synth_spec(const fs::path& path);

FusionParams fusion_params_from_config(const ConfigMap& config);
std::string fusion_params_to_config(const FusionParams& params);
FusionParams read_fusion_params(const fs::path& path);

/// Frame files in a directory named <prefix>NNNN<ext>, sorted by index.
struct IndexedFile {
  std::size_t index;
  fs::path path;
};
std::vector<IndexedFile> list_indexed(const fs::path& dir, std::string_view prefix,
                                      std::string_view ext);
std::string indexed_name(std::string_view prefix, std::size_t index, std::string_view ext);

}  // namespace pmvos::io
