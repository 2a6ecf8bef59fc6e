#include "pmvos/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace pmvos::io {

namespace {

constexpr std::string_view kTensorMagic = "PMT1";
constexpr std::string_view kStateMagic = "PMS1";

class Writer {
 public:
  void bytes(std::string_view b) { out_.append(b); }
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void size(std::size_t v) {
    require(v <= UINT32_MAX, Errc::invalid_argument, "dimension does not fit in 32 bits");
    u32(static_cast<std::uint32_t>(v));
  }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::string_view bytes(std::size_t n) {
    need(n);
    auto r = in_.substr(pos_, n);
    pos_ += n;
    return r;
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(in_[pos_++]);
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::size_t remaining() const { return in_.size() - pos_; }

  void need(std::size_t n) const {
    require(in_.size() - pos_ >= n, Errc::truncated_payload,
            "expected " + std::to_string(n) + " more bytes, found " +
                std::to_string(in_.size() - pos_));
  }

 private:
  std::string_view in_;
  std::size_t pos_ = 0;
};

void check_magic(Reader& r, std::string_view magic, const char* what) {
  require(r.remaining() >= magic.size(), Errc::bad_magic, std::string(what) + " too short");
  require(r.bytes(magic.size()) == magic, Errc::bad_magic,
          std::string("not a ") + what + " (expected magic " + std::string(magic) + ")");
}

void put_grid64(Writer& w, const FeatureGrid& g) {
  w.size(g.channels());
  w.size(g.height());
  w.size(g.width());
  w.u8(g.normalized() ? 1 : 0);
  for (double v : g.data()) w.f64(v);
}

FeatureGrid get_grid64(Reader& r) {
  const std::size_t c = r.u32();
  const std::size_t h = r.u32();
  const std::size_t wd = r.u32();
  const bool normalized = r.u8() != 0;
  r.need(c * h * wd * 8);
  std::vector<double> data(c * h * wd);
  for (double& v : data) v = r.f64();
  return {c, h, wd, std::move(data), normalized};
}

void put_vec(Writer& w, const std::vector<double>& v) {
  w.size(v.size());
  for (double x : v) w.f64(x);
}

std::vector<double> get_vec(Reader& r) {
  const std::size_t n = r.u32();
  r.need(n * 8);
  std::vector<double> v(n);
  for (double& x : v) x = r.f64();
  return v;
}

void put_template(Writer& w, const WeightedTemplate& t) {
  w.u64(t.source_frame);
  put_grid64(w, t.per_class[0]);
  put_grid64(w, t.per_class[1]);
}

WeightedTemplate get_template(Reader& r) {
  WeightedTemplate t;
  t.source_frame = r.u64();
  t.per_class[0] = get_grid64(r);
  t.per_class[1] = get_grid64(r);
  return t;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void write_atomic(const fs::path& path, std::string_view bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), Errc::io, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    require(out.good(), Errc::io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  require(!ec, Errc::io, "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), Errc::io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------- tensors

std::string encode_tensor(const FeatureGrid& grid) {
  Writer w;
  w.bytes(kTensorMagic);
  w.size(grid.channels());
  w.size(grid.height());
  w.size(grid.width());
  for (double v : grid.data()) {
    const auto f = static_cast<float>(v);
    require(std::isfinite(f), Errc::non_finite, "tensor value not representable as finite float32");
    w.f32(f);
  }
  return w.take();
}

FeatureGrid decode_tensor(std::string_view bytes) {
  Reader r(bytes);
  check_magic(r, kTensorMagic, "tensor file");
  const std::size_t c = r.u32();
  const std::size_t h = r.u32();
  const std::size_t w = r.u32();
  require(c > 0 && h > 0 && w > 0, Errc::invalid_input, "tensor header has a zero dimension");
  const std::size_t n = c * h * w;
  r.need(n * 4);
  std::vector<double> data(n);
  for (double& v : data) {
    const float f = r.f32();
    require(std::isfinite(f), Errc::non_finite, "tensor payload contains a non-finite value");
    v = f;
  }
  require(r.remaining() == 0, Errc::invalid_input, "trailing bytes after tensor payload");
  return {c, h, w, std::move(data)};
}

void write_tensor(const fs::path& path, const FeatureGrid& grid) {
  write_atomic(path, encode_tensor(grid));
}

FeatureGrid read_tensor(const fs::path& path) { return decode_tensor(read_file(path)); }

// ---------------------------------------------------------------- masks

std::string encode_mask(const LabelMask& mask) {
  std::string out = "P5\n" + std::to_string(mask.width) + " " + std::to_string(mask.height) +
                    "\n255\n";
  out.append(mask.labels.begin(), mask.labels.end());
  return out;
}

LabelMask decode_mask(std::string_view bytes, std::optional<std::size_t> max_label) {
  require(bytes.size() >= 2 && bytes.substr(0, 2) == "P5", Errc::bad_magic,
          "not a binary PGM (expected P5)");
  std::size_t pos = 2;
  auto next_int = [&]() -> std::size_t {
    // Skip whitespace and comments.
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
    std::size_t v = 0;
    const auto* first = bytes.data() + pos;
    const auto [ptr, ec] = std::from_chars(first, bytes.data() + bytes.size(), v);
    require(ec == std::errc() && ptr != first, ptr == bytes.data() + bytes.size()
                                                    ? Errc::truncated_payload
                                                    : Errc::parse,
            "malformed PGM header");
    pos += static_cast<std::size_t>(ptr - first);
    return v;
  };
  const std::size_t w = next_int();
  const std::size_t h = next_int();
  const std::size_t maxval = next_int();
  require(w > 0 && h > 0, Errc::parse, "PGM has a zero dimension");
  require(maxval >= 1 && maxval <= 255, Errc::parse, "only 8-bit PGM masks are supported");
  require(pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos])),
          Errc::truncated_payload, "PGM header not terminated");
  ++pos;
  require(bytes.size() - pos >= w * h, Errc::truncated_payload,
          "PGM payload has " + std::to_string(bytes.size() - pos) + " bytes, expected " +
              std::to_string(w * h));
  LabelMask mask(h, w);
  std::memcpy(mask.labels.data(), bytes.data() + pos, w * h);
  if (max_label) {
    const std::size_t top = mask.max_label();
    require(top <= *max_label, Errc::label_range,
            "mask label " + std::to_string(top) + " exceeds declared object count " +
                std::to_string(*max_label));
  }
  return mask;
}

void write_mask(const fs::path& path, const LabelMask& mask) {
  write_atomic(path, encode_mask(mask));
}

LabelMask read_mask(const fs::path& path, std::optional<std::size_t> max_label) {
  return decode_mask(read_file(path), max_label);
}

// ---------------------------------------------------------------- state

std::string encode_state(const TrackerState& s) {
  Writer w;
  w.bytes(kStateMagic);
  w.u64(s.frame_index);
  put_template(w, s.bank.global);
  put_template(w, s.bank.local);
  w.f64(s.bank.medial.alpha);
  w.u8(s.bank.medial.initialized ? 1 : 0);
  put_vec(w, s.bank.medial.vectors[0]);
  put_vec(w, s.bank.medial.vectors[1]);
  w.size(s.prev_probs.classes());
  w.size(s.prev_probs.height());
  w.size(s.prev_probs.width());
  for (double v : s.prev_probs.data()) w.f64(v);
  put_vec(w, s.fusion.weights[0]);
  put_vec(w, s.fusion.weights[1]);
  w.f64(s.fusion.bias[0]);
  w.f64(s.fusion.bias[1]);
  return w.take();
}

TrackerState decode_state(std::string_view bytes) {
  Reader r(bytes);
  check_magic(r, kStateMagic, "tracker state file");
  TrackerState s;
  s.frame_index = r.u64();
  s.bank.global = get_template(r);
  s.bank.local = get_template(r);
  s.bank.medial.alpha = r.f64();
  s.bank.medial.initialized = r.u8() != 0;
  s.bank.medial.vectors[0] = get_vec(r);
  s.bank.medial.vectors[1] = get_vec(r);
  const std::size_t k = r.u32();
  const std::size_t h = r.u32();
  const std::size_t w = r.u32();
  r.need(k * h * w * 8);
  std::vector<double> probs(k * h * w);
  for (double& v : probs) v = r.f64();
  s.prev_probs = ProbabilityField(k, h, w, std::move(probs));
  s.fusion.weights[0] = get_vec(r);
  s.fusion.weights[1] = get_vec(r);
  s.fusion.bias[0] = r.f64();
  s.fusion.bias[1] = r.f64();
  require(r.remaining() == 0, Errc::invalid_input, "trailing bytes after tracker state");
  return s;
}

void write_state(const fs::path& path, const TrackerState& state) {
  write_atomic(path, encode_state(state));
}

TrackerState read_state(const fs::path& path) { return decode_state(read_file(path)); }

// ---------------------------------------------------------------- config

ConfigMap parse_config(std::string_view text) {
  ConfigMap out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    require(eq != std::string::npos, Errc::parse,
            "line " + std::to_string(line_no) + ": expected 'key = value'");
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    require(!key.empty(), Errc::parse, "line " + std::to_string(line_no) + ": empty key");
    require(!out.contains(key), Errc::parse,
            "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    out.emplace(std::move(key), std::move(value));
  }
  return out;
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(ec == std::errc() && ptr == v.data() + v.size() && std::isfinite(out), Errc::parse,
          "key '" + key + "': expected a finite number, got '" + v + "'");
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(ec == std::errc() && ptr == v.data() + v.size(), Errc::parse,
          "key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string tok;
  while (in >> tok) out.push_back(parse_double(key, tok));
  require(!out.empty(), Errc::parse, "key '" + key + "': expected a list of numbers");
  return out;
}

// Round-trippable text for a double.
std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + num(v[i]);
  return out;
}

// Splits "object3.radius" into (3, "radius").
bool object_key(std::string_view key, std::size_t& index, std::string_view& field) {
  constexpr std::string_view prefix = "object";
  if (!key.starts_with(prefix)) return false;
  const auto dot = key.find('.');
  if (dot == std::string_view::npos || dot == prefix.size()) return false;
  const auto digits = key.substr(prefix.size(), dot - prefix.size());
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) return false;
  field = key.substr(dot + 1);
  return true;
}

}  // namespace

SynthSpec synth_spec_from_config(const ConfigMap& config) {
  SynthSpec spec;
  std::size_t declared = 0;
  if (auto it = config.find("objects"); it != config.end())
    declared = parse_uint(it->first, it->second);
  require(declared >= 1 && declared < 256, Errc::parse, "'objects' must be between 1 and 255");
  spec.objects.resize(declared);

  for (const auto& [key, value] : config) {
    std::size_t idx = 0;
    std::string_view field;
    if (key == "objects") continue;
    if (key == "height") spec.height = parse_uint(key, value);
    else if (key == "width") spec.width = parse_uint(key, value);
    else if (key == "channels") spec.channels = parse_uint(key, value);
    else if (key == "frames") spec.frames = parse_uint(key, value);
    else if (key == "seed") spec.seed = parse_uint(key, value);
    else if (key == "noise") spec.noise = parse_double(key, value);
    else if (key == "background") spec.background = parse_list(key, value);
    else if (object_key(key, idx, field)) {
      require(idx >= 1 && idx <= declared, Errc::parse,
              "key '" + key + "' refers to an undeclared object");
      SynthObject& o = spec.objects[idx - 1];
      if (field == "x") o.x = parse_double(key, value);
      else if (field == "y") o.y = parse_double(key, value);
      else if (field == "vx") o.vx = parse_double(key, value);
      else if (field == "vy") o.vy = parse_double(key, value);
      else if (field == "radius") o.radius = parse_double(key, value);
      else if (field == "signature") o.signature = parse_list(key, value);
      else fail(Errc::parse, "unknown key '" + key + "'");
    } else {
      fail(Errc::parse, "unknown key '" + key + "'");
    }
  }
  return spec;
}

std::string synth_spec_to_config(const SynthSpec& spec) {
  std::string out;
  out += "height = " + std::to_string(spec.height) + "\n";
  out += "width = " + std::to_string(spec.width) + "\n";
  out += "channels = " + std::to_string(spec.channels) + "\n";
  out += "frames = " + std::to_string(spec.frames) + "\n";
  out += "seed = " + std::to_string(spec.seed) + "\n";
  out += "noise = " + num(spec.noise) + "\n";
  if (!spec.background.empty()) out += "background = " + list(spec.background) + "\n";
  out += "objects = " + std::to_string(spec.objects.size()) + "\n";
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const auto& o = spec.objects[i];
    const std::string p = "object" + std::to_string(i + 1) + ".";
    out += p + "x = " + num(o.x) + "\n";
    out += p + "y = " + num(o.y) + "\n";
    out += p + "vx = " + num(o.vx) + "\n";
    out += p + "vy = " + num(o.vy) + "\n";
    out += p + "radius = " + num(o.radius) + "\n";
    if (!o.signature.empty()) out += p + "signature = " + list(o.signature) + "\n";
  }
  return out;
}

SynthSpec read_synth_spec(const fs::path& path) {
  return synth_spec_from_config(parse_config(read_file(path)));
}

FusionParams fusion_params_from_config(const ConfigMap& config) {
  FusionParams p;
  bool seen[4] = {};
  for (const auto& [key, value] : config) {
    if (key == "weights.bg") p.weights[0] = parse_list(key, value), seen[0] = true;
    else if (key == "weights.fg") p.weights[1] = parse_list(key, value), seen[1] = true;
    else if (key == "bias.bg") p.bias[0] = parse_double(key, value), seen[2] = true;
    else if (key == "bias.fg") p.bias[1] = parse_double(key, value), seen[3] = true;
    else fail(Errc::parse, "unknown key '" + key + "'");
  }
  require(seen[0] && seen[1], Errc::parse, "fusion config needs weights.bg and weights.fg");
  require(p.weights[0].size() == p.weights[1].size(), Errc::parse,
          "weights.bg and weights.fg differ in length");
  return p;
}

std::string fusion_params_to_config(const FusionParams& params) {
  return "weights.bg = " + list(params.weights[0]) + "\nweights.fg = " + list(params.weights[1]) +
         "\nbias.bg = " + num(params.bias[0]) + "\nbias.fg = " + num(params.bias[1]) + "\n";
}

FusionParams read_fusion_params(const fs::path& path) {
  return fusion_params_from_config(parse_config(read_file(path)));
}

// ---------------------------------------------------------------- directories

std::string indexed_name(std::string_view prefix, std::size_t index, std::string_view ext) {
  char digits[32];
  std::snprintf(digits, sizeof digits, "%04zu", index);
  return std::string(prefix) + digits + std::string(ext);
}

std::vector<IndexedFile> list_indexed(const fs::path& dir, std::string_view prefix,
                                      std::string_view ext) {
  require(fs::is_directory(dir), Errc::io, dir.string() + " is not a directory");
  std::vector<IndexedFile> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (!name.starts_with(prefix) || !name.ends_with(ext)) continue;
    const std::string_view digits =
        std::string_view(name).substr(prefix.size(), name.size() - prefix.size() - ext.size());
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) continue;
    out.push_back({idx, entry.path()});
  }
  std::sort(out.begin(), out.end(),
            [](const IndexedFile& a, const IndexedFile& b) { return a.index < b.index; });
  return out;
}

}  // namespace pmvos::io
