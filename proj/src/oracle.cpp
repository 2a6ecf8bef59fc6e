#include "pmvos/oracle.hpp"

#include <cmath>
#include <limits>

namespace pmvos::oracle {

std::array<std::vector<double>, 2> match(const FeatureGrid& input, const WeightedTemplate& tmpl) {
  std::array<std::vector<double>, 2> out;
  const std::size_t h = input.height();
  const std::size_t w = input.width();
  const std::size_t channels = input.channels();
  for (std::size_t k = 0; k < 2; ++k) {
    const FeatureGrid& y = tmpl.per_class[k];
    out[k].assign(h * w, 0.0);
    for (std::size_t py = 0; py < h; ++py) {
      for (std::size_t px = 0; px < w; ++px) {
        long double best = -std::numeric_limits<long double>::infinity();
        for (std::size_t qy = 0; qy < y.height(); ++qy) {
          for (std::size_t qx = 0; qx < y.width(); ++qx) {
            long double s = 0.0L;
            for (std::size_t c = 0; c < channels; ++c)
              s += static_cast<long double>(input.at(c, py, px)) *
                   static_cast<long double>(y.at(c, qy, qx));
            if (s > best) best = s;
          }
        }
        out[k][py * w + px] = static_cast<double>(best);
      }
    }
  }
  return out;
}

AttentionResult attention(const FeatureGrid& stack, double gamma, AttentionKind kind) {
  const std::size_t n = stack.channels();
  const std::size_t hw = stack.height() * stack.width();
  const auto& s = stack.storage();

  // Points are rows of F (HW x n) for spatial, rows of G (n x HW) for channel.
  const bool spatial = kind == AttentionKind::spatial;
  const std::size_t points = spatial ? hw : n;
  const std::size_t dims = spatial ? n : hw;
  auto elem = [&](std::size_t point, std::size_t dim) -> long double {
    return spatial ? s[dim * hw + point] : s[point * hw + dim];
  };

  std::vector<long double> a(points * points);
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t j = 0; j < points; ++j) {
      long double e = 0.0L;
      for (std::size_t d = 0; d < dims; ++d) e += elem(i, d) * elem(j, d);
      a[i * points + j] = e;
    }
    long double mx = a[i * points];
    for (std::size_t j = 1; j < points; ++j) mx = std::max(mx, a[i * points + j]);
    long double z = 0.0L;
    for (std::size_t j = 0; j < points; ++j) z += std::exp(a[i * points + j] - mx);
    for (std::size_t j = 0; j < points; ++j) a[i * points + j] = std::exp(a[i * points + j] - mx) / z;
  }

  AttentionResult r;
  r.affinity.assign(a.begin(), a.end());
  r.output.assign(n * hw, 0.0);
  for (std::size_t i = 0; i < points; ++i) {
    for (std::size_t d = 0; d < dims; ++d) {
      long double acc = 0.0L;
      for (std::size_t j = 0; j < points; ++j) acc += a[i * points + j] * elem(j, d);
      const std::size_t idx = spatial ? d * hw + i : i * hw + d;
      r.output[idx] = static_cast<double>(static_cast<long double>(gamma) * acc + s[idx]);
    }
  }
  return r;
}

namespace {

struct Pixel {
  long y;
  long x;
};

std::vector<Pixel> boundary(const LabelMask& m, std::uint8_t id) {
  const long h = static_cast<long>(m.height);
  const long w = static_cast<long>(m.width);
  auto fg = [&](long y, long x) {
    return y >= 0 && x >= 0 && y < h && x < w &&
           m.labels[static_cast<std::size_t>(y * w + x)] == id;
  };
  std::vector<Pixel> out;
  for (long y = 0; y < h; ++y)
    for (long x = 0; x < w; ++x)
      if (fg(y, x) && (!fg(y - 1, x) || !fg(y + 1, x) || !fg(y, x - 1) || !fg(y, x + 1)))
        out.push_back({y, x});
  return out;
}

// Kuhn's augmenting-path search from left vertex u.
bool augment(std::size_t u, const std::vector<std::vector<std::size_t>>& adj,
             std::vector<char>& seen, std::vector<long>& match_right) {
  for (std::size_t v : adj[u]) {
    if (seen[v]) continue;
    seen[v] = 1;
    if (match_right[v] < 0 ||
        augment(static_cast<std::size_t>(match_right[v]), adj, seen, match_right)) {
      match_right[v] = static_cast<long>(u);
      return true;
    }
  }
  return false;
}

}  // namespace

double boundary_f(const LabelMask& pred, const LabelMask& gt, std::uint8_t object_id,
                  std::size_t tolerance) {
  const auto pb = boundary(pred, object_id);
  const auto gb = boundary(gt, object_id);
  if (pb.empty() && gb.empty()) return 1.0;
  if (pb.empty() || gb.empty()) return 0.0;

  const long t2 = static_cast<long>(tolerance * tolerance);
  std::vector<std::vector<std::size_t>> adj(pb.size());
  for (std::size_t i = 0; i < pb.size(); ++i)
    for (std::size_t j = 0; j < gb.size(); ++j) {
      const long dy = pb[i].y - gb[j].y;
      const long dx = pb[i].x - gb[j].x;
      if (dy * dy + dx * dx <= t2) adj[i].push_back(j);
    }

  std::vector<long> match_right(gb.size(), -1);
  std::size_t matched = 0;
  for (std::size_t u = 0; u < pb.size(); ++u) {
    std::vector<char> seen(gb.size(), 0);
    matched += augment(u, adj, seen, match_right);
  }
  const double precision = static_cast<double>(matched) / static_cast<double>(pb.size());
  const double recall = static_cast<double>(matched) / static_cast<double>(gb.size());
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

std::vector<double> ema(const std::vector<std::vector<double>>& summaries, double alpha) {
  const std::size_t n = summaries.size();
  if (n == 0) return {};
  const long double a = alpha;
  std::vector<long double> acc(summaries[0].size(), 0.0L);
  for (std::size_t j = 0; j < n; ++j) {
    const long double decay = std::pow(1.0L - a, static_cast<long double>(n - 1 - j));
    const long double weight = j == 0 ? decay : a * decay;
    for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += weight * summaries[j][c];
  }
  return {acc.begin(), acc.end()};
}

}  // namespace pmvos::oracle
