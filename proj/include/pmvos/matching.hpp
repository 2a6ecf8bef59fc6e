#pragma once

// Pixel-level matching: every input pixel is scored against every template
// pixel and the score is max-reduced over the template, giving one H x W map
// per class and matching kind.

#include <array>
#include <cstddef>
#include <initializer_list>
#include <string_view>
#include <vector>

#include "pmvos/grid.hpp"
#include "pmvos/templates.hpp"

namespace pmvos {

enum class MatchKind { medial, global, local };

std::string_view to_string(MatchKind kind);

/// Subset of matching kinds. Iteration order is always medial, global, local.
class KindSet {
 public:
  constexpr KindSet() = default;
  constexpr KindSet(std::initializer_list<MatchKind> kinds) {
    for (MatchKind k : kinds) insert(k);
  }

  constexpr void insert(MatchKind k) { bits_ |= bit(k); }
  constexpr bool contains(MatchKind k) const { return (bits_ & bit(k)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    return static_cast<std::size_t>(contains(MatchKind::medial)) +
           static_cast<std::size_t>(contains(MatchKind::global)) +
           static_cast<std::size_t>(contains(MatchKind::local));
  }
  std::vector<MatchKind> ordered() const;

 private:
  static constexpr unsigned bit(MatchKind k) { return 1u << static_cast<unsigned>(k); }
  unsigned bits_ = 0;
};

/// Per-class similarity maps; class k holds an n x H x W grid whose channel i
/// came from kinds[i].
struct SimilarityStack {
  std::vector<MatchKind> kinds;
  std::array<FeatureGrid, 2> per_class;

  std::size_t maps_per_class() const { return kinds.size(); }
};

/// Per-class 1 x H x W maps.
using ClassMaps = std::array<FeatureGrid, 2>;

/// S_k(p) = max_q <x(p), Y_k(q)>. The input must be pixel-normalized; since
/// Y_k(q) = m_k(q) x'(q), each score is m_k(q) * cos(x(p), x'(q)).
ClassMaps match_grid(const FeatureGrid& input, const WeightedTemplate& tmpl);

/// S_k(p) = <x(p), v_k> for the medial class vectors.
ClassMaps match_vector(const FeatureGrid& input, const MedialTemplate& medial);

/// Runs every enabled kind against the bank. The input is normalized first if
/// it is not flagged as normalized.
SimilarityStack match_all(const FeatureGrid& input, const TemplateBank& bank, KindSet enabled);

}  // namespace pmvos
