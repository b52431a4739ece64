#ifndef DYERGEO_WORDS_HPP
#define DYERGEO_WORDS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dyergeo/dyer_graph.hpp"

namespace dyergeo {

using Word = std::vector<Letter>;

/// Rewriting context: a validated graph plus the derived tables the word
/// problem needs (letter ranks, inverses, commutation and braid data).
class DyerGroup {
 public:
  explicit DyerGroup(DyerGraph graph);

  const DyerGraph& graph() const { return graph_; }
  const Alphabet& alphabet() const { return alphabet_; }

  /// M = max edge label (2 for an empty edge set).
  unsigned max_label() const { return max_label_; }

  Letter letter_inverse(const Letter& l) const { return alphabet_.inverse(l); }

  // Internal rank-level tables, exposed for the sibling modules.
  std::size_t rank_count() const { return alphabet_.size(); }
  std::size_t inverse_rank(std::size_t r) const { return alphabet_.inverse_rank(r); }
  bool commutes(std::size_t ra, std::size_t rb) const {
    return commute_[ra * alphabet_.size() + rb];
  }
  /// Braid length m >= 3 between the vertices of two ranks, or 0.
  unsigned braid(std::size_t ra, std::size_t rb) const {
    return braid_[ra * alphabet_.size() + rb];
  }
  /// Result of merging adjacent same-vertex letters: kMergeNone when the pair
  /// is not mergeable, kMergeCancel when the product is the identity,
  /// otherwise the rank of the merged letter.
  static constexpr std::uint16_t kMergeNone = 0xFFFF;
  static constexpr std::uint16_t kMergeCancel = 0xFFFE;
  std::uint16_t merge(std::size_t ra, std::size_t rb) const {
    return merge_[ra * alphabet_.size() + rb];
  }

 private:
  DyerGraph graph_;
  Alphabet alphabet_;
  unsigned max_label_;
  std::vector<char> commute_;
  std::vector<unsigned> braid_;
  std::vector<std::uint16_t> merge_;
};

/// Shortlex-least geodesic representative; the element identity everywhere
/// downstream. Only normal_form() and ElementTable construct these.
class NormalForm {
 public:
  NormalForm() = default;  // the identity element

  const Word& word() const { return word_; }
  std::size_t length() const { return word_.size(); }

  friend bool operator==(const NormalForm&, const NormalForm&) = default;

 private:
  explicit NormalForm(Word w) : word_(std::move(w)) {}
  friend NormalForm normal_form(const DyerGroup&, const Word&);
  friend class ElementTable;

  Word word_;
};

/// Merges adjacent same-vertex letters until no permitted merge remains.
/// Finite-order letters combine mod k (and vanish at 0); at infinite-order
/// vertices only opposite signs cancel.
Word local_reduce(const DyerGroup& G, Word w);

/// All words one commutation (m = 2 edge, any exponents) or one braid flip
/// (m >= 3 edge, alternating subword of length m) away from w.
std::vector<Word> length_preserving_moves(const DyerGroup& G, const Word& w);

/// A geodesic word equal to w: alternately reduce locally and search the
/// closure under length-preserving moves for further reductions.
Word reduce(const DyerGroup& G, Word w);

/// True iff w has minimal length in its equivalence class.
bool is_geodesic_word(const DyerGroup& G, const Word& w);

/// Shortlex-least word in the move closure of reduce(w).
NormalForm normal_form(const DyerGroup& G, const Word& w);

bool equal(const DyerGroup& G, const Word& a, const Word& b);
NormalForm multiply(const DyerGroup& G, const NormalForm& a, const NormalForm& b);
NormalForm invert(const DyerGroup& G, const NormalForm& n);

/// Length first, then lexicographic by canonical letter rank.
bool shortlex_less(const DyerGroup& G, const Word& a, const Word& b);

/// Word literal syntax: whitespace-separated tokens `<vertex>^<exp>`, the
/// exponent defaulting to 1. Finite-order exponents are canonicalized mod k.
Word parse_word_literal(const DyerGroup& G, std::string_view text);
std::string format_word(const DyerGroup& G, const Word& w);  // "e" when empty
std::string format_word(const DyerGroup& G, const NormalForm& n);

}  // namespace dyergeo

#endif
