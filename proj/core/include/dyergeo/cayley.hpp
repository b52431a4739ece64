#ifndef DYERGEO_CAYLEY_HPP
#define DYERGEO_CAYLEY_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dyergeo/words.hpp"

namespace dyergeo {

/// Resource caps shared by the long-running constructions.
struct Limits {
  std::size_t max_elements = 1'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;

  void check_elements(std::size_t count, const char* what) const;
  void check_deadline(const char* what) const;

  static Limits with_seconds(double seconds, std::size_t max_elements = 1'000'000);
};

/// Interns group elements by normal form and memoizes one-letter products,
/// inverses and distances. The Cayley-graph oracle behind balls, tube
/// searches and automaton construction.
class ElementTable {
 public:
  using Id = std::uint32_t;

  explicit ElementTable(const DyerGroup& G, Limits limits = {});

  const DyerGroup& group() const { return *group_; }

  Id identity();
  Id intern(const Word& w);
  Id intern(const NormalForm& n);

  /// Right multiplication by the letter of the given rank.
  Id step(Id g, std::size_t rank);
  Id mul(Id g, const NormalForm& h);
  Id inverse(Id g);

  std::uint32_t length(Id g) const;
  const NormalForm& element(Id g) const { return elements_[g]; }
  unsigned distance(Id a, Id b);

  std::size_t size() const { return elements_.size(); }

 private:
  Id intern_canonical(std::string rank_word);

  const DyerGroup* group_;
  Limits limits_;
  std::vector<NormalForm> elements_;
  std::vector<std::string> rank_words_;
  std::unordered_map<std::string, Id> index_;
  std::vector<std::vector<Id>> steps_;  // per element, per rank; kUnset lazy
  std::vector<Id> inverses_;
  std::unordered_map<std::uint64_t, std::uint32_t> distances_;
  static constexpr Id kUnset = 0xFFFFFFFF;
};

/// The radius-R ball of the Cayley graph: elements indexed in BFS order from
/// the identity (index 0), with adjacency defined only inside the ball.
class CayleyBall {
 public:
  static constexpr std::uint32_t kNone = 0xFFFFFFFF;

  unsigned radius() const { return radius_; }
  std::size_t size() const { return elements_.size(); }
  const NormalForm& element(std::size_t i) const { return elements_[i]; }
  std::uint32_t depth(std::size_t i) const { return depths_[i]; }
  const std::vector<std::size_t>& sphere_sizes() const { return sphere_sizes_; }

  /// Index of element i multiplied by the letter of the given rank, or kNone
  /// when the product lies outside the ball.
  std::uint32_t neighbor(std::size_t i, std::size_t rank) const {
    return adjacency_[i * alphabet_size_ + rank];
  }
  std::size_t alphabet_size() const { return alphabet_size_; }

  std::optional<std::size_t> index_of(const DyerGroup& G, const NormalForm& n) const;
  bool adjacent(std::size_t i, std::size_t j) const;
  /// Rank of the letter leading from i to j; throws Error if not adjacent.
  std::size_t letter_between(std::size_t i, std::size_t j) const;

  /// All ball edges as index pairs (i < j).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges() const;

 private:
  friend CayleyBall build_ball(const DyerGroup&, unsigned, const Limits&);

  unsigned radius_ = 0;
  std::size_t alphabet_size_ = 0;
  std::vector<NormalForm> elements_;
  std::vector<std::uint32_t> depths_;
  std::vector<std::size_t> sphere_sizes_;
  std::vector<std::uint32_t> adjacency_;
  std::unordered_map<std::string, std::uint32_t> index_;  // rank word -> index
};

CayleyBall build_ball(const DyerGroup& G, unsigned radius, const Limits& limits = {});

/// Exact word-metric distance, via normal forms; independent of any ball.
unsigned distance(const DyerGroup& G, const NormalForm& a, const NormalForm& b);

/// All z with d(a,z) + d(z,b) = d(a,b), enumerated by breadth-first search
/// along geodesics from a.
std::vector<NormalForm> interval(const DyerGroup& G, const NormalForm& a,
                                 const NormalForm& b);

/// True iff every interval between members stays inside the subset.
bool is_convex(const DyerGroup& G, const CayleyBall& ball,
               const std::vector<std::size_t>& subset);

/// A convex even cycle arising from one dihedral relation: a commutation
/// square on an m = 2 edge, or the full 2m-cycle of a braid edge (m >= 3).
struct DihedralCycle {
  enum class Kind { commutation_square, braid_cycle };
  Kind kind;
  std::uint32_t dyer_u, dyer_v;          // defining Dyer edge, u < v
  std::size_t base;                      // least element index on the cycle
  std::vector<std::uint32_t> vertices;   // closed cycle starting at base
};

/// Every dihedral cycle whose vertices all lie in the ball, one
/// representative per cycle (least base, fixed orientation).
std::vector<DihedralCycle> enumerate_dihedral_cycles(const DyerGroup& G,
                                                     const CayleyBall& ball);

/// A path in a ball: consecutive vertices differ by one letter. Regarded as
/// a function of time that stays at the last vertex once it ends.
struct BallPath {
  std::vector<std::uint32_t> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  std::uint32_t at(std::size_t t) const {
    return vertices[t < vertices.size() ? t : vertices.size() - 1];
  }
};

/// The path spelled by a word starting at the identity; throws Error when it
/// leaves the ball.
BallPath path_from_word(const DyerGroup& G, const CayleyBall& ball, const Word& w);
Word word_of_path(const DyerGroup& G, const CayleyBall& ball, const BallPath& p);

std::string to_dot(const DyerGroup& G, const CayleyBall& ball);

}  // namespace dyergeo

#endif
