#ifndef DYERGEO_DYER_GRAPH_HPP
#define DYERGEO_DYER_GRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dyergeo/errors.hpp"

namespace dyergeo {

/// Vertex order value standing for infinity.
inline constexpr unsigned kInfiniteOrder = 0;

inline bool is_finite_order(unsigned order) { return order != kInfiniteOrder; }

struct DyerVertex {
  std::string name;
  unsigned order;  // >= 2, or kInfiniteOrder
};

struct DyerEdge {
  std::uint32_t u, v;  // vertex positions, u < v
  unsigned label;      // m >= 2

  friend bool operator==(const DyerEdge&, const DyerEdge&) = default;
};

/// A finite simplicial graph with vertex orders and edge labels, subject to
/// the compatibility rule: an edge with label m != 2 joins two order-2
/// vertices. Vertex declaration order fixes the total order used by shortlex.
class DyerGraph {
 public:
  DyerGraph(std::vector<DyerVertex> vertices, std::vector<DyerEdge> edges);

  std::size_t vertex_count() const { return vertices_.size(); }
  const DyerVertex& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<DyerVertex>& vertices() const { return vertices_; }

  /// Edges sorted by endpoint positions.
  const std::vector<DyerEdge>& edges() const { return edges_; }

  /// Label of the edge {u, v}, or 0 when the vertices are not adjacent.
  unsigned edge_label(std::size_t u, std::size_t v) const {
    return labels_[u * vertices_.size() + v];
  }

  /// Position of the named vertex; throws Error if absent.
  std::uint32_t vertex_index(std::string_view name) const;
  bool has_vertex(std::string_view name) const;

 private:
  std::vector<DyerVertex> vertices_;
  std::vector<DyerEdge> edges_;
  std::vector<unsigned> labels_;  // dense vertex_count^2 lookup
  std::unordered_map<std::string, std::uint32_t> index_;
};

enum class GroupClass { coxeter, raag, graph_product_of_cyclics, general };

std::string to_string(GroupClass c);

/// coxeter iff all orders are 2; raag iff all orders are infinite;
/// graph-product-of-cyclics iff all edge labels are 2; general otherwise.
/// Earlier tags take precedence.
GroupClass classify(const DyerGraph& g);

/// Largest edge label M, with the convention M = 2 for an empty edge set so
/// that the fellow-traveller constant 2M is always defined.
unsigned max_edge_label(const DyerGraph& g);

/// Reads the line-oriented graph format:
///   vertex <id> <order>     order is an integer >= 2 or "inf"
///   edge <id> <id> <m>      m is an integer >= 2
/// '#' starts a comment. Throws ParseError with line/column positions.
DyerGraph parse_dyer_graph(std::string_view text);
DyerGraph parse_dyer_graph(std::istream& in);

/// Inverse of parse: vertices in declaration order, then sorted edges.
std::string serialize(const DyerGraph& g);

/// One generator of X_S: a vertex together with a canonical exponent.
/// Finite order k allows exponents 1..k-1; infinite order allows +1/-1.
struct Letter {
  std::uint32_t vertex;
  std::int32_t exponent;

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// The letters of X_S ordered by (vertex position, exponent), where finite
/// exponents order 1 < 2 < ... < k-1 and infinite ones +1 < -1.
std::vector<Letter> enumerate_letters(const DyerGraph& g);

/// Rank/inverse tables over the canonical letter enumeration.
class Alphabet {
 public:
  explicit Alphabet(const DyerGraph& g);

  std::size_t size() const { return letters_.size(); }
  const std::vector<Letter>& letters() const { return letters_; }
  Letter letter(std::size_t rank) const { return letters_[rank]; }

  /// Position of a letter in the canonical enumeration; throws Error for
  /// letters outside X_S (exponent 0, out of range, bad vertex).
  std::size_t rank(const Letter& l) const;

  std::size_t inverse_rank(std::size_t rank) const { return inverse_[rank]; }
  Letter inverse(const Letter& l) const { return letters_[inverse_[this->rank(l)]]; }

 private:
  std::vector<Letter> letters_;
  std::vector<std::size_t> offset_;   // first rank per vertex
  std::vector<std::size_t> inverse_;  // rank -> rank of the inverse letter
  std::vector<unsigned> orders_;
};

}  // namespace dyergeo

#endif
