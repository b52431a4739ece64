#ifndef DYERGEO_MEDIANGLE_HPP
#define DYERGEO_MEDIANGLE_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dyergeo/cayley.hpp"

namespace dyergeo {

struct AxiomReport {
  enum class Axiom { triangle, k4minus, cycle, even_intersections };

  Axiom axiom{};
  std::size_t instances_checked = 0;
  std::size_t instances_skipped_for_margin = 0;
  std::vector<std::vector<std::uint32_t>> violations;  // witness element indices

  bool pass() const { return violations.empty(); }
};

std::string axiom_name(AxiomReport::Axiom a);

/// Cached geometry over one ball: exact pairwise distances (normal forms,
/// never in-ball BFS), adjacency lists, dihedral cycles, and bounded
/// neighborhood enumerations for tube searches.
class BallAnalysis {
 public:
  BallAnalysis(const DyerGroup& G, const CayleyBall& ball);

  const DyerGroup& group() const { return *group_; }
  const CayleyBall& ball() const { return *ball_; }

  unsigned distance(std::uint32_t i, std::uint32_t j);
  const std::vector<std::uint32_t>& neighbors(std::uint32_t i) const {
    return neighbors_[i];
  }
  const std::vector<DihedralCycle>& cycles();

  /// Elements within distance k of src, with exact distances, found by
  /// breadth-first search inside the ball. Exact whenever
  /// depth(src) + k <= radius; the cache is keyed per source.
  const std::vector<std::pair<std::uint32_t, std::uint8_t>>& around(
      std::uint32_t src, unsigned k);

 private:
  const DyerGroup* group_;
  const CayleyBall* ball_;
  ElementTable table_;  // ids aligned with ball indices
  std::vector<std::vector<std::uint32_t>> neighbors_;
  bool cycles_built_ = false;
  std::vector<DihedralCycle> cycles_;
  unsigned around_k_ = 0;
  std::unordered_map<std::uint32_t,
                     std::vector<std::pair<std::uint32_t, std::uint8_t>>>
      around_;
};

// The four mediangle axioms, verified on every instance whose asserted
// witnesses are guaranteed to lie inside the ball (instances that could
// reach past the boundary are counted as skipped, not checked).
AxiomReport check_triangle_condition(BallAnalysis& a);
AxiomReport check_k4_minus_free(BallAnalysis& a);
AxiomReport check_cycle_condition(BallAnalysis& a);
AxiomReport check_even_cycle_intersections(BallAnalysis& a);
std::vector<AxiomReport> check_mediangle_axioms(BallAnalysis& a);

std::string to_text(const DyerGroup& G, const CayleyBall& ball,
                    const AxiomReport& r);

/// Arbitrary undirected graph for negative-control checks. Distances come
/// from all-pairs breadth-first search; no margins apply.
struct SimpleGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

AxiomReport check_triangle_condition(const SimpleGraph& g);
AxiomReport check_k4_minus_free(const SimpleGraph& g);

/// Partition of ball edges into hyperplane classes: the transitive closure
/// of sharing a 3-cycle or being opposite in a dihedral cycle, witnessed
/// inside the ball. Classes only under-merge relative to the full graph.
class HyperplanePartition {
 public:
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t class_count() const { return class_count_; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const {
    return edges_;
  }
  /// Class of the edge {i, j}; throws Error when not a ball edge.
  std::size_t class_of(std::uint32_t i, std::uint32_t j) const;

 private:
  friend HyperplanePartition compute_hyperplanes(BallAnalysis&);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_ids_;
  std::vector<std::uint32_t> classes_;  // per edge id
  std::size_t class_count_ = 0;
};

HyperplanePartition compute_hyperplanes(BallAnalysis& a);

std::string hyperplanes_to_csv(const DyerGroup& G, const CayleyBall& ball,
                               const HyperplanePartition& hp);

/// Hyperplane class of each path edge, in order.
std::vector<std::size_t> crossings(const BallPath& p, const HyperplanePartition& hp);

/// Independent geodesic test: path length equals endpoint distance.
bool is_geodesic(BallAnalysis& a, const BallPath& p);

struct HyperplaneCriterionReport {
  unsigned radius_used = 0;
  unsigned max_len = 0;
  std::size_t paths_checked = 0;
  std::size_t paths_skipped_margin = 0;
  std::size_t soundness_violations = 0;   // repeated class on a geodesic
  std::size_t completeness_failures = 0;  // no repeat on a non-geodesic
  bool retried = false;

  bool pass() const {
    return soundness_violations == 0 && completeness_failures == 0;
  }
};

/// Exhaustively tests "repeated hyperplane class iff non-geodesic" over all
/// paths from the identity of length <= max_len whose vertices stay at depth
/// <= radius - M. If completeness fails at that margin the whole check is
/// retried once at radius + M before reporting failure.
HyperplaneCriterionReport verify_hyperplane_criterion(const DyerGroup& G,
                                                      unsigned radius,
                                                      unsigned max_len,
                                                      const Limits& limits = {});

}  // namespace dyergeo

#endif
