#ifndef DYERGEO_CONES_HPP
#define DYERGEO_CONES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyergeo/cayley.hpp"

namespace dyergeo {

/// The map h -> l(gh) - l(g) over the ball B(k), k = 2M by default: the
/// finite neighbourhood datum that pins down the cone type of g.
struct ConeProfile {
  std::vector<std::int8_t> deltas;  // indexed by the B(k) enumeration

  friend bool operator==(const ConeProfile&, const ConeProfile&) = default;
};

ConeProfile cone_profile(const DyerGroup& G, const NormalForm& g, unsigned k = 0,
                         const Limits& limits = {});

/// T(g) intersected with B(depth): the elements extending g geodesically.
std::vector<NormalForm> truncated_cone_type(const DyerGroup& G, const NormalForm& g,
                                            unsigned depth,
                                            const Limits& limits = {});

/// Deterministic acceptor of the geodesic language. States are cone
/// profiles; every state is accepting; a transition on letter s exists iff
/// the profile reports delta +1 at s.
struct GeodesicAutomaton {
  static constexpr std::int32_t kNoTransition = -1;

  std::size_t alphabet_size = 0;
  std::vector<ConeProfile> states;  // representative profiles
  std::size_t start = 0;
  std::vector<std::int32_t> transitions;  // states x alphabet
  unsigned profile_radius = 0;
  unsigned exploration_cap = 0;
  std::size_t elements_verified = 0;

  std::size_t state_count() const { return states.size(); }
  std::int32_t transition(std::size_t s, std::size_t r) const {
    return transitions[s * alphabet_size + r];
  }
};

struct AutomatonOptions {
  /// Profile ball radius; 0 means 2M.
  unsigned profile_radius = 0;
  /// Every element up to this depth is checked against the stored transition
  /// of its state; deeper states are expanded from one representative each.
  /// 0 means 2M.
  unsigned exploration_cap = 0;
  std::size_t max_states = 10'000;
  Limits limits;
};

/// Breadth-first exploration over profiles. Every explored element is a
/// representative of its state; a representative disagreeing with the stored
/// transition data raises ConsistencyError.
GeodesicAutomaton build_geodesic_automaton(const DyerGroup& G,
                                           AutomatonOptions options = {});

/// Partition-refinement minimization. The language is unchanged; the state
/// count equals the number of distinct residual languages.
GeodesicAutomaton minimize(const GeodesicAutomaton& a);

/// Number of minimized states when exploration is cut hard at the given
/// element depth (transitions leaving the explored profile set count as a
/// distinguished marker). Equal values at caps R and R+2 certify that the
/// cone-type count has converged.
std::size_t minimized_cone_types_at_cap(const DyerGroup& G, unsigned cap,
                                        std::size_t max_states = 10'000,
                                        const Limits& limits = {});

/// Number of accepted words per length, via the transition-count matrix.
std::vector<std::uint64_t> geodesic_growth(const GeodesicAutomaton& a,
                                           std::size_t terms);

/// Integer polynomial pair (numerator, denominator) with denominator
/// det(I - tA); its series expansion reproduces geodesic_growth exactly.
struct RationalSeries {
  std::vector<long long> numerator;    // coefficient of t^i at index i
  std::vector<long long> denominator;
};

RationalSeries growth_rational(const GeodesicAutomaton& a);
std::vector<std::uint64_t> expand_rational(const RationalSeries& r,
                                           std::size_t terms);

/// Sphere sizes |{g : l(g) = t}| for t = 0..terms.
std::vector<std::uint64_t> spherical_growth(const DyerGroup& G, unsigned terms,
                                            const Limits& limits = {});

std::string to_dot(const GeodesicAutomaton& a, const DyerGroup& G);
std::string transitions_table(const GeodesicAutomaton& a, const DyerGroup& G);

}  // namespace dyergeo

#endif
