#ifndef DYERGEO_FFTP_HPP
#define DYERGEO_FFTP_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyergeo/mediangle.hpp"

namespace dyergeo {

/// A strictly shorter path with the same endpoints, together with its exact
/// synchronous fellow-travel constant against the original.
struct ShorteningCertificate {
  BallPath original;
  BallPath replacement;
  unsigned fellow_constant = 0;
  std::vector<std::string> transform_trace;
};

/// Removes the spike v_i, v_{i+1}, v_i. Requires v_i == v_{i+2}.
BallPath remove_backtrack(const BallPath& p, std::size_t i);

/// Cuts the corner v_{i+1}. Requires v_i adjacent to v_{i+2}.
BallPath shorten_triangle(BallAnalysis& a, const BallPath& p, std::size_t i);

/// Replaces the half of the dihedral cycle c traversed by p starting at
/// position i with the complementary half. Requires that p follows exactly
/// half of c there.
BallPath apply_flip(const BallPath& p, const DihedralCycle& c, std::size_t i);

/// Max over synchronized time of the pointwise distance, with both paths
/// extended constantly past their ends. Requires a common start vertex.
unsigned fellow_travel_distance(BallAnalysis& a, const BallPath& p1,
                                const BallPath& p2);

/// Layered search for the shortest strictly shorter replacement whose
/// pointwise distance from p never exceeds k (default 2M). Ties break by
/// smallest measured constant, then shortlex. Returns nothing for geodesic
/// input. Exhausting the search at k >= 2M contradicts the falsification
/// guarantee and throws FalsificationError; narrower tubes may legitimately
/// fail and return nothing.
std::optional<ShorteningCertificate> shorten_within_tube(BallAnalysis& a,
                                                         const BallPath& p,
                                                         unsigned k = 0);

struct FftpOptions {
  unsigned max_len = 4;
  /// When set: (number of sampled words, seed); otherwise exhaustive.
  std::optional<std::pair<std::size_t, std::uint64_t>> sample;
  unsigned threads = 1;
  Limits limits;
};

struct FftpReport {
  unsigned max_len = 0;
  unsigned tube_constant = 0;  // 2M
  std::optional<std::pair<std::size_t, std::uint64_t>> sample;
  std::size_t words_checked = 0;
  std::size_t geodesic_count = 0;
  std::size_t nongeodesic_count = 0;
  unsigned max_constant = 0;
  Word max_example;  // a witness word attaining max_constant
  /// (path length, measured constant) -> number of certificates.
  std::map<std::pair<unsigned, unsigned>, std::size_t> histogram;

  bool pass() const { return max_constant <= tube_constant; }
};

/// Interprets words of length <= max_len as paths from the identity and
/// certifies every non-geodesic one. Any failure to certify aborts with
/// FalsificationError. Worker threads partition the word list; results merge
/// by word index, so reports are identical for any thread count.
FftpReport verify_fftp(const DyerGroup& G, const FftpOptions& options);

std::string to_text(const DyerGroup& G, const FftpReport& r);

/// Applies every applicable T1/T2/T3 transformation to every path from the
/// identity of length <= max_len and records the measured constants.
struct TransformationSurvey {
  std::size_t t1_count = 0, t2_count = 0, t3_count = 0;
  unsigned t1_max = 0, t2_max = 0, t3_max = 0;
};

TransformationSurvey survey_transformations(const DyerGroup& G, unsigned max_len,
                                            const Limits& limits = {});

}  // namespace dyergeo

#endif
