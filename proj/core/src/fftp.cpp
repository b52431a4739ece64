#include "dyergeo/fftp.hpp"

#include <algorithm>
#include <random>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace dyergeo {

BallPath remove_backtrack(const BallPath& p, std::size_t i) {
  if (i + 2 > p.length() || p.vertices[i] != p.vertices[i + 2])
    throw Error("remove_backtrack: v_i != v_{i+2}");
  BallPath out;
  out.vertices.assign(p.vertices.begin(), p.vertices.begin() + i + 1);
  out.vertices.insert(out.vertices.end(), p.vertices.begin() + i + 3,
                      p.vertices.end());
  return out;
}

BallPath shorten_triangle(BallAnalysis& a, const BallPath& p, std::size_t i) {
  if (i + 2 > p.length())
    throw Error("shorten_triangle: index out of range");
  std::uint32_t u = p.vertices[i], w = p.vertices[i + 2];
  if (u == w || a.distance(u, w) != 1)
    throw Error("shorten_triangle: v_i not adjacent to v_{i+2}");
  BallPath out;
  out.vertices.assign(p.vertices.begin(), p.vertices.begin() + i + 1);
  out.vertices.insert(out.vertices.end(), p.vertices.begin() + i + 2,
                      p.vertices.end());
  return out;
}

namespace {

// Position of v in the cycle, or npos.
std::size_t cycle_position(const DihedralCycle& c, std::uint32_t v) {
  for (std::size_t q = 0; q < c.vertices.size(); ++q)
    if (c.vertices[q] == v) return q;
  return static_cast<std::size_t>(-1);
}

}  // namespace

BallPath apply_flip(const BallPath& p, const DihedralCycle& c, std::size_t i) {
  const std::size_t L = c.vertices.size();
  const std::size_t m = L / 2;
  if (i + m > p.length())
    throw Error("apply_flip: path segment shorter than half the cycle");
  std::size_t q = cycle_position(c, p.vertices[i]);
  if (q == static_cast<std::size_t>(-1))
    throw Error("apply_flip: segment start is not on the cycle");
  int direction = 0;
  for (int dir : {+1, -1}) {
    bool match = true;
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t pos = (q + L + dir * static_cast<long>(j)) % L;
      if (c.vertices[pos] != p.vertices[i + j]) {
        match = false;
        break;
      }
    }
    if (match) {
      direction = dir;
      break;
    }
  }
  if (direction == 0)
    throw Error("apply_flip: path does not follow half of the cycle");

  BallPath out;
  out.vertices.assign(p.vertices.begin(), p.vertices.begin() + i + 1);
  for (std::size_t j = 1; j <= m; ++j) {
    std::size_t pos = (q + L - direction * static_cast<long>(j)) % L;
    out.vertices.push_back(c.vertices[pos]);
  }
  out.vertices.insert(out.vertices.end(), p.vertices.begin() + i + m + 1,
                      p.vertices.end());
  return out;
}

unsigned fellow_travel_distance(BallAnalysis& a, const BallPath& p1,
                                const BallPath& p2) {
  if (p1.vertices.empty() || p2.vertices.empty())
    throw Error("fellow_travel_distance: empty path");
  if (p1.vertices.front() != p2.vertices.front())
    throw Error("fellow_travel_distance: paths start at different vertices");
  unsigned best = 0;
  std::size_t horizon = std::max(p1.length(), p2.length());
  for (std::size_t t = 0; t <= horizon; ++t)
    best = std::max(best, a.distance(p1.at(t), p2.at(t)));
  return best;
}

namespace {

// Forward-layer datum of the tube search: the minimal achievable running
// maximum of pointwise distances for paths reaching this element.
using Layer = std::unordered_map<std::uint32_t, unsigned>;

}  // namespace

std::optional<ShorteningCertificate> shorten_within_tube(BallAnalysis& a,
                                                         const BallPath& p,
                                                         unsigned k) {
  const DyerGroup& G = a.group();
  const CayleyBall& ball = a.ball();
  if (k == 0) k = 2 * G.max_label();
  const std::size_t n = p.length();
  if (n == 0) return std::nullopt;
  const std::uint32_t start = p.vertices.front(), goal = p.vertices.back();
  const unsigned D = a.distance(start, goal);
  if (D == n) return std::nullopt;

  for (std::uint32_t v : p.vertices)
    if (ball.depth(v) + k > ball.radius())
      throw Error("shorten_within_tube: ball radius below path depth + k");

  for (std::size_t m = D; m < n; ++m) {
    // Admissible layer sets around the synchronized original position.
    std::vector<const std::vector<std::pair<std::uint32_t, std::uint8_t>>*> tube(
        m + 1);
    std::vector<std::unordered_map<std::uint32_t, unsigned>> dist_to_orig(m + 1);
    for (std::size_t t = 0; t <= m; ++t) {
      tube[t] = &a.around(p.at(t), k);
      for (auto [v, d] : *tube[t]) dist_to_orig[t].emplace(v, d);
    }

    std::vector<Layer> layers(m + 1);
    layers[0].emplace(start, 0);
    for (std::size_t t = 0; t < m; ++t) {
      for (auto [v, running] : layers[t]) {
        for (std::size_t r = 0; r < G.rank_count(); ++r) {
          std::uint32_t w = ball.neighbor(v, r);
          if (w == CayleyBall::kNone) continue;
          auto it = dist_to_orig[t + 1].find(w);
          if (it == dist_to_orig[t + 1].end()) continue;
          unsigned value = std::max(running, it->second);
          auto [slot, fresh] = layers[t + 1].emplace(w, value);
          if (!fresh && value < slot->second) slot->second = value;
        }
      }
    }
    auto found = layers[m].find(goal);
    if (found == layers[m].end()) continue;

    // The constant of any candidate includes the fixed tail distances.
    unsigned tail = 0;
    for (std::size_t t = m; t <= n; ++t)
      tail = std::max(tail, a.distance(goal, p.at(t)));
    const unsigned constant = std::max(found->second, tail);

    // Backward reachability under the bound, then greedy shortlex front.
    std::vector<std::unordered_set<std::uint32_t>> ok(m + 1);
    ok[m].insert(goal);
    for (std::size_t t = m; t-- > 0;) {
      for (auto [v, d] : *tube[t]) {
        if (d > constant) continue;
        for (std::size_t r = 0; r < G.rank_count(); ++r) {
          std::uint32_t w = ball.neighbor(v, r);
          if (w != CayleyBall::kNone && ok[t + 1].count(w)) {
            ok[t].insert(v);
            break;
          }
        }
      }
    }
    if (!ok[0].count(start))
      throw Error("tube search internal error: start lost in back sweep");

    BallPath repl;
    repl.vertices.push_back(start);
    for (std::size_t t = 0; t < m; ++t) {
      std::uint32_t v = repl.vertices.back();
      bool advanced = false;
      for (std::size_t r = 0; r < G.rank_count(); ++r) {
        std::uint32_t w = ball.neighbor(v, r);
        if (w == CayleyBall::kNone) continue;
        auto it = dist_to_orig[t + 1].find(w);
        if (it == dist_to_orig[t + 1].end() || it->second > constant) continue;
        if (t + 1 == m ? (w == goal) : ok[t + 1].count(w) > 0) {
          repl.vertices.push_back(w);
          advanced = true;
          break;
        }
      }
      if (!advanced) throw Error("tube search internal error: dead end");
    }

    ShorteningCertificate cert;
    cert.original = p;
    cert.replacement = std::move(repl);
    cert.fellow_constant = fellow_travel_distance(a, p, cert.replacement);
    cert.transform_trace = {"tube"};
    if (cert.fellow_constant != constant)
      throw Error("tube search internal error: constant mismatch");
    return cert;
  }

  if (k >= 2 * G.max_label())
    throw FalsificationError(
        "non-geodesic path admits no shorter replacement within tube " +
        std::to_string(k) + ": " + format_word(G, word_of_path(G, ball, p)));
  return std::nullopt;
}

namespace {

struct WordOutcome {
  bool geodesic = false;
  unsigned length = 0;
  unsigned constant = 0;
};

void run_fftp_chunk(const DyerGroup& G, const CayleyBall& ball,
                    const std::vector<Word>& words, std::size_t lo, std::size_t hi,
                    const Limits& limits, std::vector<WordOutcome>& out) {
  BallAnalysis analysis(G, ball);
  for (std::size_t i = lo; i < hi; ++i) {
    limits.check_deadline("fftp verification");
    BallPath path = path_from_word(G, ball, words[i]);
    WordOutcome& o = out[i];
    o.length = static_cast<unsigned>(path.length());
    if (ball.depth(path.vertices.back()) == path.length()) {
      o.geodesic = true;
      continue;
    }
    auto cert = shorten_within_tube(analysis, path);
    if (!cert)
      throw FalsificationError("missing certificate for non-geodesic path");
    o.constant = cert->fellow_constant;
  }
}

}  // namespace

FftpReport verify_fftp(const DyerGroup& G, const FftpOptions& options) {
  FftpReport report;
  report.max_len = options.max_len;
  report.tube_constant = 2 * G.max_label();
  report.sample = options.sample;

  const unsigned radius = options.max_len + report.tube_constant;
  CayleyBall ball = build_ball(G, radius, options.limits);

  // Deterministic word list: exhaustive in rank order, or seeded sampling.
  std::vector<Word> words;
  const std::size_t A = G.rank_count();
  if (!options.sample) {
    std::vector<std::size_t> ranks;
    auto gen = [&](auto&& self) -> void {
      if (ranks.size() >= 1) {
        Word w;
        for (std::size_t r : ranks) w.push_back(G.alphabet().letter(r));
        words.push_back(std::move(w));
      }
      if (ranks.size() == options.max_len) return;
      for (std::size_t r = 0; r < A; ++r) {
        ranks.push_back(r);
        self(self);
        ranks.pop_back();
      }
    };
    gen(gen);
  } else {
    std::mt19937_64 rng(options.sample->second);
    std::uniform_int_distribution<unsigned> len_dist(1, options.max_len);
    std::uniform_int_distribution<std::size_t> rank_dist(0, A - 1);
    for (std::size_t i = 0; i < options.sample->first; ++i) {
      Word w;
      unsigned len = len_dist(rng);
      for (unsigned j = 0; j < len; ++j)
        w.push_back(G.alphabet().letter(rank_dist(rng)));
      words.push_back(std::move(w));
    }
  }

  std::vector<WordOutcome> outcomes(words.size());
  unsigned threads = std::max(1u, options.threads);
  if (threads == 1 || words.size() < 2 * threads) {
    run_fftp_chunk(G, ball, words, 0, words.size(), options.limits, outcomes);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    std::size_t chunk = (words.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t lo = std::min<std::size_t>(t * chunk, words.size());
      std::size_t hi = std::min<std::size_t>(lo + chunk, words.size());
      pool.emplace_back([&, t, lo, hi] {
        try {
          run_fftp_chunk(G, ball, words, lo, hi, options.limits, outcomes);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  report.words_checked = words.size();
  for (std::size_t i = 0; i < words.size(); ++i) {
    const WordOutcome& o = outcomes[i];
    if (o.geodesic) {
      ++report.geodesic_count;
      continue;
    }
    ++report.nongeodesic_count;
    ++report.histogram[{o.length, o.constant}];
    if (o.constant > report.max_constant) {
      report.max_constant = o.constant;
      report.max_example = words[i];
    }
  }
  return report;
}

std::string to_text(const DyerGroup& G, const FftpReport& r) {
  std::string out;
  out += std::string(r.pass() ? "PASS" : "FAIL") +
         ", max constant " + std::to_string(r.max_constant) + " <= 2M=" +
         std::to_string(r.tube_constant) + "\n";
  out += "words checked: " + std::to_string(r.words_checked) + " (geodesic " +
         std::to_string(r.geodesic_count) + ", non-geodesic " +
         std::to_string(r.nongeodesic_count) + ")\n";
  if (!r.max_example.empty())
    out += "max attained by: " + format_word(G, r.max_example) + "\n";
  out += "constants by path length:\n";
  out += "  length constant count\n";
  for (const auto& [key, count] : r.histogram)
    out += "  " + std::to_string(key.first) + " " + std::to_string(key.second) +
           " " + std::to_string(count) + "\n";
  return out;
}

TransformationSurvey survey_transformations(const DyerGroup& G, unsigned max_len,
                                            const Limits& limits) {
  TransformationSurvey s;
  const unsigned radius = max_len + G.max_label();
  CayleyBall ball = build_ball(G, radius, limits);
  BallAnalysis analysis(G, ball);

  // Cycles indexed by the directed edges they traverse.
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> cycles_at;
  const auto& cycles = analysis.cycles();
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& vs = cycles[c].vertices;
    for (std::size_t q = 0; q < vs.size(); ++q) {
      std::uint64_t key =
          (std::uint64_t(vs[q]) << 32) | vs[(q + 1) % vs.size()];
      cycles_at[key].push_back(c);
      std::uint64_t rkey =
          (std::uint64_t(vs[(q + 1) % vs.size()]) << 32) | vs[q];
      cycles_at[rkey].push_back(c);
    }
  }

  BallPath path;
  path.vertices.push_back(0);
  auto visit = [&](auto&& self) -> void {
    limits.check_deadline("transformation survey");
    const std::size_t n = path.length();
    for (std::size_t i = 0; i + 2 <= n; ++i) {
      if (path.vertices[i] == path.vertices[i + 2]) {
        BallPath shorter = remove_backtrack(path, i);
        unsigned d = fellow_travel_distance(analysis, path, shorter);
        ++s.t1_count;
        s.t1_max = std::max(s.t1_max, d);
      } else if (analysis.distance(path.vertices[i], path.vertices[i + 2]) == 1) {
        BallPath shorter = shorten_triangle(analysis, path, i);
        unsigned d = fellow_travel_distance(analysis, path, shorter);
        ++s.t2_count;
        s.t2_max = std::max(s.t2_max, d);
      }
    }
    for (std::size_t i = 0; i + 1 <= n; ++i) {
      std::uint64_t key =
          (std::uint64_t(path.vertices[i]) << 32) | path.vertices[i + 1];
      auto it = cycles_at.find(key);
      if (it == cycles_at.end()) continue;
      for (std::size_t c : it->second) {
        const std::size_t m = cycles[c].vertices.size() / 2;
        if (i + m > n) continue;
        BallPath flipped;
        try {
          flipped = apply_flip(path, cycles[c], i);
        } catch (const Error&) {
          continue;  // segment does not follow half of this cycle
        }
        unsigned d = fellow_travel_distance(analysis, path, flipped);
        ++s.t3_count;
        s.t3_max = std::max(s.t3_max, d);
      }
    }
    if (n == max_len) return;
    for (std::size_t r = 0; r < G.rank_count(); ++r) {
      std::uint32_t next = ball.neighbor(path.vertices.back(), r);
      if (next == CayleyBall::kNone) continue;
      path.vertices.push_back(next);
      self(self);
      path.vertices.pop_back();
    }
  };
  visit(visit);
  return s;
}

}  // namespace dyergeo
