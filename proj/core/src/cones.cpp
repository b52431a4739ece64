#include "dyergeo/cones.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace dyergeo {

namespace {

// B(k) in breadth-first order, as a forest of one-letter extensions so a
// profile needs one memoized step per domain element.
struct ProfileDomain {
  unsigned radius = 0;
  std::vector<ElementTable::Id> ids;
  std::vector<std::uint32_t> parent;  // position in ids
  std::vector<std::uint16_t> rank;    // letter from parent
  std::vector<std::size_t> letter_pos;  // rank -> position of that letter

  ProfileDomain(const DyerGroup& G, ElementTable& table, unsigned k,
                const Limits& limits) {
    if (k > 120) throw Error("profile radius too large for int8 deltas");
    radius = k;
    std::unordered_map<ElementTable::Id, std::uint32_t> pos;
    ids.push_back(table.identity());
    parent.push_back(0);
    rank.push_back(0);
    pos.emplace(table.identity(), 0);
    for (std::uint32_t head = 0; head < ids.size(); ++head) {
      limits.check_deadline("profile domain");
      if (table.length(ids[head]) == k) continue;
      for (std::size_t r = 0; r < G.rank_count(); ++r) {
        ElementTable::Id h = table.step(ids[head], r);
        if (table.length(h) > k) continue;
        if (pos.emplace(h, static_cast<std::uint32_t>(ids.size())).second) {
          ids.push_back(h);
          parent.push_back(head);
          rank.push_back(static_cast<std::uint16_t>(r));
        }
      }
    }
    letter_pos.resize(G.rank_count());
    for (std::size_t r = 0; r < G.rank_count(); ++r)
      letter_pos[r] = pos.at(table.step(table.identity(), r));
  }

  ConeProfile profile_of(ElementTable& table, ElementTable::Id g) const {
    ConeProfile p;
    p.deltas.resize(ids.size());
    std::vector<ElementTable::Id> image(ids.size());
    const int base = static_cast<int>(table.length(g));
    image[0] = g;
    p.deltas[0] = 0;
    for (std::size_t i = 1; i < ids.size(); ++i) {
      image[i] = table.step(image[parent[i]], rank[i]);
      p.deltas[i] =
          static_cast<std::int8_t>(static_cast<int>(table.length(image[i])) - base);
    }
    return p;
  }
};

std::string profile_key(const ConeProfile& p) {
  return std::string(reinterpret_cast<const char*>(p.deltas.data()),
                     p.deltas.size());
}

}  // namespace

ConeProfile cone_profile(const DyerGroup& G, const NormalForm& g, unsigned k,
                         const Limits& limits) {
  if (k == 0) k = 2 * G.max_label();
  ElementTable table(G, limits);
  ProfileDomain domain(G, table, k, limits);
  return domain.profile_of(table, table.intern(g));
}

std::vector<NormalForm> truncated_cone_type(const DyerGroup& G, const NormalForm& g,
                                            unsigned depth, const Limits& limits) {
  ElementTable table(G, limits);
  ProfileDomain domain(G, table, depth, limits);
  ElementTable::Id gid = table.intern(g);
  std::vector<NormalForm> out;
  std::vector<ElementTable::Id> image(domain.ids.size());
  image[0] = gid;
  for (std::size_t i = 0; i < domain.ids.size(); ++i) {
    if (i > 0) image[i] = table.step(image[domain.parent[i]], domain.rank[i]);
    const NormalForm& h = table.element(domain.ids[i]);
    if (table.length(image[i]) == g.length() + h.length()) out.push_back(h);
  }
  std::sort(out.begin(), out.end(), [&](const NormalForm& x, const NormalForm& y) {
    return shortlex_less(G, x.word(), y.word());
  });
  return out;
}

namespace {

struct AutomatonBuilder {
  const DyerGroup& G;
  ElementTable table;
  ProfileDomain domain;
  AutomatonOptions opts;

  std::unordered_map<std::string, std::uint32_t> state_ids;
  std::vector<ConeProfile> profiles;
  std::vector<ElementTable::Id> first_rep;
  std::vector<char> expanded;
  std::vector<std::int32_t> transitions;
  std::unordered_map<ElementTable::Id, std::uint32_t> state_of_element;
  std::size_t elements_verified = 0;

  AutomatonBuilder(const DyerGroup& g, unsigned k, AutomatonOptions o)
      : G(g), table(g, o.limits), domain(g, table, k, o.limits), opts(o) {}

  std::uint32_t state_of(ElementTable::Id gid) {
    auto known = state_of_element.find(gid);
    if (known != state_of_element.end()) return known->second;
    ConeProfile p = domain.profile_of(table, gid);
    std::string key = profile_key(p);
    auto it = state_ids.find(key);
    std::uint32_t sid;
    if (it == state_ids.end()) {
      sid = static_cast<std::uint32_t>(profiles.size());
      if (profiles.size() >= opts.max_states)
        throw ResourceLimitError("automaton state cap " +
                                 std::to_string(opts.max_states) + " exceeded");
      state_ids.emplace(std::move(key), sid);
      profiles.push_back(std::move(p));
      first_rep.push_back(gid);
      expanded.push_back(0);
      transitions.resize(profiles.size() * G.rank_count(),
                         GeodesicAutomaton::kNoTransition);
    } else {
      sid = it->second;
    }
    state_of_element.emplace(gid, sid);
    return sid;
  }

  // Computes all outgoing transitions of gid's state and checks them against
  // previously stored data; a mismatch means two representatives of one
  // profile disagree.
  void expand_from(ElementTable::Id gid, std::vector<ElementTable::Id>* discovered) {
    opts.limits.check_deadline("automaton construction");
    std::uint32_t sid = state_of(gid);
    ++elements_verified;
    for (std::size_t r = 0; r < G.rank_count(); ++r) {
      bool exists = profiles[sid].deltas[domain.letter_pos[r]] == +1;
      if (!exists) continue;
      ElementTable::Id hid = table.step(gid, r);
      std::uint32_t tid = state_of(hid);
      std::int32_t& slot = transitions[sid * G.rank_count() + r];
      if (slot == GeodesicAutomaton::kNoTransition) {
        slot = static_cast<std::int32_t>(tid);
      } else if (slot != static_cast<std::int32_t>(tid)) {
        throw ConsistencyError(
            "representatives of one cone profile disagree on letter " +
            format_word(G, Word{G.alphabet().letter(r)}) + ": elements " +
            format_word(G, table.element(first_rep[sid])) + " and " +
            format_word(G, table.element(gid)));
      }
      if (discovered) discovered->push_back(hid);
    }
    expanded[sid] = 1;
  }
};

GeodesicAutomaton finish(AutomatonBuilder& b, unsigned k, unsigned cap) {
  GeodesicAutomaton a;
  a.alphabet_size = b.G.rank_count();
  a.states = std::move(b.profiles);
  a.start = 0;
  a.transitions = std::move(b.transitions);
  a.profile_radius = k;
  a.exploration_cap = cap;
  a.elements_verified = b.elements_verified;
  return a;
}

}  // namespace

GeodesicAutomaton build_geodesic_automaton(const DyerGroup& G,
                                           AutomatonOptions options) {
  const unsigned k = options.profile_radius ? options.profile_radius
                                            : 2 * G.max_label();
  const unsigned cap = options.exploration_cap ? options.exploration_cap
                                               : 2 * G.max_label();
  AutomatonBuilder b(G, k, options);

  // Phase 1: every element with length <= cap is explored and verified.
  std::unordered_set<ElementTable::Id> visited{b.table.identity()};
  std::deque<ElementTable::Id> queue{b.table.identity()};
  while (!queue.empty()) {
    ElementTable::Id gid = queue.front();
    queue.pop_front();
    std::vector<ElementTable::Id> discovered;
    b.expand_from(gid, &discovered);
    for (ElementTable::Id hid : discovered) {
      if (b.table.length(hid) <= cap && visited.insert(hid).second)
        queue.push_back(hid);
    }
  }

  // Phase 2: close the machine; states first seen past the cap expand from
  // their first representative only.
  for (;;) {
    bool progress = false;
    for (std::uint32_t sid = 0; sid < b.expanded.size(); ++sid) {
      if (!b.expanded[sid]) {
        b.expand_from(b.first_rep[sid], nullptr);
        progress = true;
      }
    }
    if (!progress) break;
  }
  return finish(b, k, cap);
}

namespace {

// Moore partition refinement. Transition values: >= 0 target state, -1 no
// transition, -2 leaves-the-explored-set marker (kept distinct).
std::size_t refine_partition(std::size_t n, std::size_t alphabet,
                             const std::vector<std::int32_t>& trans,
                             std::vector<std::uint32_t>& block_of) {
  block_of.assign(n, 0);
  std::size_t blocks = n == 0 ? 0 : 1;
  for (;;) {
    std::unordered_map<std::string, std::uint32_t> next_ids;
    std::vector<std::uint32_t> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::string sig;
      sig.reserve((alphabet + 1) * 4);
      auto push = [&sig](std::int32_t v) {
        sig.append(reinterpret_cast<const char*>(&v), sizeof v);
      };
      push(static_cast<std::int32_t>(block_of[s]));
      for (std::size_t r = 0; r < alphabet; ++r) {
        std::int32_t t = trans[s * alphabet + r];
        push(t >= 0 ? static_cast<std::int32_t>(block_of[t]) : t - 1000000);
      }
      auto it = next_ids.emplace(std::move(sig),
                                 static_cast<std::uint32_t>(next_ids.size()));
      next[s] = it.first->second;
    }
    if (next_ids.size() == blocks) {
      block_of = next;
      return blocks;
    }
    blocks = next_ids.size();
    block_of = next;
  }
}

}  // namespace

GeodesicAutomaton minimize(const GeodesicAutomaton& a) {
  std::vector<std::uint32_t> block_of;
  std::size_t blocks =
      refine_partition(a.state_count(), a.alphabet_size, a.transitions, block_of);

  GeodesicAutomaton m;
  m.alphabet_size = a.alphabet_size;
  m.profile_radius = a.profile_radius;
  m.exploration_cap = a.exploration_cap;
  m.elements_verified = a.elements_verified;
  m.states.resize(blocks);
  m.transitions.assign(blocks * a.alphabet_size, GeodesicAutomaton::kNoTransition);
  std::vector<char> seen(blocks, 0);
  for (std::size_t s = 0; s < a.state_count(); ++s) {
    std::uint32_t blk = block_of[s];
    if (seen[blk]) continue;
    seen[blk] = 1;
    m.states[blk] = a.states[s];
    for (std::size_t r = 0; r < a.alphabet_size; ++r) {
      std::int32_t t = a.transition(s, r);
      if (t >= 0) m.transitions[blk * a.alphabet_size + r] = block_of[t];
    }
  }
  m.start = block_of[a.start];
  return m;
}

std::size_t minimized_cone_types_at_cap(const DyerGroup& G, unsigned cap,
                                        std::size_t max_states,
                                        const Limits& limits) {
  const unsigned k = 2 * G.max_label();
  AutomatonOptions opts;
  opts.max_states = max_states;
  opts.limits = limits;
  AutomatonBuilder b(G, k, opts);

  std::unordered_set<ElementTable::Id> visited{b.table.identity()};
  std::deque<ElementTable::Id> queue{b.table.identity()};
  std::vector<std::pair<std::uint32_t, ElementTable::Id>> capped_states;
  while (!queue.empty()) {
    ElementTable::Id gid = queue.front();
    queue.pop_front();
    std::uint32_t sid = b.state_of(gid);
    if (!b.expanded[sid]) {
      b.expanded[sid] = 1;
      capped_states.emplace_back(sid, gid);
    }
    for (std::size_t r = 0; r < G.rank_count(); ++r) {
      if (b.profiles[sid].deltas[b.domain.letter_pos[r]] != +1) continue;
      ElementTable::Id hid = b.table.step(gid, r);
      if (b.table.length(hid) <= cap && visited.insert(hid).second)
        queue.push_back(hid);
    }
  }

  // Transitions from the first in-cap representative; targets whose profiles
  // were not seen in the cap become the distinguished marker -2.
  const std::size_t n = capped_states.size();
  std::vector<std::int32_t> trans(n * G.rank_count(),
                                  GeodesicAutomaton::kNoTransition);
  std::unordered_map<std::uint32_t, std::uint32_t> dense;  // builder sid -> 0..n-1
  for (std::size_t i = 0; i < n; ++i) dense.emplace(capped_states[i].first, i);
  for (std::size_t i = 0; i < n; ++i) {
    auto [sid, gid] = capped_states[i];
    for (std::size_t r = 0; r < G.rank_count(); ++r) {
      if (b.profiles[sid].deltas[b.domain.letter_pos[r]] != +1) continue;
      ElementTable::Id hid = b.table.step(gid, r);
      ConeProfile q = b.domain.profile_of(b.table, hid);
      auto it = b.state_ids.find(profile_key(q));
      std::int32_t target = -2;
      if (it != b.state_ids.end()) {
        auto dit = dense.find(it->second);
        if (dit != dense.end()) target = static_cast<std::int32_t>(dit->second);
      }
      trans[i * G.rank_count() + r] = target;
    }
  }
  std::vector<std::uint32_t> block_of;
  return refine_partition(n, G.rank_count(), trans, block_of);
}

std::vector<std::uint64_t> geodesic_growth(const GeodesicAutomaton& a,
                                           std::size_t terms) {
  std::vector<std::uint64_t> out;
  std::vector<std::uint64_t> vec(a.state_count(), 0);
  vec[a.start] = 1;
  for (std::size_t t = 0; t <= terms; ++t) {
    unsigned __int128 total = 0;
    for (std::uint64_t v : vec) total += v;
    if (total > UINT64_MAX) throw Error("geodesic growth overflows 64 bits");
    out.push_back(static_cast<std::uint64_t>(total));
    if (t == terms) break;
    std::vector<std::uint64_t> next(a.state_count(), 0);
    for (std::size_t s = 0; s < a.state_count(); ++s) {
      if (vec[s] == 0) continue;
      for (std::size_t r = 0; r < a.alphabet_size; ++r) {
        std::int32_t tgt = a.transition(s, r);
        if (tgt >= 0) {
          unsigned __int128 sum = next[tgt];
          sum += vec[s];
          if (sum > UINT64_MAX) throw Error("geodesic growth overflows 64 bits");
          next[tgt] = static_cast<std::uint64_t>(sum);
        }
      }
    }
    vec = std::move(next);
  }
  return out;
}

namespace {

long long checked_ll(__int128 v, const char* what) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw Error(std::string(what) + " overflows 64 bits");
  return static_cast<long long>(v);
}

}  // namespace

RationalSeries growth_rational(const GeodesicAutomaton& a) {
  const std::size_t n = a.state_count();
  // Transition-count matrix over the (reachable by construction) states.
  std::vector<long long> A(n * n, 0);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t r = 0; r < a.alphabet_size; ++r) {
      std::int32_t t = a.transition(s, r);
      if (t >= 0) A[s * n + t] += 1;
    }

  // Faddeev-LeVerrier: char(A) = x^n + c[1] x^(n-1) + ... + c[n], all
  // integer, and det(I - tA) = 1 + c[1] t + ... + c[n] t^n.
  std::vector<long long> M(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) M[i * n + i] = 1;
  std::vector<long long> c(n + 1, 0);
  c[0] = 1;
  for (std::size_t kk = 1; kk <= n; ++kk) {
    std::vector<long long> AM(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (A[i * n + l] == 0) continue;
        __int128 av = A[i * n + l];
        for (std::size_t j = 0; j < n; ++j) {
          __int128 sum = AM[i * n + j];
          sum += av * M[l * n + j];
          AM[i * n + j] = checked_ll(sum, "characteristic polynomial");
        }
      }
    __int128 tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += AM[i * n + i];
    c[kk] = checked_ll(-tr / static_cast<long long>(kk), "characteristic polynomial");
    M = AM;
    for (std::size_t i = 0; i < n; ++i)
      M[i * n + i] = checked_ll(static_cast<__int128>(M[i * n + i]) + c[kk],
                                "characteristic polynomial");
  }

  RationalSeries out;
  out.denominator = c;
  while (out.denominator.size() > 1 && out.denominator.back() == 0)
    out.denominator.pop_back();

  std::vector<std::uint64_t> series = geodesic_growth(a, n);
  for (std::uint64_t v : series)
    if (v > INT64_MAX) throw Error("series term overflows 64-bit numerator");
  out.numerator.assign(n + 1, 0);
  for (std::size_t kk = 0; kk <= n; ++kk) {
    __int128 sum = 0;
    for (std::size_t j = 0; j <= kk && j < c.size(); ++j)
      sum += static_cast<__int128>(c[j]) * static_cast<long long>(series[kk - j]);
    out.numerator[kk] = checked_ll(sum, "numerator");
  }
  while (out.numerator.size() > 1 && out.numerator.back() == 0)
    out.numerator.pop_back();

  if (expand_rational(out, n) != series)
    throw Error("rational form does not reproduce the series");
  return out;
}

std::vector<std::uint64_t> expand_rational(const RationalSeries& r,
                                           std::size_t terms) {
  if (r.denominator.empty() || r.denominator[0] != 1)
    throw Error("rational series denominator must have constant term 1");
  std::vector<std::uint64_t> out;
  std::vector<long long> coeff;
  for (std::size_t k = 0; k <= terms; ++k) {
    __int128 value = k < r.numerator.size() ? r.numerator[k] : 0;
    for (std::size_t j = 1; j < r.denominator.size() && j <= k; ++j)
      value -= static_cast<__int128>(r.denominator[j]) * coeff[k - j];
    long long v = checked_ll(value, "series expansion");
    if (v < 0) throw Error("series expansion produced a negative coefficient");
    coeff.push_back(v);
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

std::vector<std::uint64_t> spherical_growth(const DyerGroup& G, unsigned terms,
                                            const Limits& limits) {
  CayleyBall ball = build_ball(G, terms, limits);
  std::vector<std::uint64_t> out;
  for (std::size_t k = 0; k <= terms; ++k) out.push_back(ball.sphere_sizes()[k]);
  return out;
}

std::string to_dot(const GeodesicAutomaton& a, const DyerGroup& G) {
  std::string out = "digraph geodesic_automaton {\n  rankdir=LR;\n";
  out += "  node [shape=doublecircle];\n";  // every state accepts
  out += "  entry [shape=point];\n  entry -> s" + std::to_string(a.start) + ";\n";
  for (std::size_t s = 0; s < a.state_count(); ++s)
    for (std::size_t r = 0; r < a.alphabet_size; ++r) {
      std::int32_t t = a.transition(s, r);
      if (t < 0) continue;
      out += "  s" + std::to_string(s) + " -> s" + std::to_string(t) +
             " [label=\"" + format_word(G, Word{G.alphabet().letter(r)}) +
             "\"];\n";
    }
  out += "}\n";
  return out;
}

std::string transitions_table(const GeodesicAutomaton& a, const DyerGroup& G) {
  std::string out = "state letter target\n";
  for (std::size_t s = 0; s < a.state_count(); ++s)
    for (std::size_t r = 0; r < a.alphabet_size; ++r) {
      std::int32_t t = a.transition(s, r);
      if (t < 0) continue;
      out += std::to_string(s) + " " +
             format_word(G, Word{G.alphabet().letter(r)}) + " " +
             std::to_string(t) + "\n";
    }
  return out;
}

}  // namespace dyergeo
