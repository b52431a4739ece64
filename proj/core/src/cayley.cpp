#include "dyergeo/cayley.hpp"

#include <algorithm>
#include <deque>

namespace dyergeo {

void Limits::check_elements(std::size_t count, const char* what) const {
  if (count > max_elements)
    throw ResourceLimitError(std::string(what) + ": element cap " +
                             std::to_string(max_elements) + " exceeded");
}

void Limits::check_deadline(const char* what) const {
  if (deadline && std::chrono::steady_clock::now() > *deadline)
    throw ResourceLimitError(std::string(what) + ": time limit exceeded");
}

Limits Limits::with_seconds(double seconds, std::size_t max_elements) {
  Limits l;
  l.max_elements = max_elements;
  l.deadline = std::chrono::steady_clock::now() +
               std::chrono::milliseconds(static_cast<long long>(seconds * 1000));
  return l;
}

namespace {

std::string rank_word_of(const DyerGroup& G, const Word& w) {
  std::string out;
  out.reserve(w.size());
  for (const Letter& l : w) out.push_back(static_cast<char>(G.alphabet().rank(l)));
  return out;
}

Word word_of_ranks(const DyerGroup& G, const std::string& rw) {
  Word out;
  out.reserve(rw.size());
  for (char c : rw) out.push_back(G.alphabet().letter(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

ElementTable::ElementTable(const DyerGroup& G, Limits limits)
    : group_(&G), limits_(limits) {
  intern_canonical(std::string());
}

ElementTable::Id ElementTable::intern_canonical(std::string rank_word) {
  auto it = index_.find(rank_word);
  if (it != index_.end()) return it->second;
  limits_.check_elements(elements_.size() + 1, "element table");
  Id id = static_cast<Id>(elements_.size());
  elements_.push_back(NormalForm(word_of_ranks(*group_, rank_word)));
  rank_words_.push_back(rank_word);
  index_.emplace(std::move(rank_word), id);
  steps_.emplace_back();
  inverses_.push_back(kUnset);
  return id;
}

ElementTable::Id ElementTable::identity() { return 0; }

ElementTable::Id ElementTable::intern(const Word& w) {
  return intern_canonical(rank_word_of(*group_, normal_form(*group_, w).word()));
}

ElementTable::Id ElementTable::intern(const NormalForm& n) {
  return intern_canonical(rank_word_of(*group_, n.word()));
}

ElementTable::Id ElementTable::step(Id g, std::size_t rank) {
  auto& memo = steps_[g];
  if (memo.empty()) memo.assign(group_->rank_count(), kUnset);
  if (memo[rank] != kUnset) return memo[rank];
  Word w = elements_[g].word();
  w.push_back(group_->alphabet().letter(rank));
  Id h = intern_canonical(rank_word_of(*group_, normal_form(*group_, w).word()));
  steps_[g][rank] = h;  // steps_ may have grown; re-index
  return h;
}

ElementTable::Id ElementTable::mul(Id g, const NormalForm& h) {
  Id cur = g;
  for (const Letter& l : h.word()) cur = step(cur, group_->alphabet().rank(l));
  return cur;
}

ElementTable::Id ElementTable::inverse(Id g) {
  if (inverses_[g] != kUnset) return inverses_[g];
  Id h = intern(invert(*group_, elements_[g]));
  inverses_[g] = h;
  inverses_[h] = g;
  return h;
}

std::uint32_t ElementTable::length(Id g) const {
  return static_cast<std::uint32_t>(elements_[g].length());
}

unsigned ElementTable::distance(Id a, Id b) {
  if (a == b) return 0;
  std::uint64_t key = a < b ? (std::uint64_t(a) << 32) | b : (std::uint64_t(b) << 32) | a;
  auto it = distances_.find(key);
  if (it != distances_.end()) return it->second;
  unsigned d = length(mul(inverse(a), elements_[b]));
  distances_.emplace(key, d);
  return d;
}

CayleyBall build_ball(const DyerGroup& G, unsigned radius, const Limits& limits) {
  ElementTable table(G, limits);
  CayleyBall ball;
  ball.radius_ = radius;
  ball.alphabet_size_ = G.rank_count();

  // BFS discovers elements in nondecreasing depth, so table ids below the
  // ball size are exactly the ball elements in BFS order.
  std::vector<ElementTable::Id> order{table.identity()};
  try {
    for (std::size_t head = 0; head < order.size(); ++head) {
      limits.check_deadline("ball construction");
      ElementTable::Id g = order[head];
      if (table.length(g) == radius) continue;
      for (std::size_t r = 0; r < G.rank_count(); ++r) {
        std::size_t before = table.size();
        ElementTable::Id h = table.step(g, r);
        if (h >= before) {
          limits.check_elements(order.size() + 1, "ball construction");
          order.push_back(h);
        }
      }
    }
  } catch (const ResourceLimitError& e) {
    throw ResourceLimitError(std::string(e.what()) + " (radius " +
                             std::to_string(radius) + ")");
  }

  ball.elements_.reserve(order.size());
  ball.depths_.reserve(order.size());
  ball.sphere_sizes_.assign(radius + 1, 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const NormalForm& nf = table.element(order[i]);
    ball.elements_.push_back(nf);
    ball.depths_.push_back(static_cast<std::uint32_t>(nf.length()));
    ball.sphere_sizes_[nf.length()] += 1;
    ball.index_.emplace(rank_word_of(G, nf.word()), static_cast<std::uint32_t>(i));
  }
  ball.adjacency_.assign(order.size() * G.rank_count(), CayleyBall::kNone);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t r = 0; r < G.rank_count(); ++r) {
      ElementTable::Id h = table.step(order[i], r);
      if (table.length(h) <= radius)
        ball.adjacency_[i * G.rank_count() + r] = h;  // table id == ball index
    }
  }
  return ball;
}

std::optional<std::size_t> CayleyBall::index_of(const DyerGroup& G,
                                                const NormalForm& n) const {
  auto it = index_.find(rank_word_of(G, n.word()));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool CayleyBall::adjacent(std::size_t i, std::size_t j) const {
  for (std::size_t r = 0; r < alphabet_size_; ++r)
    if (adjacency_[i * alphabet_size_ + r] == j) return true;
  return false;
}

std::size_t CayleyBall::letter_between(std::size_t i, std::size_t j) const {
  for (std::size_t r = 0; r < alphabet_size_; ++r)
    if (adjacency_[i * alphabet_size_ + r] == j) return r;
  throw Error("elements are not adjacent in the ball");
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> CayleyBall::edges() const {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t r = 0; r < alphabet_size_; ++r) {
      std::uint32_t j = adjacency_[i * alphabet_size_ + r];
      if (j != kNone && i < j) out.emplace_back(static_cast<std::uint32_t>(i), j);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

unsigned distance(const DyerGroup& G, const NormalForm& a, const NormalForm& b) {
  return static_cast<unsigned>(multiply(G, invert(G, a), b).length());
}

std::vector<NormalForm> interval(const DyerGroup& G, const NormalForm& a,
                                 const NormalForm& b) {
  ElementTable table(G);
  ElementTable::Id ia = table.intern(a), ib = table.intern(b);
  unsigned D = table.distance(ia, ib);
  std::vector<ElementTable::Id> layer{ia};
  std::vector<ElementTable::Id> members{ia};
  for (unsigned t = 0; t < D; ++t) {
    std::vector<ElementTable::Id> next;
    for (ElementTable::Id z : layer) {
      for (std::size_t r = 0; r < G.rank_count(); ++r) {
        ElementTable::Id h = table.step(z, r);
        if (table.distance(ia, h) == t + 1 && table.distance(h, ib) == D - t - 1) {
          if (std::find(next.begin(), next.end(), h) == next.end()) next.push_back(h);
        }
      }
    }
    layer = next;
    members.insert(members.end(), next.begin(), next.end());
  }
  std::vector<NormalForm> out;
  out.reserve(members.size());
  for (auto id : members) out.push_back(table.element(id));
  std::sort(out.begin(), out.end(), [&](const NormalForm& x, const NormalForm& y) {
    return shortlex_less(G, x.word(), y.word());
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_convex(const DyerGroup& G, const CayleyBall& ball,
               const std::vector<std::size_t>& subset) {
  std::vector<char> in_subset(ball.size(), 0);
  for (std::size_t i : subset) in_subset[i] = 1;
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      for (const NormalForm& z :
           interval(G, ball.element(subset[a]), ball.element(subset[b]))) {
        auto idx = ball.index_of(G, z);
        if (!idx || !in_subset[*idx]) return false;
      }
    }
  }
  return true;
}

std::vector<DihedralCycle> enumerate_dihedral_cycles(const DyerGroup& G,
                                                     const CayleyBall& ball) {
  std::vector<DihedralCycle> out;
  const Alphabet& alpha = G.alphabet();

  // Ranks per vertex, in canonical order.
  std::vector<std::vector<std::size_t>> ranks_of(G.graph().vertex_count());
  for (std::size_t r = 0; r < alpha.size(); ++r)
    ranks_of[alpha.letter(r).vertex].push_back(r);

  for (const DyerEdge& e : G.graph().edges()) {
    if (e.label == 2) {
      for (std::uint32_t g = 0; g < ball.size(); ++g) {
        for (std::size_t ra : ranks_of[e.u]) {
          for (std::size_t rb : ranks_of[e.v]) {
            std::uint32_t gu = ball.neighbor(g, ra);
            std::uint32_t gv = ball.neighbor(g, rb);
            if (gu == CayleyBall::kNone || gv == CayleyBall::kNone) continue;
            std::uint32_t guv = ball.neighbor(gu, rb);
            if (guv == CayleyBall::kNone) continue;
            std::uint32_t least = std::min({g, gu, guv, gv});
            if (least != g) continue;
            out.push_back({DihedralCycle::Kind::commutation_square, e.u, e.v, g,
                           {g, gu, guv, gv}});
          }
        }
      }
    } else {
      std::size_t ru = ranks_of[e.u][0];
      std::size_t rv = ranks_of[e.v][0];
      const unsigned m = e.label;
      for (std::uint32_t g = 0; g < ball.size(); ++g) {
        std::vector<std::uint32_t> cyc{g};
        bool ok = true;
        std::uint32_t cur = g;
        for (unsigned j = 0; j < 2 * m - 1; ++j) {
          cur = ball.neighbor(cur, j % 2 == 0 ? ru : rv);
          if (cur == CayleyBall::kNone) {
            ok = false;
            break;
          }
          cyc.push_back(cur);
        }
        if (!ok) continue;
        if (*std::min_element(cyc.begin(), cyc.end()) != g) continue;
        out.push_back({DihedralCycle::Kind::braid_cycle, e.u, e.v, g, std::move(cyc)});
      }
    }
  }
  return out;
}

BallPath path_from_word(const DyerGroup& G, const CayleyBall& ball, const Word& w) {
  BallPath p;
  std::uint32_t cur = 0;  // identity is index 0
  p.vertices.push_back(cur);
  for (const Letter& l : w) {
    std::uint32_t next = ball.neighbor(cur, G.alphabet().rank(l));
    if (next == CayleyBall::kNone)
      throw Error("path leaves the ball at letter '" +
                  G.graph().vertex(l.vertex).name + "'");
    p.vertices.push_back(next);
    cur = next;
  }
  return p;
}

Word word_of_path(const DyerGroup& G, const CayleyBall& ball, const BallPath& p) {
  Word w;
  for (std::size_t t = 0; t + 1 < p.vertices.size(); ++t)
    w.push_back(G.alphabet().letter(
        ball.letter_between(p.vertices[t], p.vertices[t + 1])));
  return w;
}

std::string to_dot(const DyerGroup& G, const CayleyBall& ball) {
  std::string out = "graph cayley_ball {\n";
  for (std::size_t i = 0; i < ball.size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"" +
           format_word(G, ball.element(i)) + "\"];\n";
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t r = 0; r < ball.alphabet_size(); ++r) {
      std::uint32_t j = ball.neighbor(i, r);
      if (j == CayleyBall::kNone || j <= i) continue;
      Word letter{G.alphabet().letter(r)};
      out += "  n" + std::to_string(i) + " -- n" + std::to_string(j) +
             " [label=\"" + format_word(G, letter) + "\"];\n";
    }
  }
  out += "}\n";
  return out;
}

}  // namespace dyergeo
