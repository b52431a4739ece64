#include "dyergeo/words.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <optional>
#include <unordered_set>

namespace dyergeo {

namespace {

// The rewriting engine works on words of letter ranks packed into strings:
// hashing and comparison are then single memcmp-style operations, and words
// of desk-scale length stay in the small-string buffer.
using RankWord = std::string;

constexpr std::size_t kClosureCap = 1u << 22;

RankWord to_ranks(const DyerGroup& G, const Word& w) {
  RankWord out;
  out.reserve(w.size());
  for (const Letter& l : w) out.push_back(static_cast<char>(G.alphabet().rank(l)));
  return out;
}

Word from_ranks(const DyerGroup& G, const RankWord& rw) {
  Word out;
  out.reserve(rw.size());
  for (char c : rw) out.push_back(G.alphabet().letter(static_cast<unsigned char>(c)));
  return out;
}

RankWord local_reduce_ranks(const DyerGroup& G, const RankWord& w) {
  RankWord stack;
  stack.reserve(w.size());
  for (char c : w) {
    std::uint16_t cur = static_cast<unsigned char>(c);
    bool alive = true;
    while (alive && !stack.empty()) {
      std::uint16_t m = G.merge(static_cast<unsigned char>(stack.back()), cur);
      if (m == DyerGroup::kMergeNone) break;
      stack.pop_back();
      if (m == DyerGroup::kMergeCancel)
        alive = false;
      else
        cur = m;
    }
    if (alive) stack.push_back(static_cast<char>(cur));
  }
  return stack;
}

bool has_local_reduction(const DyerGroup& G, const RankWord& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (G.merge(static_cast<unsigned char>(w[i]),
                static_cast<unsigned char>(w[i + 1])) != DyerGroup::kMergeNone)
      return true;
  return false;
}

template <typename Fn>
void for_each_move(const DyerGroup& G, const RankWord& w, Fn&& emit) {
  const std::size_t n = w.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::size_t ra = static_cast<unsigned char>(w[i]);
    std::size_t rb = static_cast<unsigned char>(w[i + 1]);
    if (ra != rb && G.commutes(ra, rb)) {
      RankWord u = w;
      std::swap(u[i], u[i + 1]);
      emit(std::move(u));
    }
    unsigned m = G.braid(ra, rb);
    if (m >= 3 && i + m <= n) {
      bool alternating = true;
      for (std::size_t j = 2; j < m; ++j) {
        std::size_t expect = (j % 2 == 0) ? ra : rb;
        if (static_cast<unsigned char>(w[i + j]) != expect) {
          alternating = false;
          break;
        }
      }
      if (alternating) {
        RankWord u = w;
        for (std::size_t j = 0; j < m; ++j)
          u[i + j] = static_cast<char>((j % 2 == 0) ? rb : ra);
        emit(std::move(u));
      }
    }
  }
}

struct ClosureResult {
  std::vector<RankWord> words;           // filled only when requested
  std::optional<RankWord> reducible;     // first reducible word found, if any
};

// Breadth-first closure of a locally reduced word under length-preserving
// moves. With stop_at_reducible the search aborts as soon as any member
// admits a local reduction; with collect the full closure is returned.
ClosureResult move_closure(const DyerGroup& G, const RankWord& start,
                           bool stop_at_reducible, bool collect) {
  ClosureResult result;
  std::unordered_set<RankWord> visited;
  std::deque<RankWord> queue;
  visited.insert(start);
  queue.push_back(start);
  if (stop_at_reducible && has_local_reduction(G, start)) {
    result.reducible = start;
    return result;
  }
  while (!queue.empty()) {
    RankWord w = std::move(queue.front());
    queue.pop_front();
    bool stop = false;
    for_each_move(G, w, [&](RankWord u) {
      if (stop || !visited.insert(u).second) return;
      if (stop_at_reducible && has_local_reduction(G, u)) {
        result.reducible = std::move(u);
        stop = true;
        return;
      }
      queue.push_back(std::move(u));
    });
    if (result.reducible) return result;
    if (collect) result.words.push_back(std::move(w));
    if (visited.size() > kClosureCap)
      throw ResourceLimitError("move closure exceeded " +
                               std::to_string(kClosureCap) + " words");
  }
  return result;
}

// Shared driver: returns a geodesic rank word, and optionally the full
// closure of that word (every member then geodesic as well).
RankWord reduce_ranks(const DyerGroup& G, RankWord w, bool collect,
                      std::vector<RankWord>* closure_out) {
  w = local_reduce_ranks(G, w);
  for (;;) {
    ClosureResult r = move_closure(G, w, /*stop_at_reducible=*/true,
                                   /*collect=*/false);
    if (!r.reducible) break;
    w = local_reduce_ranks(G, *r.reducible);
  }
  if (collect) {
    ClosureResult r = move_closure(G, w, /*stop_at_reducible=*/false,
                                   /*collect=*/true);
    *closure_out = std::move(r.words);
  }
  return w;
}

}  // namespace

DyerGroup::DyerGroup(DyerGraph graph)
    : graph_(std::move(graph)), alphabet_(graph_), max_label_(max_edge_label(graph_)) {
  const std::size_t a = alphabet_.size();
  if (a > 255) throw Error("alphabet too large (more than 255 letters)");
  commute_.assign(a * a, 0);
  braid_.assign(a * a, 0);
  merge_.assign(a * a, kMergeNone);
  for (std::size_t i = 0; i < a; ++i) {
    const Letter li = alphabet_.letter(i);
    for (std::size_t j = 0; j < a; ++j) {
      const Letter lj = alphabet_.letter(j);
      if (li.vertex != lj.vertex) {
        unsigned label = graph_.edge_label(li.vertex, lj.vertex);
        if (label == 2) commute_[i * a + j] = 1;
        if (label >= 3) braid_[i * a + j] = label;
        continue;
      }
      unsigned order = graph_.vertex(li.vertex).order;
      if (is_finite_order(order)) {
        unsigned s = (static_cast<unsigned>(li.exponent) +
                      static_cast<unsigned>(lj.exponent)) % order;
        merge_[i * a + j] =
            s == 0 ? kMergeCancel
                   : static_cast<std::uint16_t>(alphabet_.rank(
                         Letter{li.vertex, static_cast<std::int32_t>(s)}));
      } else if (li.exponent + lj.exponent == 0) {
        merge_[i * a + j] = kMergeCancel;
      }
    }
  }
}

Word local_reduce(const DyerGroup& G, Word w) {
  return from_ranks(G, local_reduce_ranks(G, to_ranks(G, w)));
}

std::vector<Word> length_preserving_moves(const DyerGroup& G, const Word& w) {
  std::vector<Word> out;
  std::unordered_set<RankWord> seen;
  for_each_move(G, to_ranks(G, w), [&](RankWord u) {
    if (seen.insert(u).second) out.push_back(from_ranks(G, u));
  });
  return out;
}

Word reduce(const DyerGroup& G, Word w) {
  return from_ranks(G, reduce_ranks(G, to_ranks(G, w), false, nullptr));
}

bool is_geodesic_word(const DyerGroup& G, const Word& w) {
  return reduce(G, w).size() == w.size();
}

NormalForm normal_form(const DyerGroup& G, const Word& w) {
  std::vector<RankWord> closure;
  RankWord geo = reduce_ranks(G, to_ranks(G, w), true, &closure);
  const RankWord* best = &geo;
  for (const RankWord& u : closure)
    if (u < *best) best = &u;
  return NormalForm(from_ranks(G, *best));
}

bool equal(const DyerGroup& G, const Word& a, const Word& b) {
  return normal_form(G, a) == normal_form(G, b);
}

NormalForm multiply(const DyerGroup& G, const NormalForm& a, const NormalForm& b) {
  Word w = a.word();
  w.insert(w.end(), b.word().begin(), b.word().end());
  return normal_form(G, w);
}

NormalForm invert(const DyerGroup& G, const NormalForm& n) {
  Word w;
  w.reserve(n.length());
  for (auto it = n.word().rbegin(); it != n.word().rend(); ++it)
    w.push_back(G.letter_inverse(*it));
  return normal_form(G, w);
}

bool shortlex_less(const DyerGroup& G, const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return to_ranks(G, a) < to_ranks(G, b);
}

Word parse_word_literal(const DyerGroup& G, std::string_view text) {
  Word out;
  std::size_t i = 0;
  std::size_t col = 1;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      ++col;
      continue;
    }
    std::size_t start = i, startcol = col;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      ++col;
    }
    std::string_view token = text.substr(start, i - start);
    std::string_view name = token;
    long long exp = 1;
    if (auto caret = token.find('^'); caret != std::string_view::npos) {
      name = token.substr(0, caret);
      std::string_view etxt = token.substr(caret + 1);
      auto [p, ec] = std::from_chars(etxt.data(), etxt.data() + etxt.size(), exp);
      if (ec != std::errc() || p != etxt.data() + etxt.size())
        throw ParseError("invalid exponent in token '" + std::string(token) + "'",
                         1, startcol);
    }
    if (name.empty() || !G.graph().has_vertex(name))
      throw ParseError("unknown vertex in token '" + std::string(token) + "'", 1,
                       startcol);
    std::uint32_t v = G.graph().vertex_index(name);
    unsigned order = G.graph().vertex(v).order;
    if (is_finite_order(order)) {
      long long e = exp % static_cast<long long>(order);
      if (e < 0) e += order;
      if (e == 0)
        throw ParseError("exponent in '" + std::string(token) +
                             "' is a multiple of the vertex order",
                         1, startcol);
      out.push_back({v, static_cast<std::int32_t>(e)});
    } else {
      if (exp == 0)
        throw ParseError("zero exponent in token '" + std::string(token) + "'", 1,
                         startcol);
      // Powers at an infinite-order vertex expand into unit letters.
      std::int32_t sign = exp > 0 ? 1 : -1;
      for (long long k = 0; k < (exp > 0 ? exp : -exp); ++k)
        out.push_back({v, sign});
    }
  }
  return out;
}

std::string format_word(const DyerGroup& G, const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += G.graph().vertex(w[i].vertex).name;
    if (w[i].exponent != 1) out += "^" + std::to_string(w[i].exponent);
  }
  return out;
}

std::string format_word(const DyerGroup& G, const NormalForm& n) {
  return format_word(G, n.word());
}

}  // namespace dyergeo
