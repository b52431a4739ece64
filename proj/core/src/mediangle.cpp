#include "dyergeo/mediangle.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace dyergeo {

namespace {

std::uint64_t edge_key(std::uint32_t i, std::uint32_t j) {
  if (i > j) std::swap(i, j);
  return (std::uint64_t(i) << 32) | j;
}

struct DisjointSet {
  std::vector<std::uint32_t> parent;

  explicit DisjointSet(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::string axiom_name(AxiomReport::Axiom a) {
  switch (a) {
    case AxiomReport::Axiom::triangle: return "triangle";
    case AxiomReport::Axiom::k4minus: return "k4minus";
    case AxiomReport::Axiom::cycle: return "cycle";
    case AxiomReport::Axiom::even_intersections: return "even-intersections";
  }
  return "?";
}

BallAnalysis::BallAnalysis(const DyerGroup& G, const CayleyBall& ball)
    : group_(&G), ball_(&ball), table_(G) {
  // Interning the ball elements in index order aligns table ids with ball
  // indices, so distance queries translate directly.
  for (std::size_t i = 0; i < ball.size(); ++i) {
    ElementTable::Id id = table_.intern(ball.element(i));
    if (id != i) throw Error("ball elements are not in intern order");
  }
  neighbors_.resize(ball.size());
  for (std::uint32_t i = 0; i < ball.size(); ++i) {
    for (std::size_t r = 0; r < ball.alphabet_size(); ++r) {
      std::uint32_t j = ball.neighbor(i, r);
      if (j != CayleyBall::kNone && j != i) neighbors_[i].push_back(j);
    }
    std::sort(neighbors_[i].begin(), neighbors_[i].end());
    neighbors_[i].erase(std::unique(neighbors_[i].begin(), neighbors_[i].end()),
                        neighbors_[i].end());
  }
}

unsigned BallAnalysis::distance(std::uint32_t i, std::uint32_t j) {
  return table_.distance(i, j);
}

const std::vector<DihedralCycle>& BallAnalysis::cycles() {
  if (!cycles_built_) {
    cycles_ = enumerate_dihedral_cycles(*group_, *ball_);
    cycles_built_ = true;
  }
  return cycles_;
}

const std::vector<std::pair<std::uint32_t, std::uint8_t>>& BallAnalysis::around(
    std::uint32_t src, unsigned k) {
  if (k != around_k_) {
    around_.clear();
    around_k_ = k;
  }
  auto it = around_.find(src);
  if (it != around_.end()) return it->second;
  std::vector<std::pair<std::uint32_t, std::uint8_t>> result;
  std::unordered_map<std::uint32_t, std::uint8_t> dist;
  std::deque<std::uint32_t> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    std::uint32_t v = queue.front();
    queue.pop_front();
    std::uint8_t d = dist[v];
    result.emplace_back(v, d);
    if (d == k) continue;
    for (std::uint32_t w : neighbors_[v]) {
      if (dist.emplace(w, static_cast<std::uint8_t>(d + 1)).second)
        queue.push_back(w);
    }
  }
  return around_.emplace(src, std::move(result)).first->second;
}

AxiomReport check_triangle_condition(BallAnalysis& a) {
  AxiomReport report{AxiomReport::Axiom::triangle, 0, 0, {}};
  const CayleyBall& ball = a.ball();
  const unsigned R = ball.radius();
  for (std::uint32_t x = 0; x < ball.size(); ++x) {
    for (std::uint32_t y : a.neighbors(x)) {
      if (y <= x) continue;
      for (std::uint32_t o = 0; o < ball.size(); ++o) {
        if (a.distance(o, x) != a.distance(o, y)) continue;
        if (std::min(ball.depth(x), ball.depth(y)) + 1 > R) {
          ++report.instances_skipped_for_margin;
          continue;
        }
        ++report.instances_checked;
        unsigned target = a.distance(o, x) - 1;
        bool found = false;
        for (std::uint32_t z : a.neighbors(x)) {
          if (a.distance(o, z) != target) continue;
          const auto& ny = a.neighbors(y);
          if (std::binary_search(ny.begin(), ny.end(), z)) {
            found = true;
            break;
          }
        }
        if (!found) report.violations.push_back({o, x, y});
      }
    }
  }
  return report;
}

AxiomReport check_k4_minus_free(BallAnalysis& a) {
  AxiomReport report{AxiomReport::Axiom::k4minus, 0, 0, {}};
  const CayleyBall& ball = a.ball();
  for (std::uint32_t g = 0; g < ball.size(); ++g) {
    for (std::uint32_t h : a.neighbors(g)) {
      if (h <= g) continue;
      // Common neighbors of the edge {g, h}.
      std::vector<std::uint32_t> common;
      const auto& nh = a.neighbors(h);
      for (std::uint32_t p : a.neighbors(g))
        if (p != h && std::binary_search(nh.begin(), nh.end(), p))
          common.push_back(p);
      for (std::size_t s = 0; s < common.size(); ++s) {
        for (std::size_t t = s + 1; t < common.size(); ++t) {
          ++report.instances_checked;
          std::uint32_t p = common[s], q = common[t];
          const auto& np = a.neighbors(p);
          if (!std::binary_search(np.begin(), np.end(), q))
            report.violations.push_back({g, h, p, q});
        }
      }
    }
  }
  return report;
}

AxiomReport check_cycle_condition(BallAnalysis& a) {
  AxiomReport report{AxiomReport::Axiom::cycle, 0, 0, {}};
  const CayleyBall& ball = a.ball();
  const unsigned R = ball.radius();
  const unsigned M = a.group().max_label();

  // (z, {x, y}) -> opposite vertices of dihedral cycles through both edges.
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> opposites;
  auto corner_key = [](std::uint32_t z, std::uint32_t x, std::uint32_t y) {
    if (x > y) std::swap(x, y);
    return (std::uint64_t(z) << 40) ^ (std::uint64_t(x) << 20) ^ y;
  };
  for (const DihedralCycle& c : a.cycles()) {
    const std::size_t L = c.vertices.size();
    for (std::size_t p = 0; p < L; ++p) {
      std::uint32_t z = c.vertices[p];
      std::uint32_t x = c.vertices[(p + L - 1) % L];
      std::uint32_t y = c.vertices[(p + 1) % L];
      std::uint32_t w = c.vertices[(p + L / 2) % L];
      opposites[corner_key(z, x, y)].push_back(w);
    }
  }

  for (std::uint32_t z = 0; z < ball.size(); ++z) {
    const auto& nz = a.neighbors(z);
    for (std::size_t s = 0; s < nz.size(); ++s) {
      for (std::size_t t = s + 1; t < nz.size(); ++t) {
        std::uint32_t x = nz[s], y = nz[t];
        for (std::uint32_t o = 0; o < ball.size(); ++o) {
          unsigned dz = a.distance(o, z);
          if (dz == 0) continue;
          if (a.distance(o, x) != dz - 1 || a.distance(o, y) != dz - 1) continue;
          if (ball.depth(z) + M > R) {
            ++report.instances_skipped_for_margin;
            continue;
          }
          ++report.instances_checked;
          bool found = false;
          auto it = opposites.find(corner_key(z, x, y));
          if (it != opposites.end()) {
            for (std::uint32_t w : it->second) {
              if (a.distance(o, w) + a.distance(w, x) == a.distance(o, x) &&
                  a.distance(o, w) + a.distance(w, y) == a.distance(o, y)) {
                found = true;
                break;
              }
            }
          }
          if (!found) report.violations.push_back({o, x, y, z});
        }
      }
    }
  }
  return report;
}

AxiomReport check_even_cycle_intersections(BallAnalysis& a) {
  AxiomReport report{AxiomReport::Axiom::even_intersections, 0, 0, {}};
  const auto& cycles = a.cycles();
  std::vector<std::unordered_set<std::uint64_t>> edge_sets(cycles.size());
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& vs = cycles[c].vertices;
    for (std::size_t p = 0; p < vs.size(); ++p)
      edge_sets[c].insert(edge_key(vs[p], vs[(p + 1) % vs.size()]));
  }
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    for (std::size_t j = i + 1; j < cycles.size(); ++j) {
      ++report.instances_checked;
      std::vector<std::uint64_t> shared;
      for (std::uint64_t e : edge_sets[i])
        if (edge_sets[j].count(e)) shared.push_back(e);
      if (shared.size() > 1) {
        std::sort(shared.begin(), shared.end());
        report.violations.push_back(
            {static_cast<std::uint32_t>(shared[0] >> 32),
             static_cast<std::uint32_t>(shared[0]),
             static_cast<std::uint32_t>(shared[1] >> 32),
             static_cast<std::uint32_t>(shared[1])});
      }
    }
  }
  return report;
}

std::vector<AxiomReport> check_mediangle_axioms(BallAnalysis& a) {
  return {check_triangle_condition(a), check_k4_minus_free(a),
          check_cycle_condition(a), check_even_cycle_intersections(a)};
}

std::string to_text(const DyerGroup& G, const CayleyBall& ball,
                    const AxiomReport& r) {
  std::string out;
  out += "axiom: " + axiom_name(r.axiom) + "\n";
  out += "instances checked: " + std::to_string(r.instances_checked) + "\n";
  out += "instances skipped (margin): " +
         std::to_string(r.instances_skipped_for_margin) + "\n";
  out += "violations: " + std::to_string(r.violations.size()) + "\n";
  std::size_t shown = std::min<std::size_t>(r.violations.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    out += "  witness:";
    for (std::uint32_t v : r.violations[i])
      out += " [" + format_word(G, ball.element(v)) + "]";
    out += "\n";
  }
  return out;
}

namespace {

std::vector<std::vector<std::uint32_t>> graph_neighbors(const SimpleGraph& g) {
  std::vector<std::vector<std::uint32_t>> nbr(g.n);
  for (auto [u, v] : g.edges) {
    nbr[u].push_back(v);
    nbr[v].push_back(u);
  }
  for (auto& list : nbr) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return nbr;
}

std::vector<std::vector<unsigned>> graph_distances(
    const SimpleGraph& g, const std::vector<std::vector<std::uint32_t>>& nbr) {
  std::vector<std::vector<unsigned>> dist(g.n, std::vector<unsigned>(g.n, ~0u));
  for (std::uint32_t s = 0; s < g.n; ++s) {
    dist[s][s] = 0;
    std::deque<std::uint32_t> queue{s};
    while (!queue.empty()) {
      std::uint32_t v = queue.front();
      queue.pop_front();
      for (std::uint32_t w : nbr[v]) {
        if (dist[s][w] == ~0u) {
          dist[s][w] = dist[s][v] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  return dist;
}

}  // namespace

AxiomReport check_triangle_condition(const SimpleGraph& g) {
  AxiomReport report{AxiomReport::Axiom::triangle, 0, 0, {}};
  auto nbr = graph_neighbors(g);
  auto dist = graph_distances(g, nbr);
  for (std::uint32_t x = 0; x < g.n; ++x) {
    for (std::uint32_t y : nbr[x]) {
      if (y <= x) continue;
      for (std::uint32_t o = 0; o < g.n; ++o) {
        if (dist[o][x] != dist[o][y]) continue;
        ++report.instances_checked;
        bool found = false;
        for (std::uint32_t z : nbr[x]) {
          if (dist[o][z] + 1 == dist[o][x] &&
              std::binary_search(nbr[y].begin(), nbr[y].end(), z)) {
            found = true;
            break;
          }
        }
        if (!found) report.violations.push_back({o, x, y});
      }
    }
  }
  return report;
}

AxiomReport check_k4_minus_free(const SimpleGraph& g) {
  AxiomReport report{AxiomReport::Axiom::k4minus, 0, 0, {}};
  auto nbr = graph_neighbors(g);
  for (std::uint32_t u = 0; u < g.n; ++u) {
    for (std::uint32_t v : nbr[u]) {
      if (v <= u) continue;
      std::vector<std::uint32_t> common;
      for (std::uint32_t p : nbr[u])
        if (p != v && std::binary_search(nbr[v].begin(), nbr[v].end(), p))
          common.push_back(p);
      for (std::size_t s = 0; s < common.size(); ++s)
        for (std::size_t t = s + 1; t < common.size(); ++t) {
          ++report.instances_checked;
          if (!std::binary_search(nbr[common[s]].begin(), nbr[common[s]].end(),
                                  common[t]))
            report.violations.push_back({u, v, common[s], common[t]});
        }
    }
  }
  return report;
}

std::size_t HyperplanePartition::class_of(std::uint32_t i, std::uint32_t j) const {
  auto it = edge_ids_.find(edge_key(i, j));
  if (it == edge_ids_.end()) throw Error("not a ball edge");
  return classes_[it->second];
}

HyperplanePartition compute_hyperplanes(BallAnalysis& a) {
  HyperplanePartition hp;
  hp.edges_ = a.ball().edges();
  for (std::uint32_t e = 0; e < hp.edges_.size(); ++e)
    hp.edge_ids_.emplace(edge_key(hp.edges_[e].first, hp.edges_[e].second), e);

  DisjointSet dsu(hp.edges_.size());
  auto eid = [&](std::uint32_t i, std::uint32_t j) {
    return hp.edge_ids_.at(edge_key(i, j));
  };

  // All edges of every 3-cycle belong to one hyperplane.
  for (std::uint32_t i = 0; i < a.ball().size(); ++i) {
    for (std::uint32_t j : a.neighbors(i)) {
      if (j <= i) continue;
      for (std::uint32_t k : a.neighbors(j)) {
        if (k <= j) continue;
        const auto& ni = a.neighbors(i);
        if (!std::binary_search(ni.begin(), ni.end(), k)) continue;
        std::uint32_t e1 = eid(i, j), e2 = eid(j, k), e3 = eid(i, k);
        dsu.unite(e1, e2);
        dsu.unite(e1, e3);
      }
    }
  }
  // Opposite edges of every dihedral cycle belong to one hyperplane.
  for (const DihedralCycle& c : a.cycles()) {
    const std::size_t L = c.vertices.size();
    for (std::size_t p = 0; p < L / 2; ++p) {
      std::uint32_t e1 =
          eid(c.vertices[p], c.vertices[(p + 1) % L]);
      std::uint32_t e2 = eid(c.vertices[(p + L / 2) % L],
                             c.vertices[(p + L / 2 + 1) % L]);
      dsu.unite(e1, e2);
    }
  }

  hp.classes_.resize(hp.edges_.size());
  std::unordered_map<std::uint32_t, std::uint32_t> renumber;
  for (std::uint32_t e = 0; e < hp.edges_.size(); ++e) {
    std::uint32_t root = dsu.find(e);
    auto it = renumber.emplace(root, static_cast<std::uint32_t>(renumber.size())).first;
    hp.classes_[e] = it->second;
  }
  hp.class_count_ = renumber.size();
  return hp;
}

std::string hyperplanes_to_csv(const DyerGroup& G, const CayleyBall& ball,
                               const HyperplanePartition& hp) {
  std::string out = "edge_from,edge_to,class\n";
  for (std::size_t e = 0; e < hp.edges().size(); ++e) {
    auto [i, j] = hp.edges()[e];
    out += "\"" + format_word(G, ball.element(i)) + "\",\"" +
           format_word(G, ball.element(j)) + "\"," +
           std::to_string(hp.class_of(i, j)) + "\n";
  }
  return out;
}

std::vector<std::size_t> crossings(const BallPath& p, const HyperplanePartition& hp) {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t + 1 < p.vertices.size(); ++t)
    out.push_back(hp.class_of(p.vertices[t], p.vertices[t + 1]));
  return out;
}

bool is_geodesic(BallAnalysis& a, const BallPath& p) {
  if (p.vertices.empty()) return true;
  return a.distance(p.vertices.front(), p.vertices.back()) == p.length();
}

namespace {

struct CriterionCounts {
  std::size_t checked = 0, skipped = 0, soundness = 0, completeness = 0;
};

CriterionCounts run_criterion(const DyerGroup& G, unsigned radius,
                              unsigned max_len, const Limits& limits) {
  CayleyBall ball = build_ball(G, radius, limits);
  BallAnalysis analysis(G, ball);
  HyperplanePartition hp = compute_hyperplanes(analysis);
  const unsigned margin = radius - std::min(radius, G.max_label());

  CriterionCounts counts;
  // Depth-first over letter sequences; class usage tracked incrementally.
  std::vector<std::uint32_t> path{0};
  std::unordered_map<std::size_t, unsigned> uses;
  unsigned repeats = 0;

  auto dfs = [&](auto&& self, unsigned depth) -> void {
    limits.check_deadline("hyperplane criterion");
    if (depth == max_len) return;
    for (std::size_t r = 0; r < G.rank_count(); ++r) {
      std::uint32_t next = ball.neighbor(path.back(), r);
      if (next == CayleyBall::kNone) continue;
      if (ball.depth(next) > margin) {
        ++counts.skipped;
        continue;
      }
      std::size_t cls = hp.class_of(path.back(), next);
      path.push_back(next);
      if (++uses[cls] == 2) ++repeats;

      ++counts.checked;
      bool repeated = repeats > 0;
      bool geodesic = ball.depth(path.back()) == path.size() - 1;
      if (repeated && geodesic) ++counts.soundness;
      if (!repeated && !geodesic) ++counts.completeness;

      self(self, depth + 1);

      if (uses[cls]-- == 2) --repeats;
      path.pop_back();
    }
  };
  dfs(dfs, 0);
  return counts;
}

}  // namespace

HyperplaneCriterionReport verify_hyperplane_criterion(const DyerGroup& G,
                                                      unsigned radius,
                                                      unsigned max_len,
                                                      const Limits& limits) {
  HyperplaneCriterionReport report;
  report.max_len = max_len;
  report.radius_used = radius;
  CriterionCounts counts = run_criterion(G, radius, max_len, limits);
  if (counts.completeness > 0 && counts.soundness == 0) {
    // Merging chains may extend past the window; retry once with slack M.
    report.retried = true;
    report.radius_used = radius + G.max_label();
    counts = run_criterion(G, report.radius_used, max_len, limits);
  }
  report.paths_checked = counts.checked;
  report.paths_skipped_margin = counts.skipped;
  report.soundness_violations = counts.soundness;
  report.completeness_failures = counts.completeness;
  return report;
}

}  // namespace dyergeo
