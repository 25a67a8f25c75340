#include "dgr/louvain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

namespace dgr {

namespace {

struct WeightedGraph {
  std::vector<std::vector<std::pair<std::size_t, double>>> adj;  // no self entries
  std::vector<double> self;      // weight of edges internal to the node
  std::vector<double> strength;  // weighted degree, internal edges counted twice
};

WeightedGraph from_simple(const UndirectedGraph& g) {
  WeightedGraph w;
  const std::size_t n = g.node_count();
  w.adj.resize(n);
  w.self.assign(n, 0.0);
  w.strength.assign(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(v)) w.adj[v].emplace_back(u, 1.0);
    w.strength[v] = static_cast<double>(g.degree(v));
  }
  return w;
}

// One round of local moves. Returns true if any node changed community.
bool local_moves(const WeightedGraph& w, double two_m, std::vector<std::size_t>& comm,
                 std::mt19937_64& rng) {
  const std::size_t n = w.adj.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += w.strength[i];

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  bool any_move = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (std::size_t i : order) {
      const std::size_t current = comm[i];
      const double k = w.strength[i];
      touched.clear();
      for (auto [j, weight] : w.adj[i]) {
        std::size_t c = comm[j];
        if (link[c] == 0.0) touched.push_back(c);
        link[c] += weight;
      }
      tot[current] -= k;
      std::size_t best = current;
      double best_gain = link[current] - tot[current] * k / two_m;
      for (std::size_t c : touched) {
        double gain = link[c] - tot[c] * k / two_m;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += k;
      for (std::size_t c : touched) link[c] = 0.0;
      link[current] = 0.0;
      if (best != current) {
        comm[i] = best;
        moved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

WeightedGraph aggregate(const WeightedGraph& w, const std::vector<std::size_t>& comm,
                        std::size_t count) {
  WeightedGraph out;
  out.adj.resize(count);
  out.self.assign(count, 0.0);
  out.strength.assign(count, 0.0);
  std::vector<std::map<std::size_t, double>> acc(count);
  for (std::size_t i = 0; i < w.adj.size(); ++i) {
    std::size_t ci = comm[i];
    out.self[ci] += w.self[i];
    out.strength[ci] += w.strength[i];
    for (auto [j, weight] : w.adj[i]) {
      if (j < i) continue;
      std::size_t cj = comm[j];
      if (ci == cj) {
        out.self[ci] += weight;
      } else {
        acc[ci][cj] += weight;
        acc[cj][ci] += weight;
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c) {
    out.adj[c].assign(acc[c].begin(), acc[c].end());
  }
  return out;
}

}  // namespace

std::size_t canonicalize_communities(std::vector<std::size_t>& community) {
  std::map<std::size_t, std::size_t> relabel;
  for (auto& c : community) {
    auto [it, inserted] = relabel.emplace(c, relabel.size());
    c = it->second;
  }
  return relabel.size();
}

double modularity(const UndirectedGraph& g, std::span<const std::size_t> community) {
  const std::size_t m = g.edge_count();
  if (m == 0) return 0.0;
  std::size_t k = 0;
  for (std::size_t c : community) k = std::max(k, c + 1);
  std::vector<double> internal(k, 0.0), degree(k, 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    degree[community[v]] += static_cast<double>(g.degree(v));
    for (NodeId u : g.neighbors(v)) {
      if (u > v && community[u] == community[v]) internal[community[v]] += 1.0;
    }
  }
  const double md = static_cast<double>(m);
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    double frac = degree[c] / (2.0 * md);
    q += internal[c] / md - frac * frac;
  }
  return q;
}

namespace {

std::vector<std::size_t> multilevel(const UndirectedGraph& g, double two_m, std::uint64_t seed) {
  std::vector<std::size_t> community(g.node_count());
  std::iota(community.begin(), community.end(), 0);
  std::mt19937_64 rng(seed);
  WeightedGraph level = from_simple(g);
  while (true) {
    std::vector<std::size_t> comm(level.adj.size());
    std::iota(comm.begin(), comm.end(), 0);
    if (!local_moves(level, two_m, comm, rng)) break;
    std::size_t count = canonicalize_communities(comm);
    for (auto& c : community) c = comm[c];
    if (count == level.adj.size()) break;
    level = aggregate(level, comm, count);
  }
  canonicalize_communities(community);
  return community;
}

// Greedily merges the pair of adjacent communities with the largest positive gain.
bool merge_best_pair(const UndirectedGraph& g, double two_m, std::vector<std::size_t>& comm) {
  const std::size_t k = canonicalize_communities(comm);
  std::vector<double> tot(k, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, double> between;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    tot[comm[v]] += static_cast<double>(g.degree(v));
    for (NodeId u : g.neighbors(v)) {
      if (u > v && comm[u] != comm[v]) {
        between[std::minmax(comm[u], comm[v])] += 1.0;
      }
    }
  }
  double best_gain = 1e-12;
  std::pair<std::size_t, std::size_t> best{0, 0};
  for (const auto& [cd, e] : between) {
    double gain = 2.0 * e / two_m - 2.0 * tot[cd.first] * tot[cd.second] / (two_m * two_m);
    if (gain > best_gain) {
      best_gain = gain;
      best = cd;
    }
  }
  if (best.first == best.second) return false;
  for (auto& c : comm) {
    if (c == best.second) c = best.first;
  }
  canonicalize_communities(comm);
  return true;
}

// Deterministic cap on refinement work, counted in node-degree operations.
// Small graphs never reach it; on large ones it bounds the superlinear passes.
class Budget {
 public:
  explicit Budget(std::size_t units) : left_(units) {}
  void spend(std::size_t units) { left_ = units >= left_ ? 0 : left_ - units; }
  bool exhausted() const { return left_ == 0; }

 private:
  std::size_t left_;
};

std::size_t polish_units(const UndirectedGraph& g) { return 20'000 + 20 * g.edge_count(); }

void refine(const UndirectedGraph& g, double two_m, std::vector<std::size_t>& comm,
            std::mt19937_64& rng) {
  const WeightedGraph base = from_simple(g);
  bool changed = true;
  while (changed) {
    changed = local_moves(base, two_m, comm, rng);
    canonicalize_communities(comm);
    changed = merge_best_pair(g, two_m, comm) || changed;
  }
}

// Tries every zero-gain single-node move; keeps it when the follow-up refinement
// lifts modularity. Greedy moves alone stall on such plateaus.
bool escape_plateau(const UndirectedGraph& g, double two_m, std::vector<std::size_t>& comm,
                    std::mt19937_64& rng, Budget& budget) {
  const std::size_t n = g.node_count();
  const double q0 = modularity(g, comm);
  std::vector<double> tot(n, 0.0);
  for (NodeId v = 0; v < n; ++v) tot[comm[v]] += static_cast<double>(g.degree(v));
  for (NodeId i = 0; i < n; ++i) {
    const double k = static_cast<double>(g.degree(i));
    std::map<std::size_t, double> link;
    for (NodeId j : g.neighbors(i)) link[comm[j]] += 1.0;
    const std::size_t current = comm[i];
    auto gain = [&](std::size_t c) {
      double t = tot[c] - (c == current ? k : 0.0);
      return (link.count(c) ? link[c] : 0.0) - t * k / two_m;
    };
    const double stay = gain(current);
    for (const auto& [c, l] : link) {
      if (c == current || gain(c) < stay - 1e-12) continue;
      if (budget.exhausted()) return false;
      budget.spend(2 * g.edge_count());
      auto trial = comm;
      trial[i] = c;
      refine(g, two_m, trial, rng);
      if (modularity(g, trial) > q0 + 1e-12) {
        comm = std::move(trial);
        return true;
      }
    }
  }
  return false;
}

// Kernighan-Lin style sweep: every node moves once, greedily, even at a loss
// (including into an empty community); the best intermediate partition is kept.
bool fine_tune(const UndirectedGraph& g, double two_m, std::vector<std::size_t>& comm,
               Budget& budget) {
  const std::size_t n = g.node_count();
  constexpr std::size_t kFresh = std::numeric_limits<std::size_t>::max();
  std::vector<double> tot(n, 0.0);
  std::vector<std::vector<NodeId>> members(n);
  std::vector<std::size_t> slot(n);
  for (NodeId v = 0; v < n; ++v) {
    tot[comm[v]] += static_cast<double>(g.degree(v));
    slot[v] = members[comm[v]].size();
    members[comm[v]].push_back(v);
  }

  std::vector<double> link(n, 0.0);
  std::vector<std::size_t> touched;
  std::vector<double> gain(n);
  std::vector<std::size_t> target(n);
  auto evaluate = [&](NodeId i) {
    budget.spend(g.degree(i) + 1);
    const double k = static_cast<double>(g.degree(i));
    const std::size_t current = comm[i];
    touched.clear();
    for (NodeId j : g.neighbors(i)) {
      if (link[comm[j]] == 0.0) touched.push_back(comm[j]);
      link[comm[j]] += 1.0;
    }
    const double stay = link[current] - (tot[current] - k) * k / two_m;
    gain[i] = -std::numeric_limits<double>::infinity();
    auto consider = [&](std::size_t c, double l, double t) {
      double delta = 2.0 * (l - t * k / two_m - stay) / two_m;
      if (delta > gain[i] + 1e-15) {
        gain[i] = delta;
        target[i] = c;
      }
    };
    for (std::size_t c : touched) {
      if (c != current) consider(c, link[c], tot[c]);
    }
    if (members[current].size() > 1) consider(kFresh, 0.0, 0.0);
    for (std::size_t c : touched) link[c] = 0.0;
  };

  const double q0 = modularity(g, comm);
  double q = q0, best_q = q0;
  auto best = comm;
  std::vector<char> moved(n, 0);
  std::vector<std::size_t> stamp(n, 0);
  for (NodeId v = 0; v < n; ++v) evaluate(v);
  // A sweep is abandoned after this many moves without a new best.
  constexpr std::size_t kPatience = 50;
  std::size_t last_improvement = 0;
  for (std::size_t step = 0; step < n && !budget.exhausted(); ++step) {
    NodeId x = n;
    for (NodeId v = 0; v < n; ++v) {
      if (!moved[v] && gain[v] > -std::numeric_limits<double>::infinity() &&
          (x == n || gain[v] > gain[x] + 1e-15)) {
        x = v;
      }
    }
    if (x == n) break;
    const std::size_t from = comm[x];
    std::size_t to = target[x];
    if (to == kFresh) {
      to = 0;
      while (!members[to].empty()) ++to;
    }
    const double k = static_cast<double>(g.degree(x));
    NodeId last = members[from].back();
    members[from][slot[x]] = last;
    slot[last] = slot[x];
    members[from].pop_back();
    tot[from] -= k;
    slot[x] = members[to].size();
    members[to].push_back(x);
    tot[to] += k;
    comm[x] = to;
    moved[x] = 1;
    q += gain[x];
    if (q > best_q + 1e-12) {
      best_q = q;
      best = comm;
      last_improvement = step;
    } else if (step - last_improvement >= kPatience) {
      break;
    }
    // Only nodes inside or next to the two touched communities see new gains.
    for (std::size_t c : {from, to}) {
      for (NodeId v : members[c]) {
        if (stamp[v] != step + 1) {
          stamp[v] = step + 1;
          if (!moved[v]) evaluate(v);
        }
        for (NodeId u : g.neighbors(v)) {
          if (stamp[u] != step + 1) {
            stamp[u] = step + 1;
            if (!moved[u]) evaluate(u);
          }
        }
      }
    }
    for (NodeId u : g.neighbors(x)) {
      if (stamp[u] != step + 1) {
        stamp[u] = step + 1;
        if (!moved[u]) evaluate(u);
      }
    }
  }
  comm = std::move(best);
  canonicalize_communities(comm);
  return best_q > q0 + 1e-12;
}

void polish(const UndirectedGraph& g, double two_m, std::vector<std::size_t>& comm,
            std::mt19937_64& rng, Budget& budget) {
  while (!budget.exhausted() &&
         (fine_tune(g, two_m, comm, budget) || escape_plateau(g, two_m, comm, rng, budget))) {
  }
}

// Forces each adjacent pair of communities together, polishes, and keeps the
// first result that beats the current modularity.
bool escape_by_merge(const UndirectedGraph& g, double two_m, std::vector<std::size_t>& comm,
                     std::mt19937_64& rng, Budget& budget) {
  const double q0 = modularity(g, comm);
  std::set<std::pair<std::size_t, std::size_t>> adjacent;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    for (NodeId u : g.neighbors(v)) {
      if (comm[u] != comm[v]) adjacent.insert(std::minmax(comm[u], comm[v]));
    }
  }
  for (auto [a, b] : adjacent) {
    auto trial = comm;
    for (auto& c : trial) {
      if (c == b) c = a;
    }
    if (budget.exhausted()) return false;
    polish(g, two_m, trial, rng, budget);
    if (modularity(g, trial) > q0 + 1e-12) {
      comm = std::move(trial);
      return true;
    }
  }
  return false;
}

// Splits community `c` by the sign of the leading eigenvector of its generalised
// modularity matrix (power iteration with a spectral shift). Returns false when
// the vector does not separate the community.
bool spectral_bisect(const UndirectedGraph& g, double two_m, std::vector<std::size_t>& comm,
                     std::size_t c) {
  std::vector<NodeId> members;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (comm[v] == c) members.push_back(v);
  }
  const std::size_t s = members.size();
  if (s < 2) return false;
  std::vector<std::size_t> index(g.node_count(), s);
  for (std::size_t i = 0; i < s; ++i) index[members[i]] = i;
  std::vector<double> k(s), row_sum(s, 0.0);
  double k_total = 0.0;
  for (std::size_t i = 0; i < s; ++i) {
    k[i] = static_cast<double>(g.degree(members[i]));
    k_total += k[i];
  }
  for (std::size_t i = 0; i < s; ++i) {
    double inside = 0.0;
    for (NodeId u : g.neighbors(members[i])) inside += index[u] < s ? 1.0 : 0.0;
    row_sum[i] = inside - k[i] * k_total / two_m;
  }
  double shift = 0.0;
  for (std::size_t i = 0; i < s; ++i) shift = std::max(shift, 2.0 * k[i] + std::abs(row_sum[i]));
  auto multiply = [&](const std::vector<double>& x) {
    std::vector<double> y(s, 0.0);
    double kx = 0.0;
    for (std::size_t i = 0; i < s; ++i) kx += k[i] * x[i];
    for (std::size_t i = 0; i < s; ++i) {
      double ax = 0.0;
      for (NodeId u : g.neighbors(members[i])) {
        if (index[u] < s) ax += x[index[u]];
      }
      y[i] = ax - k[i] * kx / two_m - row_sum[i] * x[i] + shift * x[i];
    }
    return y;
  };
  std::vector<double> x(s);
  for (std::size_t i = 0; i < s; ++i) x[i] = 1.0 + static_cast<double>(i % 7) / 7.0;
  for (int iter = 0; iter < 500; ++iter) {
    auto y = multiply(x);
    double norm = 0.0, diff = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) return false;
    for (std::size_t i = 0; i < s; ++i) {
      y[i] /= norm;
      diff += std::abs(y[i] - x[i]);
    }
    x = std::move(y);
    if (diff < 1e-10) break;
  }
  std::size_t positive = 0;
  for (double v : x) positive += v > 0.0 ? 1 : 0;
  if (positive == 0 || positive == s) return false;
  const std::size_t fresh = *std::max_element(comm.begin(), comm.end()) + 1;
  for (std::size_t i = 0; i < s; ++i) {
    if (x[i] > 0.0) comm[members[i]] = fresh;
  }
  canonicalize_communities(comm);
  return true;
}

bool escape_by_split(const UndirectedGraph& g, double two_m, std::vector<std::size_t>& comm,
                     std::mt19937_64& rng, Budget& budget) {
  const double q0 = modularity(g, comm);
  const std::size_t count = *std::max_element(comm.begin(), comm.end()) + 1;
  for (std::size_t c = 0; c < count; ++c) {
    auto trial = comm;
    if (!spectral_bisect(g, two_m, trial, c)) continue;
    if (budget.exhausted()) return false;
    polish(g, two_m, trial, rng, budget);
    if (modularity(g, trial) > q0 + 1e-12) {
      comm = std::move(trial);
      return true;
    }
  }
  return false;
}

constexpr int kRestarts = 8;

}  // namespace

Partition louvain(const UndirectedGraph& g, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  Partition p;
  p.community.resize(n);
  std::iota(p.community.begin(), p.community.end(), 0);
  if (g.edge_count() == 0) {
    p.community_count = n;
    p.modularity = 0.0;
    return p;
  }

  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  std::seed_seq sequence{seed};
  std::vector<std::uint64_t> seeds(kRestarts);
  sequence.generate(seeds.begin(), seeds.end());
  seeds[0] = seed;
  double best_q = -std::numeric_limits<double>::infinity();
  for (std::uint64_t s : seeds) {
    auto comm = multilevel(g, two_m, s);
    std::mt19937_64 rng(s ^ 0x9e3779b97f4a7c15ULL);
    refine(g, two_m, comm, rng);
    Budget budget(polish_units(g));
    polish(g, two_m, comm, rng, budget);
    double q = modularity(g, comm);
    if (q > best_q + 1e-12) {
      best_q = q;
      p.community = std::move(comm);
    }
    // A random two-way split, polished, as a second candidate per seed.
    std::vector<std::size_t> split(n);
    for (auto& c : split) c = rng() & 1u;
    canonicalize_communities(split);
    Budget split_budget(polish_units(g));
    polish(g, two_m, split, rng, split_budget);
    q = modularity(g, split);
    if (q > best_q + 1e-12) {
      best_q = q;
      p.community = std::move(split);
    }
  }
  std::mt19937_64 rng(seed);
  {
    // One extra candidate grown from a spectral cut of the whole graph.
    std::vector<std::size_t> comm(n, 0);
    spectral_bisect(g, two_m, comm, 0);
    Budget budget(polish_units(g));
    polish(g, two_m, comm, rng, budget);
    if (modularity(g, comm) > best_q + 1e-12) p.community = std::move(comm);
  }
  Budget budget(4 * polish_units(g));
  while (!budget.exhausted() && (escape_by_merge(g, two_m, p.community, rng, budget) ||
                                 escape_by_split(g, two_m, p.community, rng, budget))) {
  }
  p.community_count = canonicalize_communities(p.community);
  p.modularity = modularity(g, p.community);
  return p;
}

}  // namespace dgr
