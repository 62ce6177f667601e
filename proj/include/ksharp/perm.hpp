#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace ksharp {

// Permutation of {0..k-1}. Right action convention throughout: a point moves
// by x -> perm[x], and (a*b) means "apply a, then b".
class Perm {
public:
  Perm() = default;
  explicit Perm(int k) : img_(k) {
    for (int i = 0; i < k; ++i) img_[i] = static_cast<uint8_t>(i);
  }
  static Perm from_images(const std::vector<int>& images) {
    Perm p;
    p.img_.resize(images.size());
    std::vector<bool> seen(images.size(), false);
    for (size_t i = 0; i < images.size(); ++i) {
      int v = images[i];
      if (v < 0 || v >= static_cast<int>(images.size()) || seen[v])
        throw std::invalid_argument("Perm: not a bijection");
      seen[v] = true;
      p.img_[i] = static_cast<uint8_t>(v);
    }
    return p;
  }
  // cycles like {{0,1,2},{3,4}} on k points
  static Perm from_cycles(int k, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> images(k);
    for (int i = 0; i < k; ++i) images[i] = i;
    for (const auto& c : cycles)
      for (size_t i = 0; i < c.size(); ++i) images[c[i]] = c[(i + 1) % c.size()];
    return from_images(images);
  }

  int k() const { return static_cast<int>(img_.size()); }
  int apply(int x) const { return img_[x]; }
  int operator()(int x) const { return img_[x]; }

  Perm operator*(const Perm& o) const {  // apply *this, then o
    Perm r;
    r.img_.resize(img_.size());
    for (size_t i = 0; i < img_.size(); ++i) r.img_[i] = o.img_[img_[i]];
    return r;
  }
  Perm inverse() const {
    Perm r;
    r.img_.resize(img_.size());
    for (size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<uint8_t>(i);
    return r;
  }
  Perm conjugate(const Perm& g) const { return g.inverse() * (*this) * g; }

  bool is_identity() const {
    for (size_t i = 0; i < img_.size(); ++i)
      if (img_[i] != i) return false;
    return true;
  }
  int order() const {
    Perm p = *this;
    int n = 1;
    while (!p.is_identity()) {
      p = p * (*this);
      ++n;
    }
    return n;
  }

  // packs k<=15 points into one word; used as a map key and for deterministic order
  uint64_t key() const {
    uint64_t v = static_cast<uint64_t>(img_.size());
    for (size_t i = 0; i < img_.size(); ++i) v = (v << 4) | img_[i];
    return v;
  }
  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator!=(const Perm& o) const { return img_ != o.img_; }
  bool operator<(const Perm& o) const { return key() < o.key(); }

  std::string cycle_string() const {
    std::string s;
    std::vector<bool> used(img_.size(), false);
    for (size_t i = 0; i < img_.size(); ++i) {
      if (used[i] || img_[i] == i) continue;
      s += '(';
      size_t j = i;
      bool first = true;
      while (!used[j]) {
        used[j] = true;
        if (!first) s += ' ';
        s += std::to_string(j);
        first = false;
        j = img_[j];
      }
      s += ')';
    }
    return s.empty() ? "()" : s;
  }
  const std::vector<uint8_t>& images() const { return img_; }
  std::vector<int> images_int() const { return std::vector<int>(img_.begin(), img_.end()); }

private:
  std::vector<uint8_t> img_;
};

// Subgroup of Sym_k stored by its full (closed) element list, sorted by key.
struct PermSubgroup {
  int k = 0;
  std::vector<Perm> elements;

  static PermSubgroup generate(int k, const std::vector<Perm>& gens) {
    PermSubgroup g;
    g.k = k;
    std::set<uint64_t> seen;
    std::vector<Perm> frontier{Perm(k)};
    seen.insert(Perm(k).key());
    g.elements.push_back(Perm(k));
    while (!frontier.empty()) {
      std::vector<Perm> next;
      for (const auto& p : frontier)
        for (const auto& s : gens) {
          Perm q = p * s;
          if (seen.insert(q.key()).second) {
            g.elements.push_back(q);
            next.push_back(q);
          }
        }
      frontier = std::move(next);
    }
    std::sort(g.elements.begin(), g.elements.end());
    return g;
  }

  size_t size() const { return elements.size(); }
  bool trivial() const { return elements.size() == 1; }
  bool contains(const Perm& p) const {
    return std::binary_search(elements.begin(), elements.end(), p);
  }
  bool operator==(const PermSubgroup& o) const { return k == o.k && elements == o.elements; }
  bool operator<(const PermSubgroup& o) const { return canonical_key() < o.canonical_key(); }

  std::vector<uint64_t> canonical_key() const {
    std::vector<uint64_t> ks;
    ks.reserve(elements.size());
    for (const auto& e : elements) ks.push_back(e.key());
    return ks;  // elements are sorted
  }

  std::vector<std::vector<int>> orbits() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> used(k, false);
    for (int i = 0; i < k; ++i) {
      if (used[i]) continue;
      std::set<int> orb;
      std::vector<int> frontier{i};
      orb.insert(i);
      while (!frontier.empty()) {
        int x = frontier.back();
        frontier.pop_back();
        for (const auto& e : elements) {
          int y = e(x);
          if (orb.insert(y).second) frontier.push_back(y);
        }
      }
      std::vector<int> o(orb.begin(), orb.end());
      for (int x : o) used[x] = true;
      out.push_back(o);
    }
    return out;
  }

  std::vector<int> fixed_points() const {
    std::vector<int> fp;
    for (int i = 0; i < k; ++i) {
      bool fixed = true;
      for (const auto& e : elements)
        if (e(i) != i) {
          fixed = false;
          break;
        }
      if (fixed) fp.push_back(i);
    }
    return fp;
  }

  // stabilizer of x under this group's permutation action
  PermSubgroup point_stabilizer(int x) const {
    PermSubgroup g;
    g.k = k;
    for (const auto& e : elements)
      if (e(x) == x) g.elements.push_back(e);
    return g;
  }

  PermSubgroup conjugate(const Perm& g) const {
    PermSubgroup out;
    out.k = k;
    out.elements.reserve(elements.size());
    for (const auto& e : elements) out.elements.push_back(e.conjugate(g));
    std::sort(out.elements.begin(), out.elements.end());
    return out;
  }

  bool is_transitive() const { return orbits().size() == 1; }

  // acts freely on each orbit that is not a single fixed point
  bool free_on_nontrivial_orbits() const {
    for (const auto& orb : orbits()) {
      if (orb.size() == 1) continue;
      for (const auto& e : elements) {
        if (e.is_identity()) continue;
        for (int x : orb)
          if (e(x) == x) return false;
      }
    }
    return true;
  }
};

// ---- small / large / robust classification (Defs of small and robust subgroups)

enum class SLTag { Small, Large, Neither };

struct SmallLargeClass {
  SLTag tag = SLTag::Neither;
  // for Neither: an invariant set X and multiplier m with k = |X| + m*|omega|
  std::optional<std::pair<std::vector<int>, int>> witness;
};

inline bool is_small(const PermSubgroup& omega) {
  if (omega.trivial()) return true;
  if (!omega.free_on_nontrivial_orbits()) return false;
  return omega.fixed_points().size() < omega.size();
}

// finds an invariant X with k = |X| + m|omega|, m > 0, if one exists
inline std::optional<std::pair<std::vector<int>, int>> large_refutation(const PermSubgroup& omega) {
  auto orbs = omega.orbits();
  int n = static_cast<int>(orbs.size());
  uint64_t sz = omega.size();
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    int total = 0;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) total += static_cast<int>(orbs[i].size());
    int rest = omega.k - total;
    if (rest > 0 && rest % static_cast<int>(sz) == 0) {
      std::vector<int> x;
      for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) x.insert(x.end(), orbs[i].begin(), orbs[i].end());
      std::sort(x.begin(), x.end());
      return std::make_pair(x, rest / static_cast<int>(sz));
    }
  }
  return std::nullopt;
}

inline SmallLargeClass classify_subgroup(const PermSubgroup& omega) {
  SmallLargeClass out;
  if (is_small(omega)) {
    out.tag = SLTag::Small;
    return out;
  }
  auto ref = large_refutation(omega);
  if (ref) {
    out.tag = SLTag::Neither;
    out.witness = ref;
  } else {
    out.tag = SLTag::Large;
  }
  return out;
}

// Index-based multiplication table of a parent group; subgroups become sorted
// index vectors and closures are table walks. Keeps full-lattice enumeration
// of groups up to |G| ~ 1000 (S6) in milliseconds.
struct GroupTable {
  int k = 0;
  std::vector<Perm> elems;      // sorted by key; index 0 is the identity
  std::vector<uint16_t> mult;   // elems[i] * elems[j] at i*n+j
  int n = 0;

  static GroupTable build(const PermSubgroup& g) {
    GroupTable t;
    t.k = g.k;
    t.elems = g.elements;
    t.n = static_cast<int>(t.elems.size());
    std::map<uint64_t, int> idx;
    for (int i = 0; i < t.n; ++i) idx[t.elems[i].key()] = i;
    t.mult.resize(static_cast<size_t>(t.n) * t.n);
    for (int i = 0; i < t.n; ++i)
      for (int j = 0; j < t.n; ++j)
        t.mult[static_cast<size_t>(i) * t.n + j] = static_cast<uint16_t>(idx.at((t.elems[i] * t.elems[j]).key()));
    return t;
  }

  std::vector<uint16_t> closure(const std::vector<uint16_t>& gens) const {
    std::vector<bool> in(n, false);
    std::vector<uint16_t> out;
    in[0] = true;
    out.push_back(0);
    std::vector<uint16_t> frontier{0};
    while (!frontier.empty()) {
      std::vector<uint16_t> next;
      for (uint16_t a : frontier)
        for (uint16_t s : gens) {
          uint16_t b = mult[static_cast<size_t>(a) * n + s];
          if (!in[b]) {
            in[b] = true;
            out.push_back(b);
            next.push_back(b);
          }
        }
      frontier = std::move(next);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

// All subgroups, by joining with cyclic subgroups.
inline std::vector<PermSubgroup> all_subgroups(const PermSubgroup& g) {
  GroupTable t = GroupTable::build(g);

  // distinct cyclic subgroups, each with one generator
  std::map<std::vector<uint16_t>, uint16_t> cyclic;
  for (uint16_t e = 1; e < t.n; ++e) {
    auto c = t.closure({e});
    cyclic.emplace(std::move(c), e);
  }

  struct Node {
    std::vector<uint16_t> members;
    std::vector<uint16_t> gens;
  };
  std::map<std::vector<uint16_t>, std::vector<uint16_t>> seen;  // members -> gens
  seen[{0}] = {};
  std::vector<Node> frontier{{{0}, {}}};
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (const auto& node : frontier)
      for (const auto& [cmem, cgen] : cyclic) {
        if (std::binary_search(node.members.begin(), node.members.end(), cgen)) continue;
        std::vector<uint16_t> gens = node.gens;
        gens.push_back(cgen);
        auto mem = t.closure(gens);
        if (!seen.count(mem)) {
          seen[mem] = gens;
          next.push_back({std::move(mem), std::move(gens)});
        }
      }
    frontier = std::move(next);
  }

  std::vector<PermSubgroup> out;
  out.reserve(seen.size());
  for (const auto& [mem, _] : seen) {
    PermSubgroup s;
    s.k = g.k;
    s.elements.reserve(mem.size());
    for (uint16_t i : mem) s.elements.push_back(t.elems[i]);
    out.push_back(std::move(s));  // t.elems sorted => s.elements sorted
  }
  return out;
}

// Robustness check. Returns a violating subgroup on failure. The cyclic test
// runs first, so giant non-robust groups (A_k, S_k for k >= 6 etc.) fail fast
// without full subgroup enumeration.
inline std::pair<bool, std::optional<PermSubgroup>> is_robust(const PermSubgroup& theta) {
  if (!theta.is_transitive()) return {false, std::nullopt};
  std::vector<const Perm*> by_order;
  for (const auto& e : theta.elements)
    if (!e.is_identity()) by_order.push_back(&e);
  std::stable_sort(by_order.begin(), by_order.end(),
                   [](const Perm* a, const Perm* b) { return a->order() < b->order(); });
  for (const Perm* e : by_order) {
    PermSubgroup c = PermSubgroup::generate(theta.k, {*e});
    if (!is_small(c)) return {false, c};
  }
  for (const auto& s : all_subgroups(theta)) {
    auto cls = classify_subgroup(s);
    if (cls.tag == SLTag::Neither) return {false, s};
  }
  return {true, std::nullopt};
}

struct NotRobust : std::runtime_error {
  NotRobust() : std::runtime_error("subgroup is not robust") {}
};

// D(Theta): conjugacy-class representatives of small subgroups, trivial class
// included, with a deterministic choice (least canonical element set) so runs
// are reproducible. gamma = stabilizer of 0.
struct RobustProfile {
  PermSubgroup theta;
  std::vector<PermSubgroup> small_reps;  // trivial first, then by (order, key)
  PermSubgroup gamma;
  bool theta_is_small = false;
};

inline RobustProfile small_reps(const PermSubgroup& theta) {
  auto [ok, bad] = is_robust(theta);
  if (!ok) throw NotRobust();
  RobustProfile prof;
  prof.theta = theta;
  prof.gamma = theta.point_stabilizer(0);
  prof.theta_is_small = is_small(theta);

  std::vector<PermSubgroup> smalls;
  for (const auto& s : all_subgroups(theta))
    if (is_small(s)) smalls.push_back(s);

  std::set<std::vector<uint64_t>> taken;
  std::vector<PermSubgroup> reps;
  std::sort(smalls.begin(), smalls.end(),
            [](const PermSubgroup& a, const PermSubgroup& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a.canonical_key() < b.canonical_key();
            });
  for (const auto& s : smalls) {
    if (taken.count(s.canonical_key())) continue;
    // mark the whole conjugacy class, keep the least member as representative
    PermSubgroup best = s;
    for (const auto& g : theta.elements) {
      PermSubgroup c = s.conjugate(g);
      taken.insert(c.canonical_key());
      if (c.canonical_key() < best.canonical_key()) best = c;
    }
    reps.push_back(best);
  }
  std::sort(reps.begin(), reps.end(), [](const PermSubgroup& a, const PermSubgroup& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.canonical_key() < b.canonical_key();
  });
  prof.small_reps = reps;
  return prof;
}

// ---- named groups

inline PermSubgroup sym_group(int k) {
  std::vector<Perm> gens;
  if (k >= 2) gens.push_back(Perm::from_cycles(k, {{0, 1}}));
  if (k >= 3) {
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i;
    gens.push_back(Perm::from_cycles(k, {c}));
  }
  return PermSubgroup::generate(k, gens);
}

inline PermSubgroup alt_group(int k) {
  std::vector<Perm> gens;
  for (int i = 0; i + 2 < k + 0; ++i)
    if (i + 2 <= k - 1) gens.push_back(Perm::from_cycles(k, {{i, i + 1, i + 2}}));
  return PermSubgroup::generate(k, gens);
}

inline PermSubgroup cyc_group(int k) {
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  return PermSubgroup::generate(k, {Perm::from_cycles(k, {c})});
}

inline PermSubgroup dih_group(int k) {
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  std::vector<int> refl(k);
  for (int i = 0; i < k; ++i) refl[i] = (k - i) % k;
  return PermSubgroup::generate(k, {Perm::from_cycles(k, {c}), Perm::from_images(refl)});
}

// ---- invariant k-set analysis (the invariant-tuples lemma)

struct BadArity : std::runtime_error {
  BadArity() : std::runtime_error("subset size does not match arity k") {}
};

// A finite action of `omega` on points {0..n-1}: table[e][x] for e indexing
// omega.elements.
struct FiniteAction {
  PermSubgroup omega;
  int n = 0;
  std::vector<std::vector<int>> table;

  int act(int elem_idx, int x) const { return table[elem_idx][x]; }
  int act(const Perm& p, int x) const {
    for (size_t i = 0; i < omega.elements.size(); ++i)
      if (omega.elements[i] == p) return table[i][x];
    throw std::invalid_argument("element not in group");
  }
  std::vector<int> group_fixed_points() const {
    std::vector<int> fp;
    for (int x = 0; x < n; ++x) {
      bool f = true;
      for (size_t e = 0; e < table.size(); ++e)
        if (table[e][x] != x) {
          f = false;
          break;
        }
      if (f) fp.push_back(x);
    }
    return fp;
  }
};

enum class InvariantKsetTag { StandardCopy, SmallWithFixedPoints, Violation };

struct InvariantKsetResult {
  InvariantKsetTag tag;
  std::vector<int> bijection;    // StandardCopy: A[i] plays the role of bijection[i] in k
  PermSubgroup stabilizer;       // SmallWithFixedPoints: the (small) setwise stabilizer
  std::string evidence;          // Violation
};

namespace detail {
// search for a bijection f: A -> {0..k-1} with f(x . w) = f(x) . w for all w
inline bool equivariant_bijection(const FiniteAction& act, const std::vector<int>& a,
                                  std::vector<int>& out) {
  int k = act.omega.k;
  if (static_cast<int>(a.size()) != k) return false;
  std::vector<int> assign(a.size(), -1);
  std::vector<bool> used(k, false);
  // backtracking with orbit propagation
  auto idx_of = [&](int pt) {
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i] == pt) return static_cast<int>(i);
    return -1;
  };
  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    while (i < a.size() && assign[i] >= 0) ++i;
    if (i == a.size()) return true;
    for (int v = 0; v < k; ++v) {
      if (used[v]) continue;
      // propagate along the whole group
      std::vector<std::pair<int, int>> placed;
      bool ok = true;
      for (size_t e = 0; e < act.omega.elements.size() && ok; ++e) {
        int src = act.act(static_cast<int>(e), a[i]);
        int tgt = act.omega.elements[e](v);
        int j = idx_of(src);
        if (j < 0) {
          ok = false;
          break;
        }
        if (assign[j] >= 0) {
          if (assign[j] != tgt) ok = false;
        } else {
          bool clash = used[tgt];
          for (auto& [jj, vv] : placed)
            if (vv == tgt && jj != j) clash = true;
          if (clash) ok = false;
          else {
            bool already = false;
            for (auto& [jj, vv] : placed)
              if (jj == j) {
                already = true;
                if (vv != tgt) ok = false;
              }
            if (!already) placed.push_back({j, tgt});
          }
        }
      }
      if (ok) {
        for (auto& [j, t] : placed) {
          assign[j] = t;
          used[t] = true;
        }
        if (rec(i + 1)) return true;
        for (auto& [j, t] : placed) {
          assign[j] = -1;
          used[t] = false;
        }
      }
    }
    return false;
  };
  if (!rec(0)) return false;
  out = assign;
  return true;
}
}  // namespace detail

inline InvariantKsetResult invariant_kset_analyze(const FiniteAction& act,
                                                  const std::vector<int>& a) {
  InvariantKsetResult res;
  int k = act.omega.k;
  if (static_cast<int>(a.size()) != k) throw BadArity();

  // hypothesis: fixed-point count matches the standard action, free elsewhere
  auto fp = act.group_fixed_points();
  auto std_fp = act.omega.fixed_points();
  if (fp.size() != std_fp.size()) {
    res.tag = InvariantKsetTag::Violation;
    res.evidence = "fixed-point count differs from the standard action";
    return res;
  }
  for (int x = 0; x < act.n; ++x) {
    bool is_fp = std::find(fp.begin(), fp.end(), x) != fp.end();
    if (is_fp) continue;
    for (size_t e = 0; e < act.table.size(); ++e)
      if (!act.omega.elements[e].is_identity() && act.table[e][x] == x) {
        res.tag = InvariantKsetTag::Violation;
        res.evidence = "action is not free off the fixed points";
        return res;
      }
  }

  // setwise stabilizer of A inside omega
  std::set<int> aset(a.begin(), a.end());
  std::vector<Perm> stab_gens;
  for (size_t e = 0; e < act.omega.elements.size(); ++e) {
    bool inv = true;
    for (int x : a)
      if (!aset.count(act.act(static_cast<int>(e), x))) {
        inv = false;
        break;
      }
    if (inv) stab_gens.push_back(act.omega.elements[e]);
  }
  PermSubgroup stab = PermSubgroup::generate(k, stab_gens);

  if (stab.size() == act.omega.size()) {
    // A invariant under the whole group: must contain all fixed points and be
    // a standard copy
    for (int f : fp)
      if (!aset.count(f)) {
        res.tag = InvariantKsetTag::Violation;
        res.evidence = "invariant k-set misses a fixed point " + std::to_string(f);
        return res;
      }
    std::vector<int> bij;
    if (detail::equivariant_bijection(act, a, bij)) {
      res.tag = InvariantKsetTag::StandardCopy;
      res.bijection = bij;
      return res;
    }
    res.tag = InvariantKsetTag::Violation;
    res.evidence = "invariant k-set carries a non-standard action";
    return res;
  }

  if (is_small(stab)) {
    // second alternative: small stabilizer whose fixed points lie in A
    for (int x = 0; x < act.n; ++x) {
      bool f = true;
      for (const auto& e : stab.elements)
        if (act.act(e, x) != x) {
          f = false;
          break;
        }
      if (f && !stab.trivial() && !aset.count(x)) {
        res.tag = InvariantKsetTag::Violation;
        res.evidence = "stabilizer fixed point outside the k-set";
        return res;
      }
    }
    res.tag = InvariantKsetTag::SmallWithFixedPoints;
    res.stabilizer = stab;
    return res;
  }

  res.tag = InvariantKsetTag::Violation;
  res.evidence = "setwise stabilizer is neither the full group nor small";
  return res;
}

}  // namespace ksharp
