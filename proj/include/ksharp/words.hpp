#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksharp/seed.hpp"

namespace ksharp {

struct BadLetters : std::runtime_error {
  BadLetters() : std::runtime_error("letters unsuitable for the small-cancellation word") {}
};
struct NotReduced : std::runtime_error {
  NotReduced() : std::runtime_error("word is not reduced") {}
};

// one commuting class T_Omega of the completion alphabet
struct TClass {
  PermSubgroup omega;
  std::string name;     // "triv", "sigma", "tau", "g4", ...
  std::string prefix;   // letter prefix in the text syntax: t, s, u, v, ...
  int n_gens = 2;
};

// The completion (G, T) of a seed group H: T = H* united with the free
// generators T_Omega, one class per representative in D(Theta), each
// commuting with its Omega.
struct CompletionGroup {
  SeedGroup seed;
  std::vector<TClass> classes;

  static CompletionGroup make(SeedGroup s, int gens_per_class = 2) {
    CompletionGroup g;
    g.seed = std::move(s);
    const auto& reps = g.seed.profile.small_reps;
    std::vector<std::string> prefixes = {"s", "u", "v", "w", "x", "y"};
    size_t next_prefix = 0;
    bool sigma_used = false, tau_used = false;
    for (const auto& rep : reps) {
      TClass c;
      c.omega = rep;
      c.n_gens = gens_per_class;
      if (rep.trivial()) {
        c.name = "triv";
        c.prefix = "t";
      } else if (rep.size() == 2 && !sigma_used) {
        c.name = "sigma";
        c.prefix = prefixes[next_prefix++];
        sigma_used = true;
      } else if (rep.size() == 3 && !tau_used) {
        c.name = "tau";
        c.prefix = prefixes[next_prefix++];
        tau_used = true;
      } else {
        c.name = "g" + std::to_string(rep.size());
        while (true) {
          bool clash = false;
          for (const auto& prev : g.classes)
            if (prev.name == c.name) clash = true;
          if (!clash) break;
          c.name += "b";
        }
        c.prefix = prefixes[next_prefix++];
      }
      g.classes.push_back(std::move(c));
    }
    return g;
  }

  int n_classes() const { return static_cast<int>(classes.size()); }
  int class_by_name(const std::string& n) const {
    for (int i = 0; i < n_classes(); ++i)
      if (classes[i].name == n) return i;
    throw std::invalid_argument("no such letter class: " + n);
  }

  // is h a member of Omega for the given class (as a subgroup of the
  // reference copy Theta_0 <= H)?
  bool omega_contains(int cls, const SeedElem& h) const {
    const PermSubgroup& om = classes[cls].omega;
    if (h.is_identity()) return true;
    if (seed.kind == SeedKind::FiniteTheta) return om.contains(h.perm);
    if (!seed.in_theta_copy(h, 0)) return false;
    return om.contains(seed.copy_to_perm(h));
  }

  // canonical representative of the left coset Omega_cls * h
  SeedElem coset_rep(int cls, const SeedElem& h) const {
    const PermSubgroup& om = classes[cls].omega;
    SeedElem best = h;
    std::string best_key = h.key();
    for (const auto& w : om.elements) {
      if (w.is_identity()) continue;
      SeedElem cand = seed.mul(seed.from_perm(w), h);
      std::string k = cand.key();
      if (k < best_key) {
        best = cand;
        best_key = k;
      }
    }
    return best;
  }
};

struct Letter {
  bool is_h = false;
  SeedElem h;      // is_h
  int16_t cls = 0; // T-letter
  int16_t gen = 0;
  int8_t sign = 1;

  static Letter H(SeedElem e) {
    Letter l;
    l.is_h = true;
    l.h = std::move(e);
    return l;
  }
  static Letter T(int cls, int gen, int sign = 1) {
    Letter l;
    l.cls = static_cast<int16_t>(cls);
    l.gen = static_cast<int16_t>(gen);
    l.sign = static_cast<int8_t>(sign);
    return l;
  }
  Letter inverse(const SeedGroup& g) const {
    Letter l = *this;
    if (is_h) l.h = g.inv(h);
    else l.sign = static_cast<int8_t>(-sign);
    return l;
  }
  bool same_t(const Letter& o) const { return !is_h && !o.is_h && cls == o.cls && gen == o.gen; }
  std::string key() const {
    if (is_h) return "h" + h.key();
    return (sign > 0 ? "+" : "-") + std::to_string(cls) + "." + std::to_string(gen);
  }
  bool equals(const Letter& o) const {
    if (is_h != o.is_h) return false;
    if (is_h) return h == o.h;
    return cls == o.cls && gen == o.gen && sign == o.sign;
  }
};

using Word = std::vector<Letter>;

inline Word inverse_word(const CompletionGroup& g, const Word& w) {
  Word out;
  out.reserve(w.size());
  for (size_t i = w.size(); i-- > 0;) out.push_back(w[i].inverse(g.seed));
  return out;
}

namespace worddetail {

inline uint64_t coset_key(const PermSubgroup& om, const Perm& th) {
  uint64_t best = ~0ull;
  for (const auto& w : om.elements) {
    uint64_t k = (w * th).key();
    if (k < best) best = k;
  }
  return best;
}

// scan of a word in the F x| Theta description (H = Theta only): the letter
// t^e read through the theta-prefix carries the right coset Omega * theta^{-1}
struct OracleForm {
  struct FLetter {
    int16_t cls, gen;
    uint64_t coset;
    int8_t sign;
    bool operator==(const FLetter& o) const {
      return cls == o.cls && gen == o.gen && coset == o.coset && sign == o.sign;
    }
  };
  std::vector<FLetter> free_part;
  Perm theta;
  bool operator==(const OracleForm& o) const {
    return free_part == o.free_part && theta == o.theta;
  }
};

inline OracleForm oracle_scan(const CompletionGroup& g, const Word& w) {
  OracleForm out;
  out.theta = Perm(g.seed.profile.theta.k);
  for (const auto& l : w) {
    if (l.is_h) {
      out.theta = out.theta * l.h.perm;
      continue;
    }
    OracleForm::FLetter fl{l.cls, l.gen,
                           coset_key(g.classes[l.cls].omega, out.theta.inverse()), l.sign};
    if (!out.free_part.empty()) {
      const auto& last = out.free_part.back();
      if (last.cls == fl.cls && last.gen == fl.gen && last.coset == fl.coset &&
          last.sign == -fl.sign) {
        out.free_part.pop_back();
        continue;
      }
    }
    out.free_part.push_back(fl);
  }
  return out;
}

// Deterministic unparse of an oracle form into the canonical flat word: a DP
// over the Theta-prefix choosing where H-letters sit, minimizing the letter
// count, preferring no trailing correction, then the least spelling.
inline Word canonical_finite(const CompletionGroup& g, const OracleForm& o) {
  const auto& theta_elems = g.seed.profile.theta.elements;
  int k = g.seed.profile.theta.k;
  size_t m = o.free_part.size();
  if (m == 0) {
    Word out;
    if (!o.theta.is_identity()) out.push_back(Letter::H(SeedElem{true, o.theta, {}}));
    return out;
  }
  struct Node {
    uint32_t cost = ~0u;
    std::string sig;
    int prev = -1;   // state index in previous slot
    Perm x;          // emitted H-letter before this slot's T-letter (may be id)
  };
  // states per slot: theta-prefixes compatible with the recorded coset
  std::vector<std::vector<Perm>> states(m);
  for (size_t i = 0; i < m; ++i) {
    const auto& om = g.classes[o.free_part[i].cls].omega;
    for (const auto& th : theta_elems)
      if (coset_key(om, th.inverse()) == o.free_part[i].coset) states[i].push_back(th);
  }
  std::vector<std::vector<Node>> dp(m);
  for (size_t i = 0; i < m; ++i) dp[i].resize(states[i].size());
  for (size_t si = 0; si < states[0].size(); ++si) {
    Perm x = states[0][si];  // theta_prev = identity
    Node& n = dp[0][si];
    n.cost = x.is_identity() ? 0 : 1;
    n.sig = x.is_identity() ? std::string() : std::to_string(x.key()) + ",";
    n.prev = -1;
    n.x = x;
  }
  for (size_t i = 1; i < m; ++i)
    for (size_t si = 0; si < states[i].size(); ++si) {
      Node& n = dp[i][si];
      for (size_t pj = 0; pj < states[i - 1].size(); ++pj) {
        const Node& p = dp[i - 1][pj];
        if (p.cost == ~0u) continue;
        Perm x = states[i - 1][pj].inverse() * states[i][si];
        uint32_t c = p.cost + (x.is_identity() ? 0 : 1);
        std::string sig = p.sig + (x.is_identity() ? std::string() : std::to_string(x.key()) + ",");
        if (c < n.cost || (c == n.cost && sig < n.sig)) {
          n.cost = c;
          n.sig = std::move(sig);
          n.prev = static_cast<int>(pj);
          n.x = x;
        }
      }
    }
  // pick the best end state including the trailing correction
  int best = -1;
  uint32_t best_cost = ~0u;
  int best_trail = 2;
  std::string best_sig;
  for (size_t si = 0; si < states[m - 1].size(); ++si) {
    const Node& n = dp[m - 1][si];
    if (n.cost == ~0u) continue;
    Perm z = states[m - 1][si].inverse() * o.theta;
    uint32_t c = n.cost + (z.is_identity() ? 0 : 1);
    int trail = z.is_identity() ? 0 : 1;
    std::string sig = n.sig + (z.is_identity() ? std::string() : std::to_string(z.key()) + ",");
    if (c < best_cost || (c == best_cost && trail < best_trail) ||
        (c == best_cost && trail == best_trail && sig < best_sig)) {
      best_cost = c;
      best_trail = trail;
      best_sig = std::move(sig);
      best = static_cast<int>(si);
    }
  }
  // reconstruct
  std::vector<Perm> xs(m);
  int cur = best;
  for (size_t i = m; i-- > 0;) {
    xs[i] = dp[i][cur].x;
    cur = dp[i][cur].prev;
  }
  Word out;
  Perm prefix(k);
  for (size_t i = 0; i < m; ++i) {
    if (!xs[i].is_identity()) {
      SeedElem h;
      h.perm = xs[i];
      out.push_back(Letter::H(h));
      prefix = prefix * xs[i];
    }
    out.push_back(Letter::T(o.free_part[i].cls, o.free_part[i].gen, o.free_part[i].sign));
  }
  Perm z = prefix.inverse() * o.theta;
  if (!z.is_identity()) {
    SeedElem h;
    h.perm = z;
    out.push_back(Letter::H(h));
  }
  return out;
}

}  // namespace worddetail

// Canonical very reduced form. For H = Theta the form is computed through the
// exact F x| Theta normal form, which makes it canonical outright. For S3-seed
// completions (no semidirect description) a rewriting fixpoint is used:
//   (abc) drop identity H-letters, merge adjacent H-letters, cancel t t^{-1};
//   (e)   meets: H-letters merging through commuting corridors;
//   (f)   Britton-style coset normalization into the preceding H-letter;
//   (d)   whole H-letters commute leftward past T-letters (move (i)).
inline Word reduce(const CompletionGroup& g, Word w) {
  bool has_h = false;
  for (const auto& l : w)
    if (l.is_h) {
      has_h = true;
      break;
    }
  if (!has_h) {  // free reduction suffices and is already canonical
    Word out;
    for (const auto& l : w) {
      if (!out.empty() && out.back().same_t(l) && out.back().sign == -l.sign) out.pop_back();
      else out.push_back(l);
    }
    return out;
  }
  if (g.seed.kind == SeedKind::FiniteTheta)
    return worddetail::canonical_finite(g, worddetail::oracle_scan(g, w));

  auto local_abc = [&g](Word& v) {
    size_t i = 0;
    while (i < v.size()) {
      if (v[i].is_h && v[i].h.is_identity()) {
        v.erase(v.begin() + i);
        i = (i == 0) ? 0 : i - 1;
        continue;
      }
      if (i + 1 < v.size()) {
        Letter& a = v[i];
        Letter& b = v[i + 1];
        if (a.is_h && b.is_h) {
          a.h = g.seed.mul(a.h, b.h);
          v.erase(v.begin() + i + 1);
          i = (i == 0) ? 0 : i - 1;
          continue;
        }
        if (a.same_t(b) && a.sign == -b.sign) {
          v.erase(v.begin() + i, v.begin() + i + 2);
          i = (i == 0) ? 0 : i - 1;
          continue;
        }
      }
      ++i;
    }
  };

  for (;;) {
    local_abc(w);

    // (e) meets: two H-letters with only T-letters between them merge when the
    // left one can float rightward and the right one leftward into a common
    // slot, each crossing only T-letters it commutes with.
    bool merged = false;
    for (size_t p1 = 0; p1 < w.size() && !merged; ++p1) {
      if (!w[p1].is_h) continue;
      size_t p2 = p1 + 1;
      while (p2 < w.size() && !w[p2].is_h) ++p2;
      if (p2 >= w.size()) break;
      size_t r1 = p1;  // h1 may sit right after w[r1]
      while (r1 + 1 < p2 && g.omega_contains(w[r1 + 1].cls, w[p1].h)) ++r1;
      size_t l2 = p2;  // h2 may sit right before w[l2]
      while (l2 > p1 + 1 && g.omega_contains(w[l2 - 1].cls, w[p2].h)) --l2;
      if (l2 <= r1 + 1) {
        size_t slot = l2;  // merged letter lands right before the old w[slot]
        SeedElem prod = g.seed.mul(w[p1].h, w[p2].h);
        w.erase(w.begin() + p2);
        w.erase(w.begin() + p1);
        w.insert(w.begin() + (slot - 1), Letter::H(prod));
        merged = true;
      }
    }
    if (merged) continue;

    // (f) corridor coset normalization, right to left: for (.. h0 u h ..) with
    // u a T-run, the words (.. h0*om u om^{-1}*h ..) are equivalent for om in
    // the intersection of the classes crossed by u; canonicalize h to the
    // least representative of its orbit, absorbing the quotient into h0.
    bool changed = false;
    for (int p = static_cast<int>(w.size()) - 1; p >= 0; --p) {
      if (!w[p].is_h || p == 0 || w[p - 1].is_h) continue;
      std::vector<Perm> shuffle = g.classes[w[p - 1].cls].omega.elements;
      int j = p - 1;
      int absorber = -1;
      while (j >= 0 && shuffle.size() > 1) {
        if (w[j].is_h) {
          absorber = j;
          break;
        }
        const PermSubgroup& om = g.classes[w[j].cls].omega;
        std::vector<Perm> narrowed;
        for (const auto& e : shuffle)
          if (om.contains(e)) narrowed.push_back(e);
        shuffle = std::move(narrowed);
        --j;
      }
      if (absorber < 0 || shuffle.size() <= 1) continue;
      SeedElem h = w[p].h;
      SeedElem rep = h;
      std::string best_key = h.key();
      for (const auto& e : shuffle) {
        SeedElem cand = g.seed.mul(g.seed.from_perm(e), h);
        std::string k = cand.key();
        if (k < best_key) {
          rep = cand;
          best_key = k;
        }
      }
      if (rep == h) continue;
      SeedElem om = g.seed.mul(h, g.seed.inv(rep));
      changed = true;
      w[absorber].h = g.seed.mul(w[absorber].h, om);
      w[p].h = rep;  // rep is never the identity here: that would be a meet
    }
    if (changed) continue;

    // (d) position canonicalization: whole H-letters move leftward past
    // T-letters they commute with.
    bool swapped = false;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      if (!w[i].is_h && w[i + 1].is_h && g.omega_contains(w[i].cls, w[i + 1].h)) {
        std::swap(w[i], w[i + 1]);
        swapped = true;
        break;
      }
    }
    if (!swapped) break;
  }
  return w;
}

inline bool words_equal(const Word& a, const Word& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!a[i].equals(b[i])) return false;
  return true;
}

inline bool is_reduced(const CompletionGroup& g, const Word& w) {
  return words_equal(w, reduce(g, w));
}

// ---- cancellation measurement (Def. of bounded cancellation)

struct CancellationReport {
  int bound = 0;
  int i = -1, j = -1, i2 = -1, j2 = -1;  // the two occurrences, 0-based inclusive
  int eps = 1;
};

inline CancellationReport cancellation_bound(const CompletionGroup& g, const Word& w) {
  if (!is_reduced(g, w)) throw NotReduced();
  int n = static_cast<int>(w.size());
  CancellationReport rep;
  if (n == 0) return rep;
  std::vector<std::string> keys(n);
  for (int i = 0; i < n; ++i) keys[i] = w[i].key();
  Word winv = inverse_word(g, w);
  std::vector<std::string> ikeys(n);
  for (int i = 0; i < n; ++i) ikeys[i] = winv[i].key();

  // eps = +1: common prefixes of suffix pairs, distinct start positions
  {
    std::vector<std::vector<int16_t>> lcp(n + 1, std::vector<int16_t>(n + 1, 0));
    for (int i = n - 1; i >= 0; --i)
      for (int j = n - 1; j >= 0; --j)
        if (keys[i] == keys[j])
          lcp[i][j] = static_cast<int16_t>(1 + lcp[i + 1][j + 1]);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (lcp[i][j] > rep.bound) {
          rep.bound = lcp[i][j];
          rep.i = i;
          rep.j = i + rep.bound - 1;
          rep.i2 = j;
          rep.j2 = j + rep.bound - 1;
          rep.eps = 1;
        }
  }
  // eps = -1: w[i:...] vs w^{-1}[j:...], all position pairs
  {
    std::vector<std::vector<int16_t>> lcp(n + 1, std::vector<int16_t>(n + 1, 0));
    for (int i = n - 1; i >= 0; --i)
      for (int j = n - 1; j >= 0; --j)
        if (keys[i] == ikeys[j])
          lcp[i][j] = static_cast<int16_t>(1 + lcp[i + 1][j + 1]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (lcp[i][j] > rep.bound) {
          rep.bound = lcp[i][j];
          rep.i = i;
          rep.j = i + rep.bound - 1;
          rep.i2 = j;
          rep.j2 = j + rep.bound - 1;
          rep.eps = -1;
        }
  }
  return rep;
}

// w = s t^{2N+1} s t^{2N+2} ... s t^{5N}; |w| = N(21N+9)/2, cancellation
// bounded by L = 10N-2.
inline std::pair<Word, int> gen_small_cancellation(const CompletionGroup& g, const Letter& s,
                                                   const Letter& t, int N) {
  if (s.is_h || t.is_h || s.cls != t.cls || (s.gen == t.gen) || s.sign != 1 || t.sign != 1 ||
      N < 1)
    throw BadLetters();
  (void)g;
  Word w;
  for (int block = 2 * N + 1; block <= 5 * N; ++block) {
    w.push_back(s);
    for (int i = 0; i < block; ++i) w.push_back(t);
  }
  return {w, 10 * N - 2};
}

// ---- conjugation decomposition (the conjugation lemma)

struct ConjDecomposition {
  Word w1, w0;
  SeedElem h_prime;
};

inline ConjDecomposition conjugation_decompose(const CompletionGroup& g, const Word& w,
                                               const SeedElem& h0) {
  ConjDecomposition out;
  out.h_prime = h0;
  size_t i = 0;
  for (; i < w.size(); ++i) {
    if (w[i].is_h) {
      out.h_prime = g.seed.conj(out.h_prime, w[i].h);
      out.w1.push_back(w[i]);
    } else if (g.omega_contains(w[i].cls, out.h_prime)) {
      out.w1.push_back(w[i]);
    } else {
      break;
    }
  }
  out.w0.assign(w.begin() + i, w.end());
  return out;
}

// ---- word text syntax: whitespace-separated tokens, e.g. "s0 w:(012) s1^-1"

inline std::string compact_cycles(const Perm& p) {
  std::string s;
  std::vector<bool> used(p.k(), false);
  for (int i = 0; i < p.k(); ++i) {
    if (used[i] || p(i) == i) continue;
    s += '(';
    int j = i;
    while (!used[j]) {
      used[j] = true;
      s += static_cast<char>('0' + j);
      j = p(j);
    }
    s += ')';
  }
  return s.empty() ? "()" : s;
}

inline std::string letter_to_string(const CompletionGroup& g, const Letter& l) {
  if (l.is_h) {
    if (g.seed.kind == SeedKind::FiniteTheta) return "w:" + compact_cycles(l.h.perm);
    return "w:" + g.seed.to_tokens(l.h);
  }
  std::string s = g.classes[l.cls].prefix + std::to_string(l.gen);
  if (l.sign < 0) s += "^-1";
  return s;
}

inline std::string word_to_string(const CompletionGroup& g, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += letter_to_string(g, w[i]);
  }
  return s;
}

inline Word parse_word(const CompletionGroup& g, const std::string& text) {
  Word out;
  std::stringstream ss(text);
  std::string tok;
  while (ss >> tok) {
    if (tok == "1") continue;
    if (tok.rfind("w:", 0) == 0) {
      std::string payload = tok.substr(2);
      if (g.seed.kind == SeedKind::FiniteTheta) {
        // cycle notation with single-digit points, e.g. (012)(34); () = identity
        int k = g.seed.profile.theta.k;
        std::vector<std::vector<int>> cycles;
        std::vector<int> cur;
        bool open = false;
        for (char c : payload) {
          if (c == '(') {
            open = true;
            cur.clear();
          } else if (c == ')') {
            if (!cur.empty()) cycles.push_back(cur);
            open = false;
          } else if (c >= '0' && c <= '9' && open) {
            cur.push_back(c - '0');
          } else if (c == ' ') {
          } else {
            throw std::invalid_argument("bad H-letter payload: " + payload);
          }
        }
        out.push_back(Letter::H(g.seed.from_perm(Perm::from_cycles(k, cycles))));
      } else {
        out.push_back(Letter::H(g.seed.from_tokens(payload)));
      }
      continue;
    }
    int sign = 1;
    std::string core = tok;
    if (core.size() > 3 && core.substr(core.size() - 3) == "^-1") {
      sign = -1;
      core = core.substr(0, core.size() - 3);
    }
    bool matched = false;
    for (int c = 0; c < g.n_classes(); ++c) {
      const auto& pref = g.classes[c].prefix;
      if (core.rfind(pref, 0) == 0 && core.size() > pref.size()) {
        int gen = std::stoi(core.substr(pref.size()));
        if (gen < 0 || gen >= g.classes[c].n_gens)
          throw std::invalid_argument("generator index out of range: " + tok);
        out.push_back(Letter::T(c, gen, sign));
        matched = true;
        break;
      }
    }
    if (!matched) throw std::invalid_argument("bad word token: " + tok);
  }
  return out;
}

}  // namespace ksharp
