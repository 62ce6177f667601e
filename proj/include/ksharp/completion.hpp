#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "ksharp/words.hpp"

namespace ksharp {

struct UnsupportedSeed : std::runtime_error {
  UnsupportedSeed() : std::runtime_error("semidirect oracle needs H = Theta") {}
};

// canonical very reduced representative; equality is form comparison
struct GroupElem {
  Word canon;
  bool is_identity() const { return canon.empty(); }
};

inline GroupElem make_elem(const CompletionGroup& g, Word w) { return {reduce(g, std::move(w))}; }
inline GroupElem elem_mul(const CompletionGroup& g, const GroupElem& a, const GroupElem& b) {
  Word w = a.canon;
  w.insert(w.end(), b.canon.begin(), b.canon.end());
  return {reduce(g, std::move(w))};
}
inline GroupElem elem_inv(const CompletionGroup& g, const GroupElem& a) {
  return {reduce(g, inverse_word(g, a.canon))};
}
inline bool elem_eq(const GroupElem& a, const GroupElem& b) {
  return words_equal(a.canon, b.canon);
}

// retraction G -> H killing every T-letter; a sanity map used by tests
inline SeedElem retract_to_seed(const CompletionGroup& g, const Word& w) {
  SeedElem h = g.seed.identity();
  for (const auto& l : w)
    if (l.is_h) h = g.seed.mul(h, l.h);
  return h;
}

// ---- the F x| Theta description for H = Theta (the free-datum remark)

struct SemidirectElem {
  // freely reduced word in the orbit alphabet: (class, gen, right-coset key, sign)
  std::vector<std::array<uint64_t, 4>> free_part;
  Perm theta;

  bool operator==(const SemidirectElem& o) const {
    return free_part == o.free_part && theta == o.theta;
  }
};

inline SemidirectElem semidirect_oracle(const CompletionGroup& g, const Word& w) {
  if (g.seed.kind != SeedKind::FiniteTheta) throw UnsupportedSeed();
  auto form = worddetail::oracle_scan(g, w);
  SemidirectElem out;
  out.theta = form.theta;
  for (const auto& fl : form.free_part)
    out.free_part.push_back({static_cast<uint64_t>(fl.cls), static_cast<uint64_t>(fl.gen),
                             fl.coset, static_cast<uint64_t>(fl.sign > 0 ? 1 : 0)});
  return out;
}

// ---- torsion classification

struct TorsionClass {
  bool infinite = false;
  Word conjugator;  // u with  a = u * h * u^{-1}  when finite
  SeedElem h;
  int theta_copy = 0;
};

inline TorsionClass torsion_classify(const CompletionGroup& g, const GroupElem& a) {
  TorsionClass out;
  out.h = g.seed.identity();
  Word w = a.canon;
  Word conj;
  size_t no_progress = 0;
  while (w.size() >= 2 && no_progress <= 2 * w.size() + 2) {
    size_t before = w.size();
    if (w.front().equals(w.back().inverse(g.seed)) || w.front().is_h) {
      Letter l = w.front();
      w.erase(w.begin());
      w.push_back(l);
      w = reduce(g, std::move(w));
      conj.push_back(l);
      if (w.size() < before) no_progress = 0;
      else ++no_progress;
      continue;
    }
    break;
  }
  for (const auto& l : w)
    if (!l.is_h) {
      out.infinite = true;
      return out;
    }
  SeedElem core = g.seed.identity();
  for (const auto& l : w) core = g.seed.mul(core, l.h);
  if (g.seed.bounded_order(core) == 0) {
    out.infinite = true;
    return out;
  }
  auto [j, c] = g.seed.locate_finite_subgroup({core});
  // a = conj * core * conj^{-1} and  core^c = h' in Theta_j, so core = c h' c^{-1}
  // and a = (conj c) h' (conj c)^{-1}
  out.theta_copy = j;
  out.h = g.seed.conj(core, c);
  out.conjugator = conj;
  if (!c.is_identity()) out.conjugator.push_back(Letter::H(c));
  out.conjugator = reduce(g, out.conjugator);
  return out;
}

}  // namespace ksharp
