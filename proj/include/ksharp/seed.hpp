#pragma once

#include <cstdint>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksharp/perm.hpp"

namespace ksharp {

struct BackendMismatch : std::runtime_error {
  BackendMismatch() : std::runtime_error("seed elements belong to different groups") {}
};
struct IndexOutOfRange : std::runtime_error {
  IndexOutOfRange() : std::runtime_error("copy index out of range") {}
};
struct NotFinite : std::runtime_error {
  NotFinite() : std::runtime_error("element fails the bounded-order check") {}
};

// Element of H0 = S3 *_<tau> S3 *_<tau> ... (m copies, amalgamated over <tau>),
// written as tau^tpow * sigma_{i1}...sigma_{ir}. H0 = C3 x| (C2 * ... * C2),
// each sigma_i inverting tau, so refl is a reduced word in the free product of
// involutions (no equal adjacent letters).
struct H0Elem {
  int8_t tpow = 0;
  std::vector<uint8_t> refl;

  bool is_identity() const { return tpow == 0 && refl.empty(); }
  int sign() const { return (refl.size() % 2 == 0) ? 1 : -1; }

  static H0Elem tau(int a) {
    H0Elem e;
    e.tpow = static_cast<int8_t>(((a % 3) + 3) % 3);
    return e;
  }
  static H0Elem sigma(int i) {
    H0Elem e;
    e.refl.push_back(static_cast<uint8_t>(i));
    return e;
  }

  H0Elem operator*(const H0Elem& o) const {
    H0Elem r;
    r.tpow = static_cast<int8_t>((((tpow + sign() * o.tpow) % 3) + 3) % 3);
    r.refl = refl;
    for (uint8_t c : o.refl) {
      if (!r.refl.empty() && r.refl.back() == c) r.refl.pop_back();
      else r.refl.push_back(c);
    }
    return r;
  }
  H0Elem inverse() const {
    H0Elem r;
    r.tpow = static_cast<int8_t>((((-tpow * sign()) % 3) + 3) % 3);
    r.refl.assign(refl.rbegin(), refl.rend());
    return r;
  }
  bool operator==(const H0Elem& o) const { return tpow == o.tpow && refl == o.refl; }
  bool operator<(const H0Elem& o) const {
    if (tpow != o.tpow) return tpow < o.tpow;
    return refl < o.refl;
  }
};

// Britton normal form over the iterated HNN extension
//   H = < H0, z_1..z_{m-1} | z_j^{-1} sigma_0 z_j = sigma_j >.
struct S3Syllable {
  uint8_t j = 0;  // stable letter index, 1-based
  int8_t e = 0;   // +1 or -1
  H0Elem h;       // the H0 part following the letter
};

struct S3Elem {
  H0Elem head;
  std::vector<S3Syllable> tail;

  bool is_identity() const { return head.is_identity() && tail.empty(); }
  bool operator==(const S3Elem& o) const {
    if (!(head == o.head) || tail.size() != o.tail.size()) return false;
    for (size_t i = 0; i < tail.size(); ++i)
      if (tail[i].j != o.tail[i].j || tail[i].e != o.tail[i].e || !(tail[i].h == o.tail[i].h))
        return false;
    return true;
  }
};

namespace s3detail {

inline bool in_sigma0(const H0Elem& h, int* d) {
  if (h.is_identity()) { *d = 0; return true; }
  if (h.tpow == 0 && h.refl.size() == 1 && h.refl[0] == 0) { *d = 1; return true; }
  return false;
}
inline bool in_sigma_j(const H0Elem& h, int j, int* d) {
  if (h.is_identity()) { *d = 0; return true; }
  if (h.tpow == 0 && h.refl.size() == 1 && h.refl[0] == j) { *d = 1; return true; }
  return false;
}

// Britton reduction followed by pushing edge-group cosets rightward through the
// stable letters, which makes the form canonical.
inline S3Elem normalize(H0Elem head, std::vector<S3Syllable> tail) {
  // Britton pinches
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < tail.size(); ++i) {
      if (tail[i].j != tail[i + 1].j || tail[i].e != -tail[i + 1].e) continue;
      int d = 0;
      int j = tail[i].j;
      bool pinch = (tail[i].e == -1) ? in_sigma0(tail[i].h, &d) : in_sigma_j(tail[i].h, j, &d);
      if (!pinch) continue;
      // z_j^{-1} sigma0^d z_j -> sigma_j^d ; z_j sigma_j^d z_j^{-1} -> sigma0^d
      H0Elem crossed = (tail[i].e == -1) ? (d ? H0Elem::sigma(j) : H0Elem())
                                         : (d ? H0Elem::sigma(0) : H0Elem());
      H0Elem merged = crossed * tail[i + 1].h;
      if (i == 0) head = head * merged;
      else tail[i - 1].h = tail[i - 1].h * merged;
      tail.erase(tail.begin() + i, tail.begin() + i + 2);
      changed = true;
      break;
    }
  }
  // canonical coset representatives: for  h z_j  pick the least of {h, h*sigma0}
  // and push the quotient through as sigma_j; symmetrically for z_j^{-1}.
  H0Elem* left = &head;
  for (size_t i = 0; i < tail.size(); ++i) {
    int j = tail[i].j;
    if (tail[i].e == 1) {
      H0Elem alt = *left * H0Elem::sigma(0);
      if (alt < *left) {
        *left = alt;
        tail[i].h = H0Elem::sigma(j) * tail[i].h;
      }
    } else {
      H0Elem alt = *left * H0Elem::sigma(static_cast<int>(j));
      if (alt < *left) {
        *left = alt;
        tail[i].h = H0Elem::sigma(0) * tail[i].h;
      }
    }
    left = &tail[i].h;
  }
  return {head, tail};
}

inline S3Elem mul(const S3Elem& a, const S3Elem& b) {
  H0Elem head = a.head;
  std::vector<S3Syllable> tail = a.tail;
  if (tail.empty()) head = head * b.head;
  else tail.back().h = tail.back().h * b.head;
  tail.insert(tail.end(), b.tail.begin(), b.tail.end());
  return normalize(head, tail);
}

inline S3Elem inv(const S3Elem& a) {
  // (h0 z1 h1 ... zn hn)^{-1} = hn^{-1} zn^{-1} ... z1^{-1} h0^{-1}
  H0Elem head = a.tail.empty() ? a.head.inverse() : a.tail.back().h.inverse();
  std::vector<S3Syllable> tail;
  for (size_t i = a.tail.size(); i-- > 0;) {
    S3Syllable s;
    s.j = a.tail[i].j;
    s.e = static_cast<int8_t>(-a.tail[i].e);
    s.h = (i == 0) ? a.head.inverse() : a.tail[i - 1].h.inverse();
    tail.push_back(s);
  }
  return normalize(head, tail);
}

}  // namespace s3detail

// An element of a seed group H: either a permutation (H = Theta finite) or a
// Britton-canonical word in the standard (S3,m)-seed group.
struct SeedElem {
  bool finite = true;
  Perm perm;    // finite case
  S3Elem word;  // S3-seed case

  bool is_identity() const { return finite ? perm.is_identity() : word.is_identity(); }
  bool operator==(const SeedElem& o) const {
    if (finite != o.finite) return false;
    return finite ? perm == o.perm : word == o.word;
  }
  std::string key() const {
    if (finite) return std::string("p") + std::to_string(perm.key());
    std::string s = "w";
    auto emit_h0 = [&s](const H0Elem& h) {
      s += 't';
      s += static_cast<char>('0' + h.tpow);
      for (uint8_t c : h.refl) {
        s += 's';
        s += std::to_string(static_cast<int>(c));
      }
    };
    emit_h0(word.head);
    for (const auto& syl : word.tail) {
      s += (syl.e > 0) ? 'z' : 'Z';
      s += std::to_string(static_cast<int>(syl.j));
      emit_h0(syl.h);
    }
    return s;
  }
  bool operator<(const SeedElem& o) const { return key() < o.key(); }
};

enum class SeedKind { FiniteTheta, S3Seed };

struct SeedGroup {
  SeedKind kind = SeedKind::FiniteTheta;
  int m = 1;
  RobustProfile profile;  // of Theta; for S3Seed this is the S3 profile

  static SeedGroup finite_theta(RobustProfile prof) {
    SeedGroup g;
    g.kind = SeedKind::FiniteTheta;
    g.m = 1;
    g.profile = std::move(prof);
    return g;
  }
  static SeedGroup s3_seed(int m) {
    if (m < 1) throw IndexOutOfRange();
    SeedGroup g;
    g.kind = SeedKind::S3Seed;
    g.m = m;
    g.profile = small_reps(sym_group(3));
    return g;
  }

  SeedElem identity() const {
    SeedElem e;
    e.finite = (kind == SeedKind::FiniteTheta);
    if (e.finite) e.perm = Perm(profile.theta.k);
    return e;
  }
  SeedElem from_perm(const Perm& p) const {
    if (kind == SeedKind::FiniteTheta) {
      if (!profile.theta.contains(p)) throw std::invalid_argument("not an element of Theta");
      SeedElem e;
      e.perm = p;
      return e;
    }
    return iota(0, p);
  }
  SeedElem from_h0(const H0Elem& h) const {
    SeedElem e;
    e.finite = false;
    e.word.head = h;
    return e;
  }
  SeedElem stable_letter(int j, int e) const {
    if (kind != SeedKind::S3Seed || j < 1 || j >= m) throw IndexOutOfRange();
    SeedElem out;
    out.finite = false;
    out.word.tail.push_back({static_cast<uint8_t>(j), static_cast<int8_t>(e), H0Elem()});
    return out;
  }

  SeedElem mul(const SeedElem& a, const SeedElem& b) const {
    if (a.finite != b.finite) throw BackendMismatch();
    SeedElem r;
    r.finite = a.finite;
    if (a.finite) r.perm = a.perm * b.perm;
    else r.word = s3detail::mul(a.word, b.word);
    return r;
  }
  SeedElem inv(const SeedElem& a) const {
    SeedElem r;
    r.finite = a.finite;
    if (a.finite) r.perm = a.perm.inverse();
    else r.word = s3detail::inv(a.word);
    return r;
  }
  SeedElem conj(const SeedElem& a, const SeedElem& c) const {  // a^c = c^{-1} a c
    return mul(mul(inv(c), a), c);
  }
  bool eq(const SeedElem& a, const SeedElem& b) const {
    if (a.finite != b.finite) throw BackendMismatch();
    return a == b;
  }

  // iota_j: Theta -> H. For the S3 seed, (1 2) -> sigma^{z_j} and (0 1 2) -> tau.
  SeedElem iota(int j, const Perm& theta) const {
    if (kind == SeedKind::FiniteTheta) {
      if (j != 0) throw IndexOutOfRange();
      if (!profile.theta.contains(theta)) throw std::invalid_argument("not in Theta");
      SeedElem e;
      e.perm = theta;
      return e;
    }
    if (j < 0 || j >= m) throw IndexOutOfRange();
    Perm tau = Perm::from_cycles(3, {{0, 1, 2}});
    Perm sig = Perm::from_cycles(3, {{1, 2}});
    for (int a = 0; a < 3; ++a)
      for (int d = 0; d < 2; ++d) {
        Perm cand(3);
        for (int i = 0; i < a; ++i) cand = cand * tau;
        if (d) cand = cand * sig;
        if (cand == theta) {
          SeedElem e;
          e.finite = false;
          e.word.head = H0Elem::tau(a);
          if (d) e.word.head = e.word.head * H0Elem::sigma(j);
          return e;
        }
      }
    throw std::invalid_argument("not an element of S3");
  }

  // order if it is <= cap, else 0
  int bounded_order(const SeedElem& a, int cap = 6) const {
    SeedElem p = a;
    for (int n = 1; n <= cap; ++n) {
      if (p.is_identity()) return n;
      p = mul(p, a);
    }
    return 0;
  }

  // member of Theta_j = <sigma_j, tau>? (all Theta_j live inside H0)
  bool in_theta_copy(const SeedElem& a, int j) const {
    if (kind == SeedKind::FiniteTheta) return j == 0;
    if (!a.word.tail.empty()) return false;
    const auto& r = a.word.head.refl;
    return r.empty() || (r.size() == 1 && r[0] == j);
  }
  // for an element of some Theta_j, the corresponding permutation of k=3
  Perm copy_to_perm(const SeedElem& a) const {
    if (kind == SeedKind::FiniteTheta) return a.perm;
    Perm tau = Perm::from_cycles(3, {{0, 1, 2}});
    Perm sig = Perm::from_cycles(3, {{1, 2}});
    Perm out(3);
    for (int i = 0; i < a.word.head.tpow; ++i) out = out * tau;
    if (!a.word.head.refl.empty()) out = out * sig;
    return out;
  }

  // Def. of a seed group, (i): every finite subgroup is conjugate into some
  // Theta_j. Searches Britton-normal conjugators breadth-first.
  std::pair<int, SeedElem> locate_finite_subgroup(const std::vector<SeedElem>& elems,
                                                  int depth = 5) const {
    if (kind == SeedKind::FiniteTheta) return {0, identity()};
    for (const auto& e : elems)
      if (bounded_order(e) == 0) throw NotFinite();

    std::vector<SeedElem> gens;
    gens.push_back(from_h0(H0Elem::sigma(0)));
    gens.push_back(from_h0(H0Elem::tau(1)));
    gens.push_back(from_h0(H0Elem::tau(2)));
    for (int j = 1; j < m; ++j) {
      gens.push_back(stable_letter(j, 1));
      gens.push_back(stable_letter(j, -1));
    }
    std::set<std::string> seen;
    std::vector<SeedElem> frontier{identity()};
    seen.insert(identity().key());
    for (int d = 0; d <= depth; ++d) {
      for (const auto& c : frontier) {
        for (int j = 0; j < m; ++j) {
          bool all = true;
          for (const auto& e : elems)
            if (!in_theta_copy(conj(e, c), j)) {
              all = false;
              break;
            }
          if (all) return {j, c};
        }
      }
      if (d == depth) break;
      std::vector<SeedElem> next;
      for (const auto& c : frontier)
        for (const auto& g : gens) {
          SeedElem cg = mul(c, g);
          if (seen.insert(cg.key()).second) next.push_back(cg);
        }
      frontier = std::move(next);
    }
    throw NotFinite();
  }

  // token serialization: s, t, t2, zj, Zj; sigma_j spelled Zj.s.zj
  std::string to_tokens(const SeedElem& a) const {
    if (kind == SeedKind::FiniteTheta) return a.perm.cycle_string();
    std::vector<std::string> toks;
    auto emit_h0 = [&toks](const H0Elem& h) {
      if (h.tpow == 1) toks.push_back("t");
      if (h.tpow == 2) toks.push_back("t2");
      for (uint8_t c : h.refl) {
        if (c == 0) toks.push_back("s");
        else {
          toks.push_back("Z" + std::to_string(static_cast<int>(c)));
          toks.push_back("s");
          toks.push_back("z" + std::to_string(static_cast<int>(c)));
        }
      }
    };
    emit_h0(a.word.head);
    for (const auto& syl : a.word.tail) {
      toks.push_back((syl.e > 0 ? "z" : "Z") + std::to_string(static_cast<int>(syl.j)));
      emit_h0(syl.h);
    }
    if (toks.empty()) return "1";
    std::string s = toks[0];
    for (size_t i = 1; i < toks.size(); ++i) s += "." + toks[i];
    return s;
  }
  SeedElem from_tokens(const std::string& str) const {
    if (kind == SeedKind::FiniteTheta) throw std::invalid_argument("tokens are for S3 seeds");
    SeedElem out = identity();
    if (str == "1" || str.empty()) return out;
    std::stringstream ss(str);
    std::string tok;
    while (std::getline(ss, tok, '.')) {
      SeedElem g = identity();
      if (tok == "s") g = from_h0(H0Elem::sigma(0));
      else if (tok == "t") g = from_h0(H0Elem::tau(1));
      else if (tok == "t2") g = from_h0(H0Elem::tau(2));
      else if (tok.size() >= 2 && (tok[0] == 'z' || tok[0] == 'Z'))
        g = stable_letter(std::stoi(tok.substr(1)), tok[0] == 'z' ? 1 : -1);
      else throw std::invalid_argument("bad seed token: " + tok);
      out = mul(out, g);
    }
    return out;
  }
};

}  // namespace ksharp
