#pragma once

#include <cstdint>
#include <vector>

namespace ksharp {

// splitmix64; used everywhere instead of <random> distributions so that
// seeded runs are byte-identical across platforms and standard libraries.
class Rng {
public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  uint64_t below(uint64_t n) {
    if (n <= 1) return 0;
    uint64_t threshold = (~n + 1) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  int range(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (next() & 1) != 0; }

  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

private:
  uint64_t state_;
};

}  // namespace ksharp
