#pragma once

#include <cstdint>
#include <numeric>

namespace crsim {

// Exact rational with positive denominator.  Combined scores and tie-break
// metadata use these so that equality at the acceptance boundary is exact;
// comparisons cross-multiply in 128 bits and never touch floating point.
struct Rat {
  long long num{0};
  long long den{1};

  static Rat of(long long n, long long d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    return g > 1 ? Rat{n / g, d / g} : Rat{n, d};
  }

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rat& a, const Rat& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
  friend auto operator<=>(const Rat& a, const Rat& b) {
    const __int128 l = static_cast<__int128>(a.num) * b.den;
    const __int128 r = static_cast<__int128>(b.num) * a.den;
    return l <=> r;
  }
};

// three-way compare of raw (num, den>0) pairs without normalization
inline int rat_cmp(long long an, long long ad, long long bn, long long bd) {
  const __int128 l = static_cast<__int128>(an) * bd;
  const __int128 r = static_cast<__int128>(bn) * ad;
  return l < r ? -1 : (l > r ? 1 : 0);
}

}  // namespace crsim
