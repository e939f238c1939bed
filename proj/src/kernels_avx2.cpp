// AVX2 backend: the shared kernel templates instantiated over __m256d ops.
// Compiled with -mavx2 only in this translation unit; callers go through the
// runtime dispatch in kernels.cpp.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "crsim/kernels.hpp"
#include "kernels_impl.hpp"

namespace crsim::kern {
namespace {

struct Avx2Ops {
  using vec = __m256d;
  using mask = __m256d;
  static vec bcast(double c) { return _mm256_set1_pd(c); }
  static vec add(vec a, vec b) { return _mm256_add_pd(a, b); }
  static vec sub(vec a, vec b) { return _mm256_sub_pd(a, b); }
  static vec mul(vec a, vec b) { return _mm256_mul_pd(a, b); }
  static vec div(vec a, vec b) { return _mm256_div_pd(a, b); }
  static vec neg(vec a) { return _mm256_xor_pd(a, _mm256_set1_pd(-0.0)); }
  static vec abs(vec a) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), a); }
  static vec floor(vec a) { return _mm256_floor_pd(a); }
  static vec trunc(vec a) {
    return _mm256_round_pd(a, _MM_FROUND_TO_ZERO | _MM_FROUND_NO_EXC);
  }
  static vec sqrt(vec a) { return _mm256_sqrt_pd(a); }
  static vec min(vec a, vec b) { return _mm256_min_pd(a, b); }
  static vec max(vec a, vec b) { return _mm256_max_pd(a, b); }
  static mask le(vec a, vec b) { return _mm256_cmp_pd(a, b, _CMP_LE_OQ); }
  static mask lt(vec a, vec b) { return _mm256_cmp_pd(a, b, _CMP_LT_OQ); }
  static vec select(mask m, vec a, vec b) { return _mm256_blendv_pd(b, a, m); }
  static bool all_le(vec a, double c) {
    return _mm256_movemask_pd(_mm256_cmp_pd(a, _mm256_set1_pd(c), _CMP_LE_OQ)) == 0xF;
  }
  static vec pow2i(vec n) {
    // n holds integral values well inside the int32 range
    __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_castsi256_pd(bits);
  }
  static void frexp_parts(vec x, vec& frac, vec& e) {
    __m256i bits = _mm256_castpd_si256(x);
    __m256i expo = _mm256_srli_epi64(bits, 52);
    expo = _mm256_and_si256(expo, _mm256_set1_epi64x(0x7FF));
    expo = _mm256_sub_epi64(expo, _mm256_set1_epi64x(1022));
    // exponents fit in 32 bits; convert via the packed-int32 lanes
    __m256i shuf = _mm256_shuffle_epi32(expo, _MM_SHUFFLE(2, 0, 2, 0));
    __m128i lo = _mm256_castsi256_si128(shuf);
    __m128i hi = _mm256_extracti128_si256(shuf, 1);
    __m128i packed = _mm_unpacklo_epi64(lo, hi);
    e = _mm256_cvtepi32_pd(packed);
    __m256i mant = _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL));
    mant = _mm256_or_si256(mant, _mm256_set1_epi64x(0x3FE0000000000000LL));
    frac = _mm256_castsi256_pd(mant);
  }
};

using VK = impl::Kern<Avx2Ops>;
using SK = impl::Kern<impl::ScalarOps>;

template <__m256d (*F)(__m256d), double (*S)(double)>
void run_batch(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, F(_mm256_loadu_pd(x + i)));
  }
  for (; i < n; ++i) out[i] = S(x[i]);
}

__m256d vexp(__m256d x) { return VK::exp(x); }
__m256d vphi(__m256d x) { return VK::phi(x); }
__m256d vinv(__m256d x) { return VK::inv_phi(x); }
double sexp(double x) { return SK::exp(x); }
double sphi(double x) { return SK::phi(x); }
double sinv(double x) { return SK::inv_phi(x); }

}  // namespace

namespace detail {

void exp_batch_avx2(const double* x, double* out, std::size_t n) {
  run_batch<vexp, sexp>(x, out, n);
}

void phi_batch_avx2(const double* x, double* out, std::size_t n) {
  run_batch<vphi, sphi>(x, out, n);
}

void inv_phi_batch_avx2(const double* p, double* out, std::size_t n) {
  run_batch<vinv, sinv>(p, out, n);
}

}  // namespace detail
}  // namespace crsim::kern

#endif
