// AVX2/FMA versions of the pair-sum inner loops. Built with -mavx2 -mfma and
// only reached after a runtime CPU check.

#include "nlpl/simd/pair_kernels.hpp"

#include <immintrin.h>

#include <cfloat>
#include <cmath>
#include <cstdint>

namespace nlpl::simd {

namespace {

// Natural log for positive normal lanes; Cephes rational approximation on
// the mantissa reduced to [sqrt(1/2), sqrt(2)).
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  // Biased exponent as a double: splice it into the mantissa of 2^52.
  const __m256i biased = _mm256_srli_epi64(bits, 52);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);  // 2^52
  __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(biased, _mm256_castpd_si256(magic))), magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));  // [0.5, 1)

  const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d small = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
  e = _mm256_sub_pd(e, _mm256_and_pd(small, one));
  m = _mm256_sub_pd(_mm256_add_pd(m, _mm256_and_pd(small, m)), one);

  const __m256d z = _mm256_mul_pd(m, m);
  __m256d num = _mm256_set1_pd(1.01875663804580931796E-4);
  num = _mm256_fmadd_pd(num, m, _mm256_set1_pd(4.97494994976747001425E-1));
  num = _mm256_fmadd_pd(num, m, _mm256_set1_pd(4.70579119878881725854E0));
  num = _mm256_fmadd_pd(num, m, _mm256_set1_pd(1.44989225341610930846E1));
  num = _mm256_fmadd_pd(num, m, _mm256_set1_pd(1.79368678507819816313E1));
  num = _mm256_fmadd_pd(num, m, _mm256_set1_pd(7.70838733755885391666E0));
  __m256d den = _mm256_add_pd(m, _mm256_set1_pd(1.12873587189167450590E1));
  den = _mm256_fmadd_pd(den, m, _mm256_set1_pd(4.52279145837532221105E1));
  den = _mm256_fmadd_pd(den, m, _mm256_set1_pd(8.29875266912776603211E1));
  den = _mm256_fmadd_pd(den, m, _mm256_set1_pd(7.11544750618563894466E1));
  den = _mm256_fmadd_pd(den, m, _mm256_set1_pd(2.31251620126765340583E1));

  __m256d y = _mm256_mul_pd(m, _mm256_div_pd(_mm256_mul_pd(z, num), den));
  y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
  y = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, y);
  __m256d r = _mm256_add_pd(m, y);
  return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
}

// e^x; lanes below -708 return 0, lanes above 709 return +inf.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  const __m256d over = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.42860682030941723212E-6), x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d px = _mm256_set1_pd(1.26177193074810590878E-4);
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(3.02994407707441961300E-2));
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910E-1));
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_set1_pd(3.00198505138664455042E-6);
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.52448340349684104192E-3));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766E-1));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000009E0));
  __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  // Scale by 2^n through the exponent field; n stays within the normal range.
  const __m128i ni = _mm256_cvtpd_epi32(n);
  const __m256i shift = _mm256_slli_epi64(_mm256_cvtepi32_epi64(ni), 52);
  r = _mm256_castsi256_pd(_mm256_add_epi64(_mm256_castpd_si256(r), shift));

  r = _mm256_andnot_pd(under, r);
  return _mm256_blendv_pd(r, _mm256_set1_pd(HUGE_VAL), over);
}

inline __m256d load_tail(const double* a, std::size_t rem) {
  alignas(32) static const std::int64_t masks[8] = {-1, -1, -1, -1, 0, 0, 0, 0};
  const __m256i mask = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(masks + 4 - rem));
  return _mm256_maskload_pd(a, mask);
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// q^{e}, zero where q is below the smallest normal double.
inline __m256d masked_pow(__m256d q, __m256d e) {
  const __m256d tiny = _mm256_cmp_pd(q, _mm256_set1_pd(DBL_MIN), _CMP_LT_OQ);
  const __m256d safe = _mm256_blendv_pd(q, _mm256_set1_pd(1.0), tiny);
  return _mm256_andnot_pd(tiny, exp_pd(_mm256_mul_pd(e, log_pd(safe))));
}

double row_energy(double ui, const double* u, const double* c, const double* m, std::size_t count, double p,
                  double eps) {
  const __m256d vui = _mm256_set1_pd(ui);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t full = count & ~std::size_t{3};
  if (p == 2.0) {
    auto step = [&](__m256d uj, __m256d cj, __m256d mj) {
      const __m256d t = _mm256_sub_pd(vui, uj);
      acc = _mm256_fmadd_pd(_mm256_mul_pd(mj, cj), _mm256_mul_pd(t, t), acc);
    };
    for (std::size_t j = 0; j < full; j += 4) step(_mm256_loadu_pd(u + j), _mm256_loadu_pd(c + j), _mm256_loadu_pd(m + j));
    if (const std::size_t rem = count - full)
      step(load_tail(u + full, rem), load_tail(c + full, rem), load_tail(m + full, rem));
    return hsum(acc);
  }
  const __m256d veps2 = _mm256_set1_pd(eps * eps);
  const __m256d half_p = _mm256_set1_pd(0.5 * p);
  const double eps_p = eps > 0.0 ? std::pow(eps, p) : 0.0;
  const __m256d veps_p = _mm256_set1_pd(eps_p);
  const __m256d vmin = _mm256_set1_pd(DBL_MIN);
  auto step = [&](__m256d uj, __m256d cj, __m256d mj) {
    const __m256d t = _mm256_sub_pd(vui, uj);
    const __m256d q = _mm256_fmadd_pd(t, t, veps2);
    const __m256d tiny = _mm256_cmp_pd(q, vmin, _CMP_LT_OQ);
    const __m256d v = _mm256_andnot_pd(tiny, _mm256_sub_pd(masked_pow(q, half_p), veps_p));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(mj, cj), v, acc);
  };
  for (std::size_t j = 0; j < full; j += 4) step(_mm256_loadu_pd(u + j), _mm256_loadu_pd(c + j), _mm256_loadu_pd(m + j));
  if (const std::size_t rem = count - full) step(load_tail(u + full, rem), load_tail(c + full, rem), load_tail(m + full, rem));
  return hsum(acc);
}

double row_gradient(double ui, const double* u, const double* c, std::size_t count, double p, double eps) {
  const __m256d vui = _mm256_set1_pd(ui);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t full = count & ~std::size_t{3};
  if (p == 2.0) {
    for (std::size_t j = 0; j < full; j += 4)
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(c + j), _mm256_sub_pd(vui, _mm256_loadu_pd(u + j)), acc);
    if (const std::size_t rem = count - full)
      acc = _mm256_fmadd_pd(load_tail(c + full, rem), _mm256_sub_pd(vui, load_tail(u + full, rem)), acc);
    return hsum(acc);
  }
  const __m256d veps2 = _mm256_set1_pd(eps * eps);
  const __m256d ex = _mm256_set1_pd(0.5 * (p - 2.0));
  auto step = [&](__m256d uj, __m256d cj) {
    const __m256d t = _mm256_sub_pd(vui, uj);
    const __m256d q = _mm256_fmadd_pd(t, t, veps2);
    acc = _mm256_fmadd_pd(cj, _mm256_mul_pd(masked_pow(q, ex), t), acc);
  };
  for (std::size_t j = 0; j < full; j += 4) step(_mm256_loadu_pd(u + j), _mm256_loadu_pd(c + j));
  if (const std::size_t rem = count - full) step(load_tail(u + full, rem), load_tail(c + full, rem));
  return hsum(acc);
}

}  // namespace

const PairKernels& avx2_kernels() {
  static const PairKernels k{&row_energy, &row_gradient};
  return k;
}

}  // namespace nlpl::simd
