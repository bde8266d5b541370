#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "teachsim/kernels/likelihood.hpp"

namespace teachsim::kern {
namespace {

// exp over 4 doubles: x = n ln2 + r with |r| <= ln2/2, e^r by a degree-13
// Taylor polynomial (remainder ~4e-18), scaled by 2^n through exponent-field
// arithmetic. Flushes to 0 below -708.39 instead of producing subnormals.
inline __m256d exp4(__m256d x) {
  const __m256d kLoBound = _mm256_set1_pd(-708.39);
  const __m256d kHiBound = _mm256_set1_pd(709.43);
  const __m256d kLog2e = _mm256_set1_pd(1.44269504088896340736);
  const __m256d kLn2Hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d kLn2Lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d kMagic = _mm256_set1_pd(6755399441055744.0);  // 1.5 * 2^52

  const __m256d zero_mask = _mm256_cmp_pd(x, kLoBound, _CMP_LT_OQ);
  const __m256d inf_mask = _mm256_cmp_pd(x, kHiBound, _CMP_GT_OQ);
  const __m256d xc = _mm256_min_pd(_mm256_max_pd(x, kLoBound), kHiBound);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, kLog2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, kLn2Hi, xc);
  r = _mm256_fnmadd_pd(n, kLn2Lo, r);

  __m256d p = _mm256_set1_pd(1.60590438368216145994e-10);  // 1/13!
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.08767569878680989792e-09));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.50521083854417187751e-08));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.75573192239858906526e-07));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.75573192239858906526e-06));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.48015873015873015873e-05));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.98412698412698412698e-04));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.38888888888888888889e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.33333333333333333333e-03));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.16666666666666666667e-02));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.66666666666666666667e-01));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
  p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

  const __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, kMagic)),
                                      _mm256_castpd_si256(kMagic));
  const __m256d pow2n = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52));
  __m256d result = _mm256_mul_pd(p, pow2n);

  result = _mm256_andnot_pd(zero_mask, result);
  const __m256d inf = _mm256_set1_pd(__builtin_inf());
  return _mm256_blendv_pd(result, inf, inf_mask);
}

// log over 4 positive finite normal doubles: x = 2^e * m with
// m in [sqrt(1/2), sqrt(2)), log m = 2 atanh((m-1)/(m+1)) by an 11-term
// odd series in t = (m-1)/(m+1) (|t| <= 0.1716).
inline __m256d log4(__m256d x) {
  const __m256d kLn2Hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d kLn2Lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d kSqrt2 = _mm256_set1_pd(1.41421356237309504880);
  const __m256d kMagic = _mm256_set1_pd(6755399441055744.0);
  const __m256d kOne = _mm256_set1_pd(1.0);

  const __m256i bits = _mm256_castpd_si256(x);
  __m256i ei = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
  const __m256i mant_bits = _mm256_or_si256(
      _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll)),
      _mm256_set1_epi64x(0x3FF0000000000000ll));
  __m256d m = _mm256_castsi256_pd(mant_bits);  // in [1, 2)

  const __m256d fold = _mm256_cmp_pd(m, kSqrt2, _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), fold);
  // the fold mask is all-ones (-1 as int64) where m was halved
  ei = _mm256_sub_epi64(ei, _mm256_castpd_si256(fold));

  const __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_add_epi64(ei, _mm256_castpd_si256(kMagic))), kMagic);

  const __m256d t = _mm256_div_pd(_mm256_sub_pd(m, kOne), _mm256_add_pd(m, kOne));
  const __m256d w = _mm256_mul_pd(t, t);

  __m256d p = _mm256_set1_pd(9.52380952380952380952e-02);  // 2/21
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.05263157894736842105e-01));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.17647058823529411765e-01));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.33333333333333333333e-01));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.53846153846153846154e-01));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(1.81818181818181818182e-01));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.22222222222222222222e-01));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.85714285714285714286e-01));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(4.0e-01));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(6.66666666666666666667e-01));
  p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(2.0));
  const __m256d log_m = _mm256_mul_pd(t, p);

  __m256d result = _mm256_fmadd_pd(e, kLn2Hi, log_m);
  return _mm256_fmadd_pd(e, kLn2Lo, result);
}

inline __m256d gather_cells(const double* table, const std::int32_t* idx) {
  const __m128i i = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx));
  return _mm256_i32gather_pd(table, i, 8);
}

}  // namespace

double log_likelihood_avx2(const CompiledChoices& data, const CellTable& cells) {
  const int stride = data.stride;
  const int vec_end = data.trials - data.trials % 4;

  const double* wu = cells.weighted_utility;
  const std::int32_t* st = data.slot_type.data();
  const std::int32_t* ct = data.chosen_type.data();
  const double* pf = data.pick_flag.data();
  const double* cf = data.chosen_flag.data();

  __m256d acc = _mm256_setzero_pd();
  for (int t = 0; t < vec_end; t += 4) {
    __m256d v0 = _mm256_setzero_pd(), v1 = _mm256_setzero_pd();
    __m256d v2 = _mm256_setzero_pd(), v3 = _mm256_setzero_pd();
    for (int s = 0; s < 5; ++s) {
      v0 = _mm256_add_pd(v0, gather_cells(wu, st + static_cast<std::size_t>(s) * stride + t));
      v1 = _mm256_add_pd(v1, gather_cells(wu, st + static_cast<std::size_t>(s + 5) * stride + t));
      v2 = _mm256_add_pd(v2, gather_cells(wu, st + static_cast<std::size_t>(s + 10) * stride + t));
      v3 = _mm256_add_pd(v3, gather_cells(wu, st + static_cast<std::size_t>(s + 15) * stride + t));
    }

    const __m256d m = _mm256_max_pd(_mm256_max_pd(v0, v1), _mm256_max_pd(v2, v3));
    __m256d sum_exp = exp4(_mm256_sub_pd(v0, m));
    sum_exp = _mm256_add_pd(sum_exp, exp4(_mm256_sub_pd(v1, m)));
    sum_exp = _mm256_add_pd(sum_exp, exp4(_mm256_sub_pd(v2, m)));
    sum_exp = _mm256_add_pd(sum_exp, exp4(_mm256_sub_pd(v3, m)));
    const __m256d lse = _mm256_add_pd(m, log4(sum_exp));

    __m256d chosen = _mm256_mul_pd(v0, _mm256_loadu_pd(cf + t));
    chosen = _mm256_fmadd_pd(v1, _mm256_loadu_pd(cf + static_cast<std::size_t>(1) * stride + t), chosen);
    chosen = _mm256_fmadd_pd(v2, _mm256_loadu_pd(cf + static_cast<std::size_t>(2) * stride + t), chosen);
    chosen = _mm256_fmadd_pd(v3, _mm256_loadu_pd(cf + static_cast<std::size_t>(3) * stride + t), chosen);
    acc = _mm256_add_pd(acc, _mm256_sub_pd(chosen, lse));

    for (int s = 0; s < 5; ++s) {
      const std::size_t at = static_cast<std::size_t>(s) * stride + t;
      const __m256d lp = gather_cells(cells.log_pick, ct + at);
      const __m256d ls = gather_cells(cells.log_skip, ct + at);
      const __m256d picked = _mm256_loadu_pd(pf + at);
      acc = _mm256_add_pd(acc, _mm256_fmadd_pd(picked, _mm256_sub_pd(lp, ls), ls));
    }
  }

  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  total += log_likelihood_scalar(data, cells, vec_end, data.trials);
  return total;
}

void exp4_avx2(const double in[4], double out[4]) {
  _mm256_storeu_pd(out, exp4(_mm256_loadu_pd(in)));
}

void log4_avx2(const double in[4], double out[4]) {
  _mm256_storeu_pd(out, log4(_mm256_loadu_pd(in)));
}

}  // namespace teachsim::kern

#endif  // x86_64
