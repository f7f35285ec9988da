// AVX2 variants of the kernel table. Compiled with per-function target
// attributes so the rest of the library stays baseline x86-64.
#include <immintrin.h>

#include "calderlab/kernels.hpp"

#define CL_AVX2 __attribute__((target("avx2,fma")))

namespace calderlab::kernels {
namespace {

CL_AVX2 inline __m256d vsgn(__m256d v) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  return _mm256_sub_pd(_mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_GT_OQ), one),
                       _mm256_and_pd(_mm256_cmp_pd(v, zero, _CMP_LT_OQ), one));
}

CL_AVX2 inline __m256d vheaviside(__m256d v) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d h = _mm256_blendv_pd(_mm256_set1_pd(0.5), _mm256_set1_pd(1.0),
                               _mm256_cmp_pd(v, zero, _CMP_GT_OQ));
  return _mm256_blendv_pd(h, zero, _mm256_cmp_pd(v, zero, _CMP_LT_OQ));
}

CL_AVX2 inline __m256d vneg(__m256d v) { return _mm256_xor_pd(v, _mm256_set1_pd(-0.0)); }

CL_AVX2 SignCounts sign_counts(double offset, double slope, std::int64_t nodes) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d off = _mm256_set1_pd(offset);
  const __m256d sl = _mm256_set1_pd(slope);
  const __m256d step = _mm256_set1_pd(16.0);
  __m256d i0 = _mm256_setr_pd(0.5, 1.5, 2.5, 3.5);
  __m256d i1 = _mm256_add_pd(i0, _mm256_set1_pd(4.0));
  __m256d i2 = _mm256_add_pd(i0, _mm256_set1_pd(8.0));
  __m256d i3 = _mm256_add_pd(i0, _mm256_set1_pd(12.0));
  __m256i pos = _mm256_setzero_si256(), neg = _mm256_setzero_si256();
  std::int64_t i = 0;
  // Compare masks are all-ones (-1 as int64), so subtracting them counts.
  for (; i + 16 <= nodes; i += 16) {
    const __m256d v0 = _mm256_add_pd(off, _mm256_mul_pd(i0, sl));
    const __m256d v1 = _mm256_add_pd(off, _mm256_mul_pd(i1, sl));
    const __m256d v2 = _mm256_add_pd(off, _mm256_mul_pd(i2, sl));
    const __m256d v3 = _mm256_add_pd(off, _mm256_mul_pd(i3, sl));
    pos = _mm256_sub_epi64(pos, _mm256_castpd_si256(_mm256_cmp_pd(v0, zero, _CMP_GT_OQ)));
    neg = _mm256_sub_epi64(neg, _mm256_castpd_si256(_mm256_cmp_pd(v0, zero, _CMP_LT_OQ)));
    pos = _mm256_sub_epi64(pos, _mm256_castpd_si256(_mm256_cmp_pd(v1, zero, _CMP_GT_OQ)));
    neg = _mm256_sub_epi64(neg, _mm256_castpd_si256(_mm256_cmp_pd(v1, zero, _CMP_LT_OQ)));
    pos = _mm256_sub_epi64(pos, _mm256_castpd_si256(_mm256_cmp_pd(v2, zero, _CMP_GT_OQ)));
    neg = _mm256_sub_epi64(neg, _mm256_castpd_si256(_mm256_cmp_pd(v2, zero, _CMP_LT_OQ)));
    pos = _mm256_sub_epi64(pos, _mm256_castpd_si256(_mm256_cmp_pd(v3, zero, _CMP_GT_OQ)));
    neg = _mm256_sub_epi64(neg, _mm256_castpd_si256(_mm256_cmp_pd(v3, zero, _CMP_LT_OQ)));
    i0 = _mm256_add_pd(i0, step);
    i1 = _mm256_add_pd(i1, step);
    i2 = _mm256_add_pd(i2, step);
    i3 = _mm256_add_pd(i3, step);
  }
  alignas(32) std::int64_t p[4], q[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(p), pos);
  _mm256_store_si256(reinterpret_cast<__m256i*>(q), neg);
  SignCounts c{p[0] + p[1] + p[2] + p[3], q[0] + q[1] + q[2] + q[3]};
  for (; i < nodes; ++i) {
    const double v = offset + (static_cast<double>(i) + 0.5) * slope;
    c.positive += v > 0.0;
    c.negative += v < 0.0;
  }
  return c;
}

CL_AVX2 void c1_sgn(const double* xi, const double* xi1, double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xi + i);
    const __m256d y = _mm256_loadu_pd(xi1 + i);
    const __m256d s0 = vsgn(x);
    const __m256d a = _mm256_div_pd(vneg(x), y);
    const __m256d inside = _mm256_and_pd(_mm256_cmp_pd(a, zero, _CMP_GT_OQ),
                                         _mm256_cmp_pd(a, one, _CMP_LT_OQ));
    const __m256d v_in = _mm256_add_pd(_mm256_mul_pd(s0, a),
                                       _mm256_mul_pd(vsgn(_mm256_add_pd(x, y)), _mm256_sub_pd(one, a)));
    const __m256d v_mid = vsgn(_mm256_add_pd(x, _mm256_mul_pd(half, y)));
    __m256d r = _mm256_blendv_pd(v_mid, v_in, inside);
    r = _mm256_blendv_pd(r, s0, _mm256_cmp_pd(y, zero, _CMP_EQ_OQ));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = c1_sgn_point(xi[i], xi1[i]);
}

CL_AVX2 void c1_indicator(const double* xi, const double* xi1, double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(xi + i);
    const __m256d y = _mm256_loadu_pd(xi1 + i);
    const __m256d a = _mm256_div_pd(vneg(x), y);
    const __m256d inside = _mm256_and_pd(_mm256_cmp_pd(a, zero, _CMP_GT_OQ),
                                         _mm256_cmp_pd(a, one, _CMP_LT_OQ));
    const __m256d v_in =
        _mm256_blendv_pd(_mm256_sub_pd(one, a), a, _mm256_cmp_pd(x, zero, _CMP_GT_OQ));
    const __m256d v_mid = vheaviside(_mm256_add_pd(x, _mm256_mul_pd(half, y)));
    __m256d r = _mm256_blendv_pd(v_mid, v_in, inside);
    r = _mm256_blendv_pd(r, vheaviside(x), _mm256_cmp_pd(y, zero, _CMP_EQ_OQ));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = c1_indicator_point(xi[i], xi1[i]);
}

// Two interleaved complex values per register: [re0, im0, re1, im1].
CL_AVX2 void weighted_mac(const double* w_re, const double* w_im, std::complex<double> s,
                          const std::complex<double>* g, std::complex<double>* out, std::size_t n) {
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si_signed = _mm256_setr_pd(-s.imag(), s.imag(), -s.imag(), s.imag());
  const __m256d flip_re = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);
  const double* gp = reinterpret_cast<const double*>(g);
  double* op = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d gv = _mm256_loadu_pd(gp + 2 * i);
    const __m256d gs = _mm256_permute_pd(gv, 0b0101);
    // [sr*gr - si*gi, sr*gi + si*gr]
    const __m256d t = _mm256_add_pd(_mm256_mul_pd(sr, gv), _mm256_mul_pd(si_signed, gs));
    const __m256d wr = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w_re + i)), 0b01010000);
    __m256d acc = _mm256_loadu_pd(op + 2 * i);
    if (w_im) {
      const __m256d wi =
          _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(w_im + i)), 0b01010000);
      const __m256d ts = _mm256_permute_pd(t, 0b0101);
      const __m256d p = _mm256_mul_pd(wr, t);
      const __m256d q = _mm256_xor_pd(_mm256_mul_pd(wi, ts), flip_re);
      acc = _mm256_add_pd(acc, _mm256_add_pd(p, q));
    } else {
      acc = _mm256_add_pd(acc, _mm256_mul_pd(wr, t));
    }
    _mm256_storeu_pd(op + 2 * i, acc);
  }
  if (i < n)
    scalar_table().weighted_mac(w_re + i, w_im ? w_im + i : nullptr, s, g + i, out + i, n - i);
}

CL_AVX2 inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

CL_AVX2 double pv_row(const double* a, double a0, const double* f, const double* w, std::size_t n) {
  const __m256d va0 = _mm256_set1_pd(a0);
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8) {
    const __m256d t0 = _mm256_mul_pd(
        _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(a + j), va0), _mm256_loadu_pd(f + j)),
        _mm256_loadu_pd(w + j));
    const __m256d t1 = _mm256_mul_pd(
        _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(a + j + 4), va0), _mm256_loadu_pd(f + j + 4)),
        _mm256_loadu_pd(w + j + 4));
    s0 = _mm256_add_pd(s0, t0);
    s1 = _mm256_add_pd(s1, t1);
  }
  double s = hsum(_mm256_add_pd(s0, s1));
  for (; j < n; ++j) s += (a[j] - a0) * f[j] * w[j];
  return s;
}

CL_AVX2 double decay_weighted_sum(const double* v, std::size_t n, double y0, double step,
                                  double lo, double hi, double inv_len) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d vy0 = _mm256_set1_pd(y0), vstep = _mm256_set1_pd(step);
  const __m256d vlo = _mm256_set1_pd(lo), vhi = _mm256_set1_pd(hi);
  const __m256d vinv = _mm256_set1_pd(inv_len);
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);
  __m256d acc = zero;
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const __m256d y = _mm256_add_pd(vy0, _mm256_mul_pd(idx, vstep));
    __m256d d = _mm256_max_pd(_mm256_sub_pd(y, vhi), _mm256_sub_pd(vlo, y));
    d = _mm256_max_pd(d, zero);
    const __m256d r = _mm256_div_pd(one, _mm256_add_pd(one, _mm256_mul_pd(d, vinv)));
    const __m256d r2 = _mm256_mul_pd(r, r), r4 = _mm256_mul_pd(r2, r2);
    const __m256d r8 = _mm256_mul_pd(r4, r4), r16 = _mm256_mul_pd(r8, r8);
    const __m256d r32 = _mm256_mul_pd(r16, r16), r64 = _mm256_mul_pd(r32, r32);
    const __m256d wgt = _mm256_mul_pd(_mm256_mul_pd(r64, r32), r4);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(v + j), wgt));
    idx = _mm256_add_pd(idx, four);
  }
  double s = hsum(acc);
  if (j < n)
    s += scalar_table().decay_weighted_sum(v + j, n - j, y0 + static_cast<double>(j) * step, step,
                                           lo, hi, inv_len);
  return s;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable t{Isa::avx2, "avx2", sign_counts, c1_sgn, c1_indicator,
                             weighted_mac, pv_row, decay_weighted_sum};
  if (!cpu_supports(Isa::avx2)) return nullptr;
  return &t;
}

}  // namespace calderlab::kernels
