#include "kernel_table.hpp"

#include <immintrin.h>

namespace tripreg::simd::avx2 {
namespace {

inline double horizontal_sum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void squared_distances(const double* query, const double* rows, std::size_t count, std::size_t dim,
                       double* out) {
    const std::size_t dim4 = dim & ~std::size_t{3};
    for (std::size_t r = 0; r < count; ++r) {
        const double* row = rows + r * dim;
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t c = 0; c < dim4; c += 4) {
            const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(query + c), _mm256_loadu_pd(row + c));
            acc = _mm256_fmadd_pd(diff, diff, acc);
        }
        double tail = 0.0;
        for (std::size_t c = dim4; c < dim; ++c) {
            const double diff = query[c] - row[c];
            tail += diff * diff;
        }
        out[r] = horizontal_sum(acc) + tail;
    }
}

double consistency_sum(const Columns3& src, const Columns3& dst, const double* s, const double* d,
                       double inv_h2) {
    const __m256d sx = _mm256_set1_pd(s[0]);
    const __m256d sy = _mm256_set1_pd(s[1]);
    const __m256d sz = _mm256_set1_pd(s[2]);
    const __m256d dx = _mm256_set1_pd(d[0]);
    const __m256d dy = _mm256_set1_pd(d[1]);
    const __m256d dz = _mm256_set1_pd(d[2]);
    const __m256d k = _mm256_set1_pd(inv_h2);
    const __m256d one = _mm256_set1_pd(1.0);

    const std::size_t n4 = src.size & ~std::size_t{3};
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < n4; j += 4) {
        const __m256d ax = _mm256_sub_pd(sx, _mm256_loadu_pd(src.x + j));
        const __m256d ay = _mm256_sub_pd(sy, _mm256_loadu_pd(src.y + j));
        const __m256d az = _mm256_sub_pd(sz, _mm256_loadu_pd(src.z + j));
        const __m256d bx = _mm256_sub_pd(dx, _mm256_loadu_pd(dst.x + j));
        const __m256d by = _mm256_sub_pd(dy, _mm256_loadu_pd(dst.y + j));
        const __m256d bz = _mm256_sub_pd(dz, _mm256_loadu_pd(dst.z + j));
        const __m256d da = _mm256_fmadd_pd(az, az, _mm256_fmadd_pd(ay, ay, _mm256_mul_pd(ax, ax)));
        const __m256d db = _mm256_fmadd_pd(bz, bz, _mm256_fmadd_pd(by, by, _mm256_mul_pd(bx, bx)));
        const __m256d diff = _mm256_sub_pd(da, db);
        const __m256d denom = _mm256_fmadd_pd(_mm256_mul_pd(k, diff), diff, one);
        acc = _mm256_add_pd(acc, _mm256_div_pd(one, denom));
    }
    double tail = 0.0;
    for (std::size_t j = n4; j < src.size; ++j) {
        const double ax = s[0] - src.x[j];
        const double ay = s[1] - src.y[j];
        const double az = s[2] - src.z[j];
        const double bx = d[0] - dst.x[j];
        const double by = d[1] - dst.y[j];
        const double bz = d[2] - dst.z[j];
        const double diff = (ax * ax + ay * ay + az * az) - (bx * bx + by * by + bz * bz);
        tail += 1.0 / (1.0 + inv_h2 * diff * diff);
    }
    return horizontal_sum(acc) + tail;
}

}  // namespace

const KernelTable table{&squared_distances, &consistency_sum};

}  // namespace tripreg::simd::avx2
