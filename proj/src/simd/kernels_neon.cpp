#include "kernel_table.hpp"

#include <arm_neon.h>

namespace tripreg::simd::neon {
namespace {

void squared_distances(const double* query, const double* rows, std::size_t count, std::size_t dim,
                       double* out) {
    const std::size_t dim2 = dim & ~std::size_t{1};
    for (std::size_t r = 0; r < count; ++r) {
        const double* row = rows + r * dim;
        float64x2_t acc = vdupq_n_f64(0.0);
        for (std::size_t c = 0; c < dim2; c += 2) {
            const float64x2_t diff = vsubq_f64(vld1q_f64(query + c), vld1q_f64(row + c));
            acc = vfmaq_f64(acc, diff, diff);
        }
        double tail = 0.0;
        for (std::size_t c = dim2; c < dim; ++c) {
            const double diff = query[c] - row[c];
            tail += diff * diff;
        }
        out[r] = vaddvq_f64(acc) + tail;
    }
}

double consistency_sum(const Columns3& src, const Columns3& dst, const double* s, const double* d,
                       double inv_h2) {
    const float64x2_t sx = vdupq_n_f64(s[0]);
    const float64x2_t sy = vdupq_n_f64(s[1]);
    const float64x2_t sz = vdupq_n_f64(s[2]);
    const float64x2_t dx = vdupq_n_f64(d[0]);
    const float64x2_t dy = vdupq_n_f64(d[1]);
    const float64x2_t dz = vdupq_n_f64(d[2]);
    const float64x2_t k = vdupq_n_f64(inv_h2);
    const float64x2_t one = vdupq_n_f64(1.0);

    const std::size_t n2 = src.size & ~std::size_t{1};
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < n2; j += 2) {
        const float64x2_t ax = vsubq_f64(sx, vld1q_f64(src.x + j));
        const float64x2_t ay = vsubq_f64(sy, vld1q_f64(src.y + j));
        const float64x2_t az = vsubq_f64(sz, vld1q_f64(src.z + j));
        const float64x2_t bx = vsubq_f64(dx, vld1q_f64(dst.x + j));
        const float64x2_t by = vsubq_f64(dy, vld1q_f64(dst.y + j));
        const float64x2_t bz = vsubq_f64(dz, vld1q_f64(dst.z + j));
        const float64x2_t da = vfmaq_f64(vfmaq_f64(vmulq_f64(ax, ax), ay, ay), az, az);
        const float64x2_t db = vfmaq_f64(vfmaq_f64(vmulq_f64(bx, bx), by, by), bz, bz);
        const float64x2_t diff = vsubq_f64(da, db);
        const float64x2_t denom = vfmaq_f64(one, vmulq_f64(k, diff), diff);
        acc = vaddq_f64(acc, vdivq_f64(one, denom));
    }
    double tail = 0.0;
    for (std::size_t j = n2; j < src.size; ++j) {
        const double ax = s[0] - src.x[j];
        const double ay = s[1] - src.y[j];
        const double az = s[2] - src.z[j];
        const double bx = d[0] - dst.x[j];
        const double by = d[1] - dst.y[j];
        const double bz = d[2] - dst.z[j];
        const double diff = (ax * ax + ay * ay + az * az) - (bx * bx + by * by + bz * bz);
        tail += 1.0 / (1.0 + inv_h2 * diff * diff);
    }
    return vaddvq_f64(acc) + tail;
}

}  // namespace

const KernelTable table{&squared_distances, &consistency_sum};

}  // namespace tripreg::simd::neon
