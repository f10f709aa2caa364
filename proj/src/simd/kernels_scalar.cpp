#include "kernel_table.hpp"

namespace tripreg::simd::scalar {
namespace {

void squared_distances(const double* query, const double* rows, std::size_t count, std::size_t dim,
                       double* out) {
    for (std::size_t r = 0; r < count; ++r) {
        const double* row = rows + r * dim;
        double acc = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            const double diff = query[c] - row[c];
            acc += diff * diff;
        }
        out[r] = acc;
    }
}

double consistency_sum(const Columns3& src, const Columns3& dst, const double* s, const double* d,
                       double inv_h2) {
    double acc = 0.0;
    for (std::size_t j = 0; j < src.size; ++j) {
        const double ax = s[0] - src.x[j];
        const double ay = s[1] - src.y[j];
        const double az = s[2] - src.z[j];
        const double bx = d[0] - dst.x[j];
        const double by = d[1] - dst.y[j];
        const double bz = d[2] - dst.z[j];
        const double diff = (ax * ax + ay * ay + az * az) - (bx * bx + by * by + bz * bz);
        acc += 1.0 / (1.0 + inv_h2 * diff * diff);
    }
    return acc;
}

}  // namespace

const KernelTable table{&squared_distances, &consistency_sum};

}  // namespace tripreg::simd::scalar
