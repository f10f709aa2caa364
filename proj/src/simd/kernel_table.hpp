#pragma once

#include "tripreg/simd/kernels.hpp"

namespace tripreg::simd {

struct KernelTable {
    void (*squared_distances)(const double* query, const double* rows, std::size_t count, std::size_t dim,
                              double* out);
    double (*consistency_sum)(const Columns3& src, const Columns3& dst, const double* s, const double* d,
                              double inv_h2);
};

namespace scalar {
extern const KernelTable table;
}
#if defined(TRIPREG_HAVE_AVX2)
namespace avx2 {
extern const KernelTable table;
}
#endif
#if defined(TRIPREG_HAVE_NEON)
namespace neon {
extern const KernelTable table;
}
#endif

}  // namespace tripreg::simd
