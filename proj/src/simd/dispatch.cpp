#include "kernel_table.hpp"

#include "tripreg/error.hpp"

#include <atomic>

namespace tripreg::simd {
namespace {

const KernelTable* table_for(Level level) {
    switch (level) {
#if defined(TRIPREG_HAVE_AVX2)
    case Level::Avx2: return &avx2::table;
#endif
#if defined(TRIPREG_HAVE_NEON)
    case Level::Neon: return &neon::table;
#endif
    default: return &scalar::table;
    }
}

std::atomic<Level>& current() {
    static std::atomic<Level> level{best_supported()};
    return level;
}

const KernelTable& kernels() { return *table_for(current().load(std::memory_order_relaxed)); }

}  // namespace

const char* to_string(Level level) {
    switch (level) {
    case Level::Scalar: return "scalar";
    case Level::Avx2: return "avx2";
    case Level::Neon: return "neon";
    }
    return "unknown";
}

bool supported(Level level) {
    switch (level) {
    case Level::Scalar: return true;
    case Level::Avx2:
#if defined(TRIPREG_HAVE_AVX2)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Level::Neon:
#if defined(TRIPREG_HAVE_NEON)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Level best_supported() {
    if (supported(Level::Avx2)) return Level::Avx2;
    if (supported(Level::Neon)) return Level::Neon;
    return Level::Scalar;
}

Level active() { return current().load(std::memory_order_relaxed); }

void set_active(Level level) {
    if (!supported(level)) {
        throw Error(ErrorKind::InvalidInput, std::string("SIMD level not supported here: ") + to_string(level));
    }
    current().store(level, std::memory_order_relaxed);
}

void squared_distances(std::span<const double> query, std::span<const double> rows, std::span<double> out) {
    const std::size_t dim = query.size();
    if (dim == 0 || rows.size() % dim != 0 || out.size() != rows.size() / dim) {
        throw Error(ErrorKind::InvalidInput, "squared_distances: shape mismatch");
    }
    kernels().squared_distances(query.data(), rows.data(), out.size(), dim, out.data());
}

double consistency_sum(const Columns3& src, const Columns3& dst, const double* s, const double* d,
                       double inv_h2) {
    if (src.size != dst.size) throw Error(ErrorKind::InvalidInput, "consistency_sum: column size mismatch");
    return kernels().consistency_sum(src, dst, s, d, inv_h2);
}

}  // namespace tripreg::simd
