#pragma once

// Data-parallel inner loops with a scalar reference and vectorized variants
// (AVX2 on x86-64, NEON on AArch64). The variant is selected once at startup
// from CPU features; tests may pin a level to compare variants.

#include <cstddef>
#include <span>

namespace tripreg::simd {

enum class Level { Scalar, Avx2, Neon };

const char* to_string(Level level);

bool supported(Level level);
Level best_supported();
Level active();

/// Pins the dispatch level. Throws InvalidInput if the CPU lacks it.
void set_active(Level level);

/// Structure-of-arrays view over 3-vectors.
struct Columns3 {
    const double* x = nullptr;
    const double* y = nullptr;
    const double* z = nullptr;
    std::size_t size = 0;
};

/// out[r] = |query - rows[r]|^2 where rows is row-major with query.size() columns.
void squared_distances(std::span<const double> query, std::span<const double> rows, std::span<double> out);

/// Sum over j of 1 / (1 + inv_h2 * (|s - src_j|^2 - |d - dst_j|^2)^2).
double consistency_sum(const Columns3& src, const Columns3& dst, const double* s, const double* d,
                       double inv_h2);

}  // namespace tripreg::simd
