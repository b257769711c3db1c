#pragma once

#include <cstddef>
#include <span>

namespace slglue {

// Pairwise summation with a fixed reduction tree. Deterministic for a given
// input order and more accurate than a running sum on long vectors.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

}  // namespace slglue
