// detail/random.hpp
// Seeded sampling helpers. All randomized checks take an explicit seed.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace entropic::detail {

using Rng = std::mt19937_64;

/// Flat Dirichlet(alpha) draw of length k.
inline std::vector<double> dirichlet(Rng& rng, std::size_t k, double alpha = 1.0) {
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> w(k);
    double total = 0.0;
    for (auto& x : w) {
        x = gamma(rng);
        total += x;
    }
    if (total <= 0.0) {
        // every draw underflowed; fall back to a point mass
        std::fill(w.begin(), w.end(), 0.0);
        w[0] = 1.0;
        return w;
    }
    for (auto& x : w) x /= total;
    return w;
}

} // namespace entropic::detail
