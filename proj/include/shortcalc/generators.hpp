#pragma once

// Seeded random instances for property checks and the verify suites.
//
// Every generator draws from a caller-owned Rng so a (seed, call sequence) pair
// always reproduces the same instances. Spectra and mixing matrices are kept in
// bounded ranges so that the generated objects are well conditioned.

#include <cstdint>
#include <random>

#include "shortcalc/numcore.hpp"

namespace shortcalc {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit_(engine_); }
    /// Uniform integer in [lo, hi].
    Index integer(Index lo, Index hi);
    Complex complex_normal() { return {normal(), normal()}; }
    std::uint64_t next_seed() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

ComplexMatrix random_gaussian(Index rows, Index cols, Rng& rng);
/// Orthonormal columns (rows x cols, cols <= rows).
ComplexMatrix random_isometry(Index rows, Index cols, Rng& rng);
/// Full-column-rank basis that is deliberately non-orthogonal but well conditioned.
ComplexMatrix random_oblique_basis(Index rows, Index cols, Rng& rng);
/// Columns drawn inside `host` (an oblique, well-conditioned basis of a k-dim subspace).
ComplexMatrix random_basis_inside(const Subspace& host, Index k, Rng& rng);
Subspace random_subspace(Index n, Index k, Rng& rng);

/// rows x cols matrix of exact rank r with singular values in [0.5, 2].
ComplexMatrix random_rank_matrix(Index rows, Index cols, Index r, Rng& rng);
/// Hermitian PSD of rank r with nonzero eigenvalues in [0.5, 2].
ComplexMatrix random_psd_matrix(Index n, Index r, Rng& rng);
/// Random Hermitian H rescaled to 0 <= G <= I.
ComplexMatrix random_contraction(Index n, Rng& rng);

/// A <= B <= C built from independent column/row blocks: A = U1 V1^*,
/// B = A + U2 V2^*, C = B + U3 V3^*.
struct Chain {
    ComplexMatrix a;
    ComplexMatrix b;
    ComplexMatrix c;
};

/// Minus-order chain with block ranks r1, r2, r3 (r1 + r2 + r3 <= n).
Chain minus_chain(Index n, Index r1, Index r2, Index r3, Rng& rng);

/// Weighted-star chain. Each new column block lies in the W-orthogonal
/// companion of the previous range; when `both_sides` is set the row blocks
/// are chosen the same way so the right-hand relation holds too.
Chain weighted_star_chain(Index n, const PsdOperator& w, Index r1, Index r2, Index r3,
                          bool both_sides, Rng& rng);

/// Pair (A, D) with A <=_{*W} A + D on the left (rank(A) + rank(D) <= n).
struct WeightedPair {
    ComplexMatrix a;
    ComplexMatrix d;
};
WeightedPair weighted_star_pair(Index n, const PsdOperator& w, Rng& rng);

/// (A, B, W) with N(B) = N(A^* W).
struct MinimizationInstance {
    ComplexMatrix a;
    ComplexMatrix b;
    ComplexMatrix w;
};
MinimizationInstance minimization_instance(Index n, Rng& rng, bool full_rank_weight = false);

}  // namespace shortcalc
