#pragma once

// Shorted operator W_{/S} and compression W_S = W - W_{/S}.
//
// The production formula is W^{1/2} P_K W^{1/2} with K the preimage of S^perp
// under W^{1/2}. A block generalized Schur complement is kept as an
// independent oracle for cross-checks.

#include <cstdint>

#include "shortcalc/numcore.hpp"
#include "shortcalc/report.hpp"

namespace shortcalc {

struct ShortedResult {
    PsdOperator shorted;
    PsdOperator compression;
    Subspace shorted_range;
    Subspace shorted_nullspace;
    Subspace compression_nullspace;
};

ShortedResult shorted_operator(const PsdOperator& w, const Subspace& s, const Tolerance& tol = {});

/// (W11 - W12 W22^+ W12^*) (+) 0 in a unitary basis adapted to S^perp (+) S.
ComplexMatrix shorted_schur_oracle(const PsdOperator& w, const Subspace& s,
                                   const Tolerance& tol = {});

/// W^{1/2} P_K G P_K W^{1/2} for a given contraction 0 <= G <= I; always in M(W,S).
ComplexMatrix dominated_member(const PsdOperator& w, const Subspace& s, const ComplexMatrix& g,
                               const Tolerance& tol = {});
/// Same with G drawn from `seed`.
ComplexMatrix sample_dominated(const PsdOperator& w, const Subspace& s, std::uint64_t seed,
                               const Tolerance& tol = {});

/// Random projection E with N(E) = S (range drawn as a random complement of S).
ComplexMatrix sample_projection_with_nullspace(const Subspace& s, std::uint64_t seed,
                                               const Tolerance& tol = {});

/// Maximality over sampled members of M(W,S), the projection infimum, idempotence
/// W_{/S} = W_{/N(W_{/S})} and W(N(W_{/S}))^perp = W(S)^perp.
Report verify_shorted_theorem(const PsdOperator& w, const Subspace& s, int samples,
                              const Tolerance& tol = {}, std::uint64_t seed = 0);

}  // namespace shortcalc
