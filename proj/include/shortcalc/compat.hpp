#pragma once

// Compatibility of a weight W with a subspace S, the canonical projection
// P_{W,S} and membership in P(W,S) = {Q : Q^2 = Q, R(Q) = S, WQ = Q^*W}.

#include <cstdint>
#include <optional>

#include "shortcalc/numcore.hpp"
#include "shortcalc/report.hpp"

namespace shortcalc {

class NotCompatible : public Error {
  public:
    using Error::Error;
};

struct CompatibilityCertificate {
    bool compatible = false;
    Subspace companion;                ///< S^{perp_W} = W^{-1}(S^perp)
    std::optional<Projection> canonical;  ///< P_{W,S}, present iff compatible
    Subspace defect;                   ///< S cap N(W)
    /// C^n = S (+) (S^{perp_W} minus-ortho S), recorded alongside.
    bool direct_decomposition = false;
    /// sin of the smallest principal angle between S and the canonical nullspace;
    /// shows how close the rank test came to failing.
    double margin = 0.0;
};

Subspace w_companion(const PsdOperator& w, const Subspace& s, const Tolerance& tol = {});

CompatibilityCertificate is_compatible(const PsdOperator& w, const Subspace& s,
                                       const Tolerance& tol = {});

bool projection_set_member(const ComplexMatrix& q, const PsdOperator& w, const Subspace& s,
                           const Tolerance& tol = {});

/// P_{W,S} + N G (S^perp)^* with R(N) = S cap N(W) and random G: another
/// member of P(W,S) whenever that intersection is nontrivial.
ComplexMatrix perturbed_member(const CompatibilityCertificate& cert, const Subspace& s,
                               std::uint64_t seed);

/// W (I - P_{W,S}). Throws NotCompatible if the rank test fails.
ComplexMatrix shorted_via_projection(const PsdOperator& w, const Subspace& s,
                                     const Tolerance& tol = {});

/// The four compatibility conditions, the range/nullspace description of
/// W_{/S}, and the equivalent forms of W_{/S} <=^- W.
Report verify_comp1(const PsdOperator& w, const Subspace& s, const Tolerance& tol = {});

}  // namespace shortcalc
