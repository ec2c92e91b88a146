#pragma once

// Minus, left-minus, star (two-sided and one-sided) and weighted star orders.
//
// Verdicts come with witness projections where the definition of the relation
// promises them: A = P B (left) and A^* = Q B^* (right).

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "shortcalc/generators.hpp"
#include "shortcalc/numcore.hpp"
#include "shortcalc/report.hpp"

namespace shortcalc {

class ShapeMismatch : public DimensionMismatch {
  public:
    using DimensionMismatch::DimensionMismatch;
};

enum class FailureReason {
    none,
    range_sum_not_direct,
    adjoint_sum_not_direct,
    range_not_contained,
    algebraic_identity_fails,
};

std::string_view to_string(FailureReason r);

struct OrderVerdict {
    bool holds = false;
    std::optional<Projection> left_witness;   ///< A = P B
    std::optional<Projection> right_witness;  ///< A^* = Q B^*
    FailureReason failure_reason = FailureReason::none;
    /// Result of an independent second route when one applies (star against
    /// left-star and right-star; weighted star against the P_{W,R(A)} form).
    std::optional<bool> cross_check;
};

enum class StarVariant { star, left_star, right_star };
enum class WeightedVariant { left, right, both };

/// Rank additivity on both sides; canonical witnesses on success.
OrderVerdict leq_minus(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol = {});

/// R(B) = R(A) (+) R(B - A), decided with subspace algebra.
bool leq_left_minus(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol = {});

/// The definition itself: build P onto R(A) along R(B-A) (+) (R(A)+R(B-A))^perp
/// (and Q likewise for adjoints) and test A = P B, A^* = Q B^*. Does not look
/// at ranks.
bool minus_by_witness(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol = {});

OrderVerdict leq_star(StarVariant variant, const ComplexMatrix& a, const ComplexMatrix& b,
                      const Tolerance& tol = {});

/// Left: R(B) = R(A) (+) R(B-A) and A^*WA = A^*WB. Right: the adjoint form.
OrderVerdict leq_weighted_star(WeightedVariant variant, const ComplexMatrix& a,
                               const ComplexMatrix& b, const PsdOperator& w,
                               const Tolerance& tol = {});

/// Left-minus plus R(B - A) inside R(A)^{perp_W} (right: the adjoint analogue).
bool weighted_star_by_definition(WeightedVariant variant, const ComplexMatrix& a,
                                 const ComplexMatrix& b, const PsdOperator& w,
                                 const Tolerance& tol = {});

/// ||X - Y||_F <= slack(||X||_F + ||Y||_F + 1).
bool identity_holds(const ComplexMatrix& x, const ComplexMatrix& y, const Tolerance& tol = {});

using OrderRelation = std::function<bool(const ComplexMatrix&, const ComplexMatrix&)>;

/// Reflexivity on every element, antisymmetry on mutually comparable pairs and
/// transitivity on each (A, B, C) chain whose premises hold.
Report order_axioms_harness(const OrderRelation& relation, const std::vector<Chain>& samples,
                            const Tolerance& tol = {});

}  // namespace shortcalc
