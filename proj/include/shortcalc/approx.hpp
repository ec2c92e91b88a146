#pragma once

// Operator equations, W-inverses and the weighted approximation problems
// built on the shorted operator.

#include <cstdint>
#include <utility>
#include <vector>

#include "shortcalc/numcore.hpp"
#include "shortcalc/report.hpp"

namespace shortcalc {

class Infeasible : public Error {
  public:
    enum class Which { range, adjoint_range, both };

    Infeasible(Which which, const std::string& what) : Error(what), which_(which) {}
    [[nodiscard]] Which which() const { return which_; }

  private:
    Which which_;
};

class HypothesisViolated : public Error {
  public:
    using Error::Error;
};

/// Particular solution A^+ C B^+ of A X B = C; throws Infeasible when
/// R(C) is not inside R(A) or R(C^*) is not inside R(B^*).
ComplexMatrix solve_operator_equation(const ComplexMatrix& a, const ComplexMatrix& b,
                                      const ComplexMatrix& c, const Tolerance& tol = {});

struct WInverseResult {
    ComplexMatrix solution;
    double normal_residual = 0.0;  ///< ||A^*W(A X0 - B)||_F
    PsdOperator achieved;          ///< (A X0 - B)^* W (A X0 - B)
    bool is_minimum = false;
    /// rank(A^*WA) == rank(A^*W), which makes the normal equation consistent.
    bool consistent = false;
    /// dim N(A^*WA): size of the family X0 + (maps into that nullspace).
    Index free_dimension = 0;
};

/// X0 = (A^*WA)^+ A^*W B.
WInverseResult w_inverse(const ComplexMatrix& a, const PsdOperator& w, const ComplexMatrix& b,
                         const Tolerance& tol = {});

/// (A X B - I)^* W (A X B - I).
ComplexMatrix quadratic_value(const ComplexMatrix& a, const ComplexMatrix& x,
                              const ComplexMatrix& b, const PsdOperator& w);

struct MinimizationReport {
    ComplexMatrix minimizer;
    PsdOperator value;
    bool equals_shorted = false;
    int minus_lower_bound_checked = 0;
    std::vector<std::pair<double, double>> schatten_values;
    Report checks;
};

struct MinimizationOptions {
    int samples = 20;
    std::uint64_t seed = 0;
    std::vector<double> exponents{1.0, 2.0, 3.0};
};

/// Solves A^*W(A X0 B - I) = 0 under N(B) = N(A^*W) and checks the value
/// against W_{/R(A)}. Throws HypothesisViolated when N(B) != N(A^*W).
MinimizationReport minimize_quadratic(const ComplexMatrix& a, const ComplexMatrix& b,
                                      const PsdOperator& w, const Tolerance& tol = {},
                                      const MinimizationOptions& options = {});

/// ||A X0 B - I||_{p,W} against ||W_{/R(A)}^{1/2}||_p and against random
/// perturbations X0 + Delta. p = +inf is accepted (operator norm).
Report schatten_min_check(const ComplexMatrix& a, const ComplexMatrix& b, const PsdOperator& w,
                          double p, int perturbations, const Tolerance& tol = {},
                          std::uint64_t seed = 0);

/// Joint and separate weighted least squares for A and B when A <=_{*W} A + B.
Report simultaneous_ls(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& c,
                       const PsdOperator& w, double p, const Tolerance& tol = {},
                       std::uint64_t seed = 0);

/// W_{R(A+B)} = W_{R(A)} + W_{R(B)} when A <=_{*W} A + B.
Report compression_additivity_check(const ComplexMatrix& a, const ComplexMatrix& b,
                                    const PsdOperator& w, const Tolerance& tol = {});

}  // namespace shortcalc
