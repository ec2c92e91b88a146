#pragma once

// Dense complex linear-algebra kernel shared by every other module.
//
// All operators act on C^n and are stored as Eigen::MatrixXcd. Every decision
// that depends on a numerical zero (ranks, containments, Loewner comparisons)
// goes through a Tolerance so the policy is explicit at each call site.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace shortcalc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Rank cutoff and comparison slack.
///
/// A singular value s counts toward the rank when s > rank_rel * max(s_max, ref),
/// where ref is an optional reference scale supplied by callers that work on
/// derived quantities (differences, products) whose own magnitude can be pure
/// rounding noise. Two quantities compare equal when their gap is at most
/// cmp_abs + cmp_rel * scale.
struct Tolerance {
    double rank_rel = 1e-10;
    double cmp_abs = 1e-9;
    double cmp_rel = 1e-8;

    [[nodiscard]] double slack(double scale) const { return cmp_abs + cmp_rel * scale; }
    [[nodiscard]] double rank_cutoff(double largest, double reference = 0.0) const;

    /// Single-knob form used by --tol and SHORTCALC_TOL: keeps the default ratios
    /// rank_rel : cmp_abs : cmp_rel = 0.1 : 1 : 10.
    static Tolerance from_scalar(double cmp_abs);

    void validate() const;
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class NotHermitian : public Error {
  public:
    using Error::Error;
};

class NotPsd : public Error {
  public:
    using Error::Error;
};

class NotComplementary : public Error {
  public:
    using Error::Error;
};

class NotIdempotent : public Error {
  public:
    using Error::Error;
};

/// A subspace of C^n held through an orthonormal basis (n x dim, possibly n x 0).
class Subspace {
  public:
    Subspace() = default;
    /// Trusts that `basis` has orthonormal columns.
    static Subspace from_orthonormal(ComplexMatrix basis);
    /// Orthonormalizes the columns of `spanning` (column-pivoted QR, rank by SVD).
    static Subspace span(const ComplexMatrix& spanning, const Tolerance& tol = {},
                         double reference = 0.0);
    static Subspace zero(Index ambient);
    static Subspace full(Index ambient);
    /// span{e_i} for the listed coordinate indices.
    static Subspace coordinate(Index ambient, std::initializer_list<Index> axes);

    [[nodiscard]] Index ambient_dim() const { return ambient_; }
    [[nodiscard]] Index dim() const { return basis_.cols(); }
    [[nodiscard]] const ComplexMatrix& basis() const { return basis_; }
    [[nodiscard]] bool is_trivial() const { return dim() == 0; }
    [[nodiscard]] bool is_full() const { return dim() == ambient_; }

    /// Orthogonal projector Q Q^*.
    [[nodiscard]] ComplexMatrix projector() const;

  private:
    Subspace(Index ambient, ComplexMatrix basis) : ambient_(ambient), basis_(std::move(basis)) {}

    Index ambient_ = 0;
    ComplexMatrix basis_;
};

/// Hermitian positive semidefinite operator with cached spectral data.
///
/// Eigenvalues with |lambda| <= rank_rel * max(lambda_max, reference) are
/// treated as exact zeros in the spectral data and the square root; more
/// negative eigenvalues are rejected. `matrix()` keeps the Hermitian part of
/// the input.
class PsdOperator {
  public:
    PsdOperator(const ComplexMatrix& matrix, const Tolerance& tol = {}, double reference = 0.0);

    static PsdOperator identity(Index n);

    [[nodiscard]] Index dim() const { return matrix_.rows(); }
    [[nodiscard]] const ComplexMatrix& matrix() const { return matrix_; }
    [[nodiscard]] const ComplexMatrix& sqrt() const { return sqrt_; }
    [[nodiscard]] const ComplexMatrix& eigenvectors() const { return eigenvectors_; }
    /// Ascending, already cleaned (numerical zeros are exactly 0).
    [[nodiscard]] const RealVector& eigenvalues() const { return eigenvalues_; }
    [[nodiscard]] double norm() const;
    [[nodiscard]] Index rank() const;
    [[nodiscard]] Subspace range() const;
    [[nodiscard]] Subspace nullspace() const;

  private:
    PsdOperator() = default;

    ComplexMatrix matrix_;
    ComplexMatrix eigenvectors_;
    RealVector eigenvalues_;
    ComplexMatrix sqrt_;
};

/// Idempotent matrix with its range and nullspace.
class Projection {
  public:
    /// Builds the projection onto `range` along `nullspace`.
    Projection(Subspace range, Subspace nullspace, ComplexMatrix matrix)
        : matrix_(std::move(matrix)), range_(std::move(range)), nullspace_(std::move(nullspace)) {}

    /// Wraps an idempotent matrix; throws NotIdempotent otherwise.
    static Projection from_matrix(const ComplexMatrix& matrix, const Tolerance& tol = {});

    [[nodiscard]] const ComplexMatrix& matrix() const { return matrix_; }
    [[nodiscard]] const Subspace& range() const { return range_; }
    [[nodiscard]] const Subspace& nullspace() const { return nullspace_; }

  private:
    ComplexMatrix matrix_;
    Subspace range_;
    Subspace nullspace_;
};

struct RankPinv {
    Index rank = 0;
    ComplexMatrix pinv;
};

struct RangeNullspace {
    Subspace range;
    Subspace nullspace;
};

enum class SubspaceOp { sum, intersect, ortho_complement, ominus };

struct SubspaceComparison {
    bool equal = false;
    /// max over both directions of ||(I - P_other) basis||_2, i.e. the sine of
    /// the largest principal angle when the dimensions agree.
    double residual = 0.0;
};

struct DirectSumTest {
    bool direct = false;        ///< dim(M) + dim(N) == dim(M + N)
    bool spans_ambient = false; ///< M + N == whole space
    /// Cosine of the smallest principal angle (reported, not used to decide).
    double min_angle_cosine = 0.0;
};

// --- matrix kernel --------------------------------------------------------

RealVector singular_values(const ComplexMatrix& m);
double spectral_norm(const ComplexMatrix& m);
Index rank(const ComplexMatrix& m, const Tolerance& tol = {}, double reference = 0.0);
RankPinv rank_and_pinv(const ComplexMatrix& m, const Tolerance& tol = {}, double reference = 0.0);
ComplexMatrix pinv(const ComplexMatrix& m, const Tolerance& tol = {}, double reference = 0.0);
RangeNullspace range_nullspace(const ComplexMatrix& m, const Tolerance& tol = {},
                               double reference = 0.0);
Subspace range(const ComplexMatrix& m, const Tolerance& tol = {}, double reference = 0.0);
Subspace nullspace(const ComplexMatrix& m, const Tolerance& tol = {}, double reference = 0.0);

/// {x : M x in S}.
Subspace preimage(const ComplexMatrix& m, const Subspace& s, const Tolerance& tol = {},
                  double reference = 0.0);

ComplexMatrix hermitian_part(const ComplexMatrix& m);
/// ||M - M^*||_F.
double hermitian_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, const Tolerance& tol = {});
/// ||A - B||_F <= slack(||A||_F + ||B||_F + 1).
bool nearly_equal(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol = {});
bool all_finite(const ComplexMatrix& m);

// --- subspace algebra -----------------------------------------------------

Subspace subspace_algebra(SubspaceOp op, const Subspace& s, const std::optional<Subspace>& t,
                          const Tolerance& tol = {});
Subspace sum(const Subspace& s, const Subspace& t, const Tolerance& tol = {});
Subspace intersect(const Subspace& s, const Subspace& t, const Tolerance& tol = {});
Subspace complement(const Subspace& s);
Subspace ominus(const Subspace& m, const Subspace& n, const Tolerance& tol = {});

/// ||(I - P_outer) inner.basis||_2; zero iff inner is contained in outer.
double containment_residual(const Subspace& outer, const Subspace& inner);
bool contains(const Subspace& outer, const Subspace& inner, const Tolerance& tol = {});
SubspaceComparison compare(const Subspace& s, const Subspace& t, const Tolerance& tol = {});
bool equal(const Subspace& s, const Subspace& t, const Tolerance& tol = {});
DirectSumTest direct_sum(const Subspace& m, const Subspace& n, const Tolerance& tol = {});

// --- projections, order, norms -------------------------------------------

/// P_{range // nullspace}; throws NotComplementary unless range (+) nullspace = C^n.
Projection oblique_projection(const Subspace& range, const Subspace& nullspace,
                              const Tolerance& tol = {});
Projection orthogonal_projection(const Subspace& s);

/// Smallest eigenvalue of the Hermitian part of Y - X.
double loewner_margin(const ComplexMatrix& x, const ComplexMatrix& y);
/// X <= Y in the Loewner order. Throws NotHermitian / DimensionMismatch.
bool loewner_leq(const ComplexMatrix& x, const ComplexMatrix& y, const Tolerance& tol = {});

/// l_p norm of the singular values; p = +inf gives the operator norm.
double schatten_norm(const ComplexMatrix& x, double p);
/// ||W^{1/2} X||_p.
double weighted_schatten_norm(const ComplexMatrix& x, double p, const PsdOperator& w);

/// Largest singular value of P_S P_T.
double dixmier_cosine(const Subspace& s, const Subspace& t);

}  // namespace shortcalc
