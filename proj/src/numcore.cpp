#include "shortcalc/numcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shortcalc {

namespace {

void require_same_ambient(const Subspace& s, const Subspace& t, const char* what) {
    if (s.ambient_dim() != t.ambient_dim()) {
        throw DimensionMismatch(std::string(what) + ": ambient dimensions " +
                                std::to_string(s.ambient_dim()) + " and " +
                                std::to_string(t.ambient_dim()) + " differ");
    }
}

Index count_above(const RealVector& sv, double cutoff) {
    Index r = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++r;
    }
    return r;
}

}  // namespace

double Tolerance::rank_cutoff(double largest, double reference) const {
    return rank_rel * std::max(largest, reference);
}

Tolerance Tolerance::from_scalar(double cmp_abs) {
    Tolerance t;
    t.rank_rel = 0.1 * cmp_abs;
    t.cmp_abs = cmp_abs;
    t.cmp_rel = 10.0 * cmp_abs;
    t.validate();
    return t;
}

void Tolerance::validate() const {
    for (double v : {rank_rel, cmp_abs, cmp_rel}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw Error("tolerance fields must be finite and nonnegative");
        }
    }
}

// --- Subspace -------------------------------------------------------------

Subspace Subspace::from_orthonormal(ComplexMatrix basis) {
    const Index n = basis.rows();
    return Subspace(n, std::move(basis));
}

Subspace Subspace::span(const ComplexMatrix& spanning, const Tolerance& tol, double reference) {
    const Index n = spanning.rows();
    if (spanning.cols() == 0) return zero(n);
    const Index r = shortcalc::rank(spanning, tol, reference);
    if (r == 0) return zero(n);
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(spanning);
    ComplexMatrix q = qr.householderQ();
    return Subspace(n, q.leftCols(r));
}

Subspace Subspace::zero(Index ambient) { return Subspace(ambient, ComplexMatrix(ambient, 0)); }

Subspace Subspace::full(Index ambient) {
    return Subspace(ambient, ComplexMatrix::Identity(ambient, ambient));
}

Subspace Subspace::coordinate(Index ambient, std::initializer_list<Index> axes) {
    ComplexMatrix b = ComplexMatrix::Zero(ambient, static_cast<Index>(axes.size()));
    Index c = 0;
    for (Index a : axes) {
        if (a < 0 || a >= ambient) throw DimensionMismatch("coordinate axis out of range");
        b(a, c++) = 1.0;
    }
    return Subspace::span(b);
}

ComplexMatrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

// --- PsdOperator ----------------------------------------------------------

PsdOperator::PsdOperator(const ComplexMatrix& matrix, const Tolerance& tol, double reference) {
    if (matrix.rows() == 0 || matrix.rows() != matrix.cols()) {
        throw DimensionMismatch("PSD operator must be a nonempty square matrix");
    }
    if (!all_finite(matrix)) throw Error("PSD operator has non-finite entries");
    if (!is_hermitian(matrix, tol)) {
        throw NotHermitian("matrix is not Hermitian (defect " +
                           std::to_string(hermitian_defect(matrix)) + ")");
    }
    matrix_ = hermitian_part(matrix);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(matrix_);
    eigenvectors_ = eig.eigenvectors();
    eigenvalues_ = eig.eigenvalues();
    const double largest = eigenvalues_.cwiseAbs().maxCoeff();
    const double cutoff = tol.rank_cutoff(largest, reference);
    for (Index i = 0; i < eigenvalues_.size(); ++i) {
        double& l = eigenvalues_(i);
        if (l < -cutoff) {
            throw NotPsd("matrix has eigenvalue " + std::to_string(l) + " below -" +
                         std::to_string(cutoff));
        }
        if (std::abs(l) <= cutoff) l = 0.0;
    }
    sqrt_ = eigenvectors_ * eigenvalues_.cwiseSqrt().asDiagonal() * eigenvectors_.adjoint();
}

PsdOperator PsdOperator::identity(Index n) { return PsdOperator(ComplexMatrix::Identity(n, n)); }

double PsdOperator::norm() const { return eigenvalues_.size() ? eigenvalues_.maxCoeff() : 0.0; }

Index PsdOperator::rank() const { return count_above(eigenvalues_, 0.0); }

Subspace PsdOperator::range() const {
    const Index r = rank();
    // eigenvalues are ascending, so the positive ones sit at the end
    return Subspace::from_orthonormal(eigenvectors_.rightCols(r));
}

Subspace PsdOperator::nullspace() const {
    return Subspace::from_orthonormal(eigenvectors_.leftCols(dim() - rank()));
}

// --- Projection -----------------------------------------------------------

Projection Projection::from_matrix(const ComplexMatrix& matrix, const Tolerance& tol) {
    if (matrix.rows() != matrix.cols()) throw DimensionMismatch("projection must be square");
    const double defect = (matrix * matrix - matrix).norm();
    if (defect > tol.slack(matrix.norm())) {
        throw NotIdempotent("matrix is not idempotent (defect " + std::to_string(defect) + ")");
    }
    auto rn = range_nullspace(matrix, tol);
    return Projection(std::move(rn.range), std::move(rn.nullspace), matrix);
}

// --- matrix kernel --------------------------------------------------------

RealVector singular_values(const ComplexMatrix& m) {
    if (m.size() == 0) return RealVector();
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues();
}

double spectral_norm(const ComplexMatrix& m) {
    const RealVector sv = singular_values(m);
    return sv.size() ? sv(0) : 0.0;
}

Index rank(const ComplexMatrix& m, const Tolerance& tol, double reference) {
    const RealVector sv = singular_values(m);
    if (sv.size() == 0) return 0;
    return count_above(sv, tol.rank_cutoff(sv(0), reference));
}

RankPinv rank_and_pinv(const ComplexMatrix& m, const Tolerance& tol, double reference) {
    RankPinv out;
    out.pinv = ComplexMatrix::Zero(m.cols(), m.rows());
    if (m.size() == 0) return out;
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealVector& sv = svd.singularValues();
    out.rank = count_above(sv, tol.rank_cutoff(sv(0), reference));
    if (out.rank == 0) return out;
    const Index r = out.rank;
    const RealVector inv = sv.head(r).cwiseInverse();
    out.pinv = svd.matrixV().leftCols(r) * inv.asDiagonal() * svd.matrixU().leftCols(r).adjoint();
    return out;
}

ComplexMatrix pinv(const ComplexMatrix& m, const Tolerance& tol, double reference) {
    return rank_and_pinv(m, tol, reference).pinv;
}

RangeNullspace range_nullspace(const ComplexMatrix& m, const Tolerance& tol, double reference) {
    if (m.size() == 0) {
        return {Subspace::zero(m.rows()), Subspace::full(m.cols())};
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector& sv = svd.singularValues();
    const Index r = count_above(sv, tol.rank_cutoff(sv(0), reference));
    return {Subspace::from_orthonormal(svd.matrixU().leftCols(r)),
            Subspace::from_orthonormal(svd.matrixV().rightCols(m.cols() - r))};
}

Subspace range(const ComplexMatrix& m, const Tolerance& tol, double reference) {
    return range_nullspace(m, tol, reference).range;
}

Subspace nullspace(const ComplexMatrix& m, const Tolerance& tol, double reference) {
    return range_nullspace(m, tol, reference).nullspace;
}

Subspace preimage(const ComplexMatrix& m, const Subspace& s, const Tolerance& tol,
                  double reference) {
    if (s.ambient_dim() != m.rows()) {
        throw DimensionMismatch("preimage: subspace lives in C^" + std::to_string(s.ambient_dim()) +
                                " but the matrix has " + std::to_string(m.rows()) + " rows");
    }
    if (s.is_full()) return Subspace::full(m.cols());
    // N(P_{S^perp} M) equals N(B^* M) for an orthonormal basis B of S^perp
    const ComplexMatrix reduced = complement(s).basis().adjoint() * m;
    return nullspace(reduced, tol, std::max(reference, spectral_norm(m)));
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

double hermitian_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return (m - m.adjoint()).norm();
}

bool is_hermitian(const ComplexMatrix& m, const Tolerance& tol) {
    return m.rows() == m.cols() && hermitian_defect(m) <= tol.slack(m.norm());
}

bool nearly_equal(const ComplexMatrix& a, const ComplexMatrix& b, const Tolerance& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return (a - b).norm() <= tol.slack(a.norm() + b.norm() + 1.0);
}

bool all_finite(const ComplexMatrix& m) {
    for (Index j = 0; j < m.cols(); ++j) {
        for (Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
        }
    }
    return true;
}

// --- subspace algebra -----------------------------------------------------

Subspace complement(const Subspace& s) {
    const Index n = s.ambient_dim();
    const Index k = s.dim();
    if (k == 0) return Subspace::full(n);
    if (k == n) return Subspace::zero(n);
    Eigen::HouseholderQR<ComplexMatrix> qr(s.basis());
    ComplexMatrix q = qr.householderQ();
    return Subspace::from_orthonormal(q.rightCols(n - k));
}

Subspace sum(const Subspace& s, const Subspace& t, const Tolerance& tol) {
    require_same_ambient(s, t, "sum");
    ComplexMatrix both(s.ambient_dim(), s.dim() + t.dim());
    both << s.basis(), t.basis();
    return Subspace::span(both, tol);
}

Subspace intersect(const Subspace& s, const Subspace& t, const Tolerance& tol) {
    require_same_ambient(s, t, "intersect");
    return complement(sum(complement(s), complement(t), tol));
}

Subspace ominus(const Subspace& m, const Subspace& n, const Tolerance& tol) {
    return intersect(m, complement(intersect(m, n, tol)), tol);
}

Subspace subspace_algebra(SubspaceOp op, const Subspace& s, const std::optional<Subspace>& t,
                          const Tolerance& tol) {
    if (op == SubspaceOp::ortho_complement) return complement(s);
    if (!t) throw Error("subspace_algebra: binary operation needs a second subspace");
    switch (op) {
        case SubspaceOp::sum:
            return sum(s, *t, tol);
        case SubspaceOp::intersect:
            return intersect(s, *t, tol);
        case SubspaceOp::ominus:
            return ominus(s, *t, tol);
        case SubspaceOp::ortho_complement:
            break;
    }
    return complement(s);
}

double containment_residual(const Subspace& outer, const Subspace& inner) {
    require_same_ambient(outer, inner, "containment");
    if (inner.is_trivial()) return 0.0;
    const ComplexMatrix& q = outer.basis();
    const ComplexMatrix rest = inner.basis() - q * (q.adjoint() * inner.basis());
    return spectral_norm(rest);
}

bool contains(const Subspace& outer, const Subspace& inner, const Tolerance& tol) {
    return containment_residual(outer, inner) <= tol.slack(1.0);
}

SubspaceComparison compare(const Subspace& s, const Subspace& t, const Tolerance& tol) {
    SubspaceComparison c;
    c.residual = std::max(containment_residual(s, t), containment_residual(t, s));
    c.equal = s.dim() == t.dim() && c.residual <= tol.slack(1.0);
    return c;
}

bool equal(const Subspace& s, const Subspace& t, const Tolerance& tol) {
    return compare(s, t, tol).equal;
}

DirectSumTest direct_sum(const Subspace& m, const Subspace& n, const Tolerance& tol) {
    const Subspace total = sum(m, n, tol);
    DirectSumTest d;
    d.direct = total.dim() == m.dim() + n.dim();
    d.spans_ambient = total.is_full();
    d.min_angle_cosine = dixmier_cosine(m, n);
    return d;
}

// --- projections, order, norms -------------------------------------------

Projection oblique_projection(const Subspace& range, const Subspace& nullspace,
                              const Tolerance& tol) {
    require_same_ambient(range, nullspace, "oblique_projection");
    const Index n = range.ambient_dim();
    const Index k = range.dim();
    if (k + nullspace.dim() != n) {
        throw NotComplementary("dimensions " + std::to_string(k) + " + " +
                               std::to_string(nullspace.dim()) + " do not add up to " +
                               std::to_string(n));
    }
    const DirectSumTest d = direct_sum(range, nullspace, tol);
    if (!d.direct || !d.spans_ambient) {
        throw NotComplementary("range and nullspace intersect nontrivially (cos = " +
                               std::to_string(d.min_angle_cosine) + ")");
    }
    if (k == 0) return Projection(range, nullspace, ComplexMatrix::Zero(n, n));
    // P = R (C^* R)^{-1} C^* with C an orthonormal basis of N^perp
    const ComplexMatrix c = complement(nullspace).basis();
    const ComplexMatrix core = c.adjoint() * range.basis();
    ComplexMatrix p = range.basis() * core.fullPivLu().solve(c.adjoint());
    return Projection(range, nullspace, std::move(p));
}

Projection orthogonal_projection(const Subspace& s) {
    return Projection(s, complement(s), s.projector());
}

double loewner_margin(const ComplexMatrix& x, const ComplexMatrix& y) {
    const ComplexMatrix d = hermitian_part(y - x);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(d, Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0);
}

bool loewner_leq(const ComplexMatrix& x, const ComplexMatrix& y, const Tolerance& tol) {
    if (x.rows() != y.rows() || x.cols() != y.cols() || x.rows() != x.cols()) {
        throw DimensionMismatch("loewner_leq needs square matrices of equal size");
    }
    if (!is_hermitian(x, tol) || !is_hermitian(y, tol)) {
        throw NotHermitian("loewner_leq needs Hermitian arguments");
    }
    if (x.size() == 0) return true;
    const double scale = spectral_norm(y - x);
    return loewner_margin(x, y) >= -tol.slack(scale);
}

double schatten_norm(const ComplexMatrix& x, double p) {
    if (!(p >= 1.0)) throw Error("Schatten exponent must satisfy p >= 1");
    const RealVector sv = singular_values(x);
    if (sv.size() == 0 || sv(0) == 0.0) return 0.0;
    if (std::isinf(p)) return sv(0);
    const double top = sv(0);
    double acc = 0.0;
    for (Index i = 0; i < sv.size(); ++i) acc += std::pow(sv(i) / top, p);
    return top * std::pow(acc, 1.0 / p);
}

double weighted_schatten_norm(const ComplexMatrix& x, double p, const PsdOperator& w) {
    if (w.dim() != x.rows()) throw DimensionMismatch("weighted_schatten_norm: W and X differ");
    return schatten_norm(w.sqrt() * x, p);
}

double dixmier_cosine(const Subspace& s, const Subspace& t) {
    require_same_ambient(s, t, "dixmier_cosine");
    if (s.is_trivial() || t.is_trivial()) return 0.0;
    return std::min(1.0, spectral_norm(s.basis().adjoint() * t.basis()));
}

}  // namespace shortcalc
