#include "shortcalc/generators.hpp"

#include <algorithm>

namespace shortcalc {

Index Rng::integer(Index lo, Index hi) {
    if (hi <= lo) return lo;
    std::uniform_int_distribution<Index> dist(lo, hi);
    return dist(engine_);
}

ComplexMatrix random_gaussian(Index rows, Index cols, Rng& rng) {
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.complex_normal();
    }
    return m;
}

ComplexMatrix random_isometry(Index rows, Index cols, Rng& rng) {
    if (cols > rows) throw DimensionMismatch("random_isometry: more columns than rows");
    if (cols == 0) return ComplexMatrix(rows, 0);
    Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian(rows, cols, rng));
    ComplexMatrix q = qr.householderQ();
    return q.leftCols(cols);
}

ComplexMatrix random_oblique_basis(Index rows, Index cols, Rng& rng) {
    if (cols == 0) return ComplexMatrix(rows, 0);
    const ComplexMatrix g = random_gaussian(cols, cols, rng);
    // I + G/(2||G||) has singular values in [1/2, 3/2]
    const ComplexMatrix mix = ComplexMatrix::Identity(cols, cols) + 0.5 * g / spectral_norm(g);
    return random_isometry(rows, cols, rng) * mix;
}

ComplexMatrix random_basis_inside(const Subspace& host, Index k, Rng& rng) {
    if (k > host.dim()) throw DimensionMismatch("random_basis_inside: host subspace too small");
    return host.basis() * random_oblique_basis(host.dim(), k, rng);
}

Subspace random_subspace(Index n, Index k, Rng& rng) {
    return Subspace::from_orthonormal(random_isometry(n, k, rng));
}

namespace {

RealVector random_spectrum(Index r, Rng& rng) {
    RealVector s(r);
    for (Index i = 0; i < r; ++i) s(i) = rng.uniform(0.5, 2.0);
    return s;
}

ComplexMatrix block_sum(const ComplexMatrix& u, const ComplexMatrix& v, Rng& rng) {
    return u * random_spectrum(u.cols(), rng).asDiagonal() * v.adjoint();
}

ComplexMatrix hcat(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix m(a.rows(), a.cols() + b.cols());
    m << a, b;
    return m;
}

/// Columns inside the W-orthogonal companion of span(prev).
ComplexMatrix companion_block(const PsdOperator& w, const ComplexMatrix& prev, Index k, Rng& rng) {
    const Index n = w.dim();
    if (k == 0) return ComplexMatrix(n, 0);
    const Subspace comp = preimage(w.matrix(), complement(Subspace::span(prev)), Tolerance{}, w.norm());
    return random_basis_inside(comp, k, rng);
}

}  // namespace

ComplexMatrix random_rank_matrix(Index rows, Index cols, Index r, Rng& rng) {
    if (r > std::min(rows, cols)) throw DimensionMismatch("random_rank_matrix: rank exceeds the shape");
    return block_sum(random_isometry(rows, r, rng), random_isometry(cols, r, rng), rng);
}

ComplexMatrix random_psd_matrix(Index n, Index r, Rng& rng) {
    const ComplexMatrix u = random_isometry(n, r, rng);
    return hermitian_part(u * random_spectrum(r, rng).asDiagonal() * u.adjoint());
}

ComplexMatrix random_contraction(Index n, Rng& rng) {
    const ComplexMatrix h = hermitian_part(random_gaussian(n, n, rng));
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    return hermitian_part(0.5 * (id + h / (spectral_norm(h) + 1e-12)));
}

Chain minus_chain(Index n, Index r1, Index r2, Index r3, Rng& rng) {
    const Index total = r1 + r2 + r3;
    if (total > n) throw DimensionMismatch("minus_chain: block ranks exceed n");
    const ComplexMatrix u = random_oblique_basis(n, total, rng);
    const ComplexMatrix v = random_oblique_basis(n, total, rng);
    Chain ch;
    ch.a = block_sum(u.leftCols(r1), v.leftCols(r1), rng);
    ch.b = ch.a + block_sum(u.middleCols(r1, r2), v.middleCols(r1, r2), rng);
    ch.c = ch.b + block_sum(u.rightCols(r3), v.rightCols(r3), rng);
    return ch;
}

Chain weighted_star_chain(Index n, const PsdOperator& w, Index r1, Index r2, Index r3,
                          bool both_sides, Rng& rng) {
    if (r1 + r2 + r3 > n) throw DimensionMismatch("weighted_star_chain: block ranks exceed n");
    if (w.dim() != n) throw DimensionMismatch("weighted_star_chain: weight has wrong size");
    const ComplexMatrix u1 = random_oblique_basis(n, r1, rng);
    const ComplexMatrix u2 = companion_block(w, u1, r2, rng);
    const ComplexMatrix u3 = companion_block(w, hcat(u1, u2), r3, rng);
    ComplexMatrix v1;
    ComplexMatrix v2;
    ComplexMatrix v3;
    if (both_sides) {
        v1 = random_oblique_basis(n, r1, rng);
        v2 = companion_block(w, v1, r2, rng);
        v3 = companion_block(w, hcat(v1, v2), r3, rng);
    } else {
        const ComplexMatrix v = random_oblique_basis(n, r1 + r2 + r3, rng);
        v1 = v.leftCols(r1);
        v2 = v.middleCols(r1, r2);
        v3 = v.rightCols(r3);
    }
    Chain ch;
    ch.a = block_sum(u1, v1, rng);
    ch.b = ch.a + block_sum(u2, v2, rng);
    ch.c = ch.b + block_sum(u3, v3, rng);
    return ch;
}

WeightedPair weighted_star_pair(Index n, const PsdOperator& w, Rng& rng) {
    const Index r1 = rng.integer(1, std::max<Index>(1, n - 1));
    const Index r2 = rng.integer(1, std::max<Index>(1, n - r1));
    const Chain ch = weighted_star_chain(n, w, r1, std::min(r2, n - r1), 0, false, rng);
    return {ch.a, ch.b - ch.a};
}

MinimizationInstance minimization_instance(Index n, Rng& rng, bool full_rank_weight) {
    MinimizationInstance inst;
    const Index rw = full_rank_weight ? n : rng.integer(1, n);
    inst.w = random_psd_matrix(n, rw, rng);
    inst.a = random_rank_matrix(n, n, rng.integer(1, std::max<Index>(1, n - 1)), rng);
    const ComplexMatrix aw = inst.a.adjoint() * inst.w;
    const Subspace kernel_complement = complement(nullspace(aw, Tolerance{}, spectral_norm(inst.a) * 2.0));
    inst.b = random_oblique_basis(n, kernel_complement.dim(), rng) * kernel_complement.basis().adjoint();
    return inst;
}

}  // namespace shortcalc
