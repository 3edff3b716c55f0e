#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/SparseCore>

#include "odolab/fock.hpp"
#include "odolab/numerics.hpp"
#include "odolab/symbol.hpp"

namespace odolab {

using SparseCMatrix = Eigen::SparseMatrix<cplx>;

/// A sparse operator between (subsets of) two truncated Fock bases.
///
/// Matrix column j corresponds to the domain basis vector with flat index
/// cols[j]; row i to the codomain basis vector rows[i]. Full operators carry
/// the identity maps.
struct FockOperator {
    BasisIndex domain;
    BasisIndex codomain;
    std::vector<std::size_t> cols;
    std::vector<std::size_t> rows;
    SparseCMatrix matrix;

    CMatrix dense() const { return CMatrix(matrix); }
};

/// The closed subspaces of the block decomposition, realised as index subsets.
enum class Subspace {
    m,       // words with some letter != 1
    m_perp,  // 1-chains, vacuum included
    n,       // words with some letter != n
    n_perp,  // n-chains, vacuum included
};

const char* to_string(Subspace s);

/// Flat indices of `basis` that belong to the subspace, in basis order.
std::vector<std::size_t> select(const BasisIndex& basis, Subspace s);

/// W_L restricted to words of length <= depth, with codomain depth depth + K so
/// that no image vector is cut off.
FockOperator build_wl(const Symbol& symbol, int depth, std::size_t cap = default_basis_cap());

/// Square compression of W_L* to words of length <= depth, assembled from
/// predecessor, leading_ones and L* only. W_L* never increases word length, so
/// this is the exact restriction.
FockOperator build_wl_adjoint(const Symbol& symbol, int depth, std::size_t cap = default_basis_cap());

/// Compression P_row W |_col.
FockOperator block(const FockOperator& w, Subspace row, Subspace col);

enum class Chain { ones, ns };

/// Identifies a vector supported on the 1-chain (or n-chain) with its Hardy
/// space coefficients: entry p of the result is the e_chain^p (x) E slot.
/// Throws OffChainSupport if v has support outside the chain.
std::vector<CVector> hardy_transport(const BasisIndex& basis, const CVector& v, Chain chain,
                                     double tol = 0.0);

/// Inverse of hardy_transport; degrees beyond the basis depth must be absent.
CVector hardy_transport_inverse(const BasisIndex& basis, const std::vector<CVector>& coeffs, Chain chain);

/// Block lower-triangular Toeplitz matrix with block (i, j) = L_{i-j}.
CMatrix toeplitz_truncation(const MatrixPolynomial& theta, std::size_t size);

/// Matrix of U_1 W_22 U_n* in degree coordinates: columns indexed by degree
/// 0..domain depth, rows by degree 0..codomain depth (slot fastest).
CMatrix transported_w22(const FockOperator& wl);

/// One line per nonzero `row col re im` after a `# n d D Dcod` header.
void write_dump(std::ostream& os, const FockOperator& op);

}  // namespace odolab
