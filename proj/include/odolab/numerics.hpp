#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace odolab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Tolerances shared by every module.
///
/// `eps_exact` bounds identities that hold exactly in exact arithmetic,
/// `eps_rank` is the relative singular-value cutoff for rank decisions and
/// `eps_trunc` is used where a comparison is limited by series truncation.
struct Tolerance {
    double eps_exact = 1e-10;
    double eps_rank = 1e-8;
    double eps_trunc = 1e-6;

    /// Throws InputError unless 0 < eps_exact <= eps_rank.
    void validate() const;
};

struct SvdResult {
    Eigen::VectorXd singular_values;  // descending
    CMatrix u;
    CMatrix v;
};

/// Singular value decomposition A = U diag(s) V*.
/// With `full` set, U and V are square; otherwise they are thin.
SvdResult svd(const CMatrix& a, bool full = false);

/// Singular values only, descending.
Eigen::VectorXd singular_values(const CMatrix& a);

/// Number of singular values above eps_rank * sigma_1; 0 when sigma_1 <= eps_rank.
std::size_t numerical_rank(const CMatrix& a, const Tolerance& tol = {});

struct LeastSquares {
    CMatrix x;
    double residual = 0.0;  // Frobenius norm of B X - A
};

/// Minimum-norm minimiser of ||B X - A||_F.
LeastSquares least_squares(const CMatrix& b, const CMatrix& a, const Tolerance& tol = {});

/// Orthonormal basis (as columns) of the orthogonal complement of the span of
/// the columns of `vectors` inside C^ambient. `vectors` may have zero columns.
CMatrix orthocomplement_basis(const CMatrix& vectors, Eigen::Index ambient,
                              const Tolerance& tol = {});

/// Orthonormal basis of the null space of `a` (columns), rank decided by `tol`.
CMatrix null_space(const CMatrix& a, const Tolerance& tol = {});

struct WindingCertificate {
    int winding = 0;
    double min_modulus = 0.0;  // smallest |p| over the grid
    double margin = 0.0;       // Lipschitz safety margin the minimum had to exceed
};

/// Counts roots of p(z) = sum_k coeffs[k] z^k strictly inside the unit disk by
/// accumulating arg p(e^{i theta}) over a uniform grid. Throws
/// BoundaryZeroSuspected when the grid minimum of |p| does not clear the
/// Lipschitz margin sum_k k|c_k| * 2 pi / grid.
WindingCertificate winding_certificate(std::span<const cplx> coeffs, std::size_t grid = 8192);

int winding_number(std::span<const cplx> coeffs, std::size_t grid = 8192);

/// Horner evaluation of a scalar polynomial.
cplx polyval(std::span<const cplx> coeffs, cplx z);

/// Largest |a_ij|.
double max_abs(const CMatrix& a);

bool all_finite(const CMatrix& a);

/// A linear map given by its action and the action of its adjoint.
struct LinearMap {
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    std::function<CVector(const CVector&)> apply;
    std::function<CVector(const CVector&)> apply_adjoint;
};

struct PowerIterationResult {
    double sigma_max = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

/// Largest singular value by power iteration on A*A from a seeded start vector.
/// The returned value is a Rayleigh-quotient lower bound that converges from below.
PowerIterationResult power_sigma_max(const LinearMap& map, std::uint64_t seed = 1,
                                     std::size_t max_iterations = 200000,
                                     double rel_tol = 1e-15);

PowerIterationResult power_sigma_max(const CMatrix& a, std::uint64_t seed = 1,
                                     std::size_t max_iterations = 200000,
                                     double rel_tol = 1e-15);

}  // namespace odolab
