#include "odolab/numerics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "odolab/errors.hpp"

#define LAPACK_COMPLEX_CPP
#include <lapacke.h>

namespace odolab {

namespace {

// Below this size JacobiSVD is used for its accuracy; above it LAPACK's
// divide and conquer driver, with plain QR iteration as the fallback.
// Eigen 3.4's BDCSVD mis-deflates some banded Toeplitz blocks.
constexpr Eigen::Index kJacobiLimit = 256;

SvdResult lapack_svd(const CMatrix& a, unsigned options) {
    const char job = (options & Eigen::ComputeFullU) ? 'A' : (options & Eigen::ComputeThinU) ? 'S' : 'N';
    const lapack_int m = static_cast<lapack_int>(a.rows());
    const lapack_int n = static_cast<lapack_int>(a.cols());
    const lapack_int k = std::min(m, n);
    const lapack_int ucols = job == 'A' ? m : job == 'S' ? k : 1;
    const lapack_int vtrows = job == 'A' ? n : job == 'S' ? k : 1;

    for (int attempt = 0; attempt < 2; ++attempt) {
        CMatrix work = a;
        Eigen::VectorXd s(k);
        CMatrix u(job == 'N' ? 1 : m, ucols);
        CMatrix vt(vtrows, n);
        auto* pa = reinterpret_cast<lapack_complex_double*>(work.data());
        auto* pu = reinterpret_cast<lapack_complex_double*>(u.data());
        auto* pvt = reinterpret_cast<lapack_complex_double*>(vt.data());
        lapack_int info = 0;
        if (attempt == 0) {
            info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, job, m, n, pa, m, s.data(), pu, static_cast<lapack_int>(u.rows()),
                                  pvt, vtrows);
        } else {
            std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(1, k - 1)));
            info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, job, job, m, n, pa, m, s.data(), pu,
                                  static_cast<lapack_int>(u.rows()), pvt, vtrows, superb.data());
        }
        if (info != 0 || !s.allFinite()) continue;
        SvdResult out;
        out.singular_values = s;
        if (job != 'N') {
            out.u = u;
            out.v = vt.adjoint();
        }
        return out;
    }
    throw NumericalFailure("svd: decomposition did not converge");
}

template <typename Solver>
SvdResult unpack(const Solver& solver, bool want_vectors) {
    if (solver.info() != Eigen::Success) {
        throw NumericalFailure("svd: decomposition did not converge");
    }
    SvdResult out;
    out.singular_values = solver.singularValues();
    if (want_vectors) {
        out.u = solver.matrixU();
        out.v = solver.matrixV();
    }
    return out;
}

SvdResult run_svd(const CMatrix& a, unsigned options) {
    if (std::min(a.rows(), a.cols()) <= kJacobiLimit) {
        Eigen::JacobiSVD<CMatrix> solver(a, options);
        return unpack(solver, options != 0);
    }
    return lapack_svd(a, options);
}

}  // namespace

void Tolerance::validate() const {
    if (!(eps_exact > 0.0) || !(eps_exact <= eps_rank) || !(eps_trunc > 0.0)) {
        std::ostringstream msg;
        msg << "invalid tolerances: need 0 < eps_exact <= eps_rank and eps_trunc > 0 (got "
            << eps_exact << ", " << eps_rank << ", " << eps_trunc << ")";
        throw InputError(msg.str());
    }
}

bool all_finite(const CMatrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
        }
    }
    return true;
}

double max_abs(const CMatrix& a) {
    double m = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a(i, j)));
    }
    return m;
}

SvdResult svd(const CMatrix& a, bool full) {
    if (!all_finite(a)) throw PreconditionError("svd: matrix has non-finite entries");
    if (a.size() == 0) {
        SvdResult out;
        out.singular_values.resize(0);
        out.u = full ? CMatrix::Identity(a.rows(), a.rows()) : CMatrix(a.rows(), 0);
        out.v = full ? CMatrix::Identity(a.cols(), a.cols()) : CMatrix(a.cols(), 0);
        return out;
    }
    const unsigned options = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                                  : (Eigen::ComputeThinU | Eigen::ComputeThinV);
    return run_svd(a, options);
}

Eigen::VectorXd singular_values(const CMatrix& a) {
    if (!all_finite(a)) throw PreconditionError("svd: matrix has non-finite entries");
    if (a.size() == 0) return Eigen::VectorXd(0);
    return run_svd(a, 0).singular_values;
}

namespace {

std::size_t rank_of(const Eigen::VectorXd& s, const Tolerance& tol) {
    if (s.size() == 0 || s(0) <= tol.eps_rank) return 0;
    const double cutoff = tol.eps_rank * s(0);
    std::size_t rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) ++rank;
    }
    return rank;
}

}  // namespace

std::size_t numerical_rank(const CMatrix& a, const Tolerance& tol) {
    return rank_of(singular_values(a), tol);
}

LeastSquares least_squares(const CMatrix& b, const CMatrix& a, const Tolerance& tol) {
    if (b.rows() != a.rows()) {
        throw PreconditionError("least_squares: B and A must have the same number of rows");
    }
    LeastSquares out;
    out.x = CMatrix::Zero(b.cols(), a.cols());
    if (b.size() != 0) {
        const SvdResult f = svd(b);
        const Eigen::VectorXd& s = f.singular_values;
        if (s.size() > 0 && s(0) > tol.eps_rank) {
            const double cutoff = tol.eps_rank * s(0);
            const CMatrix uta = f.u.adjoint() * a;
            for (Eigen::Index i = 0; i < s.size(); ++i) {
                if (s(i) > cutoff) out.x += f.v.col(i) * (uta.row(i) / s(i));
            }
        }
    }
    out.residual = (b * out.x - a).norm();
    return out;
}

CMatrix orthocomplement_basis(const CMatrix& vectors, Eigen::Index ambient, const Tolerance& tol) {
    if (vectors.cols() > 0 && vectors.rows() != ambient) {
        throw PreconditionError("orthocomplement_basis: vectors do not live in the ambient space");
    }
    if (vectors.cols() == 0) return CMatrix::Identity(ambient, ambient);
    const SvdResult f = svd(vectors, true);
    const auto rank = static_cast<Eigen::Index>(rank_of(f.singular_values, tol));
    return f.u.rightCols(ambient - rank);
}

CMatrix null_space(const CMatrix& a, const Tolerance& tol) {
    if (a.rows() == 0) return CMatrix::Identity(a.cols(), a.cols());
    const SvdResult f = svd(a, true);
    const auto rank = static_cast<Eigen::Index>(rank_of(f.singular_values, tol));
    return f.v.rightCols(a.cols() - rank);
}

cplx polyval(std::span<const cplx> coeffs, cplx z) {
    cplx acc{0.0, 0.0};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

WindingCertificate winding_certificate(std::span<const cplx> coeffs, std::size_t grid) {
    if (grid < 8) throw PreconditionError("winding_number: grid must have at least 8 points");
    bool nonzero = false;
    double lipschitz = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        if (!std::isfinite(coeffs[k].real()) || !std::isfinite(coeffs[k].imag())) {
            throw PreconditionError("winding_number: non-finite coefficient");
        }
        nonzero = nonzero || coeffs[k] != cplx{0.0, 0.0};
        lipschitz += static_cast<double>(k) * std::abs(coeffs[k]);
    }
    if (!nonzero) throw PreconditionError("winding_number: polynomial is identically zero");

    const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
    WindingCertificate cert;
    cert.margin = lipschitz * step;
    cert.min_modulus = std::numeric_limits<double>::infinity();

    double total = 0.0;
    cplx prev = polyval(coeffs, cplx{1.0, 0.0});
    cert.min_modulus = std::abs(prev);
    for (std::size_t j = 1; j <= grid; ++j) {
        const cplx z = std::polar(1.0, step * static_cast<double>(j % grid));
        const cplx cur = polyval(coeffs, z);
        cert.min_modulus = std::min(cert.min_modulus, std::abs(cur));
        total += std::arg(cur / prev);
        prev = cur;
    }
    // Between neighbouring nodes |p| moves by at most lipschitz * step / 2, so a grid
    // minimum above the margin excludes zeros on the circle and makes each
    // argument increment smaller than pi.
    if (!(cert.min_modulus > cert.margin)) {
        std::ostringstream msg;
        msg << "winding_number: polynomial may vanish on the unit circle (min grid modulus "
            << cert.min_modulus << " <= Lipschitz margin " << cert.margin << ")";
        throw BoundaryZeroSuspected(msg.str(), cert.min_modulus, cert.margin);
    }
    cert.winding = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
    return cert;
}

int winding_number(std::span<const cplx> coeffs, std::size_t grid) {
    return winding_certificate(coeffs, grid).winding;
}

PowerIterationResult power_sigma_max(const LinearMap& map, std::uint64_t seed,
                                     std::size_t max_iterations, double rel_tol) {
    PowerIterationResult out;
    if (map.rows == 0 || map.cols == 0) {
        out.converged = true;
        return out;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    CVector x(map.cols);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = cplx{gauss(rng), gauss(rng)};
    x.normalize();

    double sigma = 0.0;
    int quiet = 0;
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        const CVector y = map.apply(x);
        const double estimate = y.norm();
        out.iterations = it;
        if (estimate == 0.0) {
            // x landed in the kernel; for a nonzero map a random restart fixes this.
            if (sigma == 0.0 && it > 3) {
                out.converged = true;
                out.sigma_max = 0.0;
                return out;
            }
            for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = cplx{gauss(rng), gauss(rng)};
            x.normalize();
            continue;
        }
        const double change = std::abs(estimate - sigma);
        sigma = std::max(sigma, estimate);
        quiet = change <= rel_tol * sigma ? quiet + 1 : 0;
        if (quiet >= 3) {
            out.converged = true;
            break;
        }
        CVector z = map.apply_adjoint(y);
        const double zn = z.norm();
        if (zn == 0.0) break;
        x = z / zn;
    }
    out.sigma_max = sigma;
    return out;
}

PowerIterationResult power_sigma_max(const CMatrix& a, std::uint64_t seed,
                                     std::size_t max_iterations, double rel_tol) {
    LinearMap map;
    map.rows = a.rows();
    map.cols = a.cols();
    map.apply = [&a](const CVector& v) -> CVector { return a * v; };
    map.apply_adjoint = [&a](const CVector& v) -> CVector { return a.adjoint() * v; };
    return power_sigma_max(map, seed, max_iterations, rel_tol);
}

}  // namespace odolab
