#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "odolab/fock.hpp"
#include "odolab/numerics.hpp"

namespace odolab {

/// A finitely supported symbol L : E -> F^2_n (x) E, E = C^dim.
///
/// Stores the coefficients c(word, s, q) = <L h_q, e_word (x) h_s> with 1-based
/// slots. Entries that were never added are zero.
class Symbol {
public:
    struct Key {
        Word word;
        int s;
        int q;
        friend auto operator<=>(const Key&, const Key&) = default;
    };

    Symbol(int n, int dim);

    int n() const { return n_; }
    int dim() const { return dim_; }

    /// Longest word in the support (0 for a vacuum-only or empty symbol).
    int depth() const { return depth_; }

    /// Adds one coefficient; throws InputError on a duplicate key or invalid word/slot.
    void add(const Word& word, int s, int q, cplx value);

    cplx coefficient(const Word& word, int s, int q) const;
    const std::map<Key, cplx>& entries() const { return entries_; }

    /// L* (e_word (x) h_s), a dim-vector.
    CVector adjoint_column(const Word& word, int s) const;

    /// L as a matrix whose rows are indexed by `basis` (which must reach depth()).
    CMatrix as_matrix(const BasisIndex& basis) const;
    CMatrix as_matrix() const;

    /// Part of L supported on 1-chain words (P_{M-perp} L) and the remainder (P_M L).
    Symbol chain_part() const;
    Symbol m_part() const;

    /// max |c| over entries on words that are not 1-chains.
    double m_part_max() const;

    /// Optional truncation tail bound attached to symbols built from infinite series.
    std::optional<double> tail_bound;

private:
    int n_;
    int dim_;
    int depth_ = 0;
    std::map<Key, cplx> entries_;
    std::map<std::pair<Word, int>, std::vector<std::pair<int, cplx>>> by_row_;
};

/// Theta(z) = sum_r z^r L_r with d x d coefficients.
struct MatrixPolynomial {
    std::vector<CMatrix> coefficients;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
    Eigen::Index dim() const { return coefficients.empty() ? 0 : coefficients.front().rows(); }
    CMatrix coefficient(int r) const;
    CMatrix evaluate(cplx z) const;
};

/// L_r(s, q) = c(1^r, s, q); zero for r beyond the symbol depth.
CMatrix coefficient_operator(const Symbol& symbol, int r);

/// Coefficients L_0..L_K, K = symbol depth. Entries on words outside the
/// 1-chain are ignored.
MatrixPolynomial theta(const Symbol& symbol);

/// Coordinates of L* v for v given in `basis` coordinates.
CVector symbol_adjoint_apply(const Symbol& symbol, const BasisIndex& basis, const CVector& v);

struct InnerVerdict {
    bool inner = false;
    double deviation = 0.0;  // max(|A_0 - I|_max, max_{j>0} |A_j|_max)
};

/// Decides Theta(zeta)* Theta(zeta) = I on the circle from the trigonometric
/// coefficients A_j = sum_r L_r* L_{r+j}.
InnerVerdict is_inner_exact(const MatrixPolynomial& theta, double tolerance);

/// Coefficients of det Theta(z) (degree <= dim * K), recovered by exact
/// interpolation at roots of unity.
std::vector<cplx> determinant_coefficients(const MatrixPolynomial& theta);

struct InvertibilityVerdict {
    bool invertible = false;
    int zeros_inside = 0;  // winding number of det Theta
    double min_modulus = 0.0;
    double margin = 0.0;
};

/// Invertibility in H-infinity: det Theta has no zero in the closed disk.
/// Throws IdenticallySingular when det Theta vanishes identically and
/// BoundaryZeroSuspected when a zero on the circle cannot be excluded.
InvertibilityVerdict is_invertible_hinf(const MatrixPolynomial& theta, std::size_t grid = 8192,
                                        const Tolerance& tol = {});

struct SupNormBracket {
    double lower = 0.0;
    double upper = 0.0;
};

/// Bracket for sup_{|zeta|=1} ||Theta(zeta)||: grid maximum and grid maximum plus
/// the Lipschitz slack sum_r r ||L_r|| * 2 pi / grid.
SupNormBracket sup_norm(const MatrixPolynomial& theta, std::size_t grid = 4096);

/// Symbol file format: {"n": int, "dim": int, "entries": [{"word": [...], "s", "q", "re", "im"}]}.
Symbol symbol_from_json(const std::string& text);
std::string symbol_to_json(const Symbol& symbol);
Symbol load_symbol(const std::string& path);

}  // namespace odolab
