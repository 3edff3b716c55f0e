#include "odolab/operator.hpp"

#include <cstdio>
#include <numeric>
#include <ostream>

#include "odolab/errors.hpp"

namespace odolab {

namespace {

using Triplet = Eigen::Triplet<cplx>;

std::vector<std::size_t> iota(std::size_t count) {
    std::vector<std::size_t> v(count);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

bool member(const Word& w, int n, Subspace s) {
    const WordClass c = classify_word(w, n);
    switch (s) {
        case Subspace::m: return c.in_m0;
        case Subspace::m_perp: return c.is_ones_chain;
        case Subspace::n: return c.in_n0;
        case Subspace::n_perp: return c.is_ns_chain;
    }
    return false;
}

SparseCMatrix from_triplets(std::size_t rows, std::size_t cols, const std::vector<Triplet>& t) {
    SparseCMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

}  // namespace

const char* to_string(Subspace s) {
    switch (s) {
        case Subspace::m: return "M";
        case Subspace::m_perp: return "M_perp";
        case Subspace::n: return "N";
        case Subspace::n_perp: return "N_perp";
    }
    return "?";
}

std::vector<std::size_t> select(const BasisIndex& basis, Subspace s) {
    std::vector<std::size_t> out;
    const auto d = static_cast<std::size_t>(basis.dim());
    for (std::size_t wi = 0; wi < basis.word_count(); ++wi) {
        if (!member(basis.word_at(wi), basis.n(), s)) continue;
        for (std::size_t slot = 0; slot < d; ++slot) out.push_back(wi * d + slot);
    }
    return out;
}

FockOperator build_wl(const Symbol& symbol, int depth, std::size_t cap) {
    const int n = symbol.n();
    const int d = symbol.dim();
    BasisIndex domain(n, depth, d, cap);
    BasisIndex codomain(n, depth + symbol.depth(), d, cap);

    // Column q of L as (word, s, value) triples.
    std::vector<std::vector<std::tuple<Word, int, cplx>>> columns(static_cast<std::size_t>(d));
    for (const auto& [key, c] : symbol.entries()) {
        columns[static_cast<std::size_t>(key.q - 1)].emplace_back(key.word, key.s, c);
    }

    std::vector<Triplet> t;
    t.reserve(domain.size() + domain.size() / 4 * symbol.entries().size());
    for (std::size_t wi = 0; wi < domain.word_count(); ++wi) {
        const Word mu = domain.word_at(wi);
        const WordClass cls = classify_word(mu, n);
        for (int q = 1; q <= d; ++q) {
            const auto col = static_cast<Eigen::Index>(domain.index_of(mu, q));
            if (cls.in_n0) {
                t.emplace_back(static_cast<Eigen::Index>(codomain.index_of(successor(mu, n), q)), col, 1.0);
                continue;
            }
            // mu = n^m: the carry runs off the end and the overflow is routed through L.
            const Word prefix = Word::repeated(1, mu.size());
            for (const auto& [w, s, c] : columns[static_cast<std::size_t>(q - 1)]) {
                t.emplace_back(static_cast<Eigen::Index>(codomain.index_of(prefix.then(w), s)), col, c);
            }
        }
    }
    FockOperator op{domain, codomain, iota(domain.size()), iota(codomain.size()),
                    from_triplets(codomain.size(), domain.size(), t)};
    return op;
}

FockOperator build_wl_adjoint(const Symbol& symbol, int depth, std::size_t cap) {
    const int n = symbol.n();
    const int d = symbol.dim();
    BasisIndex basis(n, depth, d, cap);

    std::vector<Triplet> t;
    t.reserve(basis.size() * 2);
    for (std::size_t wi = 0; wi < basis.word_count(); ++wi) {
        const Word gamma = basis.word_at(wi);
        const bool in_m0 = classify_word(gamma, n).in_m0;
        const LeadingOnes split = leading_ones(gamma);
        for (int l = 1; l <= d; ++l) {
            const auto col = static_cast<Eigen::Index>(basis.index_of(gamma, l));
            if (in_m0) {
                t.emplace_back(static_cast<Eigen::Index>(basis.index_of(predecessor(gamma, n), l)), col, 1.0);
            }
            for (std::size_t p = 0; p <= split.count; ++p) {
                const CVector back = symbol.adjoint_column(split.reduced(p), l);
                const Word chain = Word::repeated(n, p);
                for (int q = 1; q <= d; ++q) {
                    if (back(q - 1) == cplx{}) continue;
                    t.emplace_back(static_cast<Eigen::Index>(basis.index_of(chain, q)), col, back(q - 1));
                }
            }
        }
    }
    FockOperator op{basis, basis, iota(basis.size()), iota(basis.size()),
                    from_triplets(basis.size(), basis.size(), t)};
    return op;
}

FockOperator block(const FockOperator& w, Subspace row, Subspace col) {
    std::vector<long> row_pos(w.rows.size(), -1);
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < w.rows.size(); ++i) {
        if (member(w.codomain.word_of(w.rows[i]), w.codomain.n(), row)) {
            row_pos[i] = static_cast<long>(rows.size());
            rows.push_back(w.rows[i]);
        }
    }
    std::vector<std::size_t> cols;
    std::vector<Triplet> t;
    for (std::size_t j = 0; j < w.cols.size(); ++j) {
        if (!member(w.domain.word_of(w.cols[j]), w.domain.n(), col)) continue;
        const auto new_col = static_cast<Eigen::Index>(cols.size());
        cols.push_back(w.cols[j]);
        for (SparseCMatrix::InnerIterator it(w.matrix, static_cast<Eigen::Index>(j)); it; ++it) {
            const long r = row_pos[static_cast<std::size_t>(it.row())];
            if (r >= 0) t.emplace_back(static_cast<Eigen::Index>(r), new_col, it.value());
        }
    }
    FockOperator out{w.domain, w.codomain, std::move(cols), std::move(rows), {}};
    out.matrix = from_triplets(out.rows.size(), out.cols.size(), t);
    return out;
}

std::vector<CVector> hardy_transport(const BasisIndex& basis, const CVector& v, Chain chain, double tol) {
    if (v.size() != static_cast<Eigen::Index>(basis.size())) {
        throw PreconditionError("hardy_transport: vector length does not match the basis");
    }
    const int letter = chain == Chain::ones ? 1 : basis.n();
    std::vector<CVector> out(static_cast<std::size_t>(basis.depth()) + 1, CVector::Zero(basis.dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) <= tol) continue;
        const auto flat = static_cast<std::size_t>(i);
        const Word w = basis.word_of(flat);
        for (int l : w.letters()) {
            if (l != letter) throw OffChainSupport("hardy_transport: support on off-chain word " + w.str());
        }
        out[w.size()](basis.slot_of(flat) - 1) = v(i);
    }
    return out;
}

CVector hardy_transport_inverse(const BasisIndex& basis, const std::vector<CVector>& coeffs, Chain chain) {
    const int letter = chain == Chain::ones ? 1 : basis.n();
    CVector out = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t p = 0; p < coeffs.size(); ++p) {
        if (coeffs[p].size() != basis.dim()) throw PreconditionError("hardy_transport_inverse: coefficient size");
        if (p > static_cast<std::size_t>(basis.depth())) {
            if (coeffs[p].isZero(0.0)) continue;
            throw PreconditionError("hardy_transport_inverse: degree beyond the basis depth");
        }
        const Word w = Word::repeated(letter, p);
        for (int s = 1; s <= basis.dim(); ++s) {
            out(static_cast<Eigen::Index>(basis.index_of(w, s))) = coeffs[p](s - 1);
        }
    }
    return out;
}

CMatrix toeplitz_truncation(const MatrixPolynomial& theta, std::size_t size) {
    if (size < 1) throw PreconditionError("toeplitz_truncation: size must be >= 1");
    const Eigen::Index d = theta.dim();
    const auto blocks = static_cast<Eigen::Index>(size);
    CMatrix t = CMatrix::Zero(blocks * d, blocks * d);
    for (Eigen::Index i = 0; i < blocks; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const Eigen::Index r = i - j;
            if (r > theta.degree()) continue;
            t.block(i * d, j * d, d, d) = theta.coefficients[static_cast<std::size_t>(r)];
        }
    }
    return t;
}

CMatrix transported_w22(const FockOperator& wl) {
    const FockOperator w22 = block(wl, Subspace::m_perp, Subspace::n_perp);
    const Eigen::Index d = wl.domain.dim();
    const Eigen::Index in_degrees = wl.domain.depth() + 1;
    const Eigen::Index out_degrees = wl.codomain.depth() + 1;

    std::vector<long> col_pos(wl.domain.size(), -1);
    for (std::size_t j = 0; j < w22.cols.size(); ++j) col_pos[w22.cols[j]] = static_cast<long>(j);

    CMatrix out = CMatrix::Zero(out_degrees * d, in_degrees * d);
    for (Eigen::Index p = 0; p < in_degrees; ++p) {
        for (Eigen::Index q = 0; q < d; ++q) {
            std::vector<CVector> coeffs(static_cast<std::size_t>(in_degrees), CVector::Zero(d));
            coeffs[static_cast<std::size_t>(p)](q) = 1.0;
            const CVector x = hardy_transport_inverse(wl.domain, coeffs, Chain::ns);
            CVector x_block = CVector::Zero(static_cast<Eigen::Index>(w22.cols.size()));
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                if (x(i) == cplx{}) continue;
                const long pos = col_pos[static_cast<std::size_t>(i)];
                if (pos < 0) throw OffChainSupport("transported_w22: input left the n-chain");
                x_block(pos) = x(i);
            }
            const CVector y_block = w22.matrix * x_block;
            CVector y = CVector::Zero(static_cast<Eigen::Index>(wl.codomain.size()));
            for (std::size_t i = 0; i < w22.rows.size(); ++i) {
                y(static_cast<Eigen::Index>(w22.rows[i])) = y_block(static_cast<Eigen::Index>(i));
            }
            const std::vector<CVector> image = hardy_transport(wl.codomain, y, Chain::ones);
            for (Eigen::Index r = 0; r < out_degrees; ++r) {
                out.block(r * d, p * d + q, d, 1) = image[static_cast<std::size_t>(r)];
            }
        }
    }
    return out;
}

void write_dump(std::ostream& os, const FockOperator& op) {
    os << "# " << op.domain.n() << ' ' << op.domain.dim() << ' ' << op.domain.depth() << ' '
       << op.codomain.depth() << '\n';
    char line[128];
    for (Eigen::Index j = 0; j < op.matrix.outerSize(); ++j) {
        for (SparseCMatrix::InnerIterator it(op.matrix, j); it; ++it) {
            std::snprintf(line, sizeof line, "%zu %zu %.17g %.17g\n",
                          op.rows[static_cast<std::size_t>(it.row())], op.cols[static_cast<std::size_t>(j)],
                          it.value().real(), it.value().imag());
            os << line;
        }
    }
}

}  // namespace odolab
