#include "odolab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "odolab/errors.hpp"

namespace odolab {

using ojson = nlohmann::ordered_json;

int AnalysisOptions::resolved_depth(int n) const {
    if (depth >= 0) return depth;
    return n == 1 ? 64 : 6;
}

int AnalysisOptions::resolved_chain_depth(const Symbol& symbol) const {
    if (chain_depth >= 0) return chain_depth;
    return std::max(resolved_depth(symbol.n()), 2 * symbol.depth() + 16);
}

std::size_t AnalysisOptions::resolved_cap() const {
    return cap > 0 ? cap : default_basis_cap();
}

namespace {

struct IsometryCheck {
    bool isometric = false;
    double deviation = 0.0;
    InnerVerdict inner;
    double m_part = 0.0;
};

IsometryCheck check_isometry(const Symbol& symbol, const Tolerance& tol) {
    IsometryCheck c;
    c.m_part = symbol.m_part_max();
    c.inner = is_inner_exact(theta(symbol), tol.eps_exact);
    c.deviation = std::max(c.m_part, c.inner.deviation);
    c.isometric = c.m_part <= tol.eps_exact && c.inner.inner;
    return c;
}

void require_isometric(const Symbol& symbol, const Tolerance& tol, const char* what) {
    const IsometryCheck c = check_isometry(symbol, tol);
    if (!c.isometric) {
        std::ostringstream msg;
        msg << what << ": symbol is not isometric (deviation " << c.deviation << ")";
        throw NotIsometric(msg.str());
    }
}

// Columns: chain coefficients of L h_q in degrees 0..a, slot fastest.
CMatrix chain_columns(const MatrixPolynomial& th, int a) {
    const Eigen::Index d = th.dim();
    CMatrix out = CMatrix::Zero((a + 1) * d, d);
    for (int r = 0; r <= std::min(a, th.degree()); ++r) out.middleRows(r * d, d) = th.coefficients[static_cast<std::size_t>(r)];
    return out;
}

// Columns P_a z^p L h_q for p in [first, a].
CMatrix shifted_columns(const CMatrix& base, Eigen::Index d, int a, int first) {
    const int count = std::max(0, a - first + 1);
    CMatrix out = CMatrix::Zero(base.rows(), count * d);
    for (int p = first; p <= a; ++p) {
        const Eigen::Index keep = (a + 1 - p) * d;
        out.block(p * d, (p - first) * d, keep, d) = base.topRows(keep);
    }
    return out;
}

// The map f -> (L* S_1^{*p} f)_{p = 0..a} on the chain sector of degree <= a.
CMatrix stacked_adjoint_map(const MatrixPolynomial& th, int a) {
    const Eigen::Index d = th.dim();
    CMatrix g = CMatrix::Zero((a + 1) * d, (a + 1) * d);
    for (int p = 0; p <= a; ++p) {
        for (int r = 0; r <= th.degree() && r + p <= a; ++r) {
            g.block(p * d, (r + p) * d, d, d) = th.coefficients[static_cast<std::size_t>(r)].adjoint();
        }
    }
    return g;
}

DefectBasis defect_at(const Symbol& symbol, int a, const Tolerance& tol) {
    const MatrixPolynomial th = theta(symbol);
    const Eigen::Index d = symbol.dim();
    const Eigen::Index ambient = (a + 1) * d;

    DefectBasis out;
    out.chain_depth = a;
    const CMatrix base = chain_columns(th, a);

    // (a) E_L = sector (-) span{z^p L E : p >= 1}, then remove L E.
    out.el_basis = orthocomplement_basis(shifted_columns(base, d, a, 1), ambient, tol);
    const CMatrix y = out.el_basis.adjoint() * base;
    out.defect_basis = out.el_basis * orthocomplement_basis(y, out.el_basis.cols(), tol);

    // (b) kernel of the stacked adjoint map.
    out.kernel_basis = null_space(stacked_adjoint_map(th, a), tol);

    out.rank_l = numerical_rank(symbol.as_matrix(), tol);
    return out;
}

// Largest depth <= depth whose basis has at most `limit` vectors; -1 if none.
int dense_depth(int n, int dim, int depth, std::size_t limit) {
    int best = -1;
    std::size_t words = 0;
    std::size_t power = 1;
    for (int dd = 0; dd <= depth; ++dd) {
        words += power;
        power *= static_cast<std::size_t>(n);
        if (words * static_cast<std::size_t>(dim) > limit) break;
        best = dd;
    }
    return best;
}

double column_norm(const SparseCMatrix& m, Eigen::Index j) {
    double s = 0.0;
    for (SparseCMatrix::InnerIterator it(m, j); it; ++it) s += std::norm(it.value());
    return std::sqrt(s);
}

double sparse_max_abs(const SparseCMatrix& m) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.outerSize(); ++j) {
        for (SparseCMatrix::InnerIterator it(m, j); it; ++it) best = std::max(best, std::abs(it.value()));
    }
    return best;
}

double sigma_min_dense(const CMatrix& m) {
    const Eigen::VectorXd s = singular_values(m);
    return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

}  // namespace

bool symbol_is_isometric(const Symbol& symbol, const Tolerance& tol) {
    return check_isometry(symbol, tol).isometric;
}

DefectBasis defect(const Symbol& symbol, const AnalysisOptions& options) {
    options.tol.validate();
    const int a = options.resolved_chain_depth(symbol);
    if (a < 0) throw InputError("defect: chain depth must be >= 0");
    DefectBasis out = defect_at(symbol, a, options.tol);
    if (out.defect_basis.cols() != out.kernel_basis.cols()) {
        std::ostringstream msg;
        msg << "defect: orthocomplement construction gives dimension " << out.defect_basis.cols()
            << " but the stacked-kernel construction gives " << out.kernel_basis.cols();
        throw MethodDisagreement(msg.str());
    }
    return out;
}

FredholmResult fredholm_index(const Symbol& symbol, const AnalysisOptions& options) {
    require_isometric(symbol, options.tol, "fredholm_index");
    const int a = options.resolved_chain_depth(symbol);
    AnalysisOptions prev = options;
    prev.chain_depth = std::max(0, a - 1);
    FredholmResult f;
    f.defect_dim = defect(symbol, options).dim();
    f.defect_dim_previous = defect(symbol, prev).dim();
    f.stable = f.defect_dim == f.defect_dim_previous;
    f.index = -static_cast<int>(f.defect_dim);
    return f;
}

WoldResult wold_multiplicity(const Symbol& symbol, const AnalysisOptions& options) {
    require_isometric(symbol, options.tol, "wold_multiplicity");
    const int a = options.resolved_chain_depth(symbol);
    const int cut = a - symbol.depth() - 1;
    if (cut < 0) throw PreconditionError("wold_multiplicity: chain depth must exceed the symbol depth");

    WoldResult w;
    w.toeplitz_size = a + 1;
    w.low_degree_cut = cut;
    w.mult_wl = defect(symbol, options).dim();

    const MatrixPolynomial th = theta(symbol);
    const Eigen::Index d = th.dim();
    const CMatrix t = toeplitz_truncation(th, static_cast<std::size_t>(a + 1));
    const CMatrix low = t.adjoint().leftCols((cut + 1) * d);
    w.mult_mtheta = static_cast<std::size_t>(null_space(low, options.tol).cols());
    if (w.mult_wl != w.mult_mtheta) {
        std::ostringstream msg;
        msg << "wold_multiplicity: dim ker W_L* = " << w.mult_wl << " but dim ker M_Theta* = " << w.mult_mtheta;
        throw MethodDisagreement(msg.str());
    }
    return w;
}

NormReport norm_report(const Symbol& symbol, const AnalysisOptions& options) {
    NormReport r;
    r.depth = options.resolved_depth(symbol.n());
    const FockOperator w = build_wl(symbol, r.depth, options.resolved_cap());
    LinearMap map;
    map.rows = w.matrix.rows();
    map.cols = w.matrix.cols();
    map.apply = [&w](const CVector& v) -> CVector { return w.matrix * v; };
    map.apply_adjoint = [&w](const CVector& v) -> CVector { return w.matrix.adjoint() * v; };
    const PowerIterationResult p = power_sigma_max(map);
    r.sigma_max = p.sigma_max;
    r.iterations = p.iterations;

    r.bracket = sup_norm(theta(symbol), options.sup_grid);
    r.applicable = symbol.m_part_max() <= options.tol.eps_exact;
    if (r.applicable) {
        r.formula_value = std::max(1.0, r.bracket.lower);
        r.formula_upper = std::max(1.0, r.bracket.upper);
    }
    const Eigen::VectorXd s = singular_values(symbol.as_matrix());
    r.symbol_norm = s.size() ? s(0) : 0.0;
    return r;
}

SparseCMatrix douglas_gamma(int n, int depth, const CMatrix& c, std::size_t cap) {
    const BasisIndex basis(n, depth, static_cast<int>(c.rows()), cap);
    std::vector<Eigen::Triplet<cplx>> t;
    const Eigen::Index d = c.rows();
    for (std::size_t wi = 0; wi < basis.word_count(); ++wi) {
        const Word w = basis.word_at(wi);
        const bool chain = classify_word(w, n).is_ns_chain;
        for (Eigen::Index q = 0; q < d; ++q) {
            const auto col = static_cast<Eigen::Index>(wi * static_cast<std::size_t>(d)) + q;
            if (!chain) {
                t.emplace_back(col, col, 1.0);
                continue;
            }
            for (Eigen::Index s = 0; s < d; ++s) {
                if (c(s, q) != cplx{}) t.emplace_back(static_cast<Eigen::Index>(wi * static_cast<std::size_t>(d)) + s, col, c(s, q));
            }
        }
    }
    SparseCMatrix g(static_cast<Eigen::Index>(basis.size()), static_cast<Eigen::Index>(basis.size()));
    g.setFromTriplets(t.begin(), t.end());
    return g;
}

DouglasResult douglas_factor(const Symbol& l1, const Symbol& l2, const AnalysisOptions& options) {
    if (l1.n() != l2.n() || l1.dim() != l2.dim()) throw PreconditionError("douglas_factor: symbols differ in n or dim");
    const int n = l1.n();
    const int k = std::max(l1.depth(), l2.depth());
    const BasisIndex common(n, k, l1.dim(), options.resolved_cap());
    const LeastSquares ls = least_squares(l2.as_matrix(common), l1.as_matrix(common), options.tol);
    if (ls.residual > options.tol.eps_rank) {
        std::ostringstream msg;
        msg << "douglas_factor: ran L1 is not contained in ran L2 (residual " << ls.residual << ")";
        throw RangeNotContained(msg.str(), ls.residual);
    }

    DouglasResult r;
    r.c = ls.x;
    r.residual = ls.residual;
    r.depth = options.resolved_depth(n);

    const FockOperator w1 = build_wl(l1, r.depth, options.resolved_cap());
    const FockOperator w2 = build_wl(l2, r.depth, options.resolved_cap());
    SparseCMatrix lhs = w1.matrix;
    SparseCMatrix rhs = w2.matrix * douglas_gamma(n, r.depth, r.c, options.resolved_cap());
    const Eigen::Index rows = std::max(lhs.rows(), rhs.rows());
    lhs.conservativeResize(rows, lhs.cols());
    rhs.conservativeResize(rows, rhs.cols());
    r.gamma_deviation = sparse_max_abs(SparseCMatrix(lhs - rhs));
    r.gamma_verified = r.gamma_deviation <= 1e-12;

    r.theta_checked = l1.m_part_max() <= options.tol.eps_exact && l2.m_part_max() <= options.tol.eps_exact;
    if (r.theta_checked) {
        const MatrixPolynomial t1 = theta(l1);
        const MatrixPolynomial t2 = theta(l2);
        constexpr int grid = 128;
        for (int j = 0; j < grid; ++j) {
            const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * j / grid);
            r.theta_deviation = std::max(r.theta_deviation, max_abs(t1.evaluate(z) - t2.evaluate(z) * r.c));
        }
        r.theta_verified = r.theta_deviation <= 1e-10;
    }
    return r;
}

std::vector<cplx> default_coburn_lambdas() {
    return {0.0, 0.3, std::polar(0.5, std::numbers::pi / 4), cplx{0.0, 0.9}};
}

CoburnResult coburn_bound(const Symbol& symbol, const std::vector<cplx>& lambdas, const AnalysisOptions& options) {
    require_isometric(symbol, options.tol, "coburn_bound");
    CoburnResult out;
    const int requested = options.resolved_depth(symbol.n());
    out.depth = dense_depth(symbol.n(), symbol.dim(), requested, options.dense_cap);
    if (out.depth < 0) throw CapExceeded("coburn_bound: no depth fits the dense SVD cap");
    const FockOperator w = build_wl(symbol, out.depth, options.resolved_cap());
    const CMatrix dense = w.dense();
    const Eigen::Index cols = dense.cols();
    for (const cplx lambda : lambdas) {
        if (!(std::abs(lambda) < 1.0)) throw InputError("coburn_bound: lambda must lie in the open unit disk");
        CMatrix m = dense;
        m.topRows(cols).diagonal().array() -= lambda;
        CoburnPoint p;
        p.lambda = lambda;
        p.sigma_min = sigma_min_dense(m);
        p.bound = 1.0 - std::abs(lambda);
        p.holds = p.sigma_min >= p.bound - 1e-10;
        out.points.push_back(p);
    }
    return out;
}

HypoResult hyponormality_probe(const Symbol& symbol, const AnalysisOptions& options) {
    if (symbol.n() < 2) throw PreconditionError("hyponormality_probe: requires n >= 2");
    HypoResult h;
    h.depth = options.resolved_depth(symbol.n());
    h.sigma_min_l = sigma_min_dense(symbol.as_matrix());
    h.necessary_condition = h.sigma_min_l >= 1.0 - options.tol.eps_exact;

    const FockOperator w = build_wl(symbol, h.depth, options.resolved_cap());
    const FockOperator wa = build_wl_adjoint(symbol, h.depth, options.resolved_cap());
    bool first = true;
    for (Eigen::Index j = 0; j < w.matrix.cols(); ++j) {
        const double fwd = std::pow(column_norm(w.matrix, j), 2);
        const double adj = std::pow(column_norm(wa.matrix, j), 2);
        if (first || adj - fwd > h.gap) {
            first = false;
            h.gap = adj - fwd;
            h.adjoint_norm_sq = adj;
            h.forward_norm_sq = fwd;
            h.witness_word = w.domain.word_of(static_cast<std::size_t>(j));
            h.witness_slot = w.domain.slot_of(static_cast<std::size_t>(j));
        }
    }
    h.has_witness = h.gap > options.tol.eps_exact;
    return h;
}

ChainProbe w12_probe(const Symbol& symbol, const AnalysisOptions& options) {
    ChainProbe probe;
    const int depth = options.resolved_depth(symbol.n());
    const CMatrix m = symbol.m_part().as_matrix(BasisIndex(symbol.n(), symbol.depth(), symbol.dim()));
    for (Eigen::Index q = 0; q < m.cols(); ++q) probe.expected.push_back(m.col(q).norm());

    const FockOperator w = build_wl(symbol, depth, options.resolved_cap());
    const FockOperator w12 = block(w, Subspace::m, Subspace::n_perp);
    probe.degrees = depth + 1;
    for (std::size_t j = 0; j < w12.cols.size(); ++j) {
        const int slot = w.domain.slot_of(w12.cols[j]);
        const double got = column_norm(w12.matrix, static_cast<Eigen::Index>(j));
        probe.max_deviation = std::max(probe.max_deviation, std::abs(got - probe.expected[static_cast<std::size_t>(slot - 1)]));
    }
    return probe;
}

ChainProbe compactness_probe(const Symbol& symbol, const AnalysisOptions& options) {
    if (symbol.n() != 1) throw PreconditionError("compactness_probe: requires n = 1");
    ChainProbe probe;
    const int depth = options.resolved_depth(1);
    const CMatrix l = symbol.as_matrix();
    for (Eigen::Index q = 0; q < l.cols(); ++q) probe.expected.push_back(l.col(q).norm());

    const FockOperator w = build_wl(symbol, depth, options.resolved_cap());
    probe.degrees = std::max(0, depth - symbol.depth() + 1);
    for (int p = 0; p < probe.degrees; ++p) {
        for (int q = 1; q <= symbol.dim(); ++q) {
            const auto col = static_cast<Eigen::Index>(w.domain.index_of(Word::repeated(1, static_cast<std::size_t>(p)), q));
            probe.max_deviation = std::max(probe.max_deviation,
                                           std::abs(column_norm(w.matrix, col) - probe.expected[static_cast<std::size_t>(q - 1)]));
        }
    }
    return probe;
}

ClassificationReport classify(const Symbol& symbol, const AnalysisOptions& options) {
    options.tol.validate();
    const Tolerance& tol = options.tol;
    ClassificationReport r;
    r.n = symbol.n();
    r.dim = symbol.dim();
    r.symbol_depth = symbol.depth();
    r.depth = options.resolved_depth(symbol.n());
    r.chain_depth = options.resolved_chain_depth(symbol);
    r.tail_bound = symbol.tail_bound;

    const MatrixPolynomial th = theta(symbol);
    const IsometryCheck iso = check_isometry(symbol, tol);
    r.m_part_max = iso.m_part;

    r.theta_inner = {iso.inner.inner, true, iso.inner.deviation, "inner-test", ""};
    if (symbol.tail_bound) {
        const bool within = iso.inner.deviation <= 10.0 * *symbol.tail_bound;
        r.theta_inner.note = std::string("truncated series; deviation ") + (within ? "within" : "exceeds") +
                             " 10x the tail bound";
    }

    r.isometric = {iso.isometric, true, iso.deviation, "isometry-characterization", ""};
    if (iso.m_part > tol.eps_exact) r.isometric.note = "L has components outside the 1-chain";
    else if (!iso.inner.inner) r.isometric.note = "Theta is not inner";

    {
        Verdict u{false, true, 0.0, "unitary-characterization", ""};
        if (symbol.depth() == 0) {
            const CMatrix m = symbol.as_matrix();
            const CMatrix id = CMatrix::Identity(m.rows(), m.cols());
            u.deviation = std::max(max_abs(m.adjoint() * m - id), max_abs(m * m.adjoint() - id));
            u.value = u.deviation <= tol.eps_exact;
            if (!u.value) u.note = "vacuum matrix is not unitary";
        } else {
            u.deviation = 1.0;
            u.note = "support leaves the vacuum";
        }
        r.unitary = u;
    }

    {
        Verdict v{false, true, 0.0, "invertibility-characterization", ""};
        try {
            const InvertibilityVerdict inv = is_invertible_hinf(th, options.invert_grid, tol);
            v.value = inv.invertible;
            v.deviation = inv.min_modulus;
            r.winding = inv.zeros_inside;
            std::ostringstream note;
            note << "det Theta: " << inv.zeros_inside << " zeros inside, min modulus " << inv.min_modulus
                 << ", margin " << inv.margin;
            v.note = note.str();
        } catch (const IdenticallySingular& e) {
            v.value = false;
            v.note = e.what();
        } catch (const BoundaryZeroSuspected& e) {
            if (options.strict_invertibility) throw;
            v.decided = false;
            v.deviation = e.min_modulus();
            v.note = e.what();
        }
        r.invertible = v;
    }

    r.theta_supnorm_bracket = sup_norm(th, options.sup_grid);
    {
        const Eigen::VectorXd s = singular_values(symbol.as_matrix());
        r.sigma_max_l = s.size() ? s(0) : 0.0;
        r.sigma_min_l = s.size() ? s(s.size() - 1) : 0.0;
    }

    const DefectBasis def = defect(symbol, options);
    r.defect_dim = def.dim();
    r.el_dim = static_cast<std::size_t>(def.el_basis.cols());
    r.rank_l = def.rank_l;
    r.kernel_dim = static_cast<std::size_t>(def.kernel_basis.cols());

    r.fock_kernel_depth = dense_depth(symbol.n(), symbol.dim(), r.depth, options.dense_cap);
    if (r.fock_kernel_depth >= 0) {
        const FockOperator wa = build_wl_adjoint(symbol, r.fock_kernel_depth, options.resolved_cap());
        r.fock_kernel_dim = static_cast<std::size_t>(null_space(wa.dense(), tol).cols());
    }

    if (iso.isometric) {
        const FredholmResult f = fredholm_index(symbol, options);
        r.fredholm_stable = f.stable;
        if (f.stable) r.fredholm_index = f.index;
        r.fredholm = {f.stable, true, 0.0, "fredholm-index", ""};
        if (!f.stable) {
            std::ostringstream note;
            note << "defect dimension moved from " << f.defect_dim_previous << " to " << f.defect_dim
                 << " between chain depths; reported as unstable";
            r.fredholm.decided = false;
            r.fredholm.note = note.str();
        }
        r.essentially_normal = r.fredholm;
        r.essentially_normal.theorem = "essential-normality";

        const WoldResult w = wold_multiplicity(symbol, options);
        r.mult_wl = w.mult_wl;
        r.mult_mtheta = w.mult_mtheta;
    } else {
        r.fredholm = {false, false, 0.0, "fredholm-index", "index formula needs an isometric symbol"};
        r.essentially_normal = {false, false, 0.0, "essential-normality", "equivalence needs an isometric symbol"};
    }

    try {
        const FockOperator w = build_wl(symbol, r.depth, options.resolved_cap());
        LinearMap map;
        map.rows = w.matrix.rows();
        map.cols = w.matrix.cols();
        map.apply = [&w](const CVector& v) -> CVector { return w.matrix * v; };
        map.apply_adjoint = [&w](const CVector& v) -> CVector { return w.matrix.adjoint() * v; };
        r.norm_wl_truncated = power_sigma_max(map).sigma_max;

        if (iso.isometric) {
            // Rows of 1-chain words of length <= D: there W W* agrees with its truncation.
            std::vector<Eigen::Triplet<cplx>> pick;
            Eigen::Index k = 0;
            for (const std::size_t idx : select(w.codomain, Subspace::m_perp)) {
                if (w.codomain.word_of(idx).size() > static_cast<std::size_t>(r.depth)) continue;
                pick.emplace_back(k++, static_cast<Eigen::Index>(idx), 1.0);
            }
            SparseCMatrix p(k, w.matrix.rows());
            p.setFromTriplets(pick.begin(), pick.end());
            const SparseCMatrix b = p * w.matrix;
            const CMatrix bb = CMatrix(SparseCMatrix(b * SparseCMatrix(b.adjoint())));
            r.self_commutator_rank = numerical_rank(CMatrix::Identity(k, k) - bb, tol);
        }

        if (r.fock_kernel_depth >= 1) {
            for (int dd = std::max(0, r.fock_kernel_depth - 1); dd <= r.fock_kernel_depth; ++dd) {
                const std::size_t rows = BasisIndex(symbol.n(), dd, symbol.dim(), options.resolved_cap()).size();
                const FockOperator wd = build_wl(symbol, dd, options.resolved_cap());
                const CMatrix square = wd.dense().topRows(static_cast<Eigen::Index>(rows));
                r.witnesses.push_back({"sigma_min_square_compression_depth_" + std::to_string(dd), sigma_min_dense(square)});
            }
        }
    } catch (const CapExceeded& e) {
        r.notes.push_back(std::string("Fock-level corroboration skipped: ") + e.what());
    }

    if (symbol.tail_bound) r.witnesses.push_back({"tail_bound", *symbol.tail_bound});
    r.witnesses.push_back({"inner_deviation", iso.inner.deviation});
    if (!iso.isometric) {
        r.notes.push_back("defect_dim is dim(E_L intersect (L E)-perp); it equals E_L (-) L E only when L E lies in E_L");
    }
    return r;
}

// ---------------------------------------------------------------- output

ojson complex_to_json(cplx z) {
    return ojson{{"re", z.real()}, {"im", z.imag()}};
}

ojson matrix_to_json(const CMatrix& m) {
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(ojson::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

ojson to_json(const Verdict& v) {
    ojson j;
    j["value"] = v.decided ? ojson(v.value) : ojson("undecided");
    j["deviation"] = v.deviation;
    j["theorem"] = v.theorem;
    if (!v.note.empty()) j["note"] = v.note;
    return j;
}

namespace {

template <typename T>
ojson optional_json(const std::optional<T>& v) {
    return v ? ojson(*v) : ojson(nullptr);
}

}  // namespace

ojson to_json(const ClassificationReport& r) {
    ojson j;
    j["n"] = r.n;
    j["dim"] = r.dim;
    j["symbol_depth"] = r.symbol_depth;
    j["depth"] = r.depth;
    j["chain_depth"] = r.chain_depth;
    j["tail_bound"] = optional_json(r.tail_bound);
    j["isometric"] = to_json(r.isometric);
    j["unitary"] = to_json(r.unitary);
    j["invertible"] = to_json(r.invertible);
    j["theta_inner"] = to_json(r.theta_inner);
    j["m_part_max"] = r.m_part_max;
    j["winding"] = optional_json(r.winding);
    j["defect_dim"] = r.defect_dim;
    j["el_dim"] = r.el_dim;
    j["rank_L"] = r.rank_l;
    j["stacked_kernel_dim"] = r.kernel_dim;
    j["fock_kernel_dim"] = optional_json(r.fock_kernel_dim);
    j["fock_kernel_depth"] = r.fock_kernel_depth;
    j["fredholm"] = to_json(r.fredholm);
    j["fredholm_index"] = optional_json(r.fredholm_index);
    j["essentially_normal"] = to_json(r.essentially_normal);
    j["self_commutator_rank"] = optional_json(r.self_commutator_rank);
    j["mult_WL"] = optional_json(r.mult_wl);
    j["mult_MTheta"] = optional_json(r.mult_mtheta);
    j["norm_WL_truncated"] = optional_json(r.norm_wl_truncated);
    j["theta_supnorm_bracket"] = ojson{{"lower", r.theta_supnorm_bracket.lower}, {"upper", r.theta_supnorm_bracket.upper}};
    j["sigma_min_L"] = r.sigma_min_l;
    j["sigma_max_L"] = r.sigma_max_l;
    ojson w = ojson::array();
    for (const auto& x : r.witnesses) w.push_back(ojson{{"label", x.label}, {"value", x.value}});
    j["witnesses"] = w;
    j["notes"] = r.notes;
    return j;
}

ojson to_json(const DefectBasis& d) {
    ojson j;
    j["chain_depth"] = d.chain_depth;
    j["el_dim"] = d.el_basis.cols();
    j["defect_dim"] = d.defect_basis.cols();
    j["stacked_kernel_dim"] = d.kernel_basis.cols();
    j["rank_L"] = d.rank_l;
    j["defect_basis"] = matrix_to_json(d.defect_basis);
    return j;
}

ojson to_json(const FredholmResult& f) {
    return ojson{{"stable", f.stable},
                 {"index", f.index},
                 {"defect_dim", f.defect_dim},
                 {"defect_dim_previous", f.defect_dim_previous},
                 {"theorem", "fredholm-index"}};
}

ojson to_json(const WoldResult& w) {
    return ojson{{"mult_WL", w.mult_wl},
                 {"mult_MTheta", w.mult_mtheta},
                 {"toeplitz_size", w.toeplitz_size},
                 {"low_degree_cut", w.low_degree_cut},
                 {"theorem", "wold-multiplicity"}};
}

ojson to_json(const NormReport& r) {
    ojson j;
    j["depth"] = r.depth;
    j["sigma_max_WL"] = r.sigma_max;
    j["power_iterations"] = r.iterations;
    j["applicable"] = r.applicable;
    j["formula_value"] = r.applicable ? ojson(r.formula_value) : ojson("not applicable");
    j["formula_upper"] = r.applicable ? ojson(r.formula_upper) : ojson(nullptr);
    j["theta_supnorm_bracket"] = ojson{{"lower", r.bracket.lower}, {"upper", r.bracket.upper}};
    j["norm_L"] = r.symbol_norm;
    j["max_one_norm_L"] = std::max(1.0, r.symbol_norm);
    j["theorem"] = "norm-formula";
    return j;
}

ojson to_json(const DouglasResult& r) {
    ojson j;
    j["C"] = matrix_to_json(r.c);
    j["residual"] = r.residual;
    j["depth"] = r.depth;
    j["gamma_verified"] = r.gamma_verified;
    j["gamma_deviation"] = r.gamma_deviation;
    j["theta_checked"] = r.theta_checked;
    j["theta_verified"] = r.theta_verified;
    j["theta_deviation"] = r.theta_deviation;
    j["theorem"] = "douglas-factorization";
    return j;
}

ojson to_json(const CoburnResult& r) {
    ojson pts = ojson::array();
    for (const auto& p : r.points) {
        pts.push_back(ojson{{"lambda", complex_to_json(p.lambda)},
                            {"sigma_min", p.sigma_min},
                            {"bound", p.bound},
                            {"holds", p.holds}});
    }
    return ojson{{"depth", r.depth}, {"points", pts}, {"theorem", "coburn-bound"}};
}

ojson to_json(const HypoResult& h) {
    ojson j;
    j["depth"] = h.depth;
    j["sigma_min_L"] = h.sigma_min_l;
    j["necessary_condition"] = h.necessary_condition;
    j["max_gap"] = h.gap;
    j["has_witness"] = h.has_witness;
    if (h.has_witness) {
        j["witness"] = ojson{{"word", h.witness_word.letters()},
                             {"slot", h.witness_slot},
                             {"adjoint_norm_sq", h.adjoint_norm_sq},
                             {"forward_norm_sq", h.forward_norm_sq}};
    }
    j["hyponormal"] = h.necessary_condition && !h.has_witness ? ojson("undecided") : ojson(false);
    j["theorem"] = "hyponormality";
    return j;
}

ojson to_json(const ChainProbe& p) {
    return ojson{{"expected", p.expected}, {"max_deviation", p.max_deviation}, {"degrees", p.degrees}};
}

Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "text") return Format::text;
    throw InputError("unknown format '" + s + "' (expected json, csv or text)");
}

namespace {

void flatten(const ojson& node, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) flatten(node[i], prefix + "." + std::to_string(i), out);
    } else if (node.is_string()) {
        out.emplace_back(prefix, node.get<std::string>());
    } else {
        out.emplace_back(prefix, node.dump());
    }
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string render(const ojson& doc, Format format) {
    if (format == Format::json) return doc.dump(2) + "\n";
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(doc, "", rows);
    std::ostringstream os;
    if (format == Format::csv) {
        os << "key,value\n";
        for (const auto& [k, v] : rows) os << csv_field(k) << ',' << csv_field(v) << '\n';
    } else {
        for (const auto& [k, v] : rows) os << k << ": " << v << '\n';
    }
    return os.str();
}

}  // namespace odolab
