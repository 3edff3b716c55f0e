#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "odolab/analysis.hpp"
#include "odolab/errors.hpp"
#include "odolab/gallery.hpp"

using namespace odolab;

namespace {

AnalysisOptions at_depth(int depth) {
    AnalysisOptions o;
    o.depth = depth;
    return o;
}

Symbol ones_plus_shift(int n) {
    Symbol s(n, 1);
    s.add(Word{}, 1, 1, 1.0);
    s.add(Word{1}, 1, 1, 1.0);
    return s;
}

Symbol random_symbol(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nd(1, 3), dd(1, 2), kd(0, 2), count(1, 6);
    std::normal_distribution<double> g;
    const int n = nd(rng), d = dd(rng), k = kd(rng);
    Symbol s(n, d);
    const BasisIndex b(n, k, d);
    for (int e = count(rng); e > 0; --e) {
        const std::size_t i = std::uniform_int_distribution<std::size_t>(0, b.size() - 1)(rng);
        const int q = std::uniform_int_distribution<int>(1, d)(rng);
        if (s.coefficient(b.word_of(i), b.slot_of(i), q) != cplx{}) continue;
        s.add(b.word_of(i), b.slot_of(i), q, cplx{g(rng), g(rng)});
    }
    return s;
}

}  // namespace

TEST_CASE("classification ground truths") {
    const ClassificationReport diag = classify(diagonal_symbol(3, 2));
    CHECK(diag.isometric.value);
    CHECK(!diag.unitary.value);
    CHECK(diag.isometric.theorem == "isometry-characterization");

    CMatrix u(2, 2);
    u << 1.0, 0.0, 0.0, cplx{0, 1};
    const ClassificationReport vac = classify(vacuum_symbol(u, 3));
    CHECK(vac.unitary.value);
    CHECK(vac.isometric.value);
    CHECK(vac.defect_dim == 0);

    CMatrix half = CMatrix::Identity(2, 2);
    half(0, 0) = 0.5;
    CHECK(!classify(vacuum_symbol(half, 2)).unitary.value);

    const ClassificationReport cps = classify(constant_plus_shift(0.5, 2, 1).symbol);
    CHECK(cps.invertible.value);
    CHECK(cps.invertible.decided);
    CHECK(!cps.isometric.value);
    CHECK(!cps.unitary.value);
    CHECK(cps.winding.value() == 0);
}

TEST_CASE("classify reports boundary zeros as undecided unless strict") {
    const ClassificationReport r = classify(ones_plus_shift(2));
    CHECK(!r.invertible.decided);
    AnalysisOptions strict;
    strict.strict_invertibility = true;
    CHECK_THROWS_AS(classify(ones_plus_shift(2), strict), BoundaryZeroSuspected);
}

TEST_CASE("defect spaces") {
    for (int k = 1; k <= 3; ++k) {
        for (int d = 1; d <= 2; ++d) {
            const DefectBasis b = defect(shift_symbol(k, 2, d));
            CHECK(b.dim() == static_cast<std::size_t>(k * d));
            // spanned by e_1^j (x) h_q with j < k: zero weight beyond degree k - 1
            CHECK(b.defect_basis.bottomRows(b.defect_basis.rows() - k * d).norm() <= 1e-12);
        }
    }
    CMatrix p = CMatrix::Zero(3, 3);
    p(0, 0) = 0.5;
    p(0, 1) = 0.5;
    p(1, 0) = 0.5;
    p(1, 1) = 0.5;
    p(2, 2) = 1.0;
    const DefectBasis pb = defect(projection_symbol(p, 2).symbol);
    REQUIRE(pb.dim() == 2);
    // basis spans Omega (x) P E
    const CMatrix top = pb.defect_basis.topRows(3);
    CHECK(pb.defect_basis.bottomRows(pb.defect_basis.rows() - 3).norm() <= 1e-12);
    CHECK(max_abs(p * top - top) <= 1e-12);
    CHECK(defect(vacuum_symbol(CMatrix::Identity(2, 2), 2)).dim() == 0);
    CHECK(defect(diagonal_symbol(2, 2)).dim() == 1);
}

TEST_CASE("defect methods agree on random symbols") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const Symbol s = random_symbol(rng);
        AnalysisOptions o;
        o.depth = std::uniform_int_distribution<int>(1, 5)(rng);
        o.chain_depth = o.depth;
        CHECK_NOTHROW(defect(s, o));
    }
}

TEST_CASE("fredholm index") {
    for (int m = 1; m <= 3; ++m) {
        const FredholmResult f = fredholm_index(shift_symbol(1, 2, m));
        CHECK(f.stable);
        CHECK(f.index == -m);
    }
    const FredholmResult p = fredholm_index(gallery_build("projection").symbol);
    CHECK(p.index == -2);
    CHECK(fredholm_index(vacuum_symbol(CMatrix::Identity(2, 2), 2)).index == 0);
    CHECK_THROWS_AS(fredholm_index(constant_plus_shift(0.5, 2, 1).symbol), NotIsometric);
}

TEST_CASE("wold multiplicity") {
    WoldResult w = wold_multiplicity(shift_symbol(1, 2, 1));
    CHECK(w.mult_wl == 1);
    CHECK(w.mult_mtheta == 1);
    w = wold_multiplicity(shift_symbol(3, 2, 2));
    CHECK(w.mult_wl == 6);
    CHECK(w.mult_mtheta == 6);
    w = wold_multiplicity(vacuum_symbol(CMatrix::Identity(2, 2), 2));
    CHECK(w.mult_wl == 0);
    CHECK(w.mult_mtheta == 0);
    w = wold_multiplicity(golden_symbol(60, 1, 1).symbol);
    CHECK(w.mult_wl == 1);
    CHECK(w.mult_mtheta == 1);
}

TEST_CASE("norm report against closed forms and dense SVD") {
    const Symbol s = ones_plus_shift(2);
    for (int depth = 1; depth <= 6; ++depth) {
        const NormReport r = norm_report(s, at_depth(depth));
        // W_L splits into a partial isometry on N and the (D+2) x (D+1) Toeplitz matrix of 1 + z.
        const double closed = 2.0 * std::cos(std::numbers::pi / (2.0 * depth + 4.0));
        CHECK(std::abs(r.sigma_max - closed) <= 1e-10);
        const double dense = singular_values(build_wl(s, depth).dense())(0);
        CHECK(std::abs(r.sigma_max - dense) <= 1e-10);
        CHECK(r.applicable);
        CHECK(r.formula_value == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(r.sigma_max <= r.formula_upper + 1e-9);
    }
    const NormReport sh = norm_report(shift_symbol(1, 2, 2), at_depth(4));
    CHECK(std::abs(sh.sigma_max - 1.0) <= 1e-12);
    CHECK(sh.formula_value == 1.0);

    const NormReport hy = norm_report(ones_plus_shift(2), at_depth(3));
    CHECK(hy.symbol_norm == doctest::Approx(std::sqrt(2.0)));
    CHECK(hy.formula_value == doctest::Approx(2.0));

    Symbol off(2, 1);
    off.add(Word{2}, 1, 1, 1.0);
    CHECK(!norm_report(off, at_depth(2)).applicable);
}

TEST_CASE("douglas factorization") {
    const Symbol shift = shift_symbol(1, 2, 2);
    DouglasResult r = douglas_factor(shift, shift);
    CHECK(max_abs(r.c - CMatrix::Identity(2, 2)) <= 1e-12);
    CHECK(r.gamma_verified);
    CHECK(r.theta_verified);

    CMatrix a(2, 2);
    a << 1.0, cplx{0, 2}, -0.5, 0.25;
    Symbol l1(2, 2);
    for (int s = 1; s <= 2; ++s)
        for (int q = 1; q <= 2; ++q) l1.add(Word{1}, s, q, a(s - 1, q - 1));
    r = douglas_factor(l1, shift);
    CHECK(max_abs(r.c - a) <= 1e-12);
    CHECK(r.residual <= 1e-12);
    CHECK(r.gamma_verified);
    CHECK(r.theta_checked);
    CHECK(r.theta_verified);

    try {
        douglas_factor(vacuum_symbol(CMatrix::Identity(2, 2), 2), shift);
        FAIL("expected RangeNotContained");
    } catch (const RangeNotContained& e) {
        CHECK(e.residual() == doctest::Approx(std::sqrt(2.0)));
    }
    CHECK_THROWS_AS(douglas_factor(shift, shift_symbol(1, 3, 2)), PreconditionError);

    for (const auto& e : standard_gallery()) {
        const DouglasResult self = douglas_factor(e.symbol, e.symbol, at_depth(e.symbol.n() == 1 ? 8 : 3));
        CHECK(max_abs(self.c - CMatrix::Identity(e.symbol.dim(), e.symbol.dim())) <= 1e-12);
        CHECK(self.gamma_verified);
    }
}

TEST_CASE("coburn bounds") {
    const Symbol shift = shift_symbol(1, 2, 1);
    CoburnResult c = coburn_bound(shift, {0.0, 0.5});
    CHECK(c.points[0].sigma_min == doctest::Approx(1.0));
    CHECK(c.points[1].sigma_min >= 0.5 - 1e-10);
    c = coburn_bound(gallery_build("projection").symbol, {cplx{0, 0.9}});
    CHECK(c.points[0].sigma_min >= 0.1 - 1e-10);
    CHECK(c.points[0].holds);
    CHECK_THROWS_AS(coburn_bound(constant_plus_shift(0.5, 2, 1).symbol, {0.0}), NotIsometric);
    CHECK_THROWS_AS(coburn_bound(shift, {1.0}), InputError);
}

TEST_CASE("hyponormality probe") {
    const HypoResult h = hyponormality_probe(hypo_counterexample(2).symbol);
    CHECK(h.sigma_min_l == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(h.necessary_condition);
    CHECK(h.has_witness);
    CHECK(std::abs(h.gap - 1.0) <= 1e-10);
    CHECK(h.witness_word == Word{1});
    CHECK(h.adjoint_norm_sq == doctest::Approx(2.0));
    CHECK(h.forward_norm_sq == doctest::Approx(1.0));

    const HypoResult s = hyponormality_probe(shift_symbol(1, 2, 1), at_depth(4));
    CHECK(s.necessary_condition);
    CHECK(!s.has_witness);

    const HypoResult r = hyponormality_probe(resolvent_shift_symbol(4, 10, 2).symbol, at_depth(3));
    CHECK(!r.necessary_condition);
    CHECK(r.sigma_min_l * r.sigma_min_l <= 1.0 / 3.0);
    CHECK_THROWS_AS(hyponormality_probe(shift_symbol(1, 1, 1)), PreconditionError);
}

TEST_CASE("chain probes") {
    Symbol s(2, 2);
    s.add(Word{}, 1, 1, 1.0);
    s.add(Word{2}, 2, 1, cplx{0, 0.5});
    s.add(Word{1, 2}, 1, 2, 2.0);
    const ChainProbe w12 = w12_probe(s, at_depth(4));
    CHECK(w12.expected[0] == doctest::Approx(0.5));
    CHECK(w12.expected[1] == doctest::Approx(2.0));
    CHECK(w12.max_deviation <= 1e-12);

    const ChainProbe c = compactness_probe(golden_symbol(10, 1, 1).symbol, at_depth(20));
    CHECK(c.degrees == 11);
    CHECK(c.expected[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(c.max_deviation <= 1e-12);
    CHECK_THROWS_AS(compactness_probe(s), PreconditionError);
}

TEST_CASE("isometric verdict agrees with W*W = I") {
    std::mt19937_64 rng(19);
    std::vector<Symbol> symbols;
    for (const auto& e : standard_gallery()) symbols.push_back(e.symbol);
    for (int i = 0; i < 20; ++i) symbols.push_back(random_symbol(rng));
    for (const Symbol& s : symbols) {
        AnalysisOptions o = at_depth(s.n() == 1 ? 6 : 3);
        o.chain_depth = -1;
        INFO(symbol_to_json(s));
        const ClassificationReport r = classify(s, o);
        const CMatrix w = build_wl(s, o.depth).dense();
        const double dev = max_abs(w.adjoint() * w - CMatrix::Identity(w.cols(), w.cols()));
        INFO(symbol_to_json(s));
        // the truncation sees every lag of Theta only when K <= D
        if (r.isometric.value || s.depth() <= o.depth) CHECK(r.isometric.value == (dev <= 1e-10));
        if (r.unitary.value) {
            CHECK(w.rows() == w.cols());
            CHECK(max_abs(w * w.adjoint() - CMatrix::Identity(w.rows(), w.rows())) <= 1e-10);
        }
        if (r.isometric.value && r.fredholm_index) {
            CHECK(*r.fredholm_index == -static_cast<int>(*r.mult_wl));
            CHECK(r.self_commutator_rank.value() == r.defect_dim);
        }
    }
}

TEST_CASE("report rendering") {
    const ClassificationReport r = classify(shift_symbol(1, 2, 1), at_depth(3));
    const auto j = to_json(r);
    CHECK(j["isometric"]["value"] == true);
    CHECK(j["fredholm_index"] == -1);
    const std::string csv = render(j, Format::csv);
    CHECK(csv.rfind("key,value\n", 0) == 0);
    CHECK(csv.find("isometric.value,true") != std::string::npos);
    const std::string text = render(j, Format::text);
    CHECK(text.find("defect_dim: 1") != std::string::npos);
    CHECK(render(j, Format::json) == render(to_json(classify(shift_symbol(1, 2, 1), at_depth(3))), Format::json));
    CHECK_THROWS_AS(parse_format("xml"), InputError);
}
