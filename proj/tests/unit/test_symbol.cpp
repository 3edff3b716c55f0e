#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "odolab/errors.hpp"
#include "odolab/gallery.hpp"
#include "odolab/symbol.hpp"

using namespace odolab;

namespace {

Symbol scalar(int n, std::initializer_list<std::pair<Word, cplx>> entries) {
    Symbol s(n, 1);
    for (const auto& [w, c] : entries) s.add(w, 1, 1, c);
    return s;
}

CMatrix gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMatrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cplx{g(rng), g(rng)};
    return m;
}

CMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
    Eigen::HouseholderQR<CMatrix> qr(gaussian(n, n, rng));
    return qr.householderQ() * CMatrix::Identity(n, n);
}

double sampled_inner_deviation(const MatrixPolynomial& t, int grid) {
    double dev = 0.0;
    const CMatrix id = CMatrix::Identity(t.dim(), t.dim());
    for (int j = 0; j < grid; ++j) {
        const CMatrix v = t.evaluate(std::polar(1.0, 2.0 * std::numbers::pi * j / grid));
        dev = std::max(dev, (v.adjoint() * v - id).operatorNorm());
    }
    return dev;
}

}  // namespace

TEST_CASE("symbol construction rejects bad input") {
    Symbol s(2, 2);
    s.add(Word{1}, 1, 2, 0.5);
    CHECK_THROWS_AS(s.add(Word{1}, 1, 2, 1.0), InputError);
    CHECK_THROWS_AS(s.add(Word{3}, 1, 1, 1.0), InputError);
    CHECK_THROWS_AS(s.add(Word{1}, 0, 1, 1.0), InputError);
    CHECK_THROWS_AS(s.add(Word{1}, 1, 3, 1.0), InputError);
    CHECK(s.depth() == 1);
    CHECK(s.coefficient(Word{1}, 1, 2) == cplx{0.5, 0});
    CHECK(s.coefficient(Word{2}, 1, 2) == cplx{});
}

TEST_CASE("coefficient operators of gallery symbols") {
    const Symbol shift = shift_symbol(1, 2, 2);
    CHECK(coefficient_operator(shift, 0).isZero(0.0));
    CHECK(coefficient_operator(shift, 1).isIdentity(0.0));
    CHECK(coefficient_operator(shift, 2).isZero(0.0));

    const Symbol vac = vacuum_symbol(CMatrix::Identity(2, 2), 2);
    CHECK(coefficient_operator(vac, 0).isIdentity(0.0));

    const cplx a{0.3, -0.4};
    const GalleryEntry m = moebius_symbol(a, 10, 1, 2);
    CHECK(std::abs(coefficient_operator(m.symbol, 0)(0, 0) + a) <= 1e-15);
    for (int r = 1; r <= 10; ++r) {
        const cplx expected = (1.0 - std::norm(a)) * std::pow(std::conj(a), r - 1);
        const CMatrix lr = coefficient_operator(m.symbol, r);
        CHECK(std::abs(lr(0, 0) - expected) <= 1e-15);
        CHECK(std::abs(lr(1, 1) - expected) <= 1e-15);
        CHECK(std::abs(lr(0, 1)) == 0.0);
    }
    CHECK_THROWS_AS(coefficient_operator(shift, -1), PreconditionError);
}

TEST_CASE("theta ignores entries off the 1-chain") {
    Symbol s = scalar(2, {{Word{}, 1.0}, {Word{1}, 0.5}});
    const MatrixPolynomial before = theta(s);
    s.add(Word{2}, 1, 1, 3.0);
    s.add(Word{1, 2}, 1, 1, cplx{0, 1});
    const MatrixPolynomial after = theta(s);
    for (int r = 0; r <= 2; ++r) CHECK(max_abs(before.coefficient(r) - after.coefficient(r)) == 0.0);

    const Symbol off = scalar(2, {{Word{2}, 1.0}, {Word{2, 1}, 2.0}});
    const MatrixPolynomial t = theta(off);
    for (const auto& c : t.coefficients) CHECK(c.isZero(0.0));
}

TEST_CASE("theta examples") {
    const MatrixPolynomial t = theta(shift_symbol(1, 2, 1));
    CHECK(std::abs(t.evaluate(0.3)(0, 0) - 0.3) <= 1e-16);
    const GalleryEntry c = constant_plus_shift(0.5, 2, 1);
    CHECK(std::abs(theta(c.symbol).evaluate(cplx{0, 1})(0, 0) - cplx{1, 0.5}) <= 1e-16);
}

TEST_CASE("inner test") {
    const InnerVerdict shift = is_inner_exact(theta(shift_symbol(1, 2, 2)), 1e-10);
    CHECK(shift.inner);
    CHECK(shift.deviation == 0.0);

    const InnerVerdict cps = is_inner_exact(theta(constant_plus_shift(0.5, 2, 1).symbol), 1e-10);
    CHECK(!cps.inner);
    CHECK(cps.deviation >= 0.5);

    const GalleryEntry g = golden_symbol(40, 1, 1);
    const InnerVerdict gv = is_inner_exact(theta(g.symbol), 1e-10);
    CHECK(gv.deviation <= 1e-7);
    CHECK(gv.deviation <= 10.0 * *g.tail_bound);

    CHECK(is_inner_exact(theta(diagonal_symbol(3, 2)), 1e-10).inner);
}

TEST_CASE("inner test agrees with boundary sampling") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<int> deg(0, 3);
    std::uniform_int_distribution<int> dim(1, 2);
    int inner_count = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = dim(rng);
        const int k = deg(rng);
        MatrixPolynomial t;
        if (trial % 2 == 0) {
            // U diag(z^{k_i}) V is inner.
            const CMatrix u = random_unitary(d, rng);
            const CMatrix v = random_unitary(d, rng);
            std::vector<int> powers(static_cast<std::size_t>(d));
            for (auto& p : powers) p = std::uniform_int_distribution<int>(0, k)(rng);
            for (int r = 0; r <= k; ++r) {
                CMatrix e = CMatrix::Zero(d, d);
                for (int i = 0; i < d; ++i)
                    if (powers[static_cast<std::size_t>(i)] == r) e(i, i) = 1.0;
                t.coefficients.push_back(u * e * v);
            }
        } else {
            for (int r = 0; r <= k; ++r) t.coefficients.push_back(0.5 * gaussian(d, d, rng));
        }
        const bool algebraic = is_inner_exact(t, 1e-10).inner;
        const bool sampled = sampled_inner_deviation(t, 512) <= 1e-10;
        CHECK(algebraic == sampled);
        inner_count += algebraic ? 1 : 0;
    }
    CHECK(inner_count == 50);
}

TEST_CASE("determinant coefficients") {
    MatrixPolynomial t;
    CMatrix l0 = CMatrix::Zero(2, 2), l1 = CMatrix::Zero(2, 2);
    l0(0, 0) = 1.0;
    l1(0, 0) = 0.5;
    l1(1, 1) = 1.0;
    t.coefficients = {l0, l1};
    // det = (1 + z/2) z
    const std::vector<cplx> c = determinant_coefficients(t);
    REQUIRE(c.size() == 3);
    CHECK(std::abs(c[0]) <= 1e-15);
    CHECK(std::abs(c[1] - 1.0) <= 1e-15);
    CHECK(std::abs(c[2] - 0.5) <= 1e-15);
}

TEST_CASE("invertibility in H-infinity") {
    const InvertibilityVerdict v = is_invertible_hinf(theta(constant_plus_shift(0.5, 2, 1).symbol));
    CHECK(v.invertible);
    CHECK(v.zeros_inside == 0);
    CHECK(v.min_modulus > v.margin);

    const InvertibilityVerdict s = is_invertible_hinf(theta(shift_symbol(1, 2, 2)));
    CHECK(!s.invertible);
    CHECK(s.zeros_inside == 2);

    CHECK_THROWS_AS(is_invertible_hinf(theta(scalar(2, {{Word{}, 1.0}, {Word{1}, 1.0}}))), BoundaryZeroSuspected);
    CHECK_THROWS_AS(is_invertible_hinf(theta(scalar(2, {{Word{2}, 1.0}}))), IdenticallySingular);
}

TEST_CASE("sup norm brackets") {
    const SupNormBracket b = sup_norm(theta(scalar(2, {{Word{}, 1.0}, {Word{1}, 1.0}})));
    CHECK(b.lower <= 2.0 + 1e-15);
    CHECK(b.upper >= 2.0);
    CHECK(std::abs(b.lower - 2.0) <= 1e-15);

    const SupNormBracket z = sup_norm(theta(shift_symbol(1, 2, 1)));
    CHECK(z.lower <= 1.0 + 1e-15);
    CHECK(z.upper >= 1.0 - 1e-15);

    const GalleryEntry res = resolvent_shift_symbol(4, 12, 2);
    const SupNormBracket rb = sup_norm(theta(res.symbol));
    CHECK(rb.lower >= std::sqrt(85.0 / 256.0) - 1e-12);
    CHECK_THROWS_AS(sup_norm(theta(res.symbol), 32), PreconditionError);
}

TEST_CASE("sup norm bracket contains a finer grid estimate") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        MatrixPolynomial t;
        for (int r = 0; r <= 3; ++r) t.coefficients.push_back(gaussian(2, 2, rng));
        const SupNormBracket coarse = sup_norm(t, 256);
        const SupNormBracket fine = sup_norm(t, 1024);
        CHECK(fine.lower >= coarse.lower - 1e-12);
        CHECK(fine.lower <= coarse.upper + 1e-12);
    }
}

TEST_CASE("adjoint application pairs with L") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 1 + trial % 3;
        const int d = 1 + trial % 2;
        Symbol l(n, d);
        const BasisIndex basis(n, 2, d);
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (g(rng) > 0.3) continue;
            for (int q = 1; q <= d; ++q) l.add(basis.word_of(i), basis.slot_of(i), q, cplx{g(rng), g(rng)});
        }
        CVector eta(d), v(static_cast<Eigen::Index>(basis.size()));
        for (Eigen::Index i = 0; i < d; ++i) eta(i) = cplx{g(rng), g(rng)};
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx{g(rng), g(rng)};
        const CVector l_eta = l.as_matrix(basis) * eta;
        const cplx lhs = v.dot(l_eta);  // <L eta, v>
        const cplx rhs = symbol_adjoint_apply(l, basis, v).dot(eta);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
    const Symbol shift = shift_symbol(1, 2, 2);
    const BasisIndex basis(2, 1, 2);
    CVector e = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
    e(static_cast<Eigen::Index>(basis.index_of(Word{1}, 2))) = 1.0;
    const CVector back = symbol_adjoint_apply(shift, basis, e);
    CHECK(back(0) == cplx{});
    CHECK(back(1) == cplx{1.0, 0});
    CVector vac = CVector::Zero(static_cast<Eigen::Index>(basis.size()));
    vac(0) = 1.0;
    CHECK(symbol_adjoint_apply(shift, basis, vac).isZero(0.0));
}

TEST_CASE("singular values of L match slot norms") {
    const GalleryEntry res = resolvent_shift_symbol(4, 3, 2);
    const CMatrix l = res.symbol.as_matrix();
    CHECK(l.col(0).squaredNorm() == doctest::Approx(85.0 / 256.0).epsilon(1e-15));
    const Eigen::VectorXd s = singular_values(l);
    CHECK(s(s.size() - 1) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s(0) * s(0) <= 1.0 / 3.0);
}

TEST_CASE("symbol json round trip and strictness") {
    Symbol s(2, 2);
    s.add(Word{}, 1, 1, cplx{1, -2});
    s.add(Word{1, 2}, 2, 1, 0.25);
    s.tail_bound = 1e-9;
    const Symbol back = symbol_from_json(symbol_to_json(s));
    CHECK(back.n() == 2);
    CHECK(back.dim() == 2);
    CHECK(back.entries() == s.entries());
    CHECK(back.tail_bound.value() == 1e-9);

    CHECK_THROWS_AS(symbol_from_json("{"), InputError);
    CHECK_THROWS_AS(symbol_from_json(R"({"n":2,"dim":1,"entries":[],"extra":1})"), InputError);
    CHECK_THROWS_AS(symbol_from_json(R"({"n":2,"dim":1,"entries":[{"word":[1],"s":1,"q":1,"re":1,"im":0},{"word":[1],"s":1,"q":1,"re":2,"im":0}]})"),
                    InputError);
    CHECK_THROWS_AS(symbol_from_json(R"({"n":2,"dim":1,"entries":[{"word":[3],"s":1,"q":1,"re":1,"im":0}]})"), InputError);
    CHECK_NOTHROW(symbol_from_json(R"({"n":2,"dim":1,"entries":[{"word":[],"s":1,"q":1,"re":1,"im":0}]})"));
}
