#include <doctest.h>

#include <cmath>

#include "odolab/errors.hpp"
#include "odolab/gallery.hpp"

using namespace odolab;

TEST_CASE("shift, vacuum and diagonal symbols") {
    const Symbol s = shift_symbol(2, 3, 2);
    CHECK(s.entries().size() == 2);
    CHECK(s.coefficient(Word{1, 1}, 1, 1) == cplx{1, 0});
    CHECK(s.coefficient(Word{1, 1}, 2, 2) == cplx{1, 0});
    CHECK(s.depth() == 2);
    CHECK_THROWS_AS(shift_symbol(0, 2, 1), PreconditionError);

    CMatrix u(2, 2);
    u << 0.0, 1.0, cplx{0, 1}, 0.0;
    const Symbol v = vacuum_symbol(u, 2);
    CHECK(v.depth() == 0);
    CHECK(v.coefficient(Word{}, 2, 1) == cplx{0, 1});
    CHECK(max_abs(v.as_matrix() - u) == 0.0);

    const Symbol d = diagonal_symbol(3, 2);
    CHECK(d.coefficient(Word{}, 1, 1) == cplx{1, 0});
    CHECK(d.coefficient(Word{1}, 2, 2) == cplx{1, 0});
    CHECK(d.coefficient(Word{1, 1}, 3, 3) == cplx{1, 0});
    CHECK(diagonal_symbol(1, 2).entries() == vacuum_symbol(CMatrix::Identity(1, 1), 2).entries());
}

TEST_CASE("blaschke coefficients") {
    const cplx a{0.4, 0.3};
    const std::vector<cplx> b = blaschke_coefficients({a}, 8);
    CHECK(std::abs(b[0] + a) <= 1e-16);
    for (int r = 1; r <= 8; ++r) {
        CHECK(std::abs(b[static_cast<std::size_t>(r)] - (1.0 - std::norm(a)) * std::pow(std::conj(a), r - 1)) <= 1e-15);
    }

    // two factors: convolution of the single-factor closed forms
    const cplx c{-0.2, 0.5};
    const std::vector<cplx> two = blaschke_coefficients({a, c}, 12);
    auto single = [](cplx z, int r) {
        return r == 0 ? -z : (1.0 - std::norm(z)) * std::pow(std::conj(z), r - 1);
    };
    for (int r = 0; r <= 12; ++r) {
        cplx expected{};
        for (int i = 0; i <= r; ++i) expected += single(a, i) * single(c, r - i);
        CHECK(std::abs(two[static_cast<std::size_t>(r)] - expected) <= 1e-15);
    }

    const GalleryEntry zero = blaschke_symbol({0.0}, 10, 2, 1);
    CHECK(zero.symbol.entries() == shift_symbol(1, 2, 1).entries());
    CHECK_THROWS_AS(blaschke_coefficients({1.0}, 3), PreconditionError);
}

TEST_CASE("blaschke inner deviation stays within the tail bound") {
    for (const auto& zeros : {std::vector<cplx>{0.7}, std::vector<cplx>{0.5, cplx{0, -0.6}},
                              std::vector<cplx>{0.7, 0.7}, std::vector<cplx>{-0.3, 0.65, cplx{0.2, 0.2}}}) {
        const GalleryEntry e = blaschke_symbol(zeros, 40, 1, 1);
        REQUIRE(e.tail_bound.has_value());
        const InnerVerdict v = is_inner_exact(theta(e.symbol), 0.0);
        CHECK(v.deviation <= 10.0 * *e.tail_bound);
    }
}

TEST_CASE("golden ratio coefficient") {
    const GalleryEntry g = golden_symbol(40, 1, 1);
    const double omega = golden_omega();
    const double c0 = std::sqrt(2.0 / (std::sqrt(5.0) + 3.0));
    const cplx got = coefficient_operator(g.symbol, 0)(0, 0);
    CHECK(std::abs(got - c0) <= 1e-12);
    CHECK(std::abs(got + omega) <= 1e-12);
    CHECK(std::abs(got - (1.0 - omega * omega)) <= 1e-12);
    CHECK(g.tail_bound.value() <= 1e-8);
}

TEST_CASE("resolvent shift symbol") {
    const GalleryEntry e = resolvent_shift_symbol(4, 3, 2);
    CHECK(e.symbol.coefficient(Word{1, 1}, 3, 1) == cplx{0.125, 0});
    CHECK(e.symbol.coefficient(Word{1, 1}, 4, 3) == cplx{});
    const CMatrix l = e.symbol.as_matrix();
    CHECK(l.col(0).squaredNorm() == doctest::Approx(85.0 / 256.0).epsilon(1e-15));
    for (Eigen::Index q = 0; q < 4; ++q) CHECK(l.col(q).squaredNorm() <= 1.0 / 3.0);
    CHECK(e.expected["norm_Lh1_sq"].get<double>() == doctest::Approx(85.0 / 256.0));
    CHECK_THROWS_AS(resolvent_shift_symbol(1, 3, 2), PreconditionError);
}

TEST_CASE("projection symbol") {
    CHECK_THROWS_AS(projection_symbol(CMatrix::Constant(2, 2, 1.0), 2), NotAProjection);
    CMatrix nonherm = CMatrix::Zero(2, 2);
    nonherm(0, 0) = 1.0;
    nonherm(0, 1) = 1.0;
    CHECK_THROWS_AS(projection_symbol(nonherm, 2), NotAProjection);

    CHECK(projection_symbol(CMatrix::Zero(2, 2), 2).symbol.entries() == vacuum_symbol(CMatrix::Identity(2, 2), 2).entries());
    CHECK(projection_symbol(CMatrix::Identity(2, 2), 2).symbol.entries() == shift_symbol(1, 2, 2).entries());
    const GalleryEntry e = gallery_build("projection");
    CHECK(e.expected["defect_dim"] == 2);
    CHECK(e.expected["fredholm_index"] == -2);
}

TEST_CASE("constant plus shift and the hyponormality example") {
    const GalleryEntry c = constant_plus_shift(0.5, 2, 1);
    CHECK(c.symbol.as_matrix().col(0).squaredNorm() == doctest::Approx(1.25));
    CHECK_THROWS_AS(constant_plus_shift(0.0, 2, 1), PreconditionError);
    CHECK_THROWS_AS(constant_plus_shift(1.0, 2, 1), PreconditionError);

    const GalleryEntry h = hypo_counterexample(2);
    const Eigen::VectorXd s = singular_values(h.symbol.as_matrix());
    CHECK(s(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(hypo_counterexample(1), PreconditionError);
}

TEST_CASE("gallery registry") {
    for (const auto& name : gallery_names()) {
        CHECK(!gallery_usage(name).empty());
        const GalleryEntry e = gallery_build(name);
        CHECK(e.name == name);
        CHECK(e.expected.is_object());
        CHECK(!e.expected.empty());
        CHECK(e.tail_bound.has_value() == (name == "blaschke" || name == "moebius" || name == "golden" || name == "resolvent"));
    }
    CHECK_THROWS_AS(gallery_build("nope"), InputError);
    CHECK_THROWS_AS(gallery_build("shift", {{"q", 1}}), InputError);
    CHECK_THROWS_AS(gallery_build("shift", {{"k", "two"}}), InputError);
    const GalleryEntry m = gallery_build("moebius", {{"a", {0.1, 0.2}}, {"R", 5}});
    CHECK(std::abs(coefficient_operator(m.symbol, 0)(0, 0) - cplx{-0.1, -0.2}) <= 1e-16);
    CHECK(!standard_gallery().empty());
}
