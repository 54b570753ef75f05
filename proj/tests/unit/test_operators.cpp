// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The enfix authors

#include <doctest.h>

#include <cmath>
#include <random>

#include "operators.hpp"
#include "test_support.hpp"

using namespace enfix;
using enfix::testing::random_vector;

namespace {

const NormSpec kAbs(NormKind::l2);

Operator rus() { return Operator::threshold(2.0, 0.0, -1.0 / 3.0); }

}  // namespace

TEST_CASE("evaluate: worked values") {
    CHECK(Operator::reflection()(RealVector{0.25}) == RealVector{0.75});
    CHECK(rus()(RealVector{3.0}) == RealVector{-1.0 / 3.0});
    CHECK(rus()(RealVector{-7.0}) == RealVector{0.0});

    const auto constant = Operator::affine(Matrix::zeros(1), RealVector{5.0});
    for (double x : {-3.0, 0.0, 1e6}) CHECK(constant(RealVector{x}) == RealVector{5.0});
}

TEST_CASE("threshold: one-sided values at the cut") {
    const auto t = rus();
    CHECK(t(RealVector{2.0}) == RealVector{0.0});  // closed lower branch
    CHECK(t(RealVector{std::nextafter(2.0, 3.0)}) == RealVector{-1.0 / 3.0});
}

TEST_CASE("evaluate: errors") {
    CHECK_THROWS_AS(Operator::reflection()(RealVector{1.0, 2.0}), Error);
    const auto huge = Operator::affine(Matrix(1, {1e300}));
    try {
        huge(huge(RealVector{10.0}));
        FAIL("expected a non-finite error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::non_finite);
    }
    CHECK_THROWS_AS(Operator::affine(Matrix(2, {1, 0, 0, 1}), RealVector{1.0}), Error);
    CHECK_THROWS_AS(Matrix(2, {1.0, 2.0, 3.0}), Error);
    CHECK_THROWS_AS(Operator::composed(Operator::reflection(), Operator::affine(Matrix::identity(2))), Error);
}

TEST_CASE("power: worked values") {
    // U(5) = -1/3 <= 2, so U^2(5) = 0
    CHECK(power(rus(), 2)(RealVector{5.0}) == RealVector{0.0});

    const auto r = Operator::reflection();
    for (double x : {0.0, 0.3, 17.0}) CHECK(power(r, 1)(RealVector{x}) == r(RealVector{x}));

    // 8 * (1/2)^3
    const auto half = Operator::affine(Matrix(1, {0.5}));
    CHECK(power(half, 3)(RealVector{8.0}) == RealVector{1.0});

    CHECK_THROWS_AS(power(r, 0), Error);
}

TEST_CASE("residual: worked values") {
    CHECK(residual(Operator::reflection(), RealVector{0.5}, kAbs) == 0.0);
    CHECK(residual(Operator::reflection(), RealVector{0.0}, kAbs) == 1.0);
    CHECK(residual(rus(), RealVector{0.0}, kAbs) == 0.0);
}

TEST_CASE("composed evaluates inner first") {
    const auto shift = Operator::affine(Matrix::identity(1), RealVector{1.0});
    const auto twice = Operator::affine(Matrix(1, {2.0}));
    CHECK(Operator::composed(twice, shift)(RealVector{3.0}) == RealVector{8.0});
    CHECK(Operator::composed(shift, twice)(RealVector{3.0}) == RealVector{7.0});
}

TEST_CASE("power composition: U^(m+n) = U^m o U^n exactly for m, n <= 5") {
    std::mt19937_64 rng(5);
    const auto a = Operator::affine(Matrix(2, {0.3, -0.7, 0.9, 0.1}), RealVector{0.25, -1.5});
    const auto mixed = Operator::composed(Operator::affine(Matrix(1, {-0.5}), RealVector{1.0}), rus());
    for (const auto& op : {a, rus(), mixed}) {
        for (unsigned m = 1; m <= 5; ++m) {
            for (unsigned n = 1; n <= 5; ++n) {
                for (int trial = 0; trial < 20; ++trial) {
                    const auto x = random_vector(rng, op.dim(), -4, 4);
                    CHECK(power(op, m + n)(x) == power(op, m)(power(op, n)(x)));
                }
            }
        }
    }
}

TEST_CASE("affine maps are linear plus offset") {
    std::mt19937_64 rng(8);
    const auto op = Operator::affine(Matrix(3, {0.2, -1.1, 0.4, 0.7, 0.0, -0.3, 1.5, 0.6, -0.9}),
                                     RealVector{3.0, -2.0, 0.5});
    const auto zero = RealVector::zeros(3);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto x = random_vector(rng, 3);
        const auto y = random_vector(rng, 3);
        const auto lhs = op(combine(1.0, x, 1.0, y));
        const auto rx = op(x), ry = op(y), r0 = op(zero);
        for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(lhs[k] - ry[k] - rx[k] + r0[k]) <= 1e-12);
    }
}

TEST_CASE("as_affine collapses powers, compositions and averages") {
    std::mt19937_64 rng(3);
    const auto a = Operator::affine(Matrix(2, {0.3, -0.7, 0.9, 0.1}), RealVector{0.25, -1.5});
    const auto b = Operator::affine(Matrix(2, {-1.0, 0.2, 0.0, 0.5}), RealVector{1.0, 1.0});
    const auto op = Operator::composed(power(a, 3), make_averaged(b, 0.25));
    const auto flat = as_affine(op);
    REQUIRE(flat);
    const auto collapsed = Operator::affine(flat->matrix, flat->offset);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_vector(rng, 2, -3, 3);
        const auto u = op(x), v = collapsed(x);
        for (std::size_t k = 0; k < 2; ++k) CHECK(u[k] == doctest::Approx(v[k]).epsilon(1e-12));
    }
    CHECK_FALSE(as_affine(rus()));
    CHECK_FALSE(as_affine(Operator::composed(Operator::reflection(), rus())));
    const auto refl = as_affine(Operator::reflection());
    REQUIRE(refl);
    CHECK(refl->matrix(0, 0) == -1.0);
    CHECK(refl->offset == RealVector{1.0});
}
