#include "doctest.h"
#include "octwitt/linalg.hpp"

using namespace octwitt;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::InternalInconsistency;
}

}  // namespace

TEST_SUITE("ring") {

TEST_CASE("descriptors") {
    auto R = make_ring("Z/45");
    CHECK(R->num_components() == 2);
    CHECK(R->size() == 45);
    CHECK_FALSE(R->is_field());
    CHECK(make_ring("GF(7)")->is_field());
    auto P = make_ring("Z/3 x GF(5)");
    CHECK(P->size() == 15);
    CHECK(P->factors().size() == 2);
    CHECK_FALSE(make_ring("R")->enumerable());

    CHECK(code_of([] { make_ring("Z/4"); }) == ErrorCode::InvalidModulus);
    CHECK(code_of([] { make_ring("GF(2)"); }) == ErrorCode::InvalidModulus);
    CHECK(code_of([] { make_ring("GF(9)"); }) == ErrorCode::InvalidSpec);
    CHECK(code_of([] { make_ring("Q"); }) == ErrorCode::InvalidSpec);
    CHECK(code_of([] { make_ring("Z/3 x "); }) == ErrorCode::InvalidSpec);
    CHECK(code_of([] { make_ring("R")->size(); }) == ErrorCode::NotEnumerable);
}

TEST_CASE("arithmetic mod 45") {
    auto R = make_ring("Z/45");
    auto a = R->from_int(7), b = R->from_int(40);
    CHECK(R->add(a, b) == R->from_int(2));
    CHECK(R->mul(a, b) == R->from_int(10));
    CHECK(R->inv(a) == R->from_int(13));
    CHECK(R->to_string(R->from_int(17)) == "(8,2)");  // components Z/9, Z/5
    CHECK_FALSE(R->is_unit(R->from_int(15)));
    CHECK(code_of([&] { R->inv(R->from_int(15)); }) == ErrorCode::NotAUnit);
    CHECK(R->parse("-1") == R->from_int(44));
    CHECK(R->pow(R->from_int(2), 12) == R->one());  // 2 has order 12 mod 45
}

TEST_CASE("ring laws hold exhaustively on Z/15") {
    auto R = make_ring("Z/15");
    auto el = enumerate(*R);
    REQUIRE(el.size() == 15);
    for (const auto& a : el)
        for (const auto& b : el) {
            CHECK(R->add(a, b) == R->add(b, a));
            CHECK(R->mul(a, b) == R->mul(b, a));
            for (const auto& c : el) CHECK(R->mul(a, R->add(b, c)) == R->add(R->mul(a, b), R->mul(a, c)));
        }
}

TEST_CASE("square and norm classes") {
    auto R = make_ring("Z/9");
    CHECK(square_class(R->from_int(7)));   // 4^2 = 16 = 7
    CHECK_FALSE(square_class(R->from_int(2)));
    CHECK(norm_class(R->from_int(2), R->from_int(2)));  // every unit is a norm from F_9

    auto M = make_ring("Z/45");
    CHECK_FALSE(square_class(M->from_int(11)));  // square mod 5, not mod 9
    CHECK_FALSE(square_class(M->from_int(7)));   // square mod 9, not mod 5
    CHECK(square_class(M->from_int(31)));        // 31 = 4 mod 9, 1 mod 5

    auto X = make_ring("R");
    CHECK(square_class(X->from_rational(3, 7)));
    CHECK_FALSE(square_class(X->from_rational(-1, 2)));
    CHECK(norm_class(X->from_int(-1), X->from_int(5)));
    CHECK_FALSE(norm_class(X->from_int(-1), X->from_int(-5)));
}

TEST_CASE("rationals stay exact") {
    auto X = make_ring("R");
    auto a = X->from_rational(1, 3), b = X->from_rational(1, 6);
    CHECK(X->to_string(X->add(a, b)) == "1/2");
    CHECK(X->mul(X->from_rational(2, 3), X->from_rational(3, 2)) == X->one());
    CHECK(code_of([&] { X->inv(X->zero()); }) == ErrorCode::NotAUnit);
    Rat big{INT64_MAX / 2, 1};
    CHECK(code_of([&] { (void)(big * big); }) == ErrorCode::Overflow);
}

TEST_CASE("components and residues") {
    auto R = make_ring("Z/45");
    auto x = R->from_int(17);
    CHECK(residue(x, 0) == residue(R->from_int(2), 0));  // 17 = 2 mod 3
    CHECK(residue(x, 1) == residue(R->from_int(2), 1));  // 17 = 2 mod 5
    CHECK_FALSE(residue(x, 0) == residue(R->one(), 0));
    auto parts = std::vector<RingElem>{R->restrict_to(x, 0), R->restrict_to(R->one(), 1)};
    CHECK(R->mix(parts) == R->add(R->restrict_to(x, 0), R->restrict_to(R->one(), 1)));
}

TEST_CASE("matrices: determinant, inverse, kernel") {
    auto R = make_ring("Z/9");
    Mat m(*R, 2, 2);
    m.at(0, 0) = R->from_int(1);
    m.at(0, 1) = R->from_int(2);
    m.at(1, 0) = R->from_int(3);
    m.at(1, 1) = R->from_int(4);
    CHECK(det(*R, m) == R->from_int(-2));
    auto inv = inverse(*R, m);
    REQUIRE(inv);
    auto prod = mat_mul(*R, m, *inv);
    CHECK(prod.a == Mat::identity(*R, 2).a);

    Mat s(*R, 1, 2);
    s.at(0, 0) = R->from_int(3);
    s.at(0, 1) = R->from_int(3);
    Kernel k = kernel(*R, s);
    CHECK_FALSE(k.is_free);  // 3 is a zero divisor mod 9
    CHECK(residue_rank(*R, s, 0) == 0);
}

TEST_CASE("idempotent lifting") {
    // Z/9 x Z/9 as an algebra over Z/9: (1,0) lifts to itself, 4 is idempotent only mod 3
    ModAlgebraData a{3, 2, 2, {1, 0, 0, 0, 0, 0, 0, 1}, {1, 1}};
    auto e = lift_idempotent(a, {4, 0});
    CHECK(mod_alg_mul(a, e, e) == e);
    CHECK(e == std::vector<int64_t>{1, 0});
}

}  // TEST_SUITE
