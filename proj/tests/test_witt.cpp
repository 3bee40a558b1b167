#include "doctest.h"
#include "support.hpp"

using namespace octwitt;
using namespace octwitt::testing;

TEST_SUITE("witt") {

TEST_CASE("W(F_p) by residue of p mod 4") {
    const std::vector<std::pair<const char*, std::vector<int>>> expect = {
        {"GF(3)", {4}}, {"GF(5)", {2, 2}}, {"GF(7)", {4}}, {"GF(11)", {4}}, {"GF(13)", {2, 2}}};
    for (const auto& [ring, structure] : expect) {
        auto A = base_algebra(make_ring(ring));
        auto t = enumerate_witt_group(A, A->one());
        CHECK(check_group_axioms(*t));
        CHECK(group_structure(*t) == structure);
    }
}

TEST_CASE("products split into components") {
    auto A = base_algebra(make_ring("Z/15"));
    auto t = enumerate_witt_group(A, A->one());
    CHECK(t->size() == 16);
    CHECK(group_structure(*t) == std::vector<int>{2, 2, 4});
}

TEST_CASE("skew forms over a commutative ring are hyperbolic") {
    auto A = base_algebra(make_ring("Z/9"));
    CHECK(enumerate_witt_group(A, A->neg(A->one()))->size() == 1);
}

TEST_CASE("quaternion Witt groups need projective modules") {
    for (const char* ring : {"Z/3", "Z/9"}) {
        auto R = make_ring(ring);
        auto Q = make_quaternion(R, R->from_int(2), R->from_int(2));
        auto t = enumerate_witt_group(Q, Q->neg(Q->one()));
        CHECK(group_structure(*t) == std::vector<int>{4});
        bool projective = false;
        for (const auto& g : t->generators) projective = projective || !g.is_free();
        CHECK(projective);
        CHECK(enumerate_witt_group(Q, Q->one())->size() == 1);
    }
}

TEST_CASE("idempotent classes of M_2") {
    auto R = make_ring("Z/5");
    auto Q = make_quaternion(R, R->from_int(2), R->from_int(3));
    auto cls = idempotent_classes(Q);
    REQUIRE(cls.size() == 2);  // e A of rank 2 and A itself
    for (const auto& e : cls) CHECK(Q->mul(e, e) == e);
}

TEST_CASE("hyperbolic_on is Witt-trivial") {
    auto R = make_ring("Z/3");
    auto Q = make_quaternion(R, R->from_int(2), R->from_int(2));
    for (int s : {1, -1}) {
        const Vec eps = sign_eps(*Q, s);
        for (const auto& e : idempotent_classes(Q)) CHECK(is_hyperbolic(hyperbolic_on(Q, eps, e)));
    }
}

TEST_CASE("induced homomorphisms") {
    auto A = base_algebra(make_ring("GF(3)"));
    auto t = enumerate_witt_group(A, A->one());
    WittHom id = induced_hom(t, t, [](const HermForm& f) { return f; }, "id");
    CHECK(kernel(id) == std::vector<int>{0});
    CHECK(static_cast<int>(image(id).size()) == t->size());
    WittHom twice = induced_hom(t, t, [](const HermForm& f) { return direct_sum(f, f); }, "2");
    CHECK(kernel(twice).size() == 2);
    CHECK(exact_at(twice, twice));
    WittHom zero = induced_hom(t, t, [&](const HermForm&) { return zero_form(A, A->one()); }, "0");
    CHECK_FALSE(exact_at(zero, zero));
    CHECK(compose(twice, twice).map == zero.map);
}

TEST_CASE("table lookup rejects foreign forms") {
    auto A = base_algebra(make_ring("GF(3)"));
    auto B = base_algebra(make_ring("GF(5)"));
    auto t = enumerate_witt_group(A, A->one());
    CHECK(t->find(make_diagonal(A, A->one(), {A->one()})) > 0);
    CHECK_THROWS_AS(t->find(make_diagonal(B, B->one(), {B->one()})), Error);
}

}  // TEST_SUITE
