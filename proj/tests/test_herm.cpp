#include "doctest.h"
#include "support.hpp"

using namespace octwitt;
using namespace octwitt::testing;

namespace {

HermForm diag_ints(const AlgPtr& A, std::initializer_list<int> xs) {
    std::vector<Vec> e;
    for (int x : xs) e.push_back(A->scalar(A->R->from_int(x)));
    return make_diagonal(A, A->one(), e);
}

}  // namespace

TEST_SUITE("herm") {

TEST_CASE("construction checks symmetry") {
    auto R = make_ring("Z/5");
    auto A = base_algebra(R);
    auto one = A->one(), two = A->scalar(R->from_int(2));
    CHECK_NOTHROW(make_form(A, one, 2, {one, two, two, one}));
    CHECK_THROWS_AS(make_form(A, one, 2, {one, two, one, one}), Error);
    CHECK_THROWS_AS(make_form(A, one, 2, {one}), Error);
    auto h = make_hyperbolic(A, A->neg(one), 1);
    CHECK(h.g(0, 1) == one);
    CHECK(h.g(1, 0) == A->neg(one));
}

TEST_CASE("isotropy and witt decomposition over F_5") {
    auto R = make_ring("Z/5");
    auto A = base_algebra(R);
    // -1 is a square mod 5, so <1,1> is hyperbolic
    CHECK(is_hyperbolic(diag_ints(A, {1, 1})));
    auto iso = find_isotropic(diag_ints(A, {1, 1}));
    REQUIRE(iso.status == IsoStatus::Isotropic);
    auto f = diag_ints(A, {1, 1});
    CHECK(A->is_zero(form_value(f, iso.x, iso.x)));
    CHECK(form_value(f, iso.x, iso.y) == A->one());

    CHECK(find_isotropic(diag_ints(A, {1, 2})).status == IsoStatus::Anisotropic);
    auto wd = witt_decompose(diag_ints(A, {1, 2, 1, 1}));
    CHECK(wd.hyperbolic_rank == 1);
    CHECK(wd.kernel.n == 2);
    CHECK(witt_equivalent(diag_ints(A, {1, 2, 1, 1}), diag_ints(A, {1, 2})));
}

TEST_CASE("isometry over F_3 depends on rank and discriminant") {
    auto R = make_ring("Z/3");
    auto A = base_algebra(R);
    CHECK(is_isometric(diag_ints(A, {1, 1}), diag_ints(A, {2, 2})));
    CHECK_FALSE(is_isometric(diag_ints(A, {1, 1}), diag_ints(A, {1, 2})));
    CHECK_FALSE(is_isometric(diag_ints(A, {1}), diag_ints(A, {1, 1})));
    CHECK(is_hyperbolic(diag_ints(A, {1, 2})));
    CHECK_FALSE(is_hyperbolic(diag_ints(A, {1, 1})));
}

TEST_CASE("diagonalize preserves the class") {
    auto R = make_ring("Z/9");
    auto A = base_algebra(R);
    auto one = A->one(), three = A->scalar(R->from_int(3)), two = A->scalar(R->from_int(2));
    auto f = make_form(A, one, 2, {one, three, three, two});
    auto d = diagonalize(f);
    CHECK(d.size() == 2);
    CHECK(is_isometric(make_diagonal(A, one, d), f));
}

TEST_CASE("unimodularity") {
    auto R = make_ring("Z/9");
    auto A = base_algebra(R);
    auto one = A->one(), three = A->scalar(R->from_int(3));
    CHECK_FALSE(is_unimodular(make_form(A, one, 2, {one, A->zero(), A->zero(), three})));
    CHECK_THROWS_AS(diag_ints(A, {1, 3}), Error);
    CHECK(is_unimodular(diag_ints(A, {1, 4})));
}

TEST_CASE("projective forms") {
    auto R = make_ring("Z/3");
    auto M = make_matrix_involution(R, 2, MatrixInvolution::Transpose);
    const Vec e11 = M->basis(0);
    // <e11> on e11 M_2: a rank-one form on a non-free module
    auto f = make_projective_form(M, M->one(), 1, {e11}, {e11});
    CHECK_FALSE(f.is_free());
    CHECK(is_unimodular(f));
    CHECK(module_type(f) == std::vector<int>{1});
    CHECK(module_type(make_diagonal(M, M->one(), {M->one()})) == std::vector<int>{2});
    auto g = direct_sum(f, f);
    CHECK(module_type(g) == std::vector<int>{2});
    CHECK(g.proj.size() == 4);
    // the identity projector is normalised away
    auto free = make_projective_form(M, M->one(), 1, {M->one()}, {M->one()});
    CHECK(free.is_free());

    CHECK_THROWS_AS(make_projective_form(M, M->one(), 1, {M->add(e11, e11)}, {e11}), Error);
    try {
        discriminant(f);
        FAIL("projective discriminant accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Unsupported);
    }
}

TEST_CASE("transfer and conjugation") {
    auto R = make_ring("Z/5");
    auto M = make_matrix_involution(R, 2, MatrixInvolution::Transpose);
    auto f = make_diagonal(M, M->one(), {M->one()});
    auto fe = e_transfer(f, M->basis(0));
    CHECK(fe.A->dim == 1);
    CHECK(fe.n == 2);
    CHECK(is_isometric(fe, diag_ints(fe.A, {1, 1})));

    auto Q = make_quaternion(R, R->from_int(2), R->from_int(3));
    auto q = make_diagonal(Q, Q->one(), {Q->one()});
    auto c = conjugate(q, Q->basis(1));  // l is skew: eps flips
    CHECK(c.eps == Q->neg(Q->one()));
    CHECK(is_unimodular(c));
}

TEST_CASE("trace transfer of F_9 / F_3") {
    auto R = make_ring("Z/3");
    auto E = make_quadratic_etale(R, R->from_int(2), true);
    auto t = trace_transfer(make_diagonal(E, E->one(), {E->one()}));
    CHECK(t.n == 2);
    CHECK(is_isometric(t, diag_ints(t.A, {2, 2})));
    CHECK(find_isotropic(t).status == IsoStatus::Anisotropic);
}

TEST_CASE("discriminant") {
    auto R = make_ring("Z/5");
    auto A = base_algebra(R);
    CHECK(discriminant(diag_ints(A, {1, 1})).trivial);  // -1 is a square
    CHECK_FALSE(discriminant(diag_ints(A, {1, 2})).trivial);
    CHECK_THROWS_AS(discriminant(diag_ints(A, {1})), Error);
    auto E = make_quadratic_etale(R, R->from_int(2), true);
    auto d = discriminant(make_hyperbolic(E, E->one(), 1));
    CHECK(d.group == "norm");
    CHECK(d.trivial);
}

TEST_CASE("real signatures") {
    auto X = make_ring("R");
    auto A = base_algebra(X);
    auto f = diag_ints(A, {1, -4, 3});
    auto inv = form_invariants(f);
    REQUIRE(inv.parts.size() == 1);
    CHECK(inv.parts[0].signature == 1);
    CHECK(find_isotropic(f).status == IsoStatus::Isotropic);
    CHECK(find_isotropic(diag_ints(A, {1, 2})).status == IsoStatus::Anisotropic);
    CHECK(rational_signature({{Rat{1, 1}, Rat{0, 1}}, {Rat{0, 1}, Rat{-1, 1}}}) == std::pair<int, int>{1, 1});
}

TEST_CASE("lagrangians") {
    auto R = make_ring("Z/3");
    auto A = base_algebra(R);
    auto h = make_hyperbolic(A, A->one(), 1);
    LagrangianWitness L{{avec_unit(*A, 2, 0)}, {}}, M{{avec_unit(*A, 2, 1)}, {}};
    CHECK(verify_lagrangian(h, L));
    CHECK(lagrangian_phi(h, L, M) == std::vector<int>{-1});
    CHECK(lagrangian_phi(h, L, L) == std::vector<int>{1});
    LagrangianWitness bad{{avec_add(*A, avec_unit(*A, 2, 0), avec_unit(*A, 2, 1))}, {}};
    CHECK_FALSE(verify_lagrangian(h, bad));
    CHECK_THROWS_AS(lagrangian_phi(h, L, bad), Error);
}

}  // TEST_SUITE
