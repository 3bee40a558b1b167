#include "doctest.h"
#include "support.hpp"

using namespace octwitt;
using namespace octwitt::testing;

TEST_SUITE("algiv") {

TEST_CASE("quaternion relations") {
    auto R = make_ring("Z/5");
    auto Q = make_quaternion(R, R->from_int(2), R->from_int(3));
    Q->validate();
    const Vec l = Q->basis(1), m = Q->basis(2);
    CHECK(Q->mul(l, l) == Q->scalar(R->from_int(2)));
    CHECK(Q->mul(m, m) == Q->scalar(R->from_int(3)));
    CHECK(Q->mul(l, m) == Q->neg(Q->mul(m, l)));
    CHECK(Q->sigma(l) == Q->neg(l));
    CHECK(Q->center.size() == 1);

    const Vec x = Q->parse("[1, 1, 1, 0]");
    CHECK(Q->mul(x, Q->inv(x)) == Q->one());
    TrdNrd tn = reduced_trace_norm(*Q, x);
    CHECK(Q->str(x) == "[1,1,1,0]");
    CHECK(tn.trd == Q->scalar(R->from_int(2)));
    // Nrd(a + bl + cm + dml) = a^2 - 2 b^2 - 3 c^2 + 6 d^2
    CHECK(tn.nrd == Q->scalar(R->from_int(-4)));
    CHECK(Q->mul(x, Q->sigma(x)) == tn.nrd);
}

TEST_CASE("involution types") {
    auto R = make_ring("Z/3");
    auto Q = make_quaternion(R, R->from_int(2), R->from_int(2));
    CHECK(involution_type(*Q, Q->one()) == std::vector<InvolutionType>{InvolutionType::Symplectic});
    CHECK(involution_type(*Q, Q->neg(Q->one())) == std::vector<InvolutionType>{InvolutionType::Orthogonal});
    CHECK(sym_basis(*Q, Q->one()).size() == 1);
    CHECK(sym_basis(*Q, Q->neg(Q->one())).size() == 3);

    auto E = make_quadratic_etale(R, R->from_int(2), true);
    CHECK(involution_type(*E, E->one()) == std::vector<InvolutionType>{InvolutionType::Unitary});
    auto Eid = make_quadratic_etale(R, R->from_int(2), false);
    CHECK(involution_type(*Eid, Eid->one()) == std::vector<InvolutionType>{InvolutionType::Orthogonal});

    auto M = make_matrix_involution(R, 2, MatrixInvolution::Transpose);
    CHECK(involution_type(*M, M->one()) == std::vector<InvolutionType>{InvolutionType::Orthogonal});
    auto S = make_matrix_involution(R, 2, MatrixInvolution::Symplectic);
    CHECK(involution_type(*S, S->one()) == std::vector<InvolutionType>{InvolutionType::Symplectic});
}

TEST_CASE("eps must satisfy eps^sigma eps = 1") {
    auto R = make_ring("Z/5");
    auto A = base_algebra(R);
    CHECK_THROWS_AS(involution_type(*A, A->scalar(R->from_int(2))), Error);
}

TEST_CASE("tensor product with an etale algebra") {
    auto R = make_ring("Z/3");
    auto T = tensor_product(make_quaternion(R, R->from_int(2), R->from_int(2)),
                            make_quadratic_etale(R, R->from_int(2), true));
    T->validate();
    CHECK(T->dim == 8);
    CHECK(T->center.size() == 2);
    auto types = involution_type(*T, T->one());
    for (auto t : types) CHECK(t == InvolutionType::Unitary);
}

TEST_CASE("splitting over a finite field") {
    auto R = make_ring("GF(7)");
    auto Q = make_quaternion(R, R->from_int(3), R->from_int(5));
    auto s = split_quaternion(*Q);
    REQUIRE(s.split);
    REQUIRE(s.idempotent);
    const Vec e = *s.idempotent;
    CHECK(Q->mul(e, e) == e);
    CHECK_FALSE(Q->is_zero(e));
    CHECK(e != Q->one());
    CHECK(brauer_is_split(*Q) == std::vector<bool>{true});

    auto X = make_ring("R");
    auto H = make_quaternion(X, X->from_int(-1), X->from_int(-1));
    CHECK(brauer_is_split(*H) == std::vector<bool>{false});
    CHECK(brauer_is_split(*make_quaternion(X, X->from_int(1), X->from_int(-1))) == std::vector<bool>{true});
}

TEST_CASE("pi projections reassemble") {
    auto R = make_ring("Z/9");
    auto Q = make_quaternion(R, R->from_int(2), R->from_int(5));
    PiData pd = pi_projections(*Q);
    const Vec mu = *Q->mu;
    for (int j = 0; j < Q->dim; ++j) {
        Vec a = Q->basis(j);
        Vec b1 = mat_vec(*R, pd.pi1, a), b2 = mat_vec(*R, pd.pi2, a);
        CHECK(Q->add(b1, Q->mul(mu, b2)) == a);
        CHECK(Q->mul(b1, *Q->lambda) == Q->mul(*Q->lambda, b1));
    }
}

TEST_CASE("conjugated involution") {
    auto R = make_ring("Z/5");
    auto Q = make_quaternion(R, R->from_int(2), R->from_int(3));
    auto C = conjugate_algebra(Q, Q->basis(1));
    C->validate();
    // Int(l) sigma negates l and fixes m, ml: orthogonal for eps = 1
    CHECK(C->sigma(C->basis(1)) == C->neg(C->basis(1)));
    CHECK(C->sigma(C->basis(2)) == C->basis(2));
    CHECK(involution_type(*C, C->one()) == std::vector<InvolutionType>{InvolutionType::Orthogonal});
}

TEST_CASE("arith front end") {
    auto R = make_ring("Z/3");
    auto Q = make_quaternion(R, R->from_int(2), R->from_int(2));
    auto x = Q->parse("[0, 1, 1, 0]");
    auto r = alg_arith(*Q, x, x, AlgOp::IsUnit);
    REQUIRE(r.flag);
    CHECK(*r.flag == Q->is_unit(x));
    CHECK(*alg_arith(*Q, x, x, AlgOp::Involute).value == Q->neg(x));
}

}  // TEST_SUITE
