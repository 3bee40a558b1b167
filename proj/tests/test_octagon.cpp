#include "doctest.h"
#include "support.hpp"

using namespace octwitt;
using namespace octwitt::testing;

namespace {

OctagonData quaternion_octagon(const char* ring, int a, int b, int e) {
    auto R = make_ring(ring);
    auto Q = make_quaternion(R, R->from_int(a), R->from_int(b));
    return make_octagon(Q, sign_eps(*Q, e));
}

}  // namespace

TEST_SUITE("octagon") {

TEST_CASE("nodes and maps") {
    auto d = quaternion_octagon("Z/3", 2, 2, 1);
    CHECK(octagon_node(d, 0).name == "W_eps(A,sigma)");
    CHECK(octagon_node(d, 5).name == "W_-eps(B,tau1)");
    CHECK(octagon_node(d, 8).name == octagon_node(d, 0).name);
    CHECK(octagon_node(d, -1).name == octagon_node(d, 7).name);
    CHECK(octagon_map(0) == OctMap::Pi1);
    CHECK(octagon_map(3) == OctMap::Rho2);
    CHECK(d.T_connected);
    CHECK(d.B1.alg->dim == 2);
}

TEST_CASE("maps land on the next node") {
    auto d = quaternion_octagon("Z/5", 2, 3, -1);
    for (int k = 0; k < 8; ++k) {
        NodeSpace s = octagon_node(d, k), t = octagon_node(d, k + 1);
        auto entries = unit_symmetric(*s.alg, s.eps);
        HermForm f = entries.empty() ? make_hyperbolic(s.alg, s.eps, 1) : make_diagonal(s.alg, s.eps, {entries[0]});
        HermForm g = apply_octagon_map(d, octagon_map(k), f);
        CHECK(g.eps == t.eps);
        CHECK(g.A->dim == t.alg->dim);
        CHECK(is_unimodular(g));
    }
}

TEST_CASE("chain witness for rho1 o pi1") {
    auto d = quaternion_octagon("Z/3", 2, 2, 1);
    NodeSpace s = octagon_node(d, 0);
    auto f = make_diagonal(s.alg, s.eps, {s.alg->one()});
    ChainWitness w = chain_witness(d, 1, f);
    CHECK(w.composite.n == 2);
    CHECK(verify_lagrangian(w.composite, w.first));
    CHECK(w.first.complement.size() == w.second.L.size());
    auto z = chain_witness(d, 1, zero_form(s.alg, s.eps));
    CHECK(z.first.L.empty());
}

TEST_CASE("exactness over Z/3, both signs") {
    for (int e : {1, -1}) {
        auto rep = check_octagon_exact(quaternion_octagon("Z/3", 2, 2, e));
        CHECK(rep.exact);
        REQUIRE(rep.nodes.size() == 8);
        for (const auto& n : rep.nodes) CHECK_MESSAGE(n.exact, n.name << ": " << n.counterexample);
    }
    auto rep = check_octagon_exact(quaternion_octagon("Z/3", 2, 2, 1));
    std::vector<int> sizes;
    for (const auto& n : rep.nodes) sizes.push_back(n.size);
    CHECK(sizes == std::vector<int>{1, 2, 4, 4, 4, 2, 1, 1});
}

TEST_CASE("a broken map is caught") {
    auto d = quaternion_octagon("Z/3", 2, 2, 1);
    auto rep = check_octagon_exact(d);
    // replace rho1 by the zero map: exactness fails at both of its ends
    std::vector<WittHom> maps = rep.maps;
    maps[1].map.assign(maps[1].map.size(), 0);
    bool broken = false;
    for (int k = 0; k < 8; ++k) broken = broken || !exact_at(maps[(k + 7) % 8], maps[k]);
    CHECK(broken);
}

TEST_CASE("finer exactness") {
    auto d = quaternion_octagon("Z/3", 2, 2, 1);
    NodeSpace s = octagon_node(d, finer_node(4));
    auto z = zero_form(s.alg, s.eps);
    CHECK(finer_predicate(d, 4, z));
    auto pre = preimage_oracle(d, 4, z);
    REQUIRE(pre);
    CHECK(pre->n == 0);
    CHECK(anisotropic_image_check(d, 4, z));

    CHECK_THROWS_AS(finer_predicate(d, 5, z), Error);
    NodeSpace other = octagon_node(d, 1);
    try {
        finer_predicate(d, 1, zero_form(other.alg, other.eps));
        FAIL("form on the wrong node accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::FormMismatch);
    }
}

TEST_CASE("finer exactness needs connected T") {
    auto R = make_ring("Z/3");
    auto T = tensor_product(make_quaternion(R, R->from_int(2), R->from_int(2)),
                            make_quadratic_etale(R, R->from_int(2), true));
    auto d = make_octagon(T, T->one());
    CHECK_FALSE(d.T_connected);
    NodeSpace s = octagon_node(d, 0);
    try {
        finer_predicate(d, 1, zero_form(s.alg, s.eps));
        FAIL("disconnected T accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::HypothesisViolated);
    }
}

TEST_CASE("part iii: false predicate means isotropic") {
    auto d = quaternion_octagon("Z/5", 2, 3, 1);
    const int k = finer_node(3);
    NodeSpace s = octagon_node(d, k);
    auto pool = node_pool(s);
    std::mt19937 rng(3);
    int falses = 0;
    for (int it = 0; it < 300; ++it) {
        HermForm g = random_pool_sum(s, pool, rng);
        if (!is_hyperbolic(apply_octagon_map(d, octagon_map(k), g))) continue;
        if (finer_predicate(d, 3, g)) continue;
        ++falses;
        CHECK(form_invariants(g).isotropic);
        CHECK_FALSE(preimage_oracle(d, 3, g));
    }
    CHECK(falses > 0);
}

TEST_CASE("Lewis sequences") {
    auto R = make_ring("Z/3");
    auto five = lewis_five(R, R->from_int(2));
    CHECK(five.all_exact);
    CHECK(five.left_injective);
    CHECK(five.right_surjective);
    CHECK(five.tables.size() == 5);

    auto seven = lewis_seven(make_ring("Z/5"), make_ring("Z/5")->from_int(2), make_ring("Z/5")->from_int(3));
    CHECK(seven.all_exact);
    CHECK(seven.tables.front()->size() == 1);  // A splits and sigma is symplectic
    CHECK(trd_kernel(R, R->from_int(2), R->from_int(2)) == std::vector<int>{0});
}

TEST_CASE("Jacobson over F_9 / F_3 and the Hamilton quaternions") {
    auto R = make_ring("Z/3");
    auto E = make_quadratic_etale(R, R->from_int(2), true);
    auto f = make_diagonal(E, E->one(), {E->one()});
    auto j = jacobson_check(f, f);
    CHECK(j.isotropy_equiv);
    CHECK(j.isometry_equiv);
    CHECK(find_isotropic(f).status == IsoStatus::Anisotropic);

    auto X = make_ring("R");
    auto H = make_quaternion(X, X->from_int(-1), X->from_int(-1));
    auto h = make_diagonal(H, H->one(), {H->one()});
    auto t = trace_transfer(h);
    CHECK(t.n == 4);
    CHECK(form_invariants(t).parts[0].signature == 4);
    CHECK(jacobson_check(h, make_diagonal(H, H->one(), {H->scalar(X->from_int(-1))})).isometry_equiv);
}

}  // TEST_SUITE
