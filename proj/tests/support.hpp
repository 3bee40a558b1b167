#pragma once

#include <functional>
#include <random>
#include <vector>

#include "octwitt/octagon.hpp"

namespace octwitt::testing {

inline Vec sign_eps(const Algebra& A, int e) { return e > 0 ? A.one() : A.neg(A.one()); }

// Every R-combination of sym_basis(A, eps) that is a unit.
inline std::vector<Vec> unit_symmetric(const Algebra& A, const Vec& eps) {
    std::vector<Vec> basis = sym_basis(A, eps);
    std::vector<RingElem> ring = enumerate(*A.R);
    std::vector<Vec> out;
    std::vector<size_t> idx(basis.size(), 0);
    while (true) {
        Vec x = A.zero();
        for (size_t i = 0; i < basis.size(); ++i) x = A.add(x, A.scale(basis[i], ring[idx[i]]));
        if (A.is_unit(x)) out.push_back(x);
        size_t i = 0;
        while (i < idx.size() && ++idx[i] == ring.size()) idx[i++] = 0;
        if (i == idx.size()) break;
    }
    return out;
}

inline std::vector<RingElem> units(const BaseRing& R) {
    std::vector<RingElem> out;
    for (const auto& x : enumerate(R))
        if (R.is_unit(x)) out.push_back(x);
    return out;
}

// All ordered tuples of length <= max_rank drawn from `entries`.
inline void for_each_diagonal(const std::vector<Vec>& entries, int max_rank,
                              const std::function<void(const std::vector<Vec>&)>& fn) {
    std::vector<Vec> cur;
    std::function<void()> rec = [&]() {
        fn(cur);
        if (static_cast<int>(cur.size()) == max_rank) return;
        for (const auto& e : entries) {
            cur.push_back(e);
            rec();
            cur.pop_back();
        }
    };
    rec();
}

// Random element of the sum pool[i1] + ... + pool[ik], k < 4.
inline HermForm random_pool_sum(const NodeSpace& s, const std::vector<HermForm>& pool, std::mt19937& rng) {
    HermForm g = zero_form(s.alg, s.eps);
    const int k = static_cast<int>(rng() % 4);
    for (int i = 0; i < k; ++i) g = direct_sum(g, pool[rng() % pool.size()]);
    return g;
}

inline std::vector<HermForm> node_pool(const NodeSpace& s) {
    std::vector<HermForm> pool = rank_one_forms(s.alg, s.eps);
    for (const auto& e : idempotent_classes(s.alg)) pool.push_back(hyperbolic_on(s.alg, s.eps, e));
    return pool;
}

}  // namespace octwitt::testing
