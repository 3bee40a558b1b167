// Witt invariants of hermitian forms, computed one residue field at a time.
//
// Over a residue field F the algebra splits as a product of simple parts
// A_eta = eta A (eta a primitive central idempotent).  A part swapped with
// another by sigma is of exchange type and carries only hyperbolic forms.
// Every other part is Morita equivalent to its center K: after conjugating by
// a suitable symmetric unit u, a sigma'-symmetric rank-one idempotent e exists
// and the form transfers to an eps'-hermitian form over (K, sigma|K), which is
// classified by rank, and for symmetric forms by the determinant.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "octwitt/herm.hpp"

namespace octwitt {

namespace {

struct FieldK {
    int64_t p = 3;
    int k = 1;
    int64_t a = 0, b = 0;  // z^2 = a z + b when k == 2
    using E = std::array<int64_t, 2>;

    int64_t md(int64_t x) const { return ((x % p) + p) % p; }
    E add(E x, E y) const { return {md(x[0] + y[0]), md(x[1] + y[1])}; }
    E sub(E x, E y) const { return {md(x[0] - y[0]), md(x[1] - y[1])}; }
    E mul(E x, E y) const {
        if (k == 1) return {md(x[0] * y[0]), 0};
        int64_t c0 = md(x[0] * y[0] + md(b * md(x[1] * y[1])));
        int64_t c1 = md(x[0] * y[1] + x[1] * y[0] + md(a * md(x[1] * y[1])));
        return {c0, c1};
    }
    int64_t norm(E x) const {
        if (k == 1) return x[0];
        return md(x[0] * x[0] + md(a * md(x[0] * x[1])) - md(b * md(x[1] * x[1])));
    }
    E conj(E x) const {
        if (k == 1) return x;
        // z -> a - z
        return {md(x[0] + a * x[1]), md(-x[1])};
    }
    bool is_zero(E x) const { return x[0] == 0 && x[1] == 0; }
    E inv(E x) const {
        int64_t nn = norm(x);
        int64_t ni = mod_inv(nn, p);
        if (ni == 0) fail(ErrorCode::NotAUnit, "zero has no inverse in the residue field");
        if (k == 1) return {ni, 0};
        E c = conj(x);
        return {md(c[0] * ni), md(c[1] * ni)};
    }
    bool is_square(E x) const { return is_qr_mod_p(norm(x), p); }
    E from_int(int64_t v) const { return {md(v), 0}; }

    E det(std::vector<E> m, int n) const {
        E d = from_int(1);
        for (int c = 0; c < n; ++c) {
            int piv = -1;
            for (int r = c; r < n; ++r)
                if (!is_zero(m[r * n + c])) {
                    piv = r;
                    break;
                }
            if (piv < 0) return from_int(0);
            if (piv != c) {
                for (int j = 0; j < n; ++j) std::swap(m[c * n + j], m[piv * n + j]);
                d = sub(from_int(0), d);
            }
            d = mul(d, m[c * n + c]);
            E iv = inv(m[c * n + c]);
            for (int r = c + 1; r < n; ++r) {
                if (is_zero(m[r * n + c])) continue;
                E f = mul(m[r * n + c], iv);
                for (int j = c; j < n; ++j) m[r * n + j] = sub(m[r * n + j], mul(f, m[c * n + j]));
            }
        }
        return d;
    }
};

struct PartData {
    bool exchange = false;
    Vec eta;
    int k = 1;
    Vec zK;  // generator of K = eta Z over F when k == 2
    FieldK K;
    bool sigma_on_K = false;
    Vec u, w_sigma_u;  // conjugating unit
    int delta = 1;
    Vec e;
    std::vector<Vec> v;
    std::vector<Vec> w;  // w_k = u v_k^sigma
    int r = 1;
    Mat ke;  // columns e, zK e
};

struct ResidueData {
    std::vector<PartData> parts;
};

int64_t sqrt_mod(int64_t a, int64_t p) {
    a = ((a % p) + p) % p;
    for (int64_t x = 0; x < p; ++x)
        if (x * x % p == a) return x;
    return -1;
}

bool in_span_of_one(const Algebra& A, const Vec& z) { return A.as_scalar(z).has_value(); }

// Coefficients c with sum c_i cols_i = target over the residue field.
std::optional<Vec> coords_in(const BaseRing& F, const std::vector<Vec>& cols, const Vec& target) {
    Mat m = from_columns(F, static_cast<int>(target.size()), cols);
    return solve(F, m, target);
}

int rank_of(const BaseRing& F, const std::vector<Vec>& vs, int dim) {
    if (vs.empty()) return 0;
    return residue_rank(F, from_columns(F, dim, vs), 0);
}

std::vector<Vec> span_basis(const Algebra& A, const std::vector<Vec>& gens) {
    std::vector<Vec> out;
    for (const auto& g : gens) {
        out.push_back(g);
        if (rank_of(*A.R, out, A.dim) != static_cast<int>(out.size())) out.pop_back();
    }
    return out;
}

// Primitive idempotents of the (commutative, semisimple) center.
std::vector<Vec> primitive_central_idempotents(const Algebra& A) {
    const BaseRing& F = *A.R;
    const int64_t p = F.components()[0].p;
    std::vector<Vec> Z = span_basis(A, A.center);
    const int t = static_cast<int>(Z.size());
    if (t == 1) return {A.one()};
    if (t == 2) {
        Vec z = Z[0];
        if (in_span_of_one(A, z)) z = Z[1];
        auto c = coords_in(F, {A.one(), z}, A.mul(z, z));
        if (!c) fail(ErrorCode::InternalInconsistency, "center is not spanned by 1 and z");
        int64_t b = F.zcoord((*c)[0], 0), a = F.zcoord((*c)[1], 0);
        int64_t disc = ((a * a + 4 * b) % p + p) % p;
        if (disc == 0) fail(ErrorCode::InternalInconsistency, "center is not etale");
        if (!is_qr_mod_p(disc, p)) return {A.one()};
        int64_t s = sqrt_mod(disc, p);
        int64_t i2 = mod_inv(2, p);
        int64_t r1 = (a + s) % p * i2 % p, r2 = ((a - s) % p + p) % p * i2 % p;
        int64_t d = mod_inv(((r1 - r2) % p + p) % p, p);
        Vec eta = A.scale(A.sub(z, A.scalar(F.from_int(r2))), F.from_int(d));
        return {eta, A.sub(A.one(), eta)};
    }
    // Larger centers: enumerate idempotents.
    double total = std::pow(static_cast<double>(p), t);
    if (total > 2e6) fail(ErrorCode::Inconclusive, "center too large to enumerate idempotents");
    std::vector<Vec> idem;
    std::vector<int64_t> c(t, 0);
    for (;;) {
        Vec x = A.zero();
        for (int i = 0; i < t; ++i)
            if (c[i]) x = A.add(x, A.scale(Z[i], F.from_int(c[i])));
        if (!A.is_zero(x) && A.mul(x, x) == x) idem.push_back(x);
        int i = 0;
        while (i < t && ++c[i] == p) c[i++] = 0;
        if (i == t) break;
    }
    std::vector<Vec> prim;
    for (const auto& e : idem) {
        bool minimal = true;
        for (const auto& f : idem)
            if (f != e && A.mul(e, f) == f) minimal = false;
        if (minimal) prim.push_back(e);
    }
    return prim;
}

// Elements of a subspace, in lexicographic coefficient order; capped.
template <class F>
bool for_each_in_span(const Algebra& A, const std::vector<Vec>& basis, int64_t p, uint64_t cap, uint64_t seed,
                      F&& fn) {
    const BaseRing& R = *A.R;
    const int t = static_cast<int>(basis.size());
    double total = std::pow(static_cast<double>(p), t);
    if (total <= static_cast<double>(cap)) {
        std::vector<int64_t> c(t, 0);
        for (;;) {
            int i = 0;
            while (i < t && ++c[i] == p) c[i++] = 0;
            if (i == t) return false;
            Vec x = A.zero();
            for (int j = 0; j < t; ++j)
                if (c[j]) x = A.add(x, A.scale(basis[j], R.from_int(c[j])));
            if (fn(x)) return true;
        }
    }
    std::mt19937_64 rng(seed);
    for (uint64_t it = 0; it < cap; ++it) {
        Vec x = A.zero();
        for (int j = 0; j < t; ++j) x = A.add(x, A.scale(basis[j], R.from_int(static_cast<int64_t>(rng() % p))));
        if (!A.is_zero(x) && fn(x)) return true;
    }
    return false;
}

FieldK::E to_K(const BaseRing& F, const PartData& pd, const Vec& value) {
    auto c = solve(F, pd.ke, value);
    if (!c) fail(ErrorCode::InternalInconsistency, "value outside e A e");
    FieldK::E out{F.zcoord((*c)[0], 0), pd.k == 2 ? F.zcoord((*c)[1], 0) : 0};
    return out;
}

void setup_morita(const Algebra& A, PartData& pd) {
    const BaseRing& F = *A.R;
    const int64_t p = F.components()[0].p;
    // Basis of A_eta.
    std::vector<Vec> gens;
    for (int t = 0; t < A.dim; ++t) gens.push_back(A.mul(pd.eta, A.basis(t)));
    std::vector<Vec> Aeta = span_basis(A, gens);
    const int dim_eta = static_cast<int>(Aeta.size());
    pd.r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim_eta) / pd.k)));
    if (pd.r * pd.r * pd.k != dim_eta) fail(ErrorCode::InternalInconsistency, "part is not central simple");
    const Vec one_minus = A.sub(A.one(), pd.eta);

    auto part_inverse = [&](const Vec& x) -> std::optional<Vec> {
        auto i = A.try_inv(A.add(x, one_minus));
        if (!i) return std::nullopt;
        return A.mul(*i, pd.eta);
    };
    auto sym_space = [&](const std::function<Vec(const Vec&)>& sig, int sign) {
        // {x in A_eta : sig(x) = sign x}
        Mat m(F, A.dim, dim_eta);
        for (int j = 0; j < dim_eta; ++j) {
            Vec d = sign > 0 ? A.sub(sig(Aeta[j]), Aeta[j]) : A.add(sig(Aeta[j]), Aeta[j]);
            m.set_column(j, d);
        }
        Kernel k = kernel(F, m);
        std::vector<Vec> out;
        for (const auto& c : k.basis) {
            Vec x = A.zero();
            for (int j = 0; j < dim_eta; ++j) x = A.add(x, A.scale(Aeta[j], c[j]));
            out.push_back(x);
        }
        return out;
    };
    auto sigma = [&](const Vec& x) { return A.sigma(x); };

    std::vector<std::pair<Vec, int>> us = {{pd.eta, 1}};
    for (int sign : {-1, 1}) {
        auto S = sym_space(sigma, sign);
        int found = 0;
        for_each_in_span(A, S, p, 4000, 11, [&](const Vec& x) {
            if (part_inverse(x)) {
                us.emplace_back(x, sign);
                ++found;
            }
            return found >= 3;
        });
    }
    for (const auto& [u, delta] : us) {
        auto uinv = part_inverse(u);
        if (!uinv) continue;
        auto sig2 = [&](const Vec& x) { return A.mul(A.mul(u, A.sigma(x)), *uinv); };
        auto S = sym_space(sig2, 1);
        Vec found_e;
        for_each_in_span(A, S, p, 2000000, 17, [&](const Vec& s) {
            Vec s2 = A.mul(s, s);
            std::vector<Vec> cols = {s};
            if (pd.k == 2) cols.push_back(A.mul(pd.zK, s));
            auto c = coords_in(F, cols, s2);
            if (!c) return false;
            FieldK::E ce{F.zcoord((*c)[0], 0), pd.k == 2 ? F.zcoord((*c)[1], 0) : 0};
            if (pd.K.is_zero(ce)) return false;
            if (residue_rank(F, A.left_matrix(s), 0) != pd.r * pd.k) return false;
            FieldK::E ci = pd.K.inv(ce);
            Vec cinv = A.scale(pd.eta, F.from_int(ci[0]));
            if (pd.k == 2) cinv = A.add(cinv, A.scale(pd.zK, F.from_int(ci[1])));
            Vec e = A.mul(cinv, s);
            if (A.mul(e, e) != e || sig2(e) != e) return false;
            found_e = e;
            return true;
        });
        if (found_e.empty()) continue;
        pd.u = u;
        pd.delta = delta;
        pd.e = found_e;
        break;
    }
    if (pd.e.empty()) fail(ErrorCode::Inconclusive, "no symmetric rank-one idempotent found");
    pd.ke = from_columns(F, A.dim, pd.k == 2 ? std::vector<Vec>{pd.e, A.mul(pd.zK, pd.e)} : std::vector<Vec>{pd.e});
    // K-basis v_1..v_r of A_eta e.
    std::vector<Vec> span;
    for (int t = 0; t < A.dim && static_cast<int>(pd.v.size()) < pd.r; ++t) {
        Vec cand = A.mul(A.basis(t), pd.e);
        std::vector<Vec> trial = span;
        trial.push_back(cand);
        if (pd.k == 2) trial.push_back(A.mul(pd.zK, cand));
        if (rank_of(F, trial, A.dim) == static_cast<int>(trial.size())) {
            span = trial;
            pd.v.push_back(cand);
        }
    }
    if (static_cast<int>(pd.v.size()) != pd.r) fail(ErrorCode::InternalInconsistency, "A e has the wrong rank");
    for (const auto& v : pd.v) pd.w.push_back(A.mul(pd.u, A.sigma(v)));
}

const ResidueData& residue_data(const AlgPtr& A) {
    {
        std::lock_guard<std::mutex> lock(A->cache->mu);
        auto it = A->cache->items.find("residue");
        if (it != A->cache->items.end()) return *std::static_pointer_cast<ResidueData>(it->second);
    }
    auto data = std::make_shared<ResidueData>();
    const BaseRing& F = *A->R;
    const int64_t p = F.components()[0].p;
    auto prim = primitive_central_idempotents(*A);
    std::vector<bool> used(prim.size(), false);
    for (size_t i = 0; i < prim.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        PartData pd;
        pd.eta = prim[i];
        Vec s = A->sigma(prim[i]);
        if (s != prim[i]) {
            for (size_t j = 0; j < prim.size(); ++j)
                if (!used[j] && prim[j] == s) used[j] = true;
            pd.exchange = true;
            pd.eta = A->add(prim[i], s);
            data->parts.push_back(pd);
            continue;
        }
        // K = eta Z
        std::vector<Vec> kz;
        for (const auto& z : A->center) kz.push_back(A->mul(prim[i], z));
        kz = span_basis(*A, kz);
        pd.k = static_cast<int>(kz.size());
        pd.K.p = p;
        pd.K.k = pd.k;
        if (pd.k > 2) fail(ErrorCode::Unsupported, "residue center of degree above 2");
        if (pd.k == 2) {
            Vec z = kz[0];
            if (coords_in(F, {pd.eta}, z)) z = kz[1];
            pd.zK = z;
            auto c = coords_in(F, {pd.eta, z}, A->mul(z, z));
            if (!c) fail(ErrorCode::InternalInconsistency, "K is not spanned by eta and z");
            pd.K.b = F.zcoord((*c)[0], 0);
            pd.K.a = F.zcoord((*c)[1], 0);
            pd.sigma_on_K = A->sigma(z) != z;
        }
        setup_morita(*A, pd);
        data->parts.push_back(pd);
    }
    std::lock_guard<std::mutex> lock(A->cache->mu);
    A->cache->items["residue"] = data;
    return *data;
}

std::string bit(bool b) { return b ? "1" : "0"; }

std::vector<PartInvariant> finite_invariants(const HermForm& f, int comp) {
    AlgPtr Ar = base_change_component(f.A, comp, true);
    const BaseRing& R = *f.A->R;
    const BaseRing& F = *Ar->R;
    const int n = f.n;
    auto red = [&](const Vec& v) {
        Vec o(v.size());
        for (size_t i = 0; i < v.size(); ++i) o[i] = R.to_residue(v[i], comp);
        return o;
    };
    std::vector<Vec> G;
    for (const auto& x : f.gram) G.push_back(red(x));
    std::vector<Vec> P;
    for (const auto& x : f.proj) P.push_back(red(x));
    Vec eps = red(f.eps);
    const ResidueData& rd = residue_data(Ar);
    const int d = Ar->dim;
    // E applied to the vector with slot j set to x.
    auto proj_col = [&](int j, const Vec& x) {
        AVec o(n);
        for (int i = 0; i < n; ++i) o[i] = Ar->mul(P[static_cast<size_t>(i) * n + j], x);
        return o;
    };
    auto flat = [&](const AVec& w) {
        Vec o;
        for (const auto& x : w) o.insert(o.end(), x.begin(), x.end());
        return o;
    };
    auto f_rank = [&](const std::vector<Vec>& cols) {
        if (cols.empty()) return 0;
        return residue_rank(F, from_columns(F, n * d, cols), 0);
    };
    std::vector<PartInvariant> out;
    for (size_t pi = 0; pi < rd.parts.size(); ++pi) {
        const PartData& pd = rd.parts[pi];
        PartInvariant inv;
        inv.comp = comp;
        if (pd.exchange) {
            inv.kind = "exchange";
            // module size: F-dimension of P eta
            std::vector<Vec> cols;
            for (int j = 0; j < n; ++j)
                for (int t = 0; t < d; ++t) {
                    Vec x = Ar->mul(pd.eta, Ar->basis(t));
                    if (P.empty()) {
                        AVec w(n, Ar->zero());
                        w[j] = x;
                        cols.push_back(flat(w));
                    } else {
                        cols.push_back(flat(proj_col(j, x)));
                    }
                }
            inv.m = f_rank(cols);
            inv.index = P.empty() ? n : (inv.m > 0 ? 1 : 0);
            inv.free_planes = P.empty() ? n / 2 : 0;
            inv.witt_zero = true;
            inv.key = "0";
            out.push_back(inv);
            continue;
        }
        // K-basis of P e, paired with itself through u G
        std::vector<AVec> basis;
        if (P.empty()) {
            for (int i = 0; i < n; ++i)
                for (int a = 0; a < pd.r; ++a) {
                    AVec w(n, Ar->zero());
                    w[i] = pd.v[a];
                    basis.push_back(w);
                }
        } else {
            std::vector<Vec> cols;
            for (int j = 0; j < n; ++j)
                for (int a = 0; a < pd.r; ++a) {
                    AVec w = proj_col(j, pd.v[a]);
                    std::vector<Vec> trial = cols;
                    trial.push_back(flat(w));
                    if (pd.k == 2) {
                        AVec wz = w;
                        for (auto& x : wz) x = Ar->mul(x, pd.zK);
                        trial.push_back(flat(wz));
                    }
                    if (f_rank(trial) == static_cast<int>(trial.size())) {
                        cols = trial;
                        basis.push_back(w);
                    }
                }
        }
        const int m = static_cast<int>(basis.size());
        inv.m = m;
        inv.r = pd.r;
        std::vector<std::vector<Vec>> left(m, std::vector<Vec>(n));
        for (int a = 0; a < m; ++a)
            for (int j = 0; j < n; ++j) {
                Vec c = Ar->zero();
                for (int i = 0; i < n; ++i)
                    c = Ar->add(c, Ar->mul(Ar->sigma(basis[a][i]), G[static_cast<size_t>(i) * n + j]));
                left[a][j] = Ar->mul(pd.u, c);
            }
        std::vector<FieldK::E> H(static_cast<size_t>(m) * m);
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                Vec s0 = Ar->zero();
                for (int j = 0; j < n; ++j) s0 = Ar->add(s0, Ar->mul(left[a][j], basis[b][j]));
                H[static_cast<size_t>(a) * m + b] = to_K(F, pd, s0);
            }
        FieldK::E epsK = to_K(F, pd, Ar->mul(eps, pd.e));
        if (pd.delta < 0) epsK = pd.K.sub(pd.K.from_int(0), epsK);
        FieldK::E d = pd.K.det(H, m);
        if (m > 0 && pd.K.is_zero(d)) fail(ErrorCode::NotUnimodular, "form is degenerate at a residue field");
        inv.det = {d[0], d[1]};
        if (pd.sigma_on_K) {
            inv.kind = "hermitian";
            inv.index = m / 2;
            inv.witt_zero = m % 2 == 0;
            inv.key = "H" + std::to_string(m % 2);
        } else if (epsK == pd.K.from_int(-1)) {
            inv.kind = "alternating";
            inv.index = m / 2;
            inv.witt_zero = true;
            inv.key = "0";
        } else if (epsK == pd.K.from_int(1)) {
            inv.kind = "symmetric";
            inv.det_square = m == 0 || pd.K.is_square(d);
            // signed determinant (-1)^{m(m-1)/2} d
            FieldK::E sd = ((m * (m - 1) / 2) % 2) ? pd.K.sub(pd.K.from_int(0), d) : d;
            bool sd_square = m == 0 || pd.K.is_square(sd);
            inv.signed_det_square = sd_square;
            int aniso;
            if (m % 2) {
                aniso = 1;
                inv.witt_zero = false;
            } else {
                inv.witt_zero = sd_square;
                aniso = sd_square ? 0 : 2;
            }
            inv.index = (m - aniso) / 2;
            inv.key = "S" + std::to_string(m % 2) + bit(sd_square);
        } else {
            fail(ErrorCode::InvalidEpsilon, "epsilon is not +-1 on a part with trivial involution on the center");
        }
        inv.free_planes = inv.index / pd.r;
        out.push_back(inv);
    }
    return out;
}

// ---------------------------------------------------------------- real components

std::vector<std::vector<Rat>> rat_gram(const BaseRing& R, const std::vector<std::vector<RingElem>>& m) {
    std::vector<std::vector<Rat>> out(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (const auto& x : m[i]) out[i].push_back(R.rcoord(x, 0));
    return out;
}

// Gram over R of (x,y) -> tr(sum x_i^sigma G_ij y_j) in the R-basis {e_i b_t}.
std::vector<std::vector<Rat>> trace_gram(const Algebra& A, const std::vector<Vec>& G, int n,
                                         const std::function<RingElem(const Vec&)>& tr, const Vec& scale_left) {
    const int d = A.dim;
    std::vector<std::vector<RingElem>> T(n * d, std::vector<RingElem>(n * d));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec g = A.mul(scale_left, G[i * n + j]);
            for (int s = 0; s < d; ++s) {
                Vec sg = A.mul(A.sigma(A.basis(s)), g);
                for (int t = 0; t < d; ++t) T[i * d + s][j * d + t] = tr(A.mul(sg, A.basis(t)));
            }
        }
    return rat_gram(*A.R, T);
}

PartInvariant signature_part(int comp, const std::string& kind, int m, int s) {
    PartInvariant p;
    p.comp = comp;
    p.kind = kind;
    p.m = m;
    p.signature = s;
    p.witt_zero = s == 0;
    p.index = (m - std::abs(s)) / 2;
    p.free_planes = p.index;
    p.key = "sig" + std::to_string(s);
    return p;
}

PartInvariant parity_part(int comp, const std::string& kind, int m, bool alternating) {
    PartInvariant p;
    p.comp = comp;
    p.kind = kind;
    p.m = m;
    p.witt_zero = alternating || m % 2 == 0;
    p.index = m / 2;
    p.free_planes = p.index;
    p.key = alternating ? "0" : "P" + std::to_string(m % 2);
    return p;
}

std::vector<PartInvariant> real_invariants(const HermForm& f, int comp) {
    AlgPtr Ac = base_change_component(f.A, comp, false);
    const BaseRing& R = *f.A->R;
    const BaseRing& Rc = *Ac->R;
    const Algebra& A = *Ac;
    const int n = f.n;
    auto red = [&](const Vec& v) {
        Vec o(v.size());
        for (size_t i = 0; i < v.size(); ++i) o[i] = R.to_component(v[i], comp);
        return o;
    };
    std::vector<Vec> G;
    for (const auto& x : f.gram) G.push_back(red(x));
    Vec eps = red(f.eps);
    int eps_sign = 0;
    if (eps == A.one()) eps_sign = 1;
    if (eps == A.neg(A.one())) eps_sign = -1;
    if (eps_sign == 0) fail(ErrorCode::Unsupported, "real components need eps = +-1");
    auto coef0 = [&](const Vec& x) { return Rc.mul(Rc.from_int(2), x[0]); };
    auto sig_of = [&](const std::vector<std::vector<Rat>>& m) {
        auto [pos, neg] = rational_signature(m);
        return pos - neg;
    };
    if (A.shape == "base") {
        if (eps_sign < 0) return {parity_part(comp, "alternating", n, true)};
        std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m[i][j] = Rc.rcoord(G[i * n + j][0], 0);
        return {signature_part(comp, "real-symmetric", n, sig_of(m))};
    }
    if (A.shape == "etale" && (A.inv_kind == "standard" || A.inv_kind == "identity")) {
        const int asign = Rc.rcoord(A.params[0], 0).sign();
        const Vec lam = *A.lambda;
        if (A.inv_kind == "standard") {
            if (asign > 0) {
                PartInvariant p = parity_part(comp, "exchange", n, true);
                p.free_planes = n / 2;
                p.index = n;
                return {p};
            }
            Vec scale = eps_sign > 0 ? A.one() : lam;
            int s = sig_of(trace_gram(A, G, n, coef0, scale));
            return {signature_part(comp, "real-hermitian", n, s / 2)};
        }
        if (asign < 0) return {parity_part(comp, eps_sign > 0 ? "complex-symmetric" : "alternating", n, eps_sign < 0)};
        if (eps_sign < 0) return {parity_part(comp, "alternating", n, true), parity_part(comp, "alternating", n, true)};
        int sa = sig_of(trace_gram(A, G, n, coef0, A.one()));
        int sb = sig_of(trace_gram(A, G, n, coef0, lam));
        return {signature_part(comp, "real-symmetric", n, (sa + sb) / 2),
                signature_part(comp, "real-symmetric", n, (sa - sb) / 2)};
    }
    if (A.shape == "quaternion" && A.inv_kind == "standard" && Rc.rcoord(A.params[0], 0).sign() < 0 &&
        Rc.rcoord(A.params[1], 0).sign() < 0) {
        if (eps_sign < 0) {
            PartInvariant p = parity_part(comp, "quaternion-skew", n, false);
            return {p};
        }
        int s = sig_of(trace_gram(A, G, n, coef0, A.one()));
        return {signature_part(comp, "quaternion-hermitian", n, s / 4)};
    }
    fail(ErrorCode::Unsupported, "Witt invariants over a real component for algebra shape " + A.shape + "/" +
                                     A.inv_kind);
}

}  // namespace

std::pair<int, int> rational_signature(const std::vector<std::vector<Rat>>& m0) {
    auto m = m0;
    int n = static_cast<int>(m.size());
    int pos = 0, neg = 0;
    std::vector<bool> done(n, false);
    for (int step = 0; step < n; ++step) {
        int piv = -1;
        for (int i = 0; i < n; ++i)
            if (!done[i] && !m[i][i].is_zero()) {
                piv = i;
                break;
            }
        if (piv < 0) {
            int pi = -1, pj = -1;
            for (int i = 0; i < n && pi < 0; ++i)
                for (int j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && i != j && !m[i][j].is_zero()) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi < 0) break;
            // e_i <- e_i + e_j
            for (int k = 0; k < n; ++k) m[pi][k] = m[pi][k] + m[pj][k];
            for (int k = 0; k < n; ++k) m[k][pi] = m[k][pi] + m[k][pj];
            piv = pi;
        }
        Rat d = m[piv][piv];
        (d.sign() > 0 ? pos : neg)++;
        done[piv] = true;
        for (int i = 0; i < n; ++i) {
            if (done[i] || m[i][piv].is_zero()) continue;
            Rat f = m[i][piv] / d;
            for (int j = 0; j < n; ++j) m[i][j] = m[i][j] - f * m[piv][j];
        }
        for (int j = 0; j < n; ++j) {
            if (done[j] || m[piv][j].is_zero()) continue;
            Rat f = m[piv][j] / d;
            for (int i = 0; i < n; ++i) m[i][j] = m[i][j] - f * m[i][piv];
        }
    }
    return {pos, neg};
}

FormInvariants form_invariants(const HermForm& f) {
    FormInvariants out;
    const BaseRing& R = *f.A->R;
    out.free_plane = true;
    for (int c = 0; c < R.num_components(); ++c) {
        const bool real = R.components()[c].kind == Component::Real;
        if (real && !f.is_free()) fail(ErrorCode::Unsupported, "projective forms over real components");
        auto parts = real ? real_invariants(f, c) : finite_invariants(f, c);
        for (auto& p : parts) out.parts.push_back(p);
    }
    for (size_t i = 0; i < out.parts.size(); ++i) {
        const auto& p = out.parts[i];
        out.witt_zero = out.witt_zero && p.witt_zero;
        if (p.index > 0) out.isotropic = true;
        if (p.free_planes < 1) out.free_plane = false;
        out.key += (i ? "|" : "") + std::to_string(p.comp) + ":" + p.key;
    }
    if (out.parts.empty()) out.free_plane = false;
    return out;
}

}  // namespace octwitt
