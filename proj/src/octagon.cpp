#include "octwitt/octagon.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace octwitt {

namespace {

bool same_algebra(const Algebra& a, const Algebra& b) {
    return &a == &b || (a.R == b.R && a.dim == b.dim && a.mult == b.mult && a.invol == b.invol);
}

Vec embed_b(const SubAlgebra& S, const Vec& b) { return mat_vec(*S.alg->R, S.embed, b); }

Vec extract_b(const SubAlgebra& S, const Vec& a) {
    Vec b = sub_coords(S, a);
    if (embed_b(S, b) != a) fail(ErrorCode::InternalInconsistency, "value outside B");
    return b;
}

bool residue_connected(const AlgPtr& A, const std::vector<Vec>& span) {
    const BaseRing& R = *A->R;
    if (R.num_components() != 1) return false;
    AlgPtr Ar = base_change_component(A, 0, true);
    const BaseRing& F = *Ar->R;
    std::vector<Vec> red;
    for (const auto& v : span) {
        Vec o(v.size());
        for (size_t i = 0; i < v.size(); ++i) o[i] = R.to_residue(v[i], 0);
        red.push_back(o);
    }
    std::vector<RingElem> field = enumerate(F);
    std::vector<size_t> c(red.size(), 0);
    std::set<Vec> idem;
    for (;;) {
        Vec x = Ar->zero();
        for (size_t i = 0; i < red.size(); ++i) x = Ar->add(x, Ar->scale(red[i], field[c[i]]));
        if (Ar->mul(x, x) == x) idem.insert(x);
        size_t i = 0;
        while (i < red.size() && ++c[i] == field.size()) c[i++] = 0;
        if (i == red.size()) break;
    }
    return idem.size() <= 2;
}

bool is_commutative(const Algebra& A) { return static_cast<int>(A.center.size()) == A.dim; }

bool all_split(const Algebra& A) {
    for (bool b : brauer_is_split(A))
        if (!b) return false;
    return true;
}

}  // namespace

OctagonData make_octagon(const AlgPtr& A, const Vec& eps) {
    OctagonData d;
    d.A = A;
    d.eps = eps;
    d.pi = pi_projections(*A);
    d.lambda = *A->lambda;
    d.mu = *A->mu;
    const BaseRing& R = *A->R;
    const Vec minv = A->inv(d.mu);
    for (int j = 0; j < A->dim; ++j) {
        Vec e = A->basis(j);
        Vec back = A->add(mat_vec(R, d.pi.pi1, e), A->mul(d.mu, mat_vec(R, d.pi.pi2, e)));
        if (back != e) fail(ErrorCode::InvalidOctagonData, "a != pi1(a) + mu pi2(a)");
    }
    std::vector<Vec> t1, t2;
    for (const auto& b : d.pi.B_basis) {
        t1.push_back(A->sigma(b));
        t2.push_back(A->mul(A->mul(minv, A->sigma(b)), d.mu));
    }
    try {
        d.B1 = make_subalgebra(A, d.pi.B_basis, t1, "restricted");
        d.B2 = make_subalgebra(A, d.pi.B_basis, t2, "conjugated");
    } catch (const Error& e) {
        fail(ErrorCode::InvalidOctagonData, std::string("B is not stable: ") + e.what());
    }
    if (2 * d.B1.alg->dim != A->dim) fail(ErrorCode::InvalidOctagonData, "dim B != dim A / 2");
    for (const auto& c : A->center) {
        d.T_basis.push_back(c);
        d.T_basis.push_back(A->mul(c, d.lambda));
    }
    for (const auto& t : d.T_basis)
        if (!A->is_central(t) && A->mul(t, d.lambda) != A->mul(d.lambda, t))
            fail(ErrorCode::InternalInconsistency, "T does not commute with lambda");
    d.T_connected = R.enumerable() && residue_connected(A, d.T_basis);
    const Vec meps = A->neg(eps);
    const Vec eb = extract_b(d.B1, eps), mb = extract_b(d.B1, meps);
    d.sigma_type[0] = involution_type(*A, eps);
    d.sigma_type[1] = involution_type(*A, meps);
    d.tau1_type[0] = involution_type(*d.B1.alg, eb);
    d.tau1_type[1] = involution_type(*d.B1.alg, mb);
    d.tau2_type[0] = involution_type(*d.B2.alg, eb);
    d.tau2_type[1] = involution_type(*d.B2.alg, mb);
    return d;
}

const char* oct_map_name(OctMap m) {
    switch (m) {
        case OctMap::Pi1: return "pi1";
        case OctMap::Pi2: return "pi2";
        case OctMap::Rho1: return "rho1";
        case OctMap::Rho2: return "rho2";
    }
    return "?";
}

HermForm apply_octagon_map(const OctagonData& d, OctMap which, const HermForm& f) {
    const Algebra& A = *d.A;
    const BaseRing& R = *A.R;
    const Vec meps = A.neg(d.eps);
    if (which == OctMap::Pi1 || which == OctMap::Pi2) {
        if (!same_algebra(*f.A, A) || (f.eps != d.eps && f.eps != meps))
            fail(ErrorCode::FormMismatch, std::string(oct_map_name(which)) + " expects a form over (A, sigma, +-eps)");
        const bool one = which == OctMap::Pi1;
        const SubAlgebra& S = one ? d.B1 : d.B2;
        const Mat& P = one ? d.pi.pi1 : d.pi.pi2;
        const int n = f.n, m = 2 * n;
        const Vec c[2] = {A.one(), d.mu};
        std::vector<Vec> gram(static_cast<size_t>(m) * m);
        for (int j = 0; j < n; ++j)
            for (int a = 0; a < 2; ++a) {
                Vec left = A.sigma(c[a]);
                for (int k = 0; k < n; ++k)
                    for (int b = 0; b < 2; ++b)
                        gram[static_cast<size_t>(2 * j + a) * m + 2 * k + b] =
                            extract_b(S, mat_vec(R, P, A.mul(A.mul(left, f.g(j, k)), c[b])));
            }
        Vec eps = extract_b(S, one ? f.eps : A.neg(f.eps));
        if (f.is_free()) return make_form(S.alg, eps, m, gram);
        std::vector<Vec> proj(static_cast<size_t>(m) * m);
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int b = 0; b < 2; ++b) {
                    Vec x = A.mul(f.e(j, k), c[b]);
                    proj[static_cast<size_t>(2 * j) * m + 2 * k + b] = extract_b(S, mat_vec(R, d.pi.pi1, x));
                    proj[static_cast<size_t>(2 * j + 1) * m + 2 * k + b] = extract_b(S, mat_vec(R, d.pi.pi2, x));
                }
        return make_projective_form(S.alg, eps, m, proj, gram);
    }
    const bool one = which == OctMap::Rho1;
    const SubAlgebra& S = one ? d.B1 : d.B2;
    if (!same_algebra(*f.A, *S.alg))
        fail(ErrorCode::FormMismatch, std::string(oct_map_name(which)) + (one ? " expects a form over (B, tau1)" : " expects a form over (B, tau2)"));
    const Vec scale = one ? d.lambda : A.mul(d.lambda, d.mu);
    std::vector<Vec> gram;
    for (const auto& x : f.gram) gram.push_back(A.mul(scale, embed_b(S, x)));
    Vec eps = A.neg(embed_b(S, f.eps));
    if (eps != d.eps && eps != meps) fail(ErrorCode::FormMismatch, "epsilon of the B-form is not +-eps");
    if (f.is_free()) return make_form(d.A, eps, f.n, gram);
    std::vector<Vec> proj;
    for (const auto& x : f.proj) proj.push_back(embed_b(S, x));
    return make_projective_form(d.A, eps, f.n, proj, gram);
}

NodeSpace octagon_node(const OctagonData& d, int k) {
    k = ((k % 8) + 8) % 8;
    const bool plus = k == 0 || k == 1 || k == 3 || k == 6;
    const std::string e = plus ? "eps" : "-eps";
    const Vec eA = plus ? d.eps : d.A->neg(d.eps);
    switch (k % 4) {
        case 0:
        case 2: return {d.A, eA, "W_" + e + "(A,sigma)"};
        case 1: return {d.B1.alg, extract_b(d.B1, eA), "W_" + e + "(B,tau1)"};
        default: return {d.B2.alg, extract_b(d.B2, eA), "W_" + e + "(B,tau2)"};
    }
}

OctMap octagon_map(int k) {
    static const OctMap maps[4] = {OctMap::Pi1, OctMap::Rho1, OctMap::Pi2, OctMap::Rho2};
    return maps[((k % 4) + 4) % 4];
}

ChainWitness chain_witness(const OctagonData& d, int k, const HermForm& f) {
    const OctMap in = octagon_map(k - 1), out = octagon_map(k);
    HermForm mid = apply_octagon_map(d, in, f);
    ChainWitness w{apply_octagon_map(d, out, mid), {}, {}};
    const HermForm& h = w.composite;
    const Algebra& C = *h.A;
    const int n = h.n / 2;
    if (in == OctMap::Rho1 || in == OctMap::Rho2) {
        // Q (x) 1 and Q (x) mu: even and odd coordinates
        for (int j = 0; j < n; ++j) {
            w.first.L.push_back(avec_unit(C, h.n, 2 * j));
            w.second.L.push_back(avec_unit(C, h.n, 2 * j + 1));
        }
    } else {
        for (int j = 0; j < n; ++j) {
            AVec a = avec_zero(C, h.n), b = avec_zero(C, h.n);
            a[2 * j] = d.mu;
            b[2 * j] = C.neg(d.mu);
            a[2 * j + 1] = b[2 * j + 1] = C.one();
            w.first.L.push_back(a);
            w.second.L.push_back(b);
        }
    }
    w.first.complement = w.second.L;
    w.second.complement = w.first.L;
    if (!verify_lagrangian(h, w.first) || !verify_lagrangian(h, w.second))
        fail(ErrorCode::InternalInconsistency, std::string("chain witness rejected for ") + oct_map_name(out) + " o " +
                                                   oct_map_name(in) + " on " + form_str(f));
    return w;
}

OctagonReport check_octagon_exact(const OctagonData& d, int rank_cap) {
    OctagonReport rep;
    std::vector<std::pair<const Algebra*, Vec>> keys;
    for (int k = 0; k < 8; ++k) {
        NodeSpace s = octagon_node(d, k);
        TablePtr t;
        for (int j = 0; j < k && !t; ++j)
            if (keys[j].first == s.alg.get() && keys[j].second == s.eps) t = rep.tables[j];
        if (!t) t = enumerate_witt_group(s.alg, s.eps, rank_cap);
        keys.emplace_back(s.alg.get(), s.eps);
        rep.tables.push_back(t);
        NodeReport nr;
        nr.name = s.name;
        nr.size = t->size();
        rep.nodes.push_back(nr);
    }
    for (int k = 0; k < 8; ++k) {
        OctMap m = octagon_map(k);
        rep.maps.push_back(induced_hom(rep.tables[k], rep.tables[(k + 1) % 8],
                                       [&](const HermForm& f) { return apply_octagon_map(d, m, f); },
                                       oct_map_name(m)));
    }
    rep.exact = true;
    for (int k = 0; k < 8; ++k) {
        const WittHom& in = rep.maps[(k + 7) % 8];
        const WittHom& out = rep.maps[k];
        NodeReport& nr = rep.nodes[k];
        nr.image = image(in);
        nr.kernel = kernel(out);
        nr.exact = exact_at(in, out);
        if (!nr.exact) {
            rep.exact = false;
            const WittTable& t = *rep.tables[k];
            for (int x : nr.kernel)
                if (!std::binary_search(nr.image.begin(), nr.image.end(), x)) {
                    nr.counterexample = "kernel class " + t.provenance[x] + " is not in the image";
                    break;
                }
            if (nr.counterexample.empty())
                for (int x : nr.image)
                    if (!std::binary_search(nr.kernel.begin(), nr.kernel.end(), x)) {
                        nr.counterexample = "image class " + t.provenance[x] + " is not in the kernel";
                        break;
                    }
        }
    }
    return rep;
}

// ---------------------------------------------------------------- finer exactness

int finer_node(int part) {
    if (part < 1 || part > 4) fail(ErrorCode::InvalidEntry, "finer exactness part must be 1..4");
    return part - 1;
}

int reduced_rank(const HermForm& f) {
    if (f.n == 0) return 0;
    int rrk = -1;
    for (const auto& p : form_invariants(f).parts) {
        if (p.kind == "exchange") fail(ErrorCode::Unsupported, "reduced rank over an exchange part");
        int v = p.m * f.A->deg / p.r;
        if (rrk >= 0 && v != rrk) fail(ErrorCode::Unsupported, "module rank varies over the residue parts");
        rrk = v;
    }
    return std::max(rrk, 0);
}

namespace {

void check_on_node(const OctagonData& d, int k, const HermForm& f) {
    NodeSpace s = octagon_node(d, k);
    if (!same_algebra(*f.A, *s.alg) || f.eps != s.eps) fail(ErrorCode::FormMismatch, "form does not live on " + s.name);
}

void check_finer(const OctagonData& d, int part, const HermForm& f) {
    if (!d.T_connected) fail(ErrorCode::HypothesisViolated, "T is not connected");
    const int k = finer_node(part);
    check_on_node(d, k, f);
    if (!is_hyperbolic(apply_octagon_map(d, octagon_map(k), f)))
        fail(ErrorCode::InvalidEntry, std::string("form is not in the kernel of ") + oct_map_name(octagon_map(k)));
}

bool is_type(const std::vector<InvolutionType>& t, InvolutionType x) {
    return !t.empty() && std::all_of(t.begin(), t.end(), [&](InvolutionType y) { return y == x; });
}

bool brauer_B_trivial(const OctagonData& d) {
    if (is_commutative(*d.B1.alg)) return true;
    fail(ErrorCode::Unsupported, "Brauer class of a noncommutative B");
}

// disc(f) = disc(T/R)^{rrk/2} for an orthogonal form of even reduced rank.
bool disc_matches(const OctagonData& d, const HermForm& f, int rrk) {
    bool disc_sq = true;
    for (const auto& p : form_invariants(f).parts) {
        if (p.kind != "symmetric") fail(ErrorCode::Unsupported, "discriminant of a non-orthogonal part");
        disc_sq = disc_sq && p.signed_det_square;
    }
    if (f.n == 0) disc_sq = true;
    auto l2 = d.A->as_scalar(d.A->mul(d.lambda, d.lambda));
    if (!l2) fail(ErrorCode::Unsupported, "lambda^2 is not in R");
    bool target_sq = (rrk / 2) % 2 == 0 || square_class(*l2);
    return disc_sq == target_sq;
}

}  // namespace

bool finer_predicate(const OctagonData& d, int part, const HermForm& f) {
    check_finer(d, part, f);
    const int rrk = reduced_rank(f);
    switch (part) {
        case 1: return !is_type(d.sigma_type[0], InvolutionType::Symplectic) || rrk % 4 == 0;
        case 2:
            if (!is_type(d.sigma_type[1], InvolutionType::Orthogonal)) return true;
            if (all_split(*d.A)) return true;
            if (!brauer_B_trivial(d)) return true;
            fail(ErrorCode::Unsupported, "finer part ii with nonsplit A");
        case 3:
            if (!is_type(d.tau2_type[0], InvolutionType::Orthogonal)) return true;
            if (!brauer_B_trivial(d)) return true;
            return rrk % 2 == 0 && disc_matches(d, f, rrk);
        default: return true;
    }
}

std::optional<HermForm> preimage_oracle(const OctagonData& d, int part, const HermForm& f, long search_cap) {
    check_finer(d, part, f);
    const int k = finer_node(part);
    const NodeSpace src = octagon_node(d, k - 1);
    const OctMap m = octagon_map(k - 1);
    std::vector<HermForm> pool = rank_one_forms(src.alg, src.eps);
    for (const auto& e : idempotent_classes(src.alg)) pool.push_back(hyperbolic_on(src.alg, src.eps, e));
    const std::vector<int> target = module_type(f);
    std::vector<std::vector<int>> types;
    for (const auto& p : pool) {
        std::vector<int> t = module_type(apply_octagon_map(d, m, p));
        if (t.size() != target.size()) fail(ErrorCode::InternalInconsistency, "module types of different shapes");
        types.push_back(t);
    }
    long tried = 0;
    std::optional<HermForm> found;
    std::vector<int> sum(target.size(), 0);
    std::function<void(size_t, const HermForm&)> rec = [&](size_t from, const HermForm& acc) {
        if (found) return;
        if (sum == target) {
            if (++tried > search_cap) fail(ErrorCode::Inconclusive, "preimage search cap reached");
            if (is_isometric(apply_octagon_map(d, m, acc), f)) found = acc;
            return;
        }
        for (size_t i = from; i < pool.size() && !found; ++i) {
            bool fits = true;
            for (size_t c = 0; c < sum.size(); ++c) fits = fits && sum[c] + types[i][c] <= target[c];
            bool grows = false;
            for (size_t c = 0; c < sum.size(); ++c) grows = grows || types[i][c] > 0;
            if (!fits || !grows) continue;
            for (size_t c = 0; c < sum.size(); ++c) sum[c] += types[i][c];
            rec(i, direct_sum(acc, pool[i]));
            for (size_t c = 0; c < sum.size(); ++c) sum[c] -= types[i][c];
        }
    };
    rec(0, zero_form(src.alg, src.eps));
    return found;
}

bool anisotropic_image_check(const OctagonData& d, int part, const HermForm& f) {
    if (form_invariants(f).isotropic) fail(ErrorCode::InvalidEntry, "form is isotropic");
    return preimage_oracle(d, part, f).has_value();
}

// ---------------------------------------------------------------- Lewis sequences

namespace {

void finish(SequenceReport& r) {
    const size_t n = r.tables.size();
    r.all_exact = true;
    for (size_t i = 1; i + 1 < n; ++i) {
        bool e = exact_at(r.maps[i - 1], r.maps[i]);
        r.exact.push_back(e);
        r.all_exact = r.all_exact && e;
    }
    r.left_injective = kernel(r.maps.front()) == std::vector<int>{0};
    r.right_surjective = static_cast<int>(image(r.maps.back()).size()) == r.tables.back()->size();
    r.all_exact = r.all_exact && r.left_injective && r.right_surjective;
}

}  // namespace

SequenceReport lewis_five(const RingPtr& R, const RingElem& alpha) {
    AlgPtr Tth = make_quadratic_etale(R, alpha, true);
    AlgPtr Tid = make_quadratic_etale(R, alpha, false);
    AlgPtr base = base_algebra(R);
    const Vec lambda = *Tth->lambda;
    auto lambda_rho = [lambda](const AlgPtr& T, const Vec& eps) {
        return [T, eps, lambda](const HermForm& f) {
            std::vector<Vec> gram;
            for (const auto& x : f.gram) gram.push_back(T->scale(lambda, x[0]));
            if (f.is_free()) return make_form(T, eps, f.n, gram);
            std::vector<Vec> proj;
            for (const auto& x : f.proj) proj.push_back(T->scalar(x[0]));
            return make_projective_form(T, eps, f.n, proj, gram);
        };
    };
    SequenceReport r;
    r.names = {"W1(T,theta)", "W1(R)", "W1(T,id)", "W1(R)", "W-1(T,theta)"};
    TablePtr wR = enumerate_witt_group(base, base->one());
    r.tables = {enumerate_witt_group(Tth, Tth->one()), wR, enumerate_witt_group(Tid, Tid->one()), wR,
                enumerate_witt_group(Tth, Tth->neg(Tth->one()))};
    r.maps.push_back(induced_hom(r.tables[0], r.tables[1], trace_transfer, "Tr"));
    r.maps.push_back(induced_hom(r.tables[1], r.tables[2], lambda_rho(Tid, Tid->one()), "lambda rho"));
    r.maps.push_back(induced_hom(r.tables[2], r.tables[3], trace_transfer, "Tr"));
    r.maps.push_back(induced_hom(r.tables[3], r.tables[4], lambda_rho(Tth, Tth->neg(Tth->one())), "lambda rho"));
    finish(r);
    return r;
}

SequenceReport lewis_seven(const RingPtr& R, const RingElem& alpha, const RingElem& beta) {
    AlgPtr A = make_quaternion(R, alpha, beta);
    OctagonData d = make_octagon(A, A->one());
    for (int j = 0; j < d.B2.alg->dim; ++j)
        if (d.B2.alg->sigma(d.B2.alg->basis(j)) != d.B2.alg->basis(j))
            fail(ErrorCode::InternalInconsistency, "tau2 is not the identity on B");
    SequenceReport r;
    for (int k = 0; k < 7; ++k) {
        NodeSpace s = octagon_node(d, k);
        r.names.push_back(s.name);
        TablePtr t;
        for (int j = 0; j < k && !t; ++j)
            if (octagon_node(d, j).alg == s.alg && octagon_node(d, j).eps == s.eps) t = r.tables[j];
        r.tables.push_back(t ? t : enumerate_witt_group(s.alg, s.eps));
    }
    for (int k = 0; k < 6; ++k) {
        OctMap m = octagon_map(k);
        r.maps.push_back(induced_hom(r.tables[k], r.tables[k + 1],
                                     [&](const HermForm& f) { return apply_octagon_map(d, m, f); }, oct_map_name(m)));
    }
    finish(r);
    return r;
}

std::vector<int> trd_kernel(const RingPtr& R, const RingElem& alpha, const RingElem& beta) {
    AlgPtr A = make_quaternion(R, alpha, beta);
    AlgPtr base = base_algebra(R);
    TablePtr src = enumerate_witt_group(A, A->one());
    TablePtr dst = enumerate_witt_group(base, base->one());
    return kernel(induced_hom(src, dst, trace_transfer, "Trd"));
}

JacobsonResult jacobson_check(const HermForm& f, const HermForm& f2) {
    auto iso = [](const HermForm& g) { return find_isotropic(g).status != IsoStatus::Anisotropic; };
    JacobsonResult r;
    r.isotropy_equiv = iso(f) == iso(trace_transfer(f));
    r.isometry_equiv = is_isometric(f, f2) == is_isometric(trace_transfer(f), trace_transfer(f2));
    return r;
}

}  // namespace octwitt
