#include "octwitt/herm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace octwitt {

namespace {

void check_eps(const Algebra& A, const Vec& eps) {
    if (static_cast<int>(eps.size()) != A.dim || !A.is_central(eps) || A.mul(A.sigma(eps), eps) != A.one())
        fail(ErrorCode::InvalidEpsilon, "epsilon must be central with eps^sigma eps = 1");
}

RingElem rand_elem(const BaseRing& R, std::mt19937_64& rng, int real_range = 2) {
    std::vector<RingElem> parts;
    for (const auto& c : R.components()) {
        if (c.kind == Component::Real)
            parts.push_back(R.from_int(static_cast<int64_t>(rng() % (2 * real_range + 1)) - real_range));
        else
            parts.push_back(R.from_int(static_cast<int64_t>(rng() % static_cast<uint64_t>(c.mod))));
    }
    return R.mix(parts);
}

Vec rand_vec(const Algebra& A, std::mt19937_64& rng) {
    Vec v(A.dim);
    for (int i = 0; i < A.dim; ++i) v[i] = rand_elem(*A.R, rng);
    return v;
}

// Flattened R-coordinates of an A^n vector.
Vec flatten(const AVec& x) {
    Vec out;
    for (const auto& xi : x) out.insert(out.end(), xi.begin(), xi.end());
    return out;
}

// R-matrix whose columns span the right A-submodule generated by `vs`.
Mat module_span(const Algebra& A, int n, const std::vector<AVec>& vs) {
    std::vector<Vec> cols;
    for (const auto& v : vs)
        for (int t = 0; t < A.dim; ++t) cols.push_back(flatten(avec_scale(A, v, A.basis(t))));
    if (cols.empty()) return Mat(*A.R, n * A.dim, 0);
    return from_columns(*A.R, n * A.dim, cols);
}

AVec restrict_avec(const Algebra& A, const AVec& x, int comp) {
    AVec out = x;
    for (auto& xi : out)
        for (auto& c : xi) c = A.R->restrict_to(c, comp);
    return out;
}

// Chooses `count` of the candidates, independently per component, so that
// they generate a free direct summand of rank `count`; mixed across components.
std::optional<std::vector<AVec>> free_subset(const Algebra& A, int n, const std::vector<AVec>& cands, int count) {
    const BaseRing& R = *A.R;
    std::vector<AVec> out(count, avec_zero(A, n));
    for (int c = 0; c < R.num_components(); ++c) {
        std::vector<AVec> chosen;
        int rank = 0;
        for (const auto& v : cands) {
            if (static_cast<int>(chosen.size()) == count) break;
            chosen.push_back(v);
            int rr = residue_rank(R, module_span(A, n, chosen), c);
            if (rr == rank + A.dim)
                rank = rr;
            else
                chosen.pop_back();
        }
        if (static_cast<int>(chosen.size()) != count) return std::nullopt;
        for (int k = 0; k < count; ++k) out[k] = avec_add(A, out[k], restrict_avec(A, chosen[k], c));
    }
    return out;
}

// Gram as the R-linear map y -> (f(e_i, y))_i.
Mat gram_operator(const HermForm& f) {
    const Algebra& A = *f.A;
    const int d = A.dim, n = f.n;
    Mat m(*A.R, n * d, n * d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat L = A.left_matrix(f.g(i, j));
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) m.at(i * d + r, j * d + c) = L.at(r, c);
        }
    return m;
}

Vec embed_vec(const BaseRing& R, const Vec& v, int comp) {
    Vec o(v.size());
    for (size_t i = 0; i < v.size(); ++i) o[i] = R.from_component(v[i], comp);
    return o;
}

Vec to_comp_vec(const BaseRing& R, const Vec& v, int comp, bool residue) {
    Vec o(v.size());
    for (size_t i = 0; i < v.size(); ++i) o[i] = residue ? R.to_residue(v[i], comp) : R.to_component(v[i], comp);
    return o;
}

void require_free(const HermForm& f, const char* what) {
    if (!f.is_free()) fail(ErrorCode::Unsupported, std::string(what) + " needs a form on a free module");
}

HermForm component_form(const HermForm& f, int comp, bool residue) {
    HermForm g;
    g.A = base_change_component(f.A, comp, residue);
    g.n = f.n;
    g.eps = to_comp_vec(*f.A->R, f.eps, comp, residue);
    for (const auto& x : f.gram) g.gram.push_back(to_comp_vec(*f.A->R, x, comp, residue));
    for (const auto& x : f.proj) g.proj.push_back(to_comp_vec(*f.A->R, x, comp, residue));
    return g;
}

// Row c_j = sum_i x_i^sigma G_ij, so that f(x, y) = sum_j c_j y_j.
std::vector<Vec> form_row(const HermForm& f, const AVec& x) {
    const Algebra& A = *f.A;
    std::vector<Vec> c(f.n, A.zero());
    for (int i = 0; i < f.n; ++i) {
        Vec sx = A.sigma(x[i]);
        if (A.is_zero(sx)) continue;
        for (int j = 0; j < f.n; ++j) c[j] = A.add(c[j], A.mul(sx, f.g(i, j)));
    }
    return c;
}

// y with sum_j c_j y_j = 1, if any.
std::optional<AVec> solve_row(const Algebra& A, const std::vector<Vec>& c) {
    const int n = static_cast<int>(c.size()), d = A.dim;
    Mat m(*A.R, d, n * d);
    for (int j = 0; j < n; ++j) {
        Mat L = A.left_matrix(c[j]);
        for (int r = 0; r < d; ++r)
            for (int k = 0; k < d; ++k) m.at(r, j * d + k) = L.at(r, k);
    }
    auto s = solve(*A.R, m, A.one());
    if (!s) return std::nullopt;
    AVec y(n);
    for (int j = 0; j < n; ++j) y[j] = Vec(s->begin() + j * d, s->begin() + (j + 1) * d);
    return y;
}

bool row_is_zero(const Algebra& A, const std::vector<Vec>& c, const AVec& x) {
    Vec s = A.zero();
    for (size_t j = 0; j < c.size(); ++j) s = A.add(s, A.mul(c[j], x[j]));
    return A.is_zero(s);
}

// Isotropic unimodular vector at a residue field (or a real component).
std::optional<std::pair<AVec, AVec>> search_witness(const HermForm& f, uint64_t seed, bool real) {
    const Algebra& A = *f.A;
    const BaseRing& F = *A.R;
    const int n = f.n, d = A.dim, total_coords = n * d;
    int64_t base = real ? 5 : F.components()[0].p;
    auto from_digit = [&](int64_t v) { return real ? F.from_int(v - 2) : F.from_int(v); };
    auto test = [&](const AVec& x) -> std::optional<std::pair<AVec, AVec>> {
        std::vector<Vec> c = form_row(f, x);
        if (!row_is_zero(A, c, x)) return std::nullopt;
        auto y = solve_row(A, c);
        if (!y) return std::nullopt;
        return std::make_pair(x, *y);
    };
    const double space = std::pow(static_cast<double>(base), total_coords);
    const uint64_t exhaustive_cap = real ? 400000 : 2000000;
    if (space <= static_cast<double>(exhaustive_cap)) {
        std::vector<int64_t> digits(total_coords, 0);
        for (;;) {
            int i = 0;
            while (i < total_coords && ++digits[i] == base) digits[i++] = 0;
            if (i == total_coords) break;
            AVec x(n, A.zero());
            for (int k = 0; k < total_coords; ++k) x[k / d][k % d] = from_digit(digits[k]);
            if (auto r = test(x)) return r;
        }
        return std::nullopt;
    }
    std::mt19937_64 rng(seed * 7919 + 1);
    const uint64_t tries = real ? 100000 : 400000;
    for (uint64_t it = 0; it < tries; ++it) {
        AVec x(n, A.zero());
        // sparse candidates first, then dense
        const bool sparse = it % 2 == 0;
        for (int k = 0; k < total_coords; ++k) {
            if (sparse && rng() % 3 != 0) continue;
            x[k / d][k % d] = from_digit(static_cast<int64_t>(rng() % base));
        }
        if (auto r = test(x)) return r;
    }
    return std::nullopt;
}

// Newton lift of a residue witness to the complete local component ring.
std::pair<AVec, AVec> lift_witness(const HermForm& fc, const AVec& x0) {
    const Algebra& A = *fc.A;
    AVec x = x0;
    const RingElem half = A.R->half();
    for (int it = 0; it < 80; ++it) {
        auto y = solve_row(A, form_row(fc, x));
        if (!y) fail(ErrorCode::InternalInconsistency, "lifted vector lost unimodularity");
        Vec q = form_value(fc, x, x);
        if (A.is_zero(q)) return {x, *y};
        Vec t = A.neg(A.scale(q, half));
        x = avec_add(A, x, avec_scale(A, *y, t));
    }
    fail(ErrorCode::InternalInconsistency, "Newton lift did not converge");
}

AVec lift_residue_avec(const BaseRing& Rc, const AVec& x) {
    AVec out = x;
    for (auto& xi : out)
        for (auto& c : xi) {
            const BaseRing* F = c.ring;
            c = Rc.from_int(F ? F->zcoord(c, 0) : c.v[0]);
        }
    return out;
}

AVec embed_avec(const BaseRing& R, const AVec& x, int comp) {
    AVec out;
    for (const auto& xi : x) out.push_back(embed_vec(R, xi, comp));
    return out;
}

// Determinant of a matrix over a commutative algebra by Laplace expansion.
Vec comm_det(const Algebra& A, const std::vector<Vec>& m, int n) {
    if (n == 0) return A.one();
    if (n > 8) fail(ErrorCode::Unsupported, "determinant over the algebra for rank above 8");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    Vec total = A.zero();
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        Vec term = A.one();
        for (int i = 0; i < n && !A.is_zero(term); ++i) term = A.mul(term, m[static_cast<size_t>(i) * n + perm[i]]);
        total = inversions % 2 ? A.sub(total, term) : A.add(total, term);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

RingElem scalar_of(const Algebra& A, const Vec& v, const char* what) {
    auto s = A.as_scalar(v);
    if (!s) fail(ErrorCode::InternalInconsistency, std::string(what) + " is not a scalar");
    return *s;
}

Discriminant square_disc(const RingElem& rep) { return {rep, square_class(rep), "square"}; }

}  // namespace

// ---------------------------------------------------------------- construction

HermForm make_form(const AlgPtr& A, const Vec& eps, int n, std::vector<Vec> gram) {
    check_eps(*A, eps);
    if (n < 0 || static_cast<int>(gram.size()) != n * n)
        fail(ErrorCode::InvalidEntry, "Gram matrix must have n*n entries");
    for (const auto& g : gram)
        if (static_cast<int>(g.size()) != A->dim) fail(ErrorCode::InvalidEntry, "Gram entry has the wrong length");
    HermForm f{A, eps, n, std::move(gram), {}};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j)
            if (f.g(i, j) != A->mul(eps, A->sigma(f.g(j, i))))
                fail(ErrorCode::InvalidEntry,
                     "Gram entry (" + std::to_string(i) + "," + std::to_string(j) + ") breaks eps-symmetry");
    return f;
}

Vec HermForm::e(int i, int j) const {
    if (!proj.empty()) return proj[static_cast<size_t>(i) * n + j];
    return i == j ? A->one() : A->zero();
}

HermForm make_projective_form(const AlgPtr& A, const Vec& eps, int n, std::vector<Vec> proj, std::vector<Vec> gram) {
    HermForm f = make_form(A, eps, n, std::move(gram));
    if (static_cast<int>(proj.size()) != n * n) fail(ErrorCode::InvalidEntry, "projector must have n*n entries");
    f.proj = std::move(proj);
    const Algebra& Al = *A;
    auto prod = [&](auto&& x, auto&& y) {
        std::vector<Vec> o(static_cast<size_t>(n) * n, Al.zero());
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k)
                for (int j = 0; j < n; ++j)
                    o[static_cast<size_t>(i) * n + j] = Al.add(o[static_cast<size_t>(i) * n + j], Al.mul(x(i, k), y(k, j)));
        return o;
    };
    auto E = [&](int i, int j) { return f.e(i, j); };
    auto Es = [&](int i, int j) { return Al.sigma(f.e(j, i)); };
    auto G = [&](int i, int j) { return f.g(i, j); };
    if (prod(E, E) != f.proj) fail(ErrorCode::InvalidEntry, "projector is not idempotent");
    std::vector<Vec> ge = prod(G, E);
    auto GE = [&](int i, int j) { return ge[static_cast<size_t>(i) * n + j]; };
    if (prod(Es, GE) != f.gram) fail(ErrorCode::InvalidEntry, "Gram matrix is not supported on the projective module");
    bool ident = true;
    for (int i = 0; i < n && ident; ++i)
        for (int j = 0; j < n && ident; ++j)
            if (f.proj[static_cast<size_t>(i) * n + j] != (i == j ? Al.one() : Al.zero())) ident = false;
    if (ident) f.proj.clear();
    return f;
}

HermForm zero_form(const AlgPtr& A, const Vec& eps) { return make_form(A, eps, 0, {}); }

HermForm make_diagonal(const AlgPtr& A, const Vec& eps, const std::vector<Vec>& entries) {
    const int n = static_cast<int>(entries.size());
    std::vector<Vec> g(static_cast<size_t>(n) * n, A->zero());
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(entries[i].size()) != A->dim || !A->is_unit(entries[i]))
            fail(ErrorCode::InvalidEntry, "diagonal entry " + std::to_string(i) + " is not a unit");
        g[static_cast<size_t>(i) * n + i] = entries[i];
    }
    return make_form(A, eps, n, g);
}

HermForm make_hyperbolic(const AlgPtr& A, const Vec& eps, int r) {
    const int n = 2 * r;
    std::vector<Vec> g(static_cast<size_t>(n) * n, A->zero());
    for (int k = 0; k < r; ++k) {
        g[static_cast<size_t>(2 * k) * n + 2 * k + 1] = A->one();
        g[static_cast<size_t>(2 * k + 1) * n + 2 * k] = eps;
    }
    return make_form(A, eps, n, g);
}

bool same_space(const HermForm& f, const HermForm& g) {
    if (f.A != g.A && !(f.A->R == g.A->R && f.A->dim == g.A->dim && f.A->mult == g.A->mult &&
                        f.A->invol == g.A->invol))
        return false;
    return f.eps == g.eps;
}

HermForm direct_sum(const HermForm& f, const HermForm& g) {
    if (!same_space(f, g)) fail(ErrorCode::FormMismatch, "forms live over different algebras or epsilons");
    const int n = f.n + g.n;
    std::vector<Vec> gram(static_cast<size_t>(n) * n, f.A->zero());
    for (int i = 0; i < f.n; ++i)
        for (int j = 0; j < f.n; ++j) gram[static_cast<size_t>(i) * n + j] = f.g(i, j);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) gram[static_cast<size_t>(f.n + i) * n + f.n + j] = g.g(i, j);
    HermForm s{f.A, f.eps, n, gram, {}};
    if (!f.is_free() || !g.is_free()) {
        s.proj.assign(static_cast<size_t>(n) * n, f.A->zero());
        for (int i = 0; i < f.n; ++i)
            for (int j = 0; j < f.n; ++j) s.proj[static_cast<size_t>(i) * n + j] = f.e(i, j);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) s.proj[static_cast<size_t>(f.n + i) * n + f.n + j] = g.e(i, j);
    }
    return s;
}

HermForm negate(const HermForm& f) {
    HermForm g = f;
    for (auto& x : g.gram) x = f.A->neg(x);
    return g;
}

HermForm conjugate(const HermForm& f, const Vec& u) {
    const Algebra& A = *f.A;
    if (!A.is_unit(u)) fail(ErrorCode::NotAUnit, "conjugating element is not a unit");
    Vec su = A.sigma(u);
    int delta = 0;
    if (su == u) delta = 1;
    if (su == A.neg(u)) delta = delta ? delta : -1;
    if (!delta) fail(ErrorCode::InvalidEntry, "conjugating element is neither symmetric nor skew");
    AlgPtr B = conjugate_algebra(f.A, u);
    std::vector<Vec> gram;
    for (const auto& x : f.gram) gram.push_back(A.mul(u, x));
    Vec eps = delta > 0 ? f.eps : A.neg(f.eps);
    HermForm c = make_form(B, eps, f.n, gram);
    c.proj = f.proj;
    return c;
}

HermForm e_transfer(const HermForm& f, const Vec& e) {
    require_free(f, "e_transfer");
    const Algebra& A = *f.A;
    const BaseRing& R = *A.R;
    if (A.mul(e, e) != e || A.sigma(e) != e)
        fail(ErrorCode::InvalidIdempotent, "e must be a symmetric idempotent");
    Mat ecol = from_columns(R, A.dim, {e});
    auto coeff = [&](const Vec& v) -> RingElem {
        auto s = solve(R, ecol, v);
        if (!s) fail(ErrorCode::InvalidIdempotent, "eAe is not R e");
        return (*s)[0];
    };
    for (int t = 0; t < A.dim; ++t) coeff(A.mul(A.mul(e, A.basis(t)), e));
    if (residue_ranks(R, ecol) != std::vector<int>(R.num_components(), 1))
        fail(ErrorCode::InvalidIdempotent, "e vanishes at some component");
    // Basis of A e over R.
    std::vector<Vec> all;
    for (int t = 0; t < A.dim; ++t) all.push_back(A.mul(A.basis(t), e));
    std::vector<int> target = residue_ranks(R, from_columns(R, A.dim, all));
    if (std::adjacent_find(target.begin(), target.end(), std::not_equal_to<>()) != target.end())
        fail(ErrorCode::InvalidIdempotent, "A e is not free");
    std::vector<Vec> v;
    for (const auto& cand : all) {
        v.push_back(cand);
        auto rr = residue_ranks(R, from_columns(R, A.dim, v));
        if (std::any_of(rr.begin(), rr.end(), [&](int x) { return x != static_cast<int>(v.size()); })) v.pop_back();
    }
    if (v.size() != static_cast<size_t>(target[0])) {
        // independent columns differ between components: choose per component and mix
        v.clear();
        for (int k = 0; k < target[0]; ++k) v.push_back(A.zero());
        for (int c = 0; c < R.num_components(); ++c) {
            auto idx = independent_columns(R, from_columns(R, A.dim, all), c);
            for (int k = 0; k < target[0]; ++k) {
                Vec part = all[idx[k]];
                for (auto& x : part) x = R.restrict_to(x, c);
                v[k] = A.add(v[k], part);
            }
        }
    }
    const int r = static_cast<int>(v.size()), m = f.n * r;
    AlgPtr base = base_algebra(f.A->R);
    std::vector<Vec> gram(static_cast<size_t>(m) * m);
    for (int i = 0; i < f.n; ++i)
        for (int a = 0; a < r; ++a) {
            Vec left = A.sigma(v[a]);
            for (int j = 0; j < f.n; ++j) {
                Vec lg = A.mul(left, f.g(i, j));
                for (int b = 0; b < r; ++b)
                    gram[static_cast<size_t>(i * r + a) * m + j * r + b] = Vec{coeff(A.mul(lg, v[b]))};
            }
        }
    Vec eps{coeff(A.mul(f.eps, e))};
    return make_form(base, eps, m, gram);
}

HermForm trace_transfer(const HermForm& g) {
    const Algebra& A = *g.A;
    const bool etale = A.shape == "etale";
    const bool quat = A.shape == "quaternion" && A.inv_kind == "standard";
    if (!(etale || quat) || g.eps != A.one())
        fail(ErrorCode::Unsupported, "trace transfer needs eps = 1 over an etale or standard quaternion algebra");
    const int d = A.dim, m = g.n * d;
    std::vector<Vec> gram(static_cast<size_t>(m) * m);
    for (int i = 0; i < g.n; ++i)
        for (int s = 0; s < d; ++s) {
            Vec left = A.sigma(A.basis(s));
            for (int j = 0; j < g.n; ++j) {
                Vec lg = A.mul(left, g.g(i, j));
                for (int t = 0; t < d; ++t) {
                    Vec trd = reduced_trace_norm(A, A.mul(lg, A.basis(t))).trd;
                    gram[static_cast<size_t>(i * d + s) * m + j * d + t] = Vec{scalar_of(A, trd, "reduced trace")};
                }
            }
        }
    AlgPtr base = base_algebra(g.A->R);
    if (g.is_free()) return make_form(base, base->one(), m, gram);
    // E(e_k b_t) = sum_i e_i E_ik b_t in the R-basis {e_i b_s}
    std::vector<Vec> proj(static_cast<size_t>(m) * m);
    for (int i = 0; i < g.n; ++i)
        for (int k = 0; k < g.n; ++k)
            for (int t = 0; t < d; ++t) {
                Vec x = A.mul(g.e(i, k), A.basis(t));
                for (int s = 0; s < d; ++s) proj[static_cast<size_t>(i * d + s) * m + k * d + t] = Vec{x[s]};
            }
    return make_projective_form(base, base->one(), m, proj, gram);
}

Mat adjoint_involution(const HermForm& f) {
    require_free(f, "adjoint_involution");
    const Algebra& A = *f.A;
    const BaseRing& R = *A.R;
    const int n = f.n, d = A.dim;
    auto Linv = inverse(R, gram_operator(f));
    if (!Linv) fail(ErrorCode::NotUnimodular, "form is not unimodular");
    // G^{-1} as a matrix over A: column j is Linv applied to the j-th unit vector.
    std::vector<Vec> Gi(static_cast<size_t>(n) * n);
    for (int j = 0; j < n; ++j) {
        Vec col(n * d, R.zero());
        for (int t = 0; t < d; ++t) col[j * d + t] = A.one()[t];
        Vec x = mat_vec(R, *Linv, col);
        for (int k = 0; k < n; ++k) Gi[static_cast<size_t>(k) * n + j] = Vec(x.begin() + k * d, x.begin() + (k + 1) * d);
    }
    auto matmul = [&](const std::vector<Vec>& X, const std::vector<Vec>& Y) {
        std::vector<Vec> Z(static_cast<size_t>(n) * n, A.zero());
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const Vec& x = X[static_cast<size_t>(i) * n + k];
                if (A.is_zero(x)) continue;
                for (int j = 0; j < n; ++j)
                    Z[static_cast<size_t>(i) * n + j] =
                        A.add(Z[static_cast<size_t>(i) * n + j], A.mul(x, Y[static_cast<size_t>(k) * n + j]));
            }
        return Z;
    };
    const int N = n * n * d;
    Mat theta(R, N, N);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int t = 0; t < d; ++t) {
                std::vector<Vec> star(static_cast<size_t>(n) * n, A.zero());
                star[static_cast<size_t>(j) * n + i] = A.sigma(A.basis(t));
                auto img = matmul(matmul(Gi, star), f.gram);
                Vec col;
                for (const auto& x : img) col.insert(col.end(), x.begin(), x.end());
                theta.set_column((i * n + j) * d + t, col);
            }
    Mat sq = mat_mul(R, theta, theta);
    if (sq.a != Mat::identity(R, N).a) fail(ErrorCode::InternalInconsistency, "adjoint involution is not of order 2");
    return theta;
}

bool is_unimodular(const HermForm& f) {
    if (f.n == 0) return true;
    if (f.is_free()) return is_invertible(*f.A->R, gram_operator(f));
    try {
        form_invariants(f);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::NotUnimodular) return false;
        throw;
    }
    return true;
}

// ---------------------------------------------------------------- vectors

Vec form_value(const HermForm& f, const AVec& x, const AVec& y) {
    std::vector<Vec> c = form_row(f, x);
    Vec s = f.A->zero();
    for (int j = 0; j < f.n; ++j) s = f.A->add(s, f.A->mul(c[j], y[j]));
    return s;
}

AVec avec_zero(const Algebra& A, int n) { return AVec(n, A.zero()); }

AVec avec_unit(const Algebra& A, int n, int i) {
    AVec v = avec_zero(A, n);
    v[i] = A.one();
    return v;
}

AVec avec_add(const Algebra& A, const AVec& x, const AVec& y) {
    AVec o(x.size());
    for (size_t i = 0; i < x.size(); ++i) o[i] = A.add(x[i], y[i]);
    return o;
}

AVec avec_sub(const Algebra& A, const AVec& x, const AVec& y) {
    AVec o(x.size());
    for (size_t i = 0; i < x.size(); ++i) o[i] = A.sub(x[i], y[i]);
    return o;
}

AVec avec_scale(const Algebra& A, const AVec& x, const Vec& a) {
    AVec o(x.size());
    for (size_t i = 0; i < x.size(); ++i) o[i] = A.mul(x[i], a);
    return o;
}

HermForm restrict_form(const HermForm& f, const std::vector<AVec>& basis) {
    require_free(f, "restrict_form");
    const int m = static_cast<int>(basis.size());
    std::vector<Vec> gram(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
        std::vector<Vec> c = form_row(f, basis[i]);
        for (int j = 0; j < m; ++j) {
            Vec s = f.A->zero();
            for (int k = 0; k < f.n; ++k) s = f.A->add(s, f.A->mul(c[k], basis[j][k]));
            gram[static_cast<size_t>(i) * m + j] = s;
        }
    }
    return HermForm{f.A, f.eps, m, gram, {}};
}

std::string form_str(const HermForm& f) {
    std::ostringstream os;
    os << "rank " << f.n << ", eps " << f.A->str(f.eps) << ", gram [";
    for (int i = 0; i < f.n; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < f.n; ++j) os << (j ? ", " : "") << f.A->str(f.g(i, j));
    }
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------- isotropy and splitting

IsotropyResult find_isotropic(const HermForm& f, uint64_t seed) {
    require_free(f, "find_isotropic");
    IsotropyResult res;
    if (f.n == 0) return res;
    FormInvariants inv = form_invariants(f);
    if (!inv.isotropic) return res;
    if (!inv.free_plane) {
        res.status = IsoStatus::IsotropicNoFreeWitness;
        return res;
    }
    const BaseRing& R = *f.A->R;
    AVec x = avec_zero(*f.A, f.n), y = avec_zero(*f.A, f.n);
    for (int c = 0; c < R.num_components(); ++c) {
        const bool real = R.components()[c].kind == Component::Real;
        HermForm fc = component_form(f, c, false);
        std::pair<AVec, AVec> w;
        if (real) {
            auto found = search_witness(fc, seed + c, true);
            if (!found) fail(ErrorCode::Inconclusive, "no rational isotropic witness found at a real component");
            w = *found;
        } else {
            HermForm fr = component_form(f, c, true);
            auto found = search_witness(fr, seed + c, false);
            if (!found) fail(ErrorCode::Inconclusive, "isotropic witness search exhausted its budget");
            w = lift_witness(fc, lift_residue_avec(*fc.A->R, found->first));
        }
        x = avec_add(*f.A, x, embed_avec(R, w.first, c));
        y = avec_add(*f.A, y, embed_avec(R, w.second, c));
    }
    if (!f.A->is_zero(form_value(f, x, x)) || form_value(f, x, y) != f.A->one())
        fail(ErrorCode::InternalInconsistency, "assembled witness fails verification");
    res.status = IsoStatus::Isotropic;
    res.x = x;
    res.y = y;
    return res;
}

PlaneSplit split_hyperbolic_plane(const HermForm& f, const AVec& x, const AVec& y) {
    require_free(f, "split_hyperbolic_plane");
    const Algebra& A = *f.A;
    if (static_cast<int>(x.size()) != f.n || static_cast<int>(y.size()) != f.n)
        fail(ErrorCode::InvalidWitness, "witness vectors have the wrong length");
    if (!A.is_zero(form_value(f, x, x)) || form_value(f, x, y) != A.one())
        fail(ErrorCode::InvalidWitness, "need f(x,x) = 0 and f(x,y) = 1");
    const Vec seps = A.sigma(f.eps);
    Vec c = A.scale(A.mul(seps, form_value(f, y, y)), A.R->half());
    AVec z = avec_sub(A, y, avec_scale(A, x, c));
    auto project = [&](const AVec& v) {
        AVec out = avec_sub(A, v, avec_scale(A, x, A.mul(seps, form_value(f, z, v))));
        return avec_sub(A, out, avec_scale(A, z, form_value(f, x, v)));
    };
    std::vector<AVec> images;
    for (int i = 0; i < f.n; ++i) images.push_back(project(avec_unit(A, f.n, i)));
    auto comp = free_subset(A, f.n, images, f.n - 2);
    if (!comp) fail(ErrorCode::InvalidWitness, "orthogonal complement is not free");
    PlaneSplit out;
    out.rest = restrict_form(f, *comp);
    out.basis = {x, z};
    out.basis.insert(out.basis.end(), comp->begin(), comp->end());
    return out;
}

WittDecomposition witt_decompose(const HermForm& f, uint64_t seed) {
    require_free(f, "witt_decompose");
    WittDecomposition out{f, 0};
    while (out.kernel.n >= 2) {
        FormInvariants inv = form_invariants(out.kernel);
        if (!inv.free_plane) break;
        IsotropyResult iso = find_isotropic(out.kernel, seed + out.hyperbolic_rank);
        if (iso.status != IsoStatus::Isotropic) break;
        out.kernel = split_hyperbolic_plane(out.kernel, iso.x, iso.y).rest;
        ++out.hyperbolic_rank;
    }
    return out;
}

bool is_hyperbolic(const HermForm& f) { return form_invariants(f).witt_zero; }

bool witt_equivalent(const HermForm& f, const HermForm& g) {
    if (!same_space(f, g)) fail(ErrorCode::FormMismatch, "forms live over different algebras or epsilons");
    return is_hyperbolic(direct_sum(f, negate(g)));
}

std::vector<int> module_type(const HermForm& f) {
    std::vector<int> t;
    for (const auto& p : form_invariants(f).parts) t.push_back(p.m);
    return t;
}

bool is_isometric(const HermForm& f, const HermForm& g) {
    if (f.is_free() && g.is_free() && f.n != g.n) return false;
    return module_type(f) == module_type(g) && witt_equivalent(f, g);
}

std::vector<Vec> diagonalize(const HermForm& f, uint64_t seed) {
    require_free(f, "diagonalize");
    const Algebra& A = *f.A;
    if (f.n == 0) return {};
    auto types = involution_type(A, f.eps);
    for (auto t : types)
        if (t == InvolutionType::Symplectic && A.deg % 2 == 1)
            fail(ErrorCode::NotDiagonalizable, "alternating forms have no anisotropic vectors");
    std::mt19937_64 rng(seed * 104729 + 3);
    std::vector<AVec> basis;
    for (int i = 0; i < f.n; ++i) basis.push_back(avec_unit(A, f.n, i));
    std::vector<Vec> entries;
    while (!basis.empty()) {
        const int m = static_cast<int>(basis.size());
        std::optional<AVec> v;
        auto good = [&](const AVec& cand) { return A.is_unit(form_value(f, cand, cand)); };
        for (int i = 0; i < m && !v; ++i)
            if (good(basis[i])) v = basis[i];
        for (int i = 0; i < m && !v; ++i)
            for (int j = 0; j < m && !v; ++j)
                for (int t = 0; t < A.dim && !v && i != j; ++t) {
                    AVec cand = avec_add(A, basis[i], avec_scale(A, basis[j], A.basis(t)));
                    if (good(cand)) v = cand;
                }
        for (int it = 0; it < 20000 && !v; ++it) {
            AVec cand = avec_zero(A, f.n);
            for (int i = 0; i < m; ++i) cand = avec_add(A, cand, avec_scale(A, basis[i], rand_vec(A, rng)));
            if (good(cand)) v = cand;
        }
        if (!v) fail(ErrorCode::Inconclusive, "no vector with unit length found");
        Vec a = form_value(f, *v, *v);
        Vec ainv = A.inv(a);
        entries.push_back(a);
        std::vector<AVec> images;
        for (const auto& w : basis) images.push_back(avec_sub(A, w, avec_scale(A, *v, A.mul(ainv, form_value(f, *v, w)))));
        if (m == 1) break;
        auto next = free_subset(A, f.n, images, m - 1);
        if (!next) fail(ErrorCode::InternalInconsistency, "orthogonal complement is not free");
        basis = *next;
    }
    return entries;
}

// ---------------------------------------------------------------- discriminants

Discriminant diagonal_discriminant(const AlgPtr& Ap, const Vec& eps, const std::vector<Vec>& entries) {
    const Algebra& A = *Ap;
    const BaseRing& R = *A.R;
    const int n = static_cast<int>(entries.size());
    if (A.dim == 1) {
        if (n % 2) fail(ErrorCode::InvalidRank, "discriminant needs even rank");
        RingElem rep = (n / 2) % 2 ? R.neg(R.one()) : R.one();
        for (const auto& a : entries) rep = R.mul(rep, a[0]);
        return square_disc(rep);
    }
    if (A.deg % 2 == 0) {
        std::vector<Vec> S = sym_basis(A, A.neg(eps));
        std::optional<Vec> u;
        for (const auto& s : S)
            if (A.is_unit(s)) {
                u = s;
                break;
            }
        std::mt19937_64 rng(5);
        for (int it = 0; it < 5000 && !u; ++it) {
            Vec x = A.zero();
            for (const auto& s : S) x = A.add(x, A.scale(s, rand_elem(R, rng)));
            if (A.is_unit(x)) u = x;
        }
        if (!u) fail(ErrorCode::Inconclusive, "no unit in Sym_{-eps} found");
        auto nrd = [&](const Vec& x) { return scalar_of(A, reduced_trace_norm(A, x).nrd, "reduced norm"); };
        const int e = n * A.deg / 2;
        RingElem rep = e % 2 ? R.neg(R.one()) : R.one();
        rep = R.mul(rep, R.pow(nrd(*u), static_cast<uint64_t>(n)));
        for (const auto& a : entries) rep = R.mul(rep, nrd(a));
        return square_disc(rep);
    }
    fail(ErrorCode::Unsupported, "discriminant formula needs degree 1 or even degree");
}

Discriminant discriminant(const HermForm& f) {
    require_free(f, "discriminant");
    const Algebra& A = *f.A;
    const BaseRing& R = *A.R;
    if (f.n == 0) return {R.one(), true, "square"};
    if (!is_unimodular(f)) fail(ErrorCode::NotUnimodular, "form is not unimodular");
    auto types = involution_type(A, f.eps);
    for (auto t : types)
        if (t != types[0]) fail(ErrorCode::Unsupported, "mixed involution types across components");
    if (types[0] == InvolutionType::Unitary) {
        if (A.shape == "etale" && A.inv_kind == "standard") {
            int s = 0;
            if (f.eps == A.one()) s = 1;
            if (f.eps == A.neg(A.one())) s = -1;
            if (!s) fail(ErrorCode::Unsupported, "unitary discriminant needs eps = +-1");
            Vec d = comm_det(A, f.gram, f.n);
            // (-eps)^{-n/2} det, an element of R
            if ((f.n / 2) % 2 && s == 1) d = A.neg(d);
            RingElem rep = scalar_of(A, d, "hermitian determinant");
            return {rep, norm_class(A.params[0], rep), "norm"};
        }
        for (const auto& c : R.components())
            if (c.kind == Component::Real) fail(ErrorCode::Unsupported, "unitary discriminant over a real component");
        return {R.one(), true, "norm"};
    }
    if (types[0] != InvolutionType::Orthogonal) fail(ErrorCode::Unsupported, "discriminant of a symplectic form");
    if (A.dim == 1) {
        if (f.n % 2) fail(ErrorCode::InvalidRank, "discriminant needs even rank");
        Mat g(R, f.n, f.n);
        for (int i = 0; i < f.n; ++i)
            for (int j = 0; j < f.n; ++j) g.at(i, j) = f.g(i, j)[0];
        RingElem rep = det(R, g);
        if ((f.n / 2) % 2) rep = R.neg(rep);
        return square_disc(rep);
    }
    if (A.shape == "matrix" && (A.inv_kind == "transpose" || A.inv_kind == "adjoint") && f.eps == A.one())
        return discriminant(e_transfer(f, A.basis(0)));
    if (A.deg % 2 == 0) {
        std::vector<Vec> d;
        try {
            d = diagonalize(f);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NotDiagonalizable)
                fail(ErrorCode::Unsupported, "discriminant of a non-diagonalizable form");
            throw;
        }
        return diagonal_discriminant(f.A, f.eps, d);
    }
    fail(ErrorCode::Unsupported, "discriminant for algebra shape " + A.shape);
}

AlgPtr disc_algebra(const RingPtr& R, const RingElem& lambda_sq, const RingElem& alpha) {
    return make_quaternion(R, lambda_sq, alpha);
}

bool disc_algebras_equal(const RingElem& lambda_sq, const RingElem& alpha, const RingElem& beta) {
    const BaseRing& R = *alpha.ring;
    auto bi = R.try_inv(beta);
    if (!bi || !R.is_unit(alpha)) fail(ErrorCode::NotAUnit, "crossed product parameters must be units");
    return norm_class(lambda_sq, R.mul(alpha, *bi));
}

// ---------------------------------------------------------------- lagrangians

bool verify_lagrangian(const HermForm& f, const LagrangianWitness& w) {
    require_free(f, "verify_lagrangian");
    const Algebra& A = *f.A;
    if (f.n % 2 || static_cast<int>(w.L.size()) != f.n / 2) return false;
    for (const auto& v : w.L)
        if (static_cast<int>(v.size()) != f.n) return false;
    for (const auto& a : w.L)
        for (const auto& b : w.L)
            if (!A.is_zero(form_value(f, a, b))) return false;
    std::vector<AVec> all = w.L;
    if (!w.complement.empty()) {
        if (static_cast<int>(w.complement.size()) != f.n / 2) return false;
        all.insert(all.end(), w.complement.begin(), w.complement.end());
        return is_invertible(*A.R, module_span(A, f.n, all));
    }
    // complement from unit vectors, per component
    for (int c = 0; c < A.R->num_components(); ++c) {
        std::vector<AVec> chosen = w.L;
        int rank = residue_rank(*A.R, module_span(A, f.n, chosen), c);
        if (rank != static_cast<int>(w.L.size()) * A.dim) return false;
        for (int i = 0; i < f.n; ++i) {
            chosen.push_back(avec_unit(A, f.n, i));
            int rr = residue_rank(*A.R, module_span(A, f.n, chosen), c);
            if (rr == rank + A.dim)
                rank = rr;
            else
                chosen.pop_back();
        }
        if (rank != f.n * A.dim) return false;
    }
    return true;
}

std::vector<int> lagrangian_phi(const HermForm& f, const LagrangianWitness& L, const LagrangianWitness& M) {
    require_free(f, "lagrangian_phi");
    const Algebra& A = *f.A;
    if (!verify_lagrangian(f, L) || !verify_lagrangian(f, M))
        fail(ErrorCode::InvalidWitness, "not a lagrangian");
    std::vector<AVec> both = L.L;
    both.insert(both.end(), M.L.begin(), M.L.end());
    std::vector<int> out;
    for (int c = 0; c < A.R->num_components(); ++c) {
        int dl = residue_rank(*A.R, module_span(A, f.n, L.L), c);
        int dm = residue_rank(*A.R, module_span(A, f.n, M.L), c);
        int ds = residue_rank(*A.R, module_span(A, f.n, both), c);
        int dcap = dl + dm - ds;
        int rrk_l = dl * A.deg / A.dim, rrk_cap = dcap * A.deg / A.dim;
        out.push_back((rrk_l - rrk_cap) % 2 ? -1 : 1);
    }
    return out;
}

}  // namespace octwitt
