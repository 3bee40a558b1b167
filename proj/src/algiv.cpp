#include "octwitt/algiv.hpp"

#include <cmath>
#include <sstream>

namespace octwitt {

const char* involution_type_name(InvolutionType t) {
    switch (t) {
        case InvolutionType::Orthogonal: return "orthogonal";
        case InvolutionType::Symplectic: return "symplectic";
        case InvolutionType::Unitary: return "unitary";
    }
    return "?";
}

// ---------------------------------------------------------------- element arithmetic

Vec Algebra::basis(int i) const {
    Vec v = zero();
    v[i] = R->one();
    return v;
}

Vec Algebra::scalar(const RingElem& r) const { return scale(unit_vec, r); }

Vec Algebra::add(const Vec& a, const Vec& b) const {
    Vec o(dim);
    for (int i = 0; i < dim; ++i) o[i] = R->add(a[i], b[i]);
    return o;
}

Vec Algebra::sub(const Vec& a, const Vec& b) const {
    Vec o(dim);
    for (int i = 0; i < dim; ++i) o[i] = R->sub(a[i], b[i]);
    return o;
}

Vec Algebra::neg(const Vec& a) const {
    Vec o(dim);
    for (int i = 0; i < dim; ++i) o[i] = R->neg(a[i]);
    return o;
}

Vec Algebra::mul(const Vec& a, const Vec& b) const {
    Vec o = zero();
    for (int i = 0; i < dim; ++i) {
        if (R->is_zero(a[i])) continue;
        for (int j = 0; j < dim; ++j) {
            if (R->is_zero(b[j])) continue;
            RingElem ab = R->mul(a[i], b[j]);
            for (const auto& [l, c] : mult[static_cast<size_t>(i) * dim + j]) o[l] = R->add(o[l], R->mul(ab, c));
        }
    }
    return o;
}

Vec Algebra::scale(const Vec& a, const RingElem& r) const {
    Vec o(dim);
    for (int i = 0; i < dim; ++i) o[i] = R->mul(a[i], r);
    return o;
}

Vec Algebra::sigma(const Vec& a) const {
    Vec o = zero();
    for (int i = 0; i < dim; ++i) {
        if (R->is_zero(a[i])) continue;
        for (int l = 0; l < dim; ++l)
            if (!R->is_zero(invol[i][l])) o[l] = R->add(o[l], R->mul(a[i], invol[i][l]));
    }
    return o;
}

bool Algebra::is_zero(const Vec& a) const {
    for (const auto& x : a)
        if (!R->is_zero(x)) return false;
    return true;
}

Mat Algebra::left_matrix(const Vec& a) const {
    Mat m(*R, dim, dim);
    for (int j = 0; j < dim; ++j) m.set_column(j, mul(a, basis(j)));
    return m;
}

Mat Algebra::right_matrix(const Vec& a) const {
    Mat m(*R, dim, dim);
    for (int j = 0; j < dim; ++j) m.set_column(j, mul(basis(j), a));
    return m;
}

bool Algebra::is_unit(const Vec& a) const { return is_invertible(*R, left_matrix(a)); }

std::optional<Vec> Algebra::try_inv(const Vec& a) const {
    auto x = solve(*R, left_matrix(a), unit_vec);
    if (!x) return std::nullopt;
    if (mul(*x, a) != unit_vec) return std::nullopt;
    return x;
}

Vec Algebra::inv(const Vec& a) const {
    auto x = try_inv(a);
    if (!x) fail(ErrorCode::NotAUnit, str(a) + " is not a unit");
    return *x;
}

bool Algebra::is_central(const Vec& a) const {
    for (int i = 0; i < dim; ++i) {
        Vec e = basis(i);
        if (mul(a, e) != mul(e, a)) return false;
    }
    return true;
}

std::optional<RingElem> Algebra::as_scalar(const Vec& a) const {
    for (int i = 0; i < dim; ++i) {
        if (!R->is_unit(unit_vec[i])) continue;
        RingElem r = R->mul(a[i], R->inv(unit_vec[i]));
        if (scalar(r) == a) return r;
        return std::nullopt;
    }
    return std::nullopt;
}

std::string Algebra::str(const Vec& a) const {
    if (dim == 1) return R->to_string(a[0]);
    std::string s = "[";
    for (int i = 0; i < dim; ++i) s += (i ? "," : "") + R->to_string(a[i]);
    return s + "]";
}

Vec Algebra::parse(const std::string& text) const {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) fail(ErrorCode::InvalidSpec, "empty algebra element");
    if (t.front() != '[') return scalar(R->parse(t));
    if (t.back() != ']') fail(ErrorCode::InvalidSpec, "unterminated coordinate list '" + text + "'");
    std::vector<std::string> items;
    int depth = 0;
    std::string cur;
    for (size_t i = 1; i + 1 < t.size(); ++i) {
        char c = t[i];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    items.push_back(cur);
    if (static_cast<int>(items.size()) != dim)
        fail(ErrorCode::InvalidSpec, "expected " + std::to_string(dim) + " coordinates in '" + text + "'");
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = R->parse(items[i]);
    return v;
}

void Algebra::validate() const {
    for (int i = 0; i < dim; ++i) {
        Vec ei = basis(i);
        if (mul(unit_vec, ei) != ei || mul(ei, unit_vec) != ei)
            fail(ErrorCode::InternalInconsistency, "unit axiom fails");
        if (sigma(sigma(ei)) != ei) fail(ErrorCode::InternalInconsistency, "involution is not of order 2");
        for (int j = 0; j < dim; ++j) {
            Vec ej = basis(j);
            Vec eij = mul(ei, ej);
            if (sigma(eij) != mul(sigma(ej), sigma(ei)))
                fail(ErrorCode::InternalInconsistency, "involution is not an anti-automorphism");
            for (int l = 0; l < dim; ++l) {
                Vec el = basis(l);
                if (mul(eij, el) != mul(ei, mul(ej, el)))
                    fail(ErrorCode::InternalInconsistency, "multiplication is not associative");
            }
        }
    }
    for (const auto& z : center)
        if (!is_central(z)) fail(ErrorCode::InternalInconsistency, "center basis is not central");
}

// ---------------------------------------------------------------- construction helpers

namespace {

std::shared_ptr<Algebra> blank(const RingPtr& R, int dim) {
    auto A = std::make_shared<Algebra>();
    A->R = R;
    A->dim = dim;
    A->mult.assign(static_cast<size_t>(dim) * dim, {});
    A->unit_vec = Vec(dim, R->zero());
    A->invol.assign(dim, Vec(dim, R->zero()));
    A->cache = std::make_shared<MoritaCache>();
    return A;
}

void set_product(Algebra& A, int i, int j, const Vec& v) {
    auto& slot = A.mult[static_cast<size_t>(i) * A.dim + j];
    slot.clear();
    for (int l = 0; l < A.dim; ++l)
        if (!A.R->is_zero(v[l])) slot.emplace_back(l, v[l]);
}

Vec kron(const BaseRing& R, const Vec& u, const Vec& v) {
    Vec o(u.size() * v.size(), R.zero());
    for (size_t i = 0; i < u.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) o[i * v.size() + j] = R.mul(u[i], v[j]);
    return o;
}

// Prefer standard basis vectors lying in the kernel, then the kernel's own
// generators; keep those independent at every residue field.
std::vector<Vec> nice_basis(const BaseRing& R, const Mat& m, const Kernel& k) {
    const int n = m.cols;
    std::vector<Vec> cands;
    for (int i = 0; i < n; ++i) {
        Vec e(n, R.zero());
        e[i] = R.one();
        bool in = true;
        for (int r = 0; r < m.rows && in; ++r)
            if (!R.is_zero(m.at(r, i))) in = false;
        if (in) cands.push_back(e);
    }
    for (const auto& b : k.basis) cands.push_back(b);
    const int target = k.free_rank.empty() ? 0 : k.free_rank[0];
    std::vector<Vec> chosen;
    for (const auto& c : cands) {
        if (static_cast<int>(chosen.size()) == target) break;
        chosen.push_back(c);
        Mat t = from_columns(R, n, chosen);
        bool ok = true;
        for (int comp = 0; comp < R.num_components() && ok; ++comp)
            if (residue_rank(R, t, comp) != static_cast<int>(chosen.size())) ok = false;
        if (!ok) chosen.pop_back();
    }
    if (static_cast<int>(chosen.size()) != target) return k.basis;
    return chosen;
}

std::vector<Vec> compute_center(const Algebra& A) {
    const int d = A.dim;
    Mat m(*A.R, d * d, d);
    for (int j = 0; j < d; ++j) {
        Vec x = A.basis(j);
        for (int i = 0; i < d; ++i) {
            Vec ei = A.basis(i);
            Vec c = A.sub(A.mul(x, ei), A.mul(ei, x));
            for (int l = 0; l < d; ++l) m.at(i * d + l, j) = c[l];
        }
    }
    Kernel k = kernel(*A.R, m);
    if (!k.is_free) fail(ErrorCode::NonFreeCentralizer, "center is not a free module");
    return nice_basis(*A.R, m, k);
}

int degree_from(int dim, int center_rank) {
    int q = dim / std::max(center_rank, 1);
    int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(q))));
    return std::max(d, 1);
}

}  // namespace

AlgPtr base_algebra(const RingPtr& R) {
    static std::mutex mu;
    static std::map<const BaseRing*, AlgPtr> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(R.get());
    if (it != memo.end()) return it->second;
    auto A = blank(R, 1);
    set_product(*A, 0, 0, Vec{R->one()});
    A->unit_vec = Vec{R->one()};
    A->invol[0] = Vec{R->one()};
    A->center = {Vec{R->one()}};
    A->shape = "base";
    A->inv_kind = "identity";
    memo[R.get()] = A;
    return A;
}

AlgPtr make_quadratic_etale(const RingPtr& R, const RingElem& alpha, bool standard_involution) {
    if (!R->is_unit(alpha)) fail(ErrorCode::NotAUnit, "alpha must be a unit");
    auto A = blank(R, 2);
    const RingElem o = R->one(), z = R->zero();
    set_product(*A, 0, 0, {o, z});
    set_product(*A, 0, 1, {z, o});
    set_product(*A, 1, 0, {z, o});
    set_product(*A, 1, 1, {alpha, z});
    A->unit_vec = {o, z};
    A->invol[0] = {o, z};
    A->invol[1] = {z, standard_involution ? R->neg(o) : o};
    A->center = {{o, z}, {z, o}};
    A->deg = 1;
    A->lambda = Vec{z, o};
    A->shape = "etale";
    A->inv_kind = standard_involution ? "standard" : "identity";
    A->params = {alpha};
    A->validate();
    return A;
}

AlgPtr make_quaternion(const RingPtr& R, const RingElem& alpha, const RingElem& beta) {
    if (!R->is_unit(alpha) || !R->is_unit(beta)) fail(ErrorCode::NotAUnit, "quaternion parameters must be units");
    auto A = blank(R, 4);
    const RingElem o = R->one(), z = R->zero();
    const RingElem ab = R->mul(alpha, beta);
    auto v = [&](RingElem a, RingElem b, RingElem c, RingElem d) { return Vec{a, b, c, d}; };
    auto n = [&](const RingElem& x) { return R->neg(x); };
    // basis 1, l, m, ml
    for (int i = 0; i < 4; ++i) {
        Vec ei(4, z);
        ei[i] = o;
        set_product(*A, 0, i, ei);
        set_product(*A, i, 0, ei);
    }
    set_product(*A, 1, 1, v(alpha, z, z, z));
    set_product(*A, 1, 2, v(z, z, z, n(o)));
    set_product(*A, 1, 3, v(z, z, n(alpha), z));
    set_product(*A, 2, 1, v(z, z, z, o));
    set_product(*A, 2, 2, v(beta, z, z, z));
    set_product(*A, 2, 3, v(z, beta, z, z));
    set_product(*A, 3, 1, v(z, z, alpha, z));
    set_product(*A, 3, 2, v(z, n(beta), z, z));
    set_product(*A, 3, 3, v(n(ab), z, z, z));
    A->unit_vec = v(o, z, z, z);
    A->invol[0] = v(o, z, z, z);
    A->invol[1] = v(z, n(o), z, z);
    A->invol[2] = v(z, z, n(o), z);
    A->invol[3] = v(z, z, z, n(o));
    A->center = {v(o, z, z, z)};
    A->deg = 2;
    A->lambda = v(z, o, z, z);
    A->mu = v(z, z, o, z);
    A->shape = "quaternion";
    A->inv_kind = "standard";
    A->params = {alpha, beta};
    A->validate();
    return A;
}

AlgPtr make_matrix_involution(const RingPtr& R, int n, MatrixInvolution kind, const Vec& gamma) {
    if (n < 1) fail(ErrorCode::InvalidArity, "matrix size must be positive");
    if (kind == MatrixInvolution::Symplectic && n % 2) fail(ErrorCode::InvalidArity, "symplectic needs even n");
    const int d = n * n;
    auto A = blank(R, d);
    const RingElem o = R->one();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                Vec v(d, R->zero());
                v[i * n + l] = o;
                set_product(*A, i * n + j, j * n + l, v);
            }
    for (int i = 0; i < n; ++i) A->unit_vec[i * n + i] = o;
    Vec diag(n, o);
    if (kind == MatrixInvolution::DiagAdjoint) {
        if (static_cast<int>(gamma.size()) == n - 1) {
            for (int i = 1; i < n; ++i) diag[i] = gamma[i - 1];
        } else if (static_cast<int>(gamma.size()) == n) {
            diag = gamma;
        } else {
            fail(ErrorCode::InvalidArity, "diag_adjoint needs n-1 or n entries");
        }
        for (const auto& g : diag)
            if (!R->is_unit(g)) fail(ErrorCode::NotAUnit, "diag_adjoint entries must be units");
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec img(d, R->zero());
            switch (kind) {
                case MatrixInvolution::Transpose: img[j * n + i] = o; break;
                case MatrixInvolution::DiagAdjoint:
                    // D^{-1} E_ji D = d_j^{-1} d_i E_ji
                    img[j * n + i] = R->mul(R->inv(diag[j]), diag[i]);
                    break;
                case MatrixInvolution::Symplectic: {
                    // J E_ji J^{-1} with J = blockdiag([[0,1],[-1,0]])
                    auto jcol = [&](int a) -> std::pair<int, RingElem> {
                        // J e_a = sign * e_b
                        return a % 2 == 0 ? std::make_pair(a + 1, R->neg(o)) : std::make_pair(a - 1, o);
                    };
                    // J E_ji J^{-1}: E_ji J^{-1} = E_j,(row i of J^{-1}); J^{-1} = -J
                    auto [rj, sj] = jcol(j);    // J e_j = sj e_rj
                    auto [ri, si] = jcol(i);    // J e_i = si e_ri, so e_i^T J^{-1} = -(J e_i)^T... see below
                    // e_i^T J^{-1} = (J^{-T} e_i)^T = (J e_i)^T since J^{-T} = J
                    img[rj * n + ri] = R->mul(sj, si);
                    break;
                }
            }
            A->invol[i * n + j] = img;
        }
    A->center = {A->unit_vec};
    A->deg = n;
    A->shape = "matrix";
    A->mat_n = n;
    A->inv_kind = kind == MatrixInvolution::Transpose ? "transpose"
                  : kind == MatrixInvolution::Symplectic ? "symplectic"
                                                         : "adjoint";
    if (kind == MatrixInvolution::DiagAdjoint) A->params = diag;
    A->validate();
    return A;
}

AlgPtr tensor_product(const AlgPtr& a0, const AlgPtr& a1) {
    if (a0->R != a1->R && a0->R->descriptor() != a1->R->descriptor())
        fail(ErrorCode::RingMismatch, "tensor factors over different rings");
    if (a0->center.size() != 1 && a1->center.size() != 1)
        fail(ErrorCode::Unsupported, "one tensor factor must have center R");
    const RingPtr& R = a0->R;
    const int d0 = a0->dim, d1 = a1->dim, d = d0 * d1;
    auto A = blank(R, d);
    for (int i0 = 0; i0 < d0; ++i0)
        for (int i1 = 0; i1 < d1; ++i1)
            for (int j0 = 0; j0 < d0; ++j0)
                for (int j1 = 0; j1 < d1; ++j1) {
                    Vec p = kron(*R, a0->mul(a0->basis(i0), a0->basis(j0)), a1->mul(a1->basis(i1), a1->basis(j1)));
                    set_product(*A, i0 * d1 + i1, j0 * d1 + j1, p);
                }
    A->unit_vec = kron(*R, a0->unit_vec, a1->unit_vec);
    for (int i0 = 0; i0 < d0; ++i0)
        for (int i1 = 0; i1 < d1; ++i1) A->invol[i0 * d1 + i1] = kron(*R, a0->invol[i0], a1->invol[i1]);
    for (const auto& z0 : a0->center)
        for (const auto& z1 : a1->center) A->center.push_back(kron(*R, z0, z1));
    A->deg = a0->deg * a1->deg;
    if (a0->lambda) A->lambda = kron(*R, *a0->lambda, a1->unit_vec);
    if (a0->mu) A->mu = kron(*R, *a0->mu, a1->unit_vec);
    A->shape = "tensor";
    A->inv_kind = "tensor";
    A->factor0 = a0;
    A->factor1 = a1;
    A->validate();
    return A;
}

AlgPtr conjugate_algebra(const AlgPtr& A, const Vec& u) {
    auto uinv = A->try_inv(u);
    if (!uinv) fail(ErrorCode::NotAUnit, "conjugating element must be a unit");
    Vec su = A->sigma(u);
    if (su != u && su != A->neg(u)) fail(ErrorCode::InvalidEntry, "conjugating element must be (+-1)-symmetric");
    auto B = std::make_shared<Algebra>(*A);
    B->cache = std::make_shared<MoritaCache>();
    for (int i = 0; i < A->dim; ++i) B->invol[i] = A->mul(A->mul(u, A->invol[i]), *uinv);
    B->inv_kind = "conjugated";
    return B;
}

SubAlgebra make_subalgebra(const AlgPtr& A, const std::vector<Vec>& basis, const std::vector<Vec>& invol_images,
                           const std::string& inv_kind) {
    const RingPtr& R = A->R;
    const int m = static_cast<int>(basis.size());
    SubAlgebra S;
    S.embed = from_columns(*R, A->dim, basis);
    Mat et(*R, m, A->dim);
    for (int i = 0; i < A->dim; ++i)
        for (int j = 0; j < m; ++j) et.at(j, i) = S.embed.at(i, j);
    S.extract = Mat(*R, m, A->dim);
    for (int k = 0; k < m; ++k) {
        Vec ek(m, R->zero());
        ek[k] = R->one();
        auto y = solve(*R, et, ek);
        if (!y) fail(ErrorCode::NonFreeCentralizer, "sub-algebra is not a direct summand");
        for (int i = 0; i < A->dim; ++i) S.extract.at(k, i) = (*y)[i];
    }
    auto coords = [&](const Vec& a) {
        Vec c = mat_vec(*R, S.extract, a);
        if (mat_vec(*R, S.embed, c) != a) fail(ErrorCode::InternalInconsistency, "element outside the sub-algebra");
        return c;
    };
    auto B = blank(R, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) set_product(*B, i, j, coords(A->mul(basis[i], basis[j])));
    B->unit_vec = coords(A->unit_vec);
    for (int i = 0; i < m; ++i) B->invol[i] = coords(invol_images[i]);
    B->shape = "sub";
    B->inv_kind = inv_kind;
    B->center = compute_center(*B);
    B->deg = degree_from(m, static_cast<int>(B->center.size()));
    B->validate();
    S.alg = B;
    return S;
}

Vec sub_coords(const SubAlgebra& S, const Vec& a) { return mat_vec(*S.alg->R, S.extract, a); }

AlgPtr base_change_component(const AlgPtr& A, int comp, bool residue) {
    const RingPtr& R = A->R;
    if (!residue && R->num_components() == 1) return A;
    if (residue && R->is_field()) return A;
    const std::string key = std::string(residue ? "res:" : "comp:") + std::to_string(comp);
    {
        std::lock_guard<std::mutex> lock(A->cache->mu);
        auto it = A->cache->items.find(key);
        if (it != A->cache->items.end()) return std::static_pointer_cast<const Algebra>(it->second);
    }
    RingPtr T = residue ? R->residue_field(comp) : R->component_ring(comp);
    auto f = [&](const RingElem& x) { return residue ? R->to_residue(x, comp) : R->to_component(x, comp); };
    auto fv = [&](const Vec& v) {
        Vec o(v.size());
        for (size_t i = 0; i < v.size(); ++i) o[i] = f(v[i]);
        return o;
    };
    auto B = std::make_shared<Algebra>();
    B->R = T;
    B->dim = A->dim;
    B->mult.resize(A->mult.size());
    for (size_t s = 0; s < A->mult.size(); ++s)
        for (const auto& [l, c] : A->mult[s]) {
            RingElem fc = f(c);
            if (!T->is_zero(fc)) B->mult[s].emplace_back(l, fc);
        }
    B->unit_vec = fv(A->unit_vec);
    for (const auto& v : A->invol) B->invol.push_back(fv(v));
    for (const auto& v : A->center) B->center.push_back(fv(v));
    B->deg = A->deg;
    if (A->lambda) B->lambda = fv(*A->lambda);
    if (A->mu) B->mu = fv(*A->mu);
    B->shape = A->shape;
    B->inv_kind = A->inv_kind;
    B->params = fv(A->params);
    B->mat_n = A->mat_n;
    if (A->factor0) B->factor0 = base_change_component(A->factor0, comp, residue);
    if (A->factor1) B->factor1 = base_change_component(A->factor1, comp, residue);
    B->cache = std::make_shared<MoritaCache>();
    std::lock_guard<std::mutex> lock(A->cache->mu);
    A->cache->items[key] = B;
    return B;
}

AlgResult alg_arith(const Algebra& A, const Vec& a, const Vec& b, AlgOp op) {
    if (static_cast<int>(a.size()) != A.dim) fail(ErrorCode::RingMismatch, "element of another algebra");
    if ((op == AlgOp::Add || op == AlgOp::Mul) && static_cast<int>(b.size()) != A.dim)
        fail(ErrorCode::RingMismatch, "element of another algebra");
    AlgResult r;
    switch (op) {
        case AlgOp::Add: r.value = A.add(a, b); break;
        case AlgOp::Mul: r.value = A.mul(a, b); break;
        case AlgOp::Involute: r.value = A.sigma(a); break;
        case AlgOp::Inv: r.value = A.inv(a); break;
        case AlgOp::IsUnit: r.flag = A.is_unit(a); break;
    }
    return r;
}

// ---------------------------------------------------------------- involution types

namespace {

Mat sym_equations(const Algebra& A, const Vec& eps) {
    // x - eps sigma(x) = 0
    Mat m(*A.R, A.dim, A.dim);
    for (int j = 0; j < A.dim; ++j) {
        Vec e = A.basis(j);
        m.set_column(j, A.sub(e, A.mul(eps, A.sigma(e))));
    }
    return m;
}

void check_eps(const Algebra& A, const Vec& eps) {
    if (static_cast<int>(eps.size()) != A.dim || !A.is_central(eps) || A.mul(A.sigma(eps), eps) != A.one())
        fail(ErrorCode::InvalidEpsilon, "epsilon must be central with eps^sigma eps = 1");
}

}  // namespace

int sym_rank(const Algebra& A, const Vec& eps, int comp) {
    return A.dim - residue_rank(*A.R, sym_equations(A, eps), comp);
}

std::vector<Vec> sym_basis(const Algebra& A, const Vec& eps) {
    Mat m = sym_equations(A, eps);
    Kernel k = kernel(*A.R, m);
    if (!k.is_free) fail(ErrorCode::NonFreeCentralizer, "Sym module is not free");
    return nice_basis(*A.R, m, k);
}

std::vector<InvolutionType> involution_type(const Algebra& A, const Vec& eps) {
    check_eps(A, eps);
    std::vector<InvolutionType> out;
    const int z = static_cast<int>(A.center.size());
    for (int c = 0; c < A.R->num_components(); ++c) {
        bool nontrivial = false;
        for (const auto& v : A.center) {
            Vec d = A.sub(A.sigma(v), v);
            for (const auto& x : d) {
                RingElem r = A.R->to_residue(x, c);
                if (!A.R->residue_field(c)->is_zero(r)) nontrivial = true;
            }
        }
        if (nontrivial) {
            out.push_back(InvolutionType::Unitary);
            continue;
        }
        const int n = A.deg;
        const int s = sym_rank(A, eps, c);
        if (s == z * n * (n + 1) / 2)
            out.push_back(InvolutionType::Orthogonal);
        else if (s == z * n * (n - 1) / 2)
            out.push_back(InvolutionType::Symplectic);
        else
            fail(ErrorCode::InternalInconsistency, "Sym rank " + std::to_string(s) + " matches no type");
    }
    return out;
}

// ---------------------------------------------------------------- reduced trace and norm

namespace {
PiData pi_split(const Algebra& A);
}

TrdNrd reduced_trace_norm(const Algebra& A, const Vec& a) {
    const BaseRing& R = *A.R;
    if (static_cast<int>(A.center.size()) == A.dim) {
        Mat L = A.left_matrix(a);
        return {A.scalar(trace(R, L)), A.scalar(det(R, L))};
    }
    if (A.shape == "matrix") {
        const int n = A.mat_n;
        Mat m(R, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m.at(i, j) = a[i * n + j];
        return {A.scalar(trace(R, m)), A.scalar(det(R, m))};
    }
    if (A.lambda && A.mu) {
        PiData pd = pi_split(A);
        Vec b1 = mat_vec(R, pd.pi1, a), b2 = mat_vec(R, pd.pi2, a);
        Vec am = A.mul(a, *A.mu);
        Vec c1 = mat_vec(R, pd.pi1, am), c2 = mat_vec(R, pd.pi2, am);
        Vec nrd = A.sub(A.mul(b1, c2), A.mul(c1, b2));
        Vec trd = A.add(b1, c2);
        if (!A.is_central(nrd) || !A.is_central(trd))
            fail(ErrorCode::InternalInconsistency, "reduced norm left the center");
        return {trd, nrd};
    }
    fail(ErrorCode::Unsupported, "no reduced norm for algebra shape " + A.shape);
}

std::vector<Vec> centralizer(const Algebra& A, const Vec& x) {
    Mat m(*A.R, A.dim, A.dim);
    for (int j = 0; j < A.dim; ++j) {
        Vec e = A.basis(j);
        m.set_column(j, A.sub(A.mul(e, x), A.mul(x, e)));
    }
    Kernel k = kernel(*A.R, m);
    if (!k.is_free) fail(ErrorCode::NonFreeCentralizer, "centralizer is not free");
    return nice_basis(*A.R, m, k);
}

// ---------------------------------------------------------------- splitting

namespace {

int64_t sqrt_mod_p(int64_t a, int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    if (!is_qr_mod_p(a, p)) return -1;
    if (p % 4 == 3) return mod_pow(a, static_cast<uint64_t>((p + 1) / 4), p);
    // Tonelli-Shanks
    int64_t q = p - 1;
    int s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    int64_t z = 2;
    while (is_qr_mod_p(z, p)) ++z;
    int64_t m = s, c = mod_pow(z, q, p), t = mod_pow(a, q, p), r = mod_pow(a, (q + 1) / 2, p);
    while (t != 1) {
        int i = 0;
        int64_t tt = t;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
        }
        int64_t b = c;
        for (int j = 0; j < m - i - 1; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

bool rational_square(const Rat& q, Rat* root) {
    if (q.num < 0) return false;
    auto isq = [](int64_t v, int64_t* r) {
        int64_t s = static_cast<int64_t>(std::llround(std::sqrt(static_cast<long double>(v))));
        for (int64_t t = std::max<int64_t>(0, s - 2); t <= s + 2; ++t)
            if (static_cast<__int128>(t) * t == v) {
                *r = t;
                return true;
            }
        return false;
    };
    int64_t a, b;
    if (isq(q.num, &a) && isq(q.den, &b)) {
        *root = Rat::make(a, b);
        return true;
    }
    return false;
}

}  // namespace

QuaternionSplitting split_quaternion(const Algebra& A) {
    if (A.shape != "quaternion") fail(ErrorCode::Unsupported, "split_quaternion needs a quaternion algebra");
    const BaseRing& R = *A.R;
    const int nc = R.num_components();
    QuaternionSplitting out;
    out.split = true;
    std::vector<RingElem> alpha_beta = {A.params[0], A.params[1]};
    std::vector<Vec> comp_idem(nc);
    bool have_all = true;
    for (int c = 0; c < nc; ++c) {
        const auto& comp = R.components()[c];
        if (comp.kind == Component::Real) {
            Rat a = R.rcoord(A.params[0], c), b = R.rcoord(A.params[1], c);
            if (a.sign() < 0 && b.sign() < 0) {
                out.split = false;
                have_all = false;
                continue;
            }
            // zero divisor s + lambda or s + mu when a parameter is a rational square
            Rat s;
            int which = -1;
            if (rational_square(a, &s))
                which = 1;
            else if (rational_square(b, &s))
                which = 2;
            if (which < 0) {
                have_all = false;
                continue;
            }
            RingPtr Rc = R.component_ring(c);
            Vec zd(4, Rc->zero());
            zd[0] = Rc->from_rational(s.num, s.den);
            zd[which] = Rc->one();
            AlgPtr Ac = base_change_component(std::shared_ptr<const Algebra>(std::shared_ptr<const Algebra>{}, &A), c,
                                              false);
            // e = zd * b / Trd(zd b) for a basis element b with nonzero trace
            Vec e;
            for (int t = 0; t < 4 && e.empty(); ++t) {
                Vec s2 = Ac->mul(zd, Ac->basis(t));
                RingElem tr = Rc->mul(Rc->from_int(2), s2[0]);
                if (!Rc->is_zero(tr)) e = Ac->scale(s2, Rc->inv(tr));
            }
            comp_idem[c] = e;
            continue;
        }
        const int64_t p = comp.p;
        int64_t al = R.zcoord(A.params[0], c) % p, be = R.zcoord(A.params[1], c) % p;
        // x^2 - al y^2 - be = 0 has a solution with z = 1, w = 0
        int64_t zx = -1, zy = -1;
        for (int64_t y = 0; y < p && zx < 0; ++y) {
            int64_t t = (al * y % p * y + be) % p;
            int64_t r = sqrt_mod_p(t, p);
            if (r >= 0) {
                zx = r;
                zy = y;
            }
        }
        AlgPtr self(std::shared_ptr<const Algebra>{}, &A);
        AlgPtr Ar = base_change_component(self, c, true);
        const BaseRing& F = *Ar->R;
        Vec zd = {F.from_int(zx), F.from_int(zy), F.one(), F.zero()};
        Vec e0;
        for (int t = 0; t < 4 && e0.empty(); ++t) {
            Vec s2 = Ar->mul(zd, Ar->basis(t));
            RingElem tr = F.mul(F.from_int(2), s2[0]);
            if (!F.is_zero(tr)) e0 = Ar->scale(s2, F.inv(tr));
        }
        if (e0.empty() || Ar->mul(e0, e0) != e0)
            fail(ErrorCode::InternalInconsistency, "residue idempotent construction failed");
        ModAlgebraData md;
        md.p = p;
        md.k = comp.k;
        md.dim = 4;
        md.structure.assign(64, 0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (const auto& [l, cf] : A.mult[i * 4 + j]) md.structure[(i * 4 + j) * 4 + l] = R.zcoord(cf, c);
        for (int i = 0; i < 4; ++i) md.unit.push_back(R.zcoord(A.unit_vec[i], c));
        std::vector<int64_t> seed(4);
        for (int i = 0; i < 4; ++i) seed[i] = F.zcoord(e0[i], 0);
        auto lifted = lift_idempotent(md, seed);
        RingPtr Rc = R.component_ring(c);
        Vec e(4);
        for (int i = 0; i < 4; ++i) e[i] = Rc->from_int(lifted[i]);
        comp_idem[c] = e;
    }
    if (!out.split || !have_all) return out;
    Vec e(4, R.zero());
    for (int c = 0; c < nc; ++c)
        for (int i = 0; i < 4; ++i) e[i] = R.add(e[i], R.from_component(comp_idem[c][i], c));
    if (A.mul(e, e) != e) fail(ErrorCode::InternalInconsistency, "lifted idempotent is not idempotent");
    out.idempotent = e;
    // Basis v1 = e, v2 = b e of the left ideal A e, chosen per component.
    Vec v2(4, R.zero());
    for (int c = 0; c < nc; ++c) {
        bool found = false;
        for (int t = 0; t < 4 && !found; ++t) {
            Vec cand = A.mul(A.basis(t), e);
            Mat m = from_columns(R, 4, {e, cand});
            if (residue_rank(R, m, c) == 2) {
                for (int i = 0; i < 4; ++i) v2[i] = R.add(v2[i], R.restrict_to(cand[i], c));
                found = true;
            }
        }
        if (!found) fail(ErrorCode::InternalInconsistency, "left ideal A e has rank below 2");
    }
    Mat V = from_columns(R, 4, {e, v2});
    Mat phi(R, 4, 4);
    for (int t = 0; t < 4; ++t) {
        Vec b = A.basis(t);
        for (int j = 0; j < 2; ++j) {
            Vec img = A.mul(b, j == 0 ? e : v2);
            auto sol = solve(R, V, img);
            if (!sol) fail(ErrorCode::InternalInconsistency, "left ideal is not stable");
            phi.at(0 * 2 + j, t) = (*sol)[0];
            phi.at(1 * 2 + j, t) = (*sol)[1];
        }
    }
    auto phinv = inverse(R, phi);
    if (!phinv) fail(ErrorCode::InternalInconsistency, "splitting map is not bijective");
    out.phi = phi;
    out.phi_inv = *phinv;
    return out;
}

std::vector<bool> brauer_is_split(const Algebra& A) {
    const BaseRing& R = *A.R;
    const int nc = R.num_components();
    std::vector<bool> out(nc, true);
    if (A.shape == "base" || A.shape == "etale" || A.shape == "matrix") return out;
    if (A.shape == "quaternion") {
        for (int c = 0; c < nc; ++c)
            if (R.components()[c].kind == Component::Real)
                out[c] = !(R.rcoord(A.params[0], c).sign() < 0 && R.rcoord(A.params[1], c).sign() < 0);
        return out;
    }
    if (A.shape == "tensor") {
        auto s0 = brauer_is_split(*A.factor0), s1 = brauer_is_split(*A.factor1);
        for (int c = 0; c < nc; ++c) {
            bool complex_factor = false;
            for (const AlgPtr& f : {A.factor0, A.factor1})
                if (f->shape == "etale" && R.components()[c].kind == Component::Real &&
                    R.rcoord(f->params[0], c).sign() < 0)
                    complex_factor = true;
            out[c] = complex_factor || (s0[c] == s1[c]);
        }
        return out;
    }
    fail(ErrorCode::Unsupported, "Brauer class of shape " + A.shape + " is not computed");
}

namespace {

// Decomposition A = B + mu B from the multiplication alone.
PiData pi_split(const Algebra& A) {
    if (!A.lambda || !A.mu) fail(ErrorCode::InvalidOctagonData, "algebra has no designated lambda, mu");
    const BaseRing& R = *A.R;
    const Vec& l = *A.lambda;
    const Vec& m = *A.mu;
    if (A.mul(l, m) != A.neg(A.mul(m, l))) fail(ErrorCode::InvalidOctagonData, "lambda mu != -mu lambda");
    auto linv = A.try_inv(l);
    auto minv = A.try_inv(m);
    if (!linv || !minv) fail(ErrorCode::InvalidOctagonData, "lambda and mu must be units");
    Vec l2 = A.mul(l, l);
    if (!A.is_central(l2)) fail(ErrorCode::InvalidOctagonData, "lambda^2 must be central");
    PiData pd;
    pd.pi1 = Mat(R, A.dim, A.dim);
    pd.pi2 = Mat(R, A.dim, A.dim);
    const RingElem half = R.half();
    for (int j = 0; j < A.dim; ++j) {
        Vec e = A.basis(j);
        Vec p1 = A.scale(A.add(e, A.mul(A.mul(*linv, e), l)), half);
        Vec p2 = A.mul(*minv, A.sub(e, p1));
        pd.pi1.set_column(j, p1);
        pd.pi2.set_column(j, p2);
    }
    pd.B_basis = centralizer(A, l);
    for (const auto& b : pd.B_basis) pd.muB_basis.push_back(A.mul(m, b));
    std::vector<Vec> all = pd.B_basis;
    all.insert(all.end(), pd.muB_basis.begin(), pd.muB_basis.end());
    if (static_cast<int>(all.size()) != A.dim || !is_invertible(R, from_columns(R, A.dim, all)))
        fail(ErrorCode::InvalidOctagonData, "A is not B + mu B");
    return pd;
}

}  // namespace

PiData pi_projections(const Algebra& A) {
    if (!A.lambda || !A.mu) fail(ErrorCode::InvalidOctagonData, "algebra has no designated lambda, mu");
    const Vec& l = *A.lambda;
    const Vec& m = *A.mu;
    if (A.sigma(l) != A.neg(l)) fail(ErrorCode::InvalidOctagonData, "lambda^sigma != -lambda");
    if (A.sigma(m) != A.neg(m)) fail(ErrorCode::InvalidOctagonData, "mu^sigma != -mu");
    if (A.sigma(A.mul(l, l)) != A.mul(l, l))
        fail(ErrorCode::InvalidOctagonData, "lambda^2 must be a sigma-fixed central unit");
    return pi_split(A);
}

}  // namespace octwitt
