#include "octwitt/witt.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace octwitt {

int WittTable::find(const HermForm& f) const {
    const std::string key = form_invariants(f).key;
    for (int i = 0; i < size(); ++i)
        if (keys[i] == key && witt_equivalent(f, classes[i])) return i;
    // keys are Witt invariants, so a miss above is conclusive up to a sanity pass
    for (int i = 0; i < size(); ++i)
        if (keys[i] != key && witt_equivalent(f, classes[i]))
            fail(ErrorCode::InternalInconsistency, "Witt-equivalent forms with different invariant keys");
    return -1;
}

namespace {

std::vector<Vec> symmetric_elements(const Algebra& A, const Vec& eps) {
    const BaseRing& R = *A.R;
    std::vector<Vec> S = sym_basis(A, eps);
    std::vector<RingElem> ring = enumerate(R);
    const int t = static_cast<int>(S.size());
    double total = 1;
    for (int i = 0; i < t; ++i) total *= static_cast<double>(ring.size());
    if (total > 5e6) fail(ErrorCode::CapExceeded, "too many symmetric elements to enumerate");
    std::vector<Vec> out;
    std::vector<size_t> c(t, 0);
    for (;;) {
        Vec x = A.zero();
        for (int i = 0; i < t; ++i)
            if (c[i]) x = A.add(x, A.scale(S[i], ring[c[i]]));
        out.push_back(x);
        int i = 0;
        while (i < t && ++c[i] == ring.size()) c[i++] = 0;
        if (i == t) break;
    }
    return out;
}

int f_rank(const Algebra& A, const std::vector<Vec>& vs) {
    if (vs.empty()) return 0;
    return residue_rank(*A.R, from_columns(*A.R, A.dim, vs), 0);
}

// Idempotents of one component algebra, one per isomorphism class of e A.
std::vector<Vec> component_idempotents(const AlgPtr& A, int comp) {
    AlgPtr Ar = base_change_component(A, comp, true);
    AlgPtr Ac = base_change_component(A, comp, false);
    const Algebra& F = *Ar;
    std::vector<RingElem> field = enumerate(*F.R);
    double total = 1;
    for (int i = 0; i < F.dim; ++i) total *= static_cast<double>(field.size());
    if (total > 2e6) fail(ErrorCode::CapExceeded, "residue algebra too large to search for idempotents");
    std::vector<Vec> idem, central;
    std::vector<size_t> c(F.dim, 0);
    for (;;) {
        Vec x(F.dim);
        for (int i = 0; i < F.dim; ++i) x[i] = field[c[i]];
        if (F.mul(x, x) == x) {
            idem.push_back(x);
            bool cen = true;
            for (int t = 0; t < F.dim && cen; ++t) cen = F.mul(x, F.basis(t)) == F.mul(F.basis(t), x);
            if (cen) central.push_back(x);
        }
        int i = 0;
        while (i < F.dim && ++c[i] == field.size()) c[i++] = 0;
        if (i == F.dim) break;
    }
    // e A is determined by dim e A z over the central idempotents z
    std::map<std::vector<int>, Vec> by_type;
    for (const auto& e : idem) {
        std::vector<int> type;
        for (const auto& z : central) {
            std::vector<Vec> span;
            for (int t = 0; t < F.dim; ++t) span.push_back(F.mul(F.mul(e, F.basis(t)), z));
            type.push_back(f_rank(F, span));
        }
        by_type.emplace(type, e);
    }
    std::vector<Vec> out;
    const BaseRing& Rc = *Ac->R;
    for (const auto& [type, e] : by_type) {
        Vec y(Ac->dim);
        for (int i = 0; i < Ac->dim; ++i) y[i] = Rc.from_int(F.R->zcoord(e[i], 0));
        for (int it = 0; it < 64 && Ac->mul(y, y) != y; ++it) {
            Vec y2 = Ac->mul(y, y);
            y = Ac->sub(Ac->scale(y2, Rc.from_int(3)), Ac->scale(Ac->mul(y2, y), Rc.from_int(2)));
        }
        if (Ac->mul(y, y) != y) fail(ErrorCode::InternalInconsistency, "idempotent failed to lift");
        out.push_back(y);
    }
    return out;
}

std::string generator_label(const HermForm& g) {
    const Algebra& A = *g.A;
    if (g.is_free()) return "<" + A.str(g.g(0, 0)) + ">";
    return "<" + A.str(g.g(0, 0)) + " on " + A.str(g.e(0, 0)) + "A>";
}

}  // namespace

// Nonzero idempotents of A covering every isomorphism class of cyclic projective e A.
std::vector<Vec> idempotent_classes(const AlgPtr& A) {
    const BaseRing& R = *A->R;
    std::vector<Vec> out = {A->zero()};
    for (int c = 0; c < R.num_components(); ++c) {
        std::vector<Vec> local = component_idempotents(A, c);
        std::vector<Vec> next;
        for (const auto& e : out)
            for (const auto& y : local) {
                Vec g = e;
                for (int i = 0; i < A->dim; ++i) g[i] = R.add(g[i], R.from_component(y[i], c));
                next.push_back(g);
            }
        out = next;
    }
    out.erase(std::remove_if(out.begin(), out.end(), [&](const Vec& e) { return A->is_zero(e); }), out.end());
    return out;
}

std::vector<HermForm> rank_one_forms(const AlgPtr& A, const Vec& eps) {
    std::vector<Vec> sym = symmetric_elements(*A, eps);
    std::vector<HermForm> out;
    for (const auto& e : idempotent_classes(A)) {
        std::set<Vec> done;
        std::set<std::string> seen;
        for (const auto& s : sym) {
            Vec y = A->mul(A->mul(A->sigma(e), s), e);
            if (!done.insert(y).second) continue;
            HermForm g = make_projective_form(A, eps, 1, {e}, {y});
            if (!is_unimodular(g)) continue;
            if (seen.insert(form_invariants(g).key).second) out.push_back(g);
        }
    }
    return out;
}

HermForm hyperbolic_on(const AlgPtr& A, const Vec& eps, const Vec& e) {
    const Vec se = A->sigma(e);
    return make_projective_form(A, eps, 2, {e, A->zero(), A->zero(), se},
                                {A->zero(), se, A->mul(eps, e), A->zero()});
}

TablePtr enumerate_witt_group(const AlgPtr& A, const Vec& eps, int rank_cap) {
    if (!A->R->enumerable()) fail(ErrorCode::NotEnumerable, "Witt tables need a finite base ring");
    if (rank_cap <= 0) rank_cap = 4 * A->deg;
    auto t = std::make_shared<WittTable>();
    t->A = A;
    t->eps = eps;
    HermForm zero = zero_form(A, eps);
    t->classes.push_back(zero);
    t->keys.push_back(form_invariants(zero).key);
    t->provenance.push_back("0");
    if (!t->keys[0].empty() && !form_invariants(zero).witt_zero)
        fail(ErrorCode::InternalInconsistency, "zero form is not Witt-trivial");

    // One generator per Witt class of rank-one forms on cyclic projectives.
    std::set<std::string> seen;
    for (auto& g : rank_one_forms(A, eps))
        if (seen.insert(form_invariants(g).key).second) t->generators.push_back(g);

    std::vector<int> frontier = {0};
    for (int level = 1; !frontier.empty(); ++level) {
        std::vector<int> next;
        for (int c : frontier)
            for (const auto& g : t->generators) {
                HermForm s = direct_sum(t->classes[c], g);
                std::string key = form_invariants(s).key;
                bool known = false;
                for (int i = 0; i < t->size() && !known; ++i)
                    if (t->keys[i] == key) known = true;
                if (known) continue;
                if (level > rank_cap)
                    fail(ErrorCode::CapExceeded, "Witt class closure not reached at rank cap " + std::to_string(rank_cap));
                t->classes.push_back(s);
                t->keys.push_back(key);
                t->provenance.push_back(t->provenance[c] == "0" ? generator_label(g)
                                                                : t->provenance[c] + "+" + generator_label(g));
                next.push_back(t->size() - 1);
            }
        frontier = next;
    }

    const int k = t->size();
    t->add.assign(k, std::vector<int>(k, -1));
    t->neg.assign(k, -1);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            int s = t->find(direct_sum(t->classes[i], t->classes[j]));
            if (s < 0) fail(ErrorCode::InternalInconsistency, "sum of two classes left the table");
            t->add[i][j] = t->add[j][i] = s;
        }
        t->neg[i] = t->find(negate(t->classes[i]));
        if (t->neg[i] < 0) fail(ErrorCode::InternalInconsistency, "negative of a class left the table");
    }
    if (!check_group_axioms(*t)) fail(ErrorCode::InternalInconsistency, "addition table is not an abelian group");
    return t;
}

bool check_group_axioms(const WittTable& t) {
    const int k = t.size();
    for (int i = 0; i < k; ++i) {
        if (t.add[0][i] != i) return false;
        if (t.add[i][t.neg[i]] != 0) return false;
        for (int j = 0; j < k; ++j) {
            if (t.add[i][j] != t.add[j][i]) return false;
            for (int l = 0; l < k; ++l)
                if (t.add[t.add[i][j]][l] != t.add[i][t.add[j][l]]) return false;
        }
    }
    return true;
}

WittHom induced_hom(const TablePtr& source, const TablePtr& target, const FormFunctor& functor,
                    const std::string& name) {
    WittHom h{source, target, {}, name};
    for (const auto& f : source->classes) {
        HermForm g = functor(f);
        if (!same_space(g, target->classes[0]))
            fail(ErrorCode::FormMismatch, name + " lands outside the target table");
        int idx = target->find(g);
        if (idx < 0) fail(ErrorCode::CapExceeded, name + ": image class missing from the target table");
        h.map.push_back(idx);
    }
    if (h.map[0] != 0) fail(ErrorCode::InternalInconsistency, name + " does not preserve zero");
    for (int i = 0; i < source->size(); ++i)
        for (int j = 0; j < source->size(); ++j)
            if (h.map[source->add[i][j]] != target->add[h.map[i]][h.map[j]])
                fail(ErrorCode::InternalInconsistency, name + " is not additive");
    return h;
}

WittHom compose(const WittHom& first, const WittHom& second) {
    if (first.target != second.source) fail(ErrorCode::HomMismatch, "composition of non-adjacent maps");
    WittHom h{first.source, second.target, {}, second.name + " o " + first.name};
    for (int m : first.map) h.map.push_back(second.map[m]);
    return h;
}

std::vector<int> kernel(const WittHom& h) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(h.map.size()); ++i)
        if (h.map[i] == 0) out.push_back(i);
    return out;
}

std::vector<int> image(const WittHom& h) {
    std::set<int> s(h.map.begin(), h.map.end());
    return {s.begin(), s.end()};
}

bool exact_at(const WittHom& in, const WittHom& out) {
    if (in.target != out.source) fail(ErrorCode::HomMismatch, in.name + " and " + out.name + " do not meet");
    return image(in) == kernel(out);
}

std::vector<int> group_structure(const WittTable& t) {
    const int n = t.size();
    auto times = [&](int x, int k) {
        int r = 0;
        for (int i = 0; i < k; ++i) r = t.add[r][x];
        return r;
    };
    // p-primary parts from the sizes of the p^j-torsion subgroups
    std::vector<std::vector<int>> parts;  // per prime: cyclic orders, descending
    int m = n;
    for (int p = 2; m > 1; ++p) {
        if (m % p) continue;
        while (m % p == 0) m /= p;
        std::vector<int> log_counts = {0};
        for (int pj = p;; pj *= p) {
            int c = 0;
            for (int x = 0; x < n; ++x)
                if (times(x, pj) == 0) ++c;
            int lg = 0;
            for (int v = c; v > 1; v /= p) ++lg;
            if (lg == log_counts.back()) break;
            log_counts.push_back(lg);
        }
        // number of cyclic factors of order >= p^j
        std::vector<int> at_least;
        for (size_t j = 1; j < log_counts.size(); ++j) at_least.push_back(log_counts[j] - log_counts[j - 1]);
        std::vector<int> orders;
        for (size_t j = 0; j < at_least.size(); ++j) {
            int exactly = at_least[j] - (j + 1 < at_least.size() ? at_least[j + 1] : 0);
            int q = 1;
            for (size_t e = 0; e <= j; ++e) q *= p;
            for (int r = 0; r < exactly; ++r) orders.push_back(q);
        }
        std::sort(orders.rbegin(), orders.rend());
        parts.push_back(orders);
    }
    size_t len = 0;
    for (const auto& o : parts) len = std::max(len, o.size());
    std::vector<int> out(len, 1);
    for (const auto& o : parts)
        for (size_t i = 0; i < o.size(); ++i) out[i] *= o[i];
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace octwitt
