#include "octwitt/linalg.hpp"

#include <climits>
#include <utility>

namespace octwitt {

Mat::Mat(const BaseRing& R, int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, R.zero()) {}

Mat Mat::identity(const BaseRing& R, int n) {
    Mat m(R, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = R.one();
    return m;
}

Vec Mat::column(int j) const {
    Vec v(rows);
    for (int i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
}

void Mat::set_column(int j, const Vec& v) {
    for (int i = 0; i < rows; ++i) at(i, j) = v[i];
}

Mat mat_mul(const BaseRing& R, const Mat& x, const Mat& y) {
    Mat out(R, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int l = 0; l < x.cols; ++l) {
            const RingElem& xi = x.at(i, l);
            if (R.is_zero(xi)) continue;
            for (int j = 0; j < y.cols; ++j) out.at(i, j) = R.add(out.at(i, j), R.mul(xi, y.at(l, j)));
        }
    return out;
}

Vec mat_vec(const BaseRing& R, const Mat& x, const Vec& v) {
    Vec out(x.rows, R.zero());
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j)
            if (!R.is_zero(v[j])) out[i] = R.add(out[i], R.mul(x.at(i, j), v[j]));
    return out;
}

Mat from_columns(const BaseRing& R, int rows, const std::vector<Vec>& cols) {
    Mat m(R, rows, static_cast<int>(cols.size()));
    for (size_t j = 0; j < cols.size(); ++j) m.set_column(static_cast<int>(j), cols[j]);
    return m;
}

namespace {

// Arithmetic of one local component: Z/p^k or the rationals.
struct ZOps {
    using T = int64_t;
    int64_t p, m;
    int k;
    T zero() const { return 0; }
    T one() const { return 1 % m; }
    T add(T a, T b) const { return (a + b) % m; }
    T sub(T a, T b) const { return ((a - b) % m + m) % m; }
    T mul(T a, T b) const { return static_cast<T>(static_cast<__int128>(a) * b % m); }
    T neg(T a) const { return a == 0 ? 0 : m - a; }
    bool is_zero(T a) const { return a == 0; }
    int val(T a) const {
        if (a == 0) return INT_MAX;
        int v = 0;
        while (a % p == 0) {
            a /= p;
            ++v;
        }
        return v;
    }
    T pv(int v) const {
        T r = 1;
        for (int i = 0; i < v; ++i) r *= p;
        return r % m;
    }
    T div_pv(T a, int v) const {
        T d = 1;
        for (int i = 0; i < v; ++i) d *= p;
        return a / d;
    }
    T inv(T a) const { return mod_inv(a, m); }
    T torsion_gen(int v) const { return pv(k - v); }
};

struct QOps {
    using T = Rat;
    T zero() const { return Rat{0, 1}; }
    T one() const { return Rat{1, 1}; }
    T add(T a, T b) const { return a + b; }
    T sub(T a, T b) const { return a - b; }
    T mul(T a, T b) const { return a * b; }
    T neg(T a) const { return -a; }
    bool is_zero(T a) const { return a.is_zero(); }
    int val(T a) const { return a.is_zero() ? INT_MAX : 0; }
    T pv(int) const { return one(); }
    T div_pv(T a, int) const { return a; }
    T inv(T a) const { return Rat{1, 1} / a; }
    T torsion_gen(int) const { return one(); }
};

template <class Ops>
struct LocalSNF {
    using T = typename Ops::T;
    Ops ops;
    int r, c;
    std::vector<T> M, P, Q;  // P*M0*Q = M (diagonal)
    std::vector<int> piv;      // valuations of the diagonal entries
    T det_unit;                // product of the unit parts and signs
    int swaps = 0;

    T& m(int i, int j) { return M[static_cast<size_t>(i) * c + j]; }
    T& pm(int i, int j) { return P[static_cast<size_t>(i) * r + j]; }
    T& qm(int i, int j) { return Q[static_cast<size_t>(i) * c + j]; }

    LocalSNF(Ops o, int rows, int cols, std::vector<T> data) : ops(o), r(rows), c(cols), M(std::move(data)) {
        P.assign(static_cast<size_t>(r) * r, ops.zero());
        Q.assign(static_cast<size_t>(c) * c, ops.zero());
        for (int i = 0; i < r; ++i) pm(i, i) = ops.one();
        for (int i = 0; i < c; ++i) qm(i, i) = ops.one();
        det_unit = ops.one();
        run();
    }

    void run() {
        const int n = std::min(r, c);
        for (int t = 0; t < n; ++t) {
            int bi = -1, bj = -1, bv = INT_MAX;
            for (int i = t; i < r && bv > 0; ++i)
                for (int j = t; j < c; ++j) {
                    int v = ops.val(m(i, j));
                    if (v < bv) {
                        bv = v;
                        bi = i;
                        bj = j;
                        if (v == 0) break;
                    }
                }
            if (bi < 0) break;
            if (bi != t) {
                for (int j = 0; j < c; ++j) std::swap(m(t, j), m(bi, j));
                for (int j = 0; j < r; ++j) std::swap(pm(t, j), pm(bi, j));
                ++swaps;
            }
            if (bj != t) {
                for (int i = 0; i < r; ++i) std::swap(m(i, t), m(i, bj));
                for (int i = 0; i < c; ++i) std::swap(qm(i, t), qm(i, bj));
                ++swaps;
            }
            T w = ops.div_pv(m(t, t), bv);
            det_unit = ops.mul(det_unit, w);
            T wi = ops.inv(w);
            for (int j = 0; j < c; ++j) m(t, j) = ops.mul(m(t, j), wi);
            for (int j = 0; j < r; ++j) pm(t, j) = ops.mul(pm(t, j), wi);
            for (int i = t + 1; i < r; ++i) {
                if (ops.is_zero(m(i, t))) continue;
                T q = ops.div_pv(m(i, t), bv);
                for (int j = t; j < c; ++j) m(i, j) = ops.sub(m(i, j), ops.mul(q, m(t, j)));
                for (int j = 0; j < r; ++j) pm(i, j) = ops.sub(pm(i, j), ops.mul(q, pm(t, j)));
            }
            for (int j = t + 1; j < c; ++j) {
                if (ops.is_zero(m(t, j))) continue;
                T q = ops.div_pv(m(t, j), bv);
                m(t, j) = ops.zero();
                for (int i = 0; i < c; ++i) qm(i, j) = ops.sub(qm(i, j), ops.mul(q, qm(i, t)));
            }
            piv.push_back(bv);
        }
    }

    int rank() const { return static_cast<int>(piv.size()); }

    std::optional<std::vector<T>> solve(const std::vector<T>& b) {
        std::vector<T> pb(r, ops.zero());
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) pb[i] = ops.add(pb[i], ops.mul(pm(i, j), b[j]));
        std::vector<T> y(c, ops.zero());
        for (int t = 0; t < r; ++t) {
            if (t < rank()) {
                if (ops.val(pb[t]) < piv[t]) return std::nullopt;
                y[t] = ops.div_pv(pb[t], piv[t]);
            } else if (!ops.is_zero(pb[t])) {
                return std::nullopt;
            }
        }
        std::vector<T> x(c, ops.zero());
        for (int i = 0; i < c; ++i)
            for (int j = 0; j < c; ++j) x[i] = ops.add(x[i], ops.mul(qm(i, j), y[j]));
        return x;
    }

    // Free generators first, then torsion generators.
    std::pair<std::vector<std::vector<T>>, std::vector<std::vector<T>>> kernel() {
        std::vector<std::vector<T>> fr, tor;
        for (int t = 0; t < c; ++t) {
            T scale;
            bool is_free = t >= rank();
            if (!is_free) {
                if (piv[t] == 0) continue;
                scale = ops.torsion_gen(piv[t]);
            } else {
                scale = ops.one();
            }
            std::vector<T> g(c);
            for (int i = 0; i < c; ++i) g[i] = ops.mul(qm(i, t), scale);
            (is_free ? fr : tor).push_back(std::move(g));
        }
        return {fr, tor};
    }

    T determinant() {
        if (r != c || rank() < r) return ops.zero();
        T d = det_unit;
        for (int v : piv) d = ops.mul(d, ops.pv(v));
        if (swaps % 2) d = ops.neg(d);
        return d;
    }
};

template <class F>
auto with_component(const BaseRing& R, int comp, bool residue, F&& f) {
    const auto& c = R.components()[comp];
    if (c.kind == Component::Real) return f(QOps{});
    if (residue) return f(ZOps{c.p, c.p, 1});
    return f(ZOps{c.p, c.mod, c.k});
}

std::vector<int64_t> local_data(const BaseRing& R, const Mat& m, int comp, const ZOps& ops) {
    std::vector<int64_t> out(m.a.size());
    for (size_t i = 0; i < m.a.size(); ++i) out[i] = R.zcoord(m.a[i], comp) % ops.m;
    return out;
}

std::vector<Rat> local_data(const BaseRing& R, const Mat& m, int comp, const QOps&) {
    std::vector<Rat> out(m.a.size());
    for (size_t i = 0; i < m.a.size(); ++i) out[i] = R.rcoord(m.a[i], comp);
    return out;
}

std::vector<int64_t> local_vec(const BaseRing& R, const Vec& v, int comp, const ZOps& ops) {
    std::vector<int64_t> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = R.zcoord(v[i], comp) % ops.m;
    return out;
}

std::vector<Rat> local_vec(const BaseRing& R, const Vec& v, int comp, const QOps&) {
    std::vector<Rat> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = R.rcoord(v[i], comp);
    return out;
}

void put(const BaseRing& R, RingElem& dst, int comp, int64_t x) { R.set_zcoord(dst, comp, x); }
void put(const BaseRing& R, RingElem& dst, int comp, const Rat& x) { R.set_rcoord(dst, comp, x); }

}  // namespace

int residue_rank(const BaseRing& R, const Mat& m, int comp) {
    if (m.rows == 0 || m.cols == 0) return 0;
    return with_component(R, comp, true, [&](auto ops) {
        LocalSNF<decltype(ops)> s(ops, m.rows, m.cols, local_data(R, m, comp, ops));
        return s.rank();
    });
}

std::vector<int> residue_ranks(const BaseRing& R, const Mat& m) {
    std::vector<int> out;
    for (int c = 0; c < R.num_components(); ++c) out.push_back(residue_rank(R, m, c));
    return out;
}

bool is_invertible(const BaseRing& R, const Mat& m) {
    if (m.rows != m.cols) return false;
    for (int c = 0; c < R.num_components(); ++c)
        if (residue_rank(R, m, c) != m.rows) return false;
    return true;
}

std::optional<Mat> inverse(const BaseRing& R, const Mat& m) {
    if (!is_invertible(R, m)) return std::nullopt;
    const int n = m.rows;
    Mat out(R, n, n);
    for (int comp = 0; comp < R.num_components(); ++comp) {
        with_component(R, comp, false, [&](auto ops) {
            LocalSNF<decltype(ops)> s(ops, n, n, local_data(R, m, comp, ops));
            // M^{-1} = Q P since P M Q = I
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    auto acc = ops.zero();
                    for (int l = 0; l < n; ++l) acc = ops.add(acc, ops.mul(s.qm(i, l), s.pm(l, j)));
                    put(R, out.at(i, j), comp, acc);
                }
            return 0;
        });
    }
    return out;
}

std::optional<Vec> solve(const BaseRing& R, const Mat& m, const Vec& b) {
    Vec x(m.cols, R.zero());
    if (m.cols == 0) {
        for (const auto& e : b)
            if (!R.is_zero(e)) return std::nullopt;
        return x;
    }
    for (int comp = 0; comp < R.num_components(); ++comp) {
        bool ok = with_component(R, comp, false, [&](auto ops) {
            LocalSNF<decltype(ops)> s(ops, m.rows, m.cols, local_data(R, m, comp, ops));
            auto sol = s.solve(local_vec(R, b, comp, ops));
            if (!sol) return false;
            for (int i = 0; i < m.cols; ++i) put(R, x[i], comp, (*sol)[i]);
            return true;
        });
        if (!ok) return std::nullopt;
    }
    return x;
}

Kernel kernel(const BaseRing& R, const Mat& m) {
    Kernel out;
    const int nc = R.num_components();
    std::vector<std::vector<Vec>> per(nc);
    for (int comp = 0; comp < nc; ++comp) {
        with_component(R, comp, false, [&](auto ops) {
            LocalSNF<decltype(ops)> s(ops, m.rows, m.cols, local_data(R, m, comp, ops));
            auto [fr, tor] = s.kernel();
            if (!tor.empty()) out.is_free = false;
            out.free_rank.push_back(static_cast<int>(fr.size()));
            for (auto& g : fr) {
                Vec v(m.cols, R.zero());
                for (int i = 0; i < m.cols; ++i) put(R, v[i], comp, g[i]);
                per[comp].push_back(v);
            }
            return 0;
        });
    }
    for (int comp = 1; comp < nc; ++comp)
        if (out.free_rank[comp] != out.free_rank[0]) out.is_free = false;
    if (!out.is_free) return out;
    const int fr = nc ? out.free_rank[0] : 0;
    for (int g = 0; g < fr; ++g) {
        Vec v(m.cols, R.zero());
        for (int comp = 0; comp < nc; ++comp)
            for (int i = 0; i < m.cols; ++i) v[i] = R.add(v[i], per[comp][g][i]);
        out.basis.push_back(v);
    }
    return out;
}

RingElem det(const BaseRing& R, const Mat& m) {
    if (m.rows != m.cols) fail(ErrorCode::InvalidArity, "determinant of a non-square matrix");
    if (m.rows == 0) return R.one();
    RingElem out = R.zero();
    for (int comp = 0; comp < R.num_components(); ++comp) {
        with_component(R, comp, false, [&](auto ops) {
            LocalSNF<decltype(ops)> s(ops, m.rows, m.cols, local_data(R, m, comp, ops));
            put(R, out, comp, s.determinant());
            return 0;
        });
    }
    return out;
}

RingElem trace(const BaseRing& R, const Mat& m) {
    RingElem t = R.zero();
    for (int i = 0; i < std::min(m.rows, m.cols); ++i) t = R.add(t, m.at(i, i));
    return t;
}

std::vector<int> independent_columns(const BaseRing& R, const Mat& m, int comp) {
    std::vector<int> chosen;
    std::vector<Vec> cols;
    for (int j = 0; j < m.cols; ++j) {
        cols.push_back(m.column(j));
        Mat t = from_columns(R, m.rows, cols);
        if (residue_rank(R, t, comp) == static_cast<int>(cols.size())) {
            chosen.push_back(j);
        } else {
            cols.pop_back();
        }
    }
    return chosen;
}

}  // namespace octwitt
