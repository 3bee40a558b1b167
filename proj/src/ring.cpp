#include "octwitt/ring.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace octwitt {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidModulus: return "InvalidModulus";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::NotAUnit: return "NotAUnit";
        case ErrorCode::RingMismatch: return "RingMismatch";
        case ErrorCode::IndexError: return "IndexError";
        case ErrorCode::NotIdempotent: return "NotIdempotent";
        case ErrorCode::NotEnumerable: return "NotEnumerable";
        case ErrorCode::InvalidArity: return "InvalidArity";
        case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
        case ErrorCode::NonFreeCentralizer: return "NonFreeCentralizer";
        case ErrorCode::InvalidOctagonData: return "InvalidOctagonData";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::InvalidEntry: return "InvalidEntry";
        case ErrorCode::FormMismatch: return "FormMismatch";
        case ErrorCode::InvalidIdempotent: return "InvalidIdempotent";
        case ErrorCode::NotUnimodular: return "NotUnimodular";
        case ErrorCode::Inconclusive: return "Inconclusive";
        case ErrorCode::InvalidWitness: return "InvalidWitness";
        case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
        case ErrorCode::InvalidRank: return "InvalidRank";
        case ErrorCode::CapExceeded: return "CapExceeded";
        case ErrorCode::InternalInconsistency: return "InternalInconsistency";
        case ErrorCode::HomMismatch: return "HomMismatch";
        case ErrorCode::HypothesisViolated: return "HypothesisViolated";
        case ErrorCode::NotFound: return "NotFound";
        case ErrorCode::Overflow: return "Overflow";
    }
    return "Error";
}

// ---------------------------------------------------------------- Rat

static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rat Rat::make(__int128 n, __int128 d) {
    if (d == 0) fail(ErrorCode::NotAUnit, "rational division by zero");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    if (n == 0) d = 1;
    const __int128 lim = INT64_MAX;
    if (n > lim || n < -lim || d > lim) fail(ErrorCode::Overflow, "rational coordinate exceeds 64 bits");
    return Rat{static_cast<int64_t>(n), static_cast<int64_t>(d)};
}

Rat Rat::operator+(const Rat& o) const {
    return make(static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den,
                static_cast<__int128>(den) * o.den);
}
Rat Rat::operator-(const Rat& o) const { return *this + (-o); }
Rat Rat::operator*(const Rat& o) const {
    return make(static_cast<__int128>(num) * o.num, static_cast<__int128>(den) * o.den);
}
Rat Rat::operator/(const Rat& o) const {
    return make(static_cast<__int128>(num) * o.den, static_cast<__int128>(den) * o.num);
}
std::string Rat::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

// ---------------------------------------------------------------- number theory

int64_t mod_pow(int64_t a, uint64_t e, int64_t m) {
    int64_t r = 1 % m;
    a %= m;
    if (a < 0) a += m;
    while (e) {
        if (e & 1) r = static_cast<int64_t>(static_cast<__int128>(r) * a % m);
        a = static_cast<int64_t>(static_cast<__int128>(a) * a % m);
        e >>= 1;
    }
    return r;
}

int64_t mod_inv(int64_t a, int64_t m) {
    int64_t old_r = ((a % m) + m) % m, r = m, old_s = 1, s = 0;
    while (r != 0) {
        int64_t q = old_r / r;
        int64_t t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) return 0;
    int64_t res = old_s % m;
    if (res < 0) res += m;
    return res;
}

bool is_qr_mod_p(int64_t a, int64_t p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return false;
    return mod_pow(a, static_cast<uint64_t>((p - 1) / 2), p) == 1;
}

std::vector<std::pair<int64_t, int>> factorize(int64_t m) {
    std::vector<std::pair<int64_t, int>> out;
    for (int64_t d = 2; d * d <= m; ++d) {
        if (m % d) continue;
        int e = 0;
        while (m % d == 0) {
            m /= d;
            ++e;
        }
        out.emplace_back(d, e);
    }
    if (m > 1) out.emplace_back(m, 1);
    return out;
}

static bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::string Component::name() const {
    if (kind == Real) return "R";
    return "Z/" + std::to_string(mod);
}

// ---------------------------------------------------------------- BaseRing

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

int64_t parse_int(const std::string& s, ErrorCode code) {
    if (s.empty()) fail(code, "missing integer");
    size_t i = 0;
    bool negative = false;
    if (s[0] == '-' || s[0] == '+') {
        negative = s[0] == '-';
        i = 1;
    }
    if (i >= s.size()) fail(code, "bad integer '" + s + "'");
    __int128 v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) fail(code, "bad integer '" + s + "'");
        v = v * 10 + (s[i] - '0');
        if (v > static_cast<__int128>(INT64_MAX)) fail(code, "integer too large '" + s + "'");
    }
    return static_cast<int64_t>(negative ? -v : v);
}

std::mutex& ring_cache_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

std::shared_ptr<const BaseRing> BaseRing::make(const std::string& descriptor) {
    std::string d = trim(descriptor);
    std::vector<std::string> parts;
    {
        std::string cur;
        for (size_t i = 0; i < d.size(); ++i) {
            char c = d[i];
            if (c == 'x' || c == '*') {
                parts.push_back(trim(cur));
                cur.clear();
            } else if (static_cast<unsigned char>(c) == 0xC3 && i + 1 < d.size() &&
                       static_cast<unsigned char>(d[i + 1]) == 0x97) {
                parts.push_back(trim(cur));
                cur.clear();
                ++i;
            } else {
                cur += c;
            }
        }
        parts.push_back(trim(cur));
    }
    if (d.empty()) fail(ErrorCode::InvalidSpec, "empty ring descriptor");
    for (const auto& p : parts)
        if (p.empty()) fail(ErrorCode::InvalidSpec, "empty factor in '" + descriptor + "'");

    auto ring = std::shared_ptr<BaseRing>(new BaseRing());
    int slot = 0;
    std::vector<std::string> canon;
    for (const auto& p : parts) {
        Factor f;
        if (p == "R") {
            f.kind = Factor::Real;
            f.text = "R";
            Component c;
            c.kind = Component::Real;
            c.slot = slot;
            c.factor = static_cast<int>(ring->factors_.size());
            slot += 2;
            f.comps.push_back(static_cast<int>(ring->comps_.size()));
            ring->comps_.push_back(c);
        } else {
            int64_t m = 0;
            if (p.rfind("Z/", 0) == 0) {
                m = parse_int(trim(p.substr(2)), ErrorCode::InvalidSpec);
                f.text = "Z/" + std::to_string(m);
            } else if (p.rfind("GF(", 0) == 0 && p.back() == ')') {
                m = parse_int(trim(p.substr(3, p.size() - 4)), ErrorCode::InvalidSpec);
                if (m == 2) fail(ErrorCode::InvalidModulus, "GF(2): 2 is not invertible");
                if (!is_prime(m)) fail(ErrorCode::InvalidSpec, "GF(" + std::to_string(m) + ") needs an odd prime");
                f.text = "GF(" + std::to_string(m) + ")";
            } else {
                fail(ErrorCode::InvalidSpec, "unknown factor '" + p + "'");
            }
            if (m < 3 || m % 2 == 0)
                fail(ErrorCode::InvalidModulus, "modulus " + std::to_string(m) + " must be odd and at least 3");
            if (m > kMaxModulus) fail(ErrorCode::InvalidModulus, "modulus exceeds 10^6");
            f.kind = Factor::ZMod;
            f.m = m;
            for (auto [pr, e] : factorize(m)) {
                Component c;
                c.kind = Component::ZMod;
                c.p = pr;
                c.k = e;
                c.mod = 1;
                for (int i = 0; i < e; ++i) c.mod *= pr;
                c.slot = slot++;
                c.factor = static_cast<int>(ring->factors_.size());
                f.comps.push_back(static_cast<int>(ring->comps_.size()));
                ring->comps_.push_back(c);
            }
        }
        if (slot > kMaxSlots) fail(ErrorCode::InvalidSpec, "too many local components");
        canon.push_back(f.text);
        ring->factors_.push_back(f);
    }
    ring->nslots_ = slot;
    std::string joined;
    for (size_t i = 0; i < canon.size(); ++i) joined += (i ? " x " : "") + canon[i];
    ring->desc_ = joined;
    return ring;
}

bool BaseRing::enumerable() const {
    for (const auto& c : comps_)
        if (c.kind == Component::Real) return false;
    return true;
}

bool BaseRing::is_field() const {
    return comps_.size() == 1 && (comps_[0].kind == Component::Real || comps_[0].k == 1);
}

uint64_t BaseRing::size() const {
    if (!enumerable()) fail(ErrorCode::NotEnumerable, desc_ + " has a RealSign component");
    uint64_t s = 1;
    for (const auto& c : comps_) s *= static_cast<uint64_t>(c.mod);
    return s;
}

RingElem BaseRing::zero() const {
    RingElem r;
    r.ring = this;
    return r;
}

RingElem BaseRing::one() const { return from_int(1); }

RingElem BaseRing::from_int(int64_t n) const {
    RingElem r;
    r.ring = this;
    for (const auto& c : comps_) {
        if (c.kind == Component::ZMod) {
            int64_t x = n % c.mod;
            if (x < 0) x += c.mod;
            r.v[c.slot] = x;
        } else {
            r.v[c.slot] = n;
            r.v[c.slot + 1] = 0;
        }
    }
    return r;
}

RingElem BaseRing::from_rational(int64_t num, int64_t den) const {
    if (den == 0) fail(ErrorCode::NotAUnit, "zero denominator");
    RingElem r;
    r.ring = this;
    for (const auto& c : comps_) {
        if (c.kind == Component::ZMod) {
            int64_t d = mod_inv(den, c.mod);
            if (d == 0) fail(ErrorCode::NotAUnit, "denominator not invertible in " + c.name());
            int64_t x = num % c.mod;
            if (x < 0) x += c.mod;
            r.v[c.slot] = x * d % c.mod;
        } else {
            Rat q = Rat::make(num, den);
            r.v[c.slot] = q.num;
            r.v[c.slot + 1] = q.den - 1;
        }
    }
    return r;
}

RingElem BaseRing::from_coords(const std::vector<int64_t>& zmod, const std::vector<Rat>& real) const {
    RingElem r;
    r.ring = this;
    size_t zi = 0, ri = 0;
    for (const auto& c : comps_) {
        if (c.kind == Component::ZMod) {
            if (zi >= zmod.size()) fail(ErrorCode::InvalidSpec, "too few coordinates");
            int64_t x = zmod[zi++] % c.mod;
            if (x < 0) x += c.mod;
            r.v[c.slot] = x;
        } else {
            if (ri >= real.size()) fail(ErrorCode::InvalidSpec, "too few real coordinates");
            set_rcoord(r, static_cast<int>(&c - comps_.data()), real[ri++]);
        }
    }
    return r;
}

Rat BaseRing::rcoord(const RingElem& a, int comp) const {
    const auto& c = comps_[comp];
    return Rat{a.v[c.slot], a.v[c.slot + 1] + 1};
}

void BaseRing::set_zcoord(RingElem& a, int comp, int64_t x) const {
    const auto& c = comps_[comp];
    x %= c.mod;
    if (x < 0) x += c.mod;
    a.v[c.slot] = x;
}

void BaseRing::set_rcoord(RingElem& a, int comp, const Rat& x) const {
    const auto& c = comps_[comp];
    a.v[c.slot] = x.num;
    a.v[c.slot + 1] = x.den - 1;
}

RingElem BaseRing::add(const RingElem& a, const RingElem& b) const {
    RingElem r;
    r.ring = this;
    for (const auto& c : comps_) {
        if (c.kind == Component::ZMod) {
            int64_t x = a.v[c.slot] + b.v[c.slot];
            if (x >= c.mod) x -= c.mod;
            r.v[c.slot] = x;
        } else {
            Rat x = Rat{a.v[c.slot], a.v[c.slot + 1] + 1} + Rat{b.v[c.slot], b.v[c.slot + 1] + 1};
            r.v[c.slot] = x.num;
            r.v[c.slot + 1] = x.den - 1;
        }
    }
    return r;
}

RingElem BaseRing::sub(const RingElem& a, const RingElem& b) const { return add(a, neg(b)); }

RingElem BaseRing::mul(const RingElem& a, const RingElem& b) const {
    RingElem r;
    r.ring = this;
    for (const auto& c : comps_) {
        if (c.kind == Component::ZMod) {
            r.v[c.slot] = a.v[c.slot] * b.v[c.slot] % c.mod;
        } else {
            Rat x = Rat{a.v[c.slot], a.v[c.slot + 1] + 1} * Rat{b.v[c.slot], b.v[c.slot + 1] + 1};
            r.v[c.slot] = x.num;
            r.v[c.slot + 1] = x.den - 1;
        }
    }
    return r;
}

RingElem BaseRing::neg(const RingElem& a) const {
    RingElem r;
    r.ring = this;
    for (const auto& c : comps_) {
        if (c.kind == Component::ZMod) {
            r.v[c.slot] = a.v[c.slot] == 0 ? 0 : c.mod - a.v[c.slot];
        } else {
            r.v[c.slot] = -a.v[c.slot];
            r.v[c.slot + 1] = a.v[c.slot + 1];
        }
    }
    return r;
}

std::optional<RingElem> BaseRing::try_inv(const RingElem& a) const {
    RingElem r;
    r.ring = this;
    for (const auto& c : comps_) {
        if (c.kind == Component::ZMod) {
            int64_t x = mod_inv(a.v[c.slot], c.mod);
            if (x == 0) return std::nullopt;
            r.v[c.slot] = x;
        } else {
            Rat q{a.v[c.slot], a.v[c.slot + 1] + 1};
            if (q.is_zero()) return std::nullopt;
            Rat x = Rat{1, 1} / q;
            r.v[c.slot] = x.num;
            r.v[c.slot + 1] = x.den - 1;
        }
    }
    return r;
}

RingElem BaseRing::inv(const RingElem& a) const {
    auto r = try_inv(a);
    if (!r) fail(ErrorCode::NotAUnit, to_string(a) + " is not a unit in " + desc_);
    return *r;
}

bool BaseRing::is_unit(const RingElem& a) const {
    for (const auto& c : comps_) {
        if (c.kind == Component::ZMod) {
            if (a.v[c.slot] % c.p == 0) return false;
        } else if (a.v[c.slot] == 0) {
            return false;
        }
    }
    return true;
}

bool BaseRing::is_zero(const RingElem& a) const {
    for (int i = 0; i < nslots_; ++i)
        if (a.v[i] != 0) return false;
    return true;
}

RingElem BaseRing::pow(RingElem a, uint64_t e) const {
    RingElem r = one();
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

RingElem BaseRing::restrict_to(const RingElem& a, int comp) const {
    RingElem r = zero();
    const auto& c = comps_[comp];
    r.v[c.slot] = a.v[c.slot];
    if (c.kind == Component::Real) r.v[c.slot + 1] = a.v[c.slot + 1];
    return r;
}

RingElem BaseRing::mix(const std::vector<RingElem>& parts) const {
    RingElem r = zero();
    for (size_t i = 0; i < comps_.size(); ++i) {
        const auto& c = comps_[i];
        r.v[c.slot] = parts[i].v[c.slot];
        if (c.kind == Component::Real) r.v[c.slot + 1] = parts[i].v[c.slot + 1];
    }
    return r;
}

RingPtr BaseRing::residue_field(int comp) const {
    if (comp < 0 || comp >= num_components()) fail(ErrorCode::IndexError, "component index out of range");
    std::lock_guard<std::mutex> lock(ring_cache_mutex());
    auto& vec = residue_cache_;
    if (vec.empty()) vec.resize(comps_.size());
    if (!vec[comp]) {
        const auto& c = comps_[comp];
        if (c.kind == Component::Real)
            vec[comp] = make("R");
        else
            vec[comp] = make("GF(" + std::to_string(c.p) + ")");
    }
    return vec[comp];
}

RingPtr BaseRing::component_ring(int comp) const {
    if (comp < 0 || comp >= num_components()) fail(ErrorCode::IndexError, "component index out of range");
    if (comps_.size() == 1) return shared_from_this();
    std::lock_guard<std::mutex> lock(ring_cache_mutex());
    auto& vec = component_cache_;
    if (vec.empty()) vec.resize(comps_.size());
    if (!vec[comp]) vec[comp] = make(comps_[comp].name());
    return vec[comp];
}

RingElem BaseRing::to_component(const RingElem& a, int comp) const {
    auto target = component_ring(comp);
    RingElem r = target->zero();
    const auto& c = comps_[comp];
    r.v[0] = a.v[c.slot];
    if (c.kind == Component::Real) r.v[1] = a.v[c.slot + 1];
    return r;
}

RingElem BaseRing::to_residue(const RingElem& a, int comp) const {
    auto target = residue_field(comp);
    RingElem r = target->zero();
    const auto& c = comps_[comp];
    if (c.kind == Component::Real) {
        r.v[0] = a.v[c.slot];
        r.v[1] = a.v[c.slot + 1];
    } else {
        r.v[0] = a.v[c.slot] % c.p;
    }
    return r;
}

RingElem BaseRing::from_component(const RingElem& x, int comp) const {
    RingElem r = zero();
    const auto& c = comps_[comp];
    r.v[c.slot] = x.v[0];
    if (c.kind == Component::Real) r.v[c.slot + 1] = x.v[1];
    return r;
}

std::string BaseRing::to_string(const RingElem& a) const {
    if (comps_.size() == 1) {
        const auto& c = comps_[0];
        if (c.kind == Component::Real) return rcoord(a, 0).str();
        return std::to_string(a.v[c.slot]);
    }
    std::string s = "(";
    for (size_t i = 0; i < comps_.size(); ++i) {
        if (i) s += ",";
        const auto& c = comps_[i];
        s += c.kind == Component::Real ? rcoord(a, static_cast<int>(i)).str() : std::to_string(a.v[c.slot]);
    }
    return s + ")";
}

RingElem BaseRing::parse(const std::string& text) const {
    std::string t = trim(text);
    if (t.empty()) fail(ErrorCode::InvalidSpec, "empty element");
    if (t.front() == '(' || t.front() == '[') {
        // explicit component coordinates
        std::string inner = t.substr(1, t.size() - 2);
        std::vector<std::string> items;
        std::stringstream ss(inner);
        std::string item;
        while (std::getline(ss, item, ',')) items.push_back(trim(item));
        if (items.size() != comps_.size()) fail(ErrorCode::InvalidSpec, "coordinate count mismatch in '" + t + "'");
        RingElem r = zero();
        for (size_t i = 0; i < comps_.size(); ++i) {
            std::string s = items[i];
            if (!s.empty() && s.front() == '"') s = s.substr(1, s.size() - 2);
            RingElem one_c = component_ring(static_cast<int>(i))->parse(s);
            r = add(r, from_component(one_c, static_cast<int>(i)));
        }
        return r;
    }
    auto slash = t.find('/');
    if (slash == std::string::npos) return from_int(parse_int(t, ErrorCode::InvalidSpec));
    return from_rational(parse_int(trim(t.substr(0, slash)), ErrorCode::InvalidSpec),
                         parse_int(trim(t.substr(slash + 1)), ErrorCode::InvalidSpec));
}

void BaseRing::for_each(const std::function<void(const RingElem&)>& fn) const {
    if (!enumerable()) fail(ErrorCode::NotEnumerable, desc_ + " has a RealSign component");
    // Ascending integer residue per factor, lexicographic across factors.
    std::vector<int64_t> idx(factors_.size(), 0);
    while (true) {
        RingElem r = zero();
        for (size_t f = 0; f < factors_.size(); ++f)
            for (int ci : factors_[f].comps) {
                const auto& c = comps_[ci];
                r.v[c.slot] = idx[f] % c.mod;
            }
        fn(r);
        int f = static_cast<int>(factors_.size()) - 1;
        while (f >= 0) {
            if (++idx[f] < factors_[f].m) break;
            idx[f] = 0;
            --f;
        }
        if (f < 0) break;
    }
}

// ---------------------------------------------------------------- free functions

RingPtr make_ring(const std::string& descriptor) { return BaseRing::make(descriptor); }

static const BaseRing& ring_of(const RingElem& a) {
    if (!a.ring) fail(ErrorCode::RingMismatch, "element without a ring");
    return *a.ring;
}

ArithResult arith(const RingElem& a, const RingElem& b, ArithOp op) {
    const BaseRing& R = ring_of(a);
    bool binary = op == ArithOp::Add || op == ArithOp::Sub || op == ArithOp::Mul;
    if (binary) {
        const BaseRing& S = ring_of(b);
        if (&R != &S && R.descriptor() != S.descriptor())
            fail(ErrorCode::RingMismatch, R.descriptor() + " vs " + S.descriptor());
    }
    ArithResult out;
    switch (op) {
        case ArithOp::Add: out.value = R.add(a, b); break;
        case ArithOp::Sub: out.value = R.sub(a, b); break;
        case ArithOp::Mul: out.value = R.mul(a, b); break;
        case ArithOp::Neg: out.value = R.neg(a); break;
        case ArithOp::Inv: out.value = R.inv(a); break;
        case ArithOp::IsUnit: out.flag = R.is_unit(a); break;
    }
    return out;
}

bool square_class(const RingElem& u) {
    const BaseRing& R = ring_of(u);
    if (!R.is_unit(u)) fail(ErrorCode::NotAUnit, R.to_string(u) + " is not a unit");
    for (int i = 0; i < R.num_components(); ++i) {
        const auto& c = R.components()[i];
        if (c.kind == Component::Real) {
            if (R.rcoord(u, i).sign() < 0) return false;
        } else if (!is_qr_mod_p(R.zcoord(u, i), c.p)) {
            return false;
        }
    }
    return true;
}

bool norm_class(const RingElem& lambda_sq, const RingElem& alpha) {
    const BaseRing& R = ring_of(alpha);
    if (!R.is_unit(alpha)) fail(ErrorCode::NotAUnit, R.to_string(alpha) + " is not a unit");
    if (!R.is_unit(lambda_sq)) fail(ErrorCode::NotAUnit, "lambda^2 must be a unit");
    for (int i = 0; i < R.num_components(); ++i) {
        const auto& c = R.components()[i];
        if (c.kind == Component::Real) {
            if (R.rcoord(lambda_sq, i).sign() < 0 && R.rcoord(alpha, i).sign() < 0) return false;
            continue;
        }
        // Enumerate the residue algebra F_p[l | l^2 = a] and collect unit norms.
        int64_t p = c.p;
        int64_t a = R.zcoord(lambda_sq, i) % p;
        int64_t target = R.zcoord(alpha, i) % p;
        bool hit = false;
        for (int64_t x = 0; x < p && !hit; ++x)
            for (int64_t y = 0; y < p && !hit; ++y) {
                int64_t nrm = ((x * x - a * y % p * y) % p + p) % p;
                if (nrm == target) hit = true;
            }
        if (!hit) return false;
    }
    return true;
}

RingElem residue(const RingElem& a, int component) {
    const BaseRing& R = ring_of(a);
    if (component < 0 || component >= R.num_components())
        fail(ErrorCode::IndexError, "component " + std::to_string(component) + " out of range");
    return R.to_residue(a, component);
}

std::vector<RingElem> enumerate(const BaseRing& ring) {
    std::vector<RingElem> out;
    ring.for_each([&](const RingElem& x) { out.push_back(x); });
    return out;
}

// ---------------------------------------------------------------- idempotent lifting

std::vector<int64_t> mod_alg_mul(const ModAlgebraData& a, const std::vector<int64_t>& x,
                                 const std::vector<int64_t>& y) {
    int64_t m = 1;
    for (int i = 0; i < a.k; ++i) m *= a.p;
    const int d = a.dim;
    std::vector<int64_t> out(d, 0);
    for (int i = 0; i < d; ++i) {
        if (x[i] == 0) continue;
        for (int j = 0; j < d; ++j) {
            if (y[j] == 0) continue;
            int64_t xy = x[i] * y[j] % m;
            const int64_t* row = &a.structure[(static_cast<size_t>(i) * d + j) * d];
            for (int l = 0; l < d; ++l)
                if (row[l]) out[l] = (out[l] + xy * row[l]) % m;
        }
    }
    return out;
}

std::vector<int64_t> lift_idempotent(const ModAlgebraData& a, const std::vector<int64_t>& seed) {
    int64_t m = 1;
    for (int i = 0; i < a.k; ++i) m *= a.p;
    const int d = a.dim;
    if (static_cast<int>(seed.size()) != d) fail(ErrorCode::InvalidSpec, "seed has wrong dimension");
    std::vector<int64_t> e(d);
    for (int i = 0; i < d; ++i) e[i] = ((seed[i] % m) + m) % m;
    auto e2 = mod_alg_mul(a, e, e);
    for (int i = 0; i < d; ++i)
        if ((e2[i] - e[i]) % a.p != 0) fail(ErrorCode::NotIdempotent, "residue of the seed is not idempotent");
    for (int step = 0; step <= a.k + 1; ++step) {
        e2 = mod_alg_mul(a, e, e);
        if (e2 == e) return e;
        auto e3 = mod_alg_mul(a, e2, e);
        for (int i = 0; i < d; ++i) e[i] = (((3 * e2[i] - 2 * e3[i]) % m) + m) % m;
    }
    e2 = mod_alg_mul(a, e, e);
    if (e2 != e) fail(ErrorCode::InternalInconsistency, "idempotent lifting did not converge");
    return e;
}

}  // namespace octwitt
