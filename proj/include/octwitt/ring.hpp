#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "octwitt/error.hpp"

namespace octwitt {

constexpr int kMaxSlots = 8;
constexpr int64_t kMaxModulus = 1000000;

class BaseRing;

// Exact rational with int64 storage; arithmetic throws Overflow instead of wrapping.
struct Rat {
    int64_t num = 0;
    int64_t den = 1;

    static Rat make(__int128 n, __int128 d);
    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    Rat operator-() const { return Rat{-num, den}; }
    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    int sign() const { return (num > 0) - (num < 0); }
    bool is_zero() const { return num == 0; }
    std::string str() const;
};

// Coordinates live in fixed slots: a ZMod component uses one slot holding the
// canonical residue, a RealSign component uses two (numerator, denominator-1),
// so that the all-zero array is the zero element.
struct RingElem {
    std::array<int64_t, kMaxSlots> v{};
    const BaseRing* ring = nullptr;

    bool operator==(const RingElem& o) const { return v == o.v; }
    bool operator!=(const RingElem& o) const { return v != o.v; }
    bool operator<(const RingElem& o) const { return v < o.v; }
};

struct Component {
    enum Kind { ZMod, Real } kind = ZMod;
    int64_t p = 0;
    int k = 0;
    int64_t mod = 0;
    int slot = 0;
    int factor = 0;

    std::string name() const;
};

struct Factor {
    enum Kind { ZMod, Real } kind = ZMod;
    int64_t m = 0;
    std::string text;
    std::vector<int> comps;
};

class BaseRing : public std::enable_shared_from_this<BaseRing> {
public:
    static std::shared_ptr<const BaseRing> make(const std::string& descriptor);

    const std::string& descriptor() const { return desc_; }
    const std::vector<Component>& components() const { return comps_; }
    const std::vector<Factor>& factors() const { return factors_; }
    int num_components() const { return static_cast<int>(comps_.size()); }
    bool enumerable() const;
    bool is_field() const;
    uint64_t size() const;

    RingElem zero() const;
    RingElem one() const;
    RingElem from_int(int64_t n) const;
    RingElem from_rational(int64_t num, int64_t den) const;
    RingElem from_coords(const std::vector<int64_t>& zmod, const std::vector<Rat>& real = {}) const;

    RingElem add(const RingElem& a, const RingElem& b) const;
    RingElem sub(const RingElem& a, const RingElem& b) const;
    RingElem mul(const RingElem& a, const RingElem& b) const;
    RingElem neg(const RingElem& a) const;
    RingElem inv(const RingElem& a) const;
    std::optional<RingElem> try_inv(const RingElem& a) const;
    bool is_unit(const RingElem& a) const;
    bool is_zero(const RingElem& a) const;
    bool is_one(const RingElem& a) const { return a == one(); }
    RingElem pow(RingElem a, uint64_t e) const;
    RingElem half() const { return inv(from_int(2)); }

    int64_t zcoord(const RingElem& a, int comp) const { return a.v[comps_[comp].slot]; }
    Rat rcoord(const RingElem& a, int comp) const;
    void set_zcoord(RingElem& a, int comp, int64_t x) const;
    void set_rcoord(RingElem& a, int comp, const Rat& x) const;

    // Element equal to `a` at component `comp` and zero elsewhere.
    RingElem restrict_to(const RingElem& a, int comp) const;
    // Component-wise mix: coordinate c taken from parts[c].
    RingElem mix(const std::vector<RingElem>& parts) const;

    std::shared_ptr<const BaseRing> residue_field(int comp) const;
    std::shared_ptr<const BaseRing> component_ring(int comp) const;
    // Image of `a` in component_ring(comp) (or residue_field(comp)).
    RingElem to_component(const RingElem& a, int comp) const;
    RingElem to_residue(const RingElem& a, int comp) const;
    // Inverse of to_component for a single-component target, zero elsewhere.
    RingElem from_component(const RingElem& x, int comp) const;

    std::string to_string(const RingElem& a) const;
    RingElem parse(const std::string& text) const;

    void for_each(const std::function<void(const RingElem&)>& fn) const;

private:
    std::string desc_;
    std::vector<Factor> factors_;
    std::vector<Component> comps_;
    int nslots_ = 0;
    mutable std::vector<std::shared_ptr<const BaseRing>> residue_cache_, component_cache_;
};

using RingPtr = std::shared_ptr<const BaseRing>;

enum class ArithOp { Add, Sub, Mul, Neg, Inv, IsUnit };

struct ArithResult {
    std::optional<RingElem> value;
    std::optional<bool> flag;
};

RingPtr make_ring(const std::string& descriptor);
ArithResult arith(const RingElem& a, const RingElem& b, ArithOp op);
bool square_class(const RingElem& u);
// Is alpha a norm from S = R[lambda | lambda^2 = lambda_sq]?
bool norm_class(const RingElem& lambda_sq, const RingElem& alpha);
RingElem residue(const RingElem& a, int component);
std::vector<RingElem> enumerate(const BaseRing& ring);

// Multiplication data of an algebra over Z/p^k: c[(i*dim+j)*dim+l] is the
// coefficient of e_l in e_i*e_j.
struct ModAlgebraData {
    int64_t p = 0;
    int k = 1;
    int dim = 0;
    std::vector<int64_t> structure;
    std::vector<int64_t> unit;
};

std::vector<int64_t> mod_alg_mul(const ModAlgebraData& a, const std::vector<int64_t>& x,
                                 const std::vector<int64_t>& y);
std::vector<int64_t> lift_idempotent(const ModAlgebraData& a, const std::vector<int64_t>& seed);

int64_t mod_pow(int64_t a, uint64_t e, int64_t m);
int64_t mod_inv(int64_t a, int64_t m);  // 0 if not invertible
bool is_qr_mod_p(int64_t a, int64_t p);
std::vector<std::pair<int64_t, int>> factorize(int64_t m);

}  // namespace octwitt
