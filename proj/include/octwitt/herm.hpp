#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "octwitt/algiv.hpp"

namespace octwitt {

// Vector of the free right module A^n: one algebra element per slot.
using AVec = std::vector<Vec>;

// eps-hermitian form f(x,y) = sum x_i^sigma G_ij y_j on A^n, or on the
// projective summand P = E A^n when an idempotent matrix E is attached.
struct HermForm {
    AlgPtr A;
    Vec eps;
    int n = 0;
    std::vector<Vec> gram;  // row-major n x n
    std::vector<Vec> proj;  // row-major n x n idempotent; empty for the free module

    const Vec& g(int i, int j) const { return gram[static_cast<size_t>(i) * n + j]; }
    Vec& g(int i, int j) { return gram[static_cast<size_t>(i) * n + j]; }
    bool is_free() const { return proj.empty(); }
    // Projector entry, identity when free.
    Vec e(int i, int j) const;
};

// Builds a form and checks G_ij = eps G_ji^sigma (InvalidEntry otherwise).
HermForm make_form(const AlgPtr& A, const Vec& eps, int n, std::vector<Vec> gram);
// Form on E A^n: checks E^2 = E, the symmetry and G = E^* G E.
HermForm make_projective_form(const AlgPtr& A, const Vec& eps, int n, std::vector<Vec> proj, std::vector<Vec> gram);
HermForm zero_form(const AlgPtr& A, const Vec& eps);
HermForm make_diagonal(const AlgPtr& A, const Vec& eps, const std::vector<Vec>& entries);
HermForm make_hyperbolic(const AlgPtr& A, const Vec& eps, int r);
HermForm direct_sum(const HermForm& f, const HermForm& g);
HermForm negate(const HermForm& f);
// u-conjugation: Gram u G over (A, Int(u) sigma) with eps' = delta eps for u^sigma = delta u.
HermForm conjugate(const HermForm& f, const Vec& u);
HermForm e_transfer(const HermForm& f, const Vec& e);
HermForm trace_transfer(const HermForm& g);
Mat adjoint_involution(const HermForm& f);
bool is_unimodular(const HermForm& f);

Vec form_value(const HermForm& f, const AVec& x, const AVec& y);
AVec avec_zero(const Algebra& A, int n);
AVec avec_unit(const Algebra& A, int n, int i);
AVec avec_add(const Algebra& A, const AVec& x, const AVec& y);
AVec avec_sub(const Algebra& A, const AVec& x, const AVec& y);
AVec avec_scale(const Algebra& A, const AVec& x, const Vec& a);  // x a
// Gram of f on the given vectors.
HermForm restrict_form(const HermForm& f, const std::vector<AVec>& basis);
// Change of basis: columns are vectors of A^n, result has Gram C^* G C.
bool same_space(const HermForm& f, const HermForm& g);
std::string form_str(const HermForm& f);

// ----- invariants decided at the residue fields

struct PartInvariant {
    int comp = 0;
    std::string kind;  // symmetric, alternating, hermitian, exchange, real-symmetric, real-hermitian, ...
    int m = 0;         // dimension of the transferred form
    int r = 1;         // matrix size of the simple part; a free rank-1 module contributes r to m
    int index = 0;     // Witt index of the transferred form
    int free_planes = 0;
    bool witt_zero = true;
    std::string key;   // Witt class label of the part
    // symmetric parts: square class of the determinant; unitary parts: determinant in the residue field
    bool det_square = true;
    bool signed_det_square = true;  // (-1)^{m(m-1)/2} det, the discriminant of a symmetric part
    std::vector<int64_t> det;
    int signature = 0;
};

struct FormInvariants {
    std::vector<PartInvariant> parts;
    bool witt_zero = true;
    bool isotropic = false;
    bool free_plane = false;
    std::string key;
};

FormInvariants form_invariants(const HermForm& f);

enum class IsoStatus { Anisotropic, Isotropic, IsotropicNoFreeWitness };
struct IsotropyResult {
    IsoStatus status = IsoStatus::Anisotropic;
    AVec x, y;  // f(x,x) = 0, f(x,y) = 1 when status == Isotropic
};
IsotropyResult find_isotropic(const HermForm& f, uint64_t seed = 0);

struct PlaneSplit {
    HermForm rest;
    std::vector<AVec> basis;  // x, z, then the complement basis
};
PlaneSplit split_hyperbolic_plane(const HermForm& f, const AVec& x, const AVec& y);

struct WittDecomposition {
    HermForm kernel;
    int hyperbolic_rank = 0;
};
WittDecomposition witt_decompose(const HermForm& f, uint64_t seed = 0);

bool is_hyperbolic(const HermForm& f);
bool witt_equivalent(const HermForm& f, const HermForm& g);
// Transferred dimension per residue part; determines the module up to isomorphism.
std::vector<int> module_type(const HermForm& f);
bool is_isometric(const HermForm& f, const HermForm& g);
std::vector<Vec> diagonalize(const HermForm& f, uint64_t seed = 0);

struct Discriminant {
    RingElem rep;
    bool trivial = true;
    std::string group;  // "square" or "norm"
};
Discriminant discriminant(const HermForm& f);
// Formula for diagonal forms: (-1)^{n/2} prod a_i over (R,id), or
// (-1)^{nd/2} Nrd(u)^n prod Nrd(a_i) for even degree.
Discriminant diagonal_discriminant(const AlgPtr& A, const Vec& eps, const std::vector<Vec>& entries);
// Crossed product (S/R, alpha) for S = R[lambda | lambda^2 = lambda_sq].
AlgPtr disc_algebra(const RingPtr& R, const RingElem& lambda_sq, const RingElem& alpha);
bool disc_algebras_equal(const RingElem& lambda_sq, const RingElem& alpha, const RingElem& beta);

struct LagrangianWitness {
    std::vector<AVec> L;
    std::vector<AVec> complement;  // optional; searched among unit vectors when empty
};
bool verify_lagrangian(const HermForm& f, const LagrangianWitness& w);
// Phi_L(M) = (-1)^{rrk L - rrk(L cap M)} at each component.
std::vector<int> lagrangian_phi(const HermForm& f, const LagrangianWitness& L, const LagrangianWitness& M);

// Real signature helper: (positive, negative) counts of a nondegenerate symmetric rational matrix.
std::pair<int, int> rational_signature(const std::vector<std::vector<Rat>>& m);

}  // namespace octwitt
