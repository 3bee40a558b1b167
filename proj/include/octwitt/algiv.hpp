#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "octwitt/linalg.hpp"

namespace octwitt {

enum class InvolutionType { Orthogonal, Symplectic, Unitary };
const char* involution_type_name(InvolutionType t);

// Per-algebra memo of derived data (base changes, residue invariants).
struct MoritaCache {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<void>> items;
};

// Finite free algebra with involution, stored by structure constants.
// Elements are coordinate vectors (Vec) of length dim.
class Algebra {
public:
    RingPtr R;
    int dim = 0;
    // mult[i*dim+j] lists the nonzero (l, c) with e_i e_j = sum c e_l
    std::vector<std::vector<std::pair<int, RingElem>>> mult;
    Vec unit_vec;
    std::vector<Vec> invol;  // sigma(e_i)
    std::vector<Vec> center;
    int deg = 1;
    std::optional<Vec> lambda, mu;

    // Provenance.  `shape` describes the multiplication, `inv_kind` the involution.
    std::string shape;     // base, etale, quaternion, matrix, tensor, sub
    std::string inv_kind;  // identity, standard, symplectic, transpose, adjoint, tensor, conjugated, restricted
    Vec params;            // etale: {alpha}; quaternion: {alpha, beta}; adjoint: gram diagonal
    int mat_n = 0;
    std::shared_ptr<const Algebra> factor0, factor1;

    std::shared_ptr<MoritaCache> cache;

    Vec zero() const { return Vec(dim, R->zero()); }
    Vec one() const { return unit_vec; }
    Vec basis(int i) const;
    Vec scalar(const RingElem& r) const;
    Vec add(const Vec& a, const Vec& b) const;
    Vec sub(const Vec& a, const Vec& b) const;
    Vec neg(const Vec& a) const;
    Vec mul(const Vec& a, const Vec& b) const;
    Vec scale(const Vec& a, const RingElem& r) const;
    Vec sigma(const Vec& a) const;
    bool is_zero(const Vec& a) const;
    bool eq(const Vec& a, const Vec& b) const { return a == b; }

    Mat left_matrix(const Vec& a) const;   // column j = a e_j
    Mat right_matrix(const Vec& a) const;  // column j = e_j a
    bool is_unit(const Vec& a) const;
    std::optional<Vec> try_inv(const Vec& a) const;
    Vec inv(const Vec& a) const;
    bool is_central(const Vec& a) const;
    // Coordinates of a central element in R when it lies in R·1, else nullopt.
    std::optional<RingElem> as_scalar(const Vec& a) const;

    std::string str(const Vec& a) const;
    Vec parse(const std::string& text) const;

    // Associativity, unit, anti-automorphism and order-2 checks.
    void validate() const;
};

using AlgPtr = std::shared_ptr<const Algebra>;

AlgPtr base_algebra(const RingPtr& R);
AlgPtr make_quadratic_etale(const RingPtr& R, const RingElem& alpha, bool standard_involution = true);
AlgPtr make_quaternion(const RingPtr& R, const RingElem& alpha, const RingElem& beta);

enum class MatrixInvolution { Transpose, Symplectic, DiagAdjoint };
AlgPtr make_matrix_involution(const RingPtr& R, int n, MatrixInvolution kind, const Vec& gamma = {});
AlgPtr tensor_product(const AlgPtr& a0, const AlgPtr& a1);

// Same multiplication with involution x -> u sigma(x) u^{-1}.
AlgPtr conjugate_algebra(const AlgPtr& A, const Vec& u);
// Sub-algebra on the span of `basis` with involution given by images in A
// (which must lie in the span).
struct SubAlgebra {
    AlgPtr alg;
    Mat embed;    // dim_A x dim_B
    Mat extract;  // dim_B x dim_A, extract * embed = I
};
SubAlgebra make_subalgebra(const AlgPtr& A, const std::vector<Vec>& basis, const std::vector<Vec>& invol_images,
                           const std::string& inv_kind);
Vec sub_coords(const SubAlgebra& S, const Vec& a);  // A-coordinates to B-coordinates (a in B)

// Reduction of structure constants to a component ring or a residue field.
AlgPtr base_change_component(const AlgPtr& A, int comp, bool residue);

enum class AlgOp { Add, Mul, Involute, Inv, IsUnit };
struct AlgResult {
    std::optional<Vec> value;
    std::optional<bool> flag;
};
AlgResult alg_arith(const Algebra& A, const Vec& a, const Vec& b, AlgOp op);

// One type per local component; eps must be central with eps^sigma eps = 1.
std::vector<InvolutionType> involution_type(const Algebra& A, const Vec& eps);
// Rank over the residue field of Sym_eps at a component.
int sym_rank(const Algebra& A, const Vec& eps, int comp);
// R-module basis of Sym_eps(A) when free.
std::vector<Vec> sym_basis(const Algebra& A, const Vec& eps);

struct TrdNrd {
    Vec trd;  // central elements in A-coordinates
    Vec nrd;
};
TrdNrd reduced_trace_norm(const Algebra& A, const Vec& a);

std::vector<Vec> centralizer(const Algebra& A, const Vec& x);

struct QuaternionSplitting {
    bool split = false;
    std::optional<Vec> idempotent;
    std::optional<Mat> phi;      // 4x4: A-coordinates to M_2 coordinates (E11,E12,E21,E22)
    std::optional<Mat> phi_inv;  // inverse change of basis
};
QuaternionSplitting split_quaternion(const Algebra& A);
std::vector<bool> brauer_is_split(const Algebra& A);

struct PiData {
    Mat pi1, pi2;              // A-coordinates to A-coordinates (values in B)
    std::vector<Vec> B_basis;  // in A-coordinates
    std::vector<Vec> muB_basis;
};
PiData pi_projections(const Algebra& A);

}  // namespace octwitt
