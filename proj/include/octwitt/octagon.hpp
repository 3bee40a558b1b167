#pragma once

#include <optional>
#include <string>
#include <vector>

#include "octwitt/witt.hpp"

namespace octwitt {

struct OctagonData {
    AlgPtr A;
    Vec eps;
    PiData pi;
    SubAlgebra B1;  // (B, tau1), tau1 = sigma on B
    SubAlgebra B2;  // (B, tau2), tau2 = Int(mu^-1) sigma on B
    std::vector<Vec> T_basis;  // S[lambda] in A-coordinates
    bool T_connected = false;
    Vec lambda, mu;
    // Per-component involution types, index 0 for eps and 1 for -eps.
    std::vector<InvolutionType> sigma_type[2], tau1_type[2], tau2_type[2];
};

OctagonData make_octagon(const AlgPtr& A, const Vec& eps);

enum class OctMap { Pi1, Pi2, Rho1, Rho2 };
const char* oct_map_name(OctMap m);

// pi_i: A^n -> B^{2n} in the basis {e_j, e_j mu}; rho_1: Gram lambda G, rho_2: Gram (lambda mu) G.
HermForm apply_octagon_map(const OctagonData& d, OctMap which, const HermForm& f);

// Node k of the octagon, k taken mod 8:
// W_e(A), W_e(B,t1), W_-e(A), W_e(B,t2), W_-e(A), W_-e(B,t1), W_e(A), W_-e(B,t2).
struct NodeSpace {
    AlgPtr alg;
    Vec eps;
    std::string name;
};
NodeSpace octagon_node(const OctagonData& d, int k);
// The map leaving node k.
OctMap octagon_map(int k);

// Explicit hyperbolic structure of m_k(m_{k-1}(f)) for f on node k-1:
// Q(x)1 and Q(x)mu after a rho, {x mu (x) 1 +- x (x) mu} after a pi.
struct ChainWitness {
    HermForm composite;
    LagrangianWitness first, second;  // each is a complement of the other
};
ChainWitness chain_witness(const OctagonData& d, int k, const HermForm& f);

struct NodeReport {
    std::string name;
    int size = 0;
    std::vector<int> image, kernel;  // of the incoming and outgoing maps
    bool exact = false;
    std::string counterexample;
};
struct OctagonReport {
    std::vector<NodeReport> nodes;
    std::vector<TablePtr> tables;  // per node; repeated groups share one table
    std::vector<WittHom> maps;     // maps[k] leaves node k
    bool exact = false;
};
OctagonReport check_octagon_exact(const OctagonData& d, int rank_cap = 8);

// Finer exactness, parts i..iv as 1..4.  Part p concerns a form on node p-1
// in the kernel of the map leaving it, and asks for a preimage under the map
// entering that node.
int finer_node(int part);
bool finer_predicate(const OctagonData& d, int part, const HermForm& f);
// Brute force over sums of rank-one and hyperbolic forms on cyclic projectives.
std::optional<HermForm> preimage_oracle(const OctagonData& d, int part, const HermForm& f, long search_cap = 200000);
// f anisotropic in the kernel: a preimage must exist.
bool anisotropic_image_check(const OctagonData& d, int part, const HermForm& f);
// Reduced rank of the underlying module (constant over the residue parts).
int reduced_rank(const HermForm& f);

struct SequenceReport {
    std::vector<std::string> names;
    std::vector<TablePtr> tables;
    std::vector<WittHom> maps;     // maps[i]: tables[i] -> tables[i+1]
    std::vector<bool> exact;       // at tables[1..size-2]
    bool left_injective = false;
    bool right_surjective = false;
    bool all_exact = false;
};
// 0 -> W1(T,theta) -Tr-> W1(R) -lambda rho-> W1(T,id) -Tr-> W1(R) -lambda rho-> W-1(T,theta) -> 0
SequenceReport lewis_five(const RingPtr& R, const RingElem& alpha);
// The quaternion octagon with eps = 1 and tau2 = id, from W1(A) to W1(A).
SequenceReport lewis_seven(const RingPtr& R, const RingElem& alpha, const RingElem& beta);
// Kernel of [f] -> [Trd o f] on W1(A,sigma).
std::vector<int> trd_kernel(const RingPtr& R, const RingElem& alpha, const RingElem& beta);

struct JacobsonResult {
    bool isotropy_equiv = false;
    bool isometry_equiv = false;
};
JacobsonResult jacobson_check(const HermForm& f, const HermForm& f2);

}  // namespace octwitt
