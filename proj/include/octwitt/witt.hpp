#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "octwitt/herm.hpp"

namespace octwitt {

// Finite Witt group: class representatives with an addition table.
struct WittTable {
    AlgPtr A;
    Vec eps;
    std::vector<HermForm> classes;  // classes[0] is the zero form
    std::vector<std::string> keys;
    std::vector<std::vector<int>> add;
    std::vector<int> neg;
    std::vector<std::string> provenance;  // how each class was first reached
    std::vector<HermForm> generators;  // rank-one forms on cyclic projectives e A

    int size() const { return static_cast<int>(classes.size()); }
    // Index of the class of f; -1 if f is not in the table.
    int find(const HermForm& f) const;
};
using TablePtr = std::shared_ptr<const WittTable>;

// Nonzero idempotents e, one for each isomorphism class of the module e A.
std::vector<Vec> idempotent_classes(const AlgPtr& A);
// Unimodular rank-one forms <y> on e A, one per (idempotent class, Witt class).
std::vector<HermForm> rank_one_forms(const AlgPtr& A, const Vec& eps);
// Hyperbolic form on e A + e^sigma A.
HermForm hyperbolic_on(const AlgPtr& A, const Vec& eps, const Vec& e);

// rank_cap <= 0 selects 4 deg A.
TablePtr enumerate_witt_group(const AlgPtr& A, const Vec& eps, int rank_cap = 0);

using FormFunctor = std::function<HermForm(const HermForm&)>;

struct WittHom {
    TablePtr source, target;
    std::vector<int> map;
    std::string name;
};
WittHom induced_hom(const TablePtr& source, const TablePtr& target, const FormFunctor& functor,
                    const std::string& name);
WittHom compose(const WittHom& first, const WittHom& second);

std::vector<int> kernel(const WittHom& h);
std::vector<int> image(const WittHom& h);
bool exact_at(const WittHom& in, const WittHom& out);

// Invariant factors in ascending divisibility order; [] for the trivial group.
std::vector<int> group_structure(const WittTable& t);
// Abelian group axioms on the addition table.
bool check_group_axioms(const WittTable& t);

}  // namespace octwitt
