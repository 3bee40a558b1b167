#pragma once

#include <optional>
#include <vector>

#include "octwitt/ring.hpp"

namespace octwitt {

using Vec = std::vector<RingElem>;

// Dense row-major matrix over a BaseRing.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<RingElem> a;

    Mat() = default;
    Mat(const BaseRing& R, int r, int c);
    static Mat identity(const BaseRing& R, int n);

    RingElem& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const RingElem& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    Vec column(int j) const;
    void set_column(int j, const Vec& v);
};

Mat mat_mul(const BaseRing& R, const Mat& x, const Mat& y);
Vec mat_vec(const BaseRing& R, const Mat& x, const Vec& v);
Mat from_columns(const BaseRing& R, int rows, const std::vector<Vec>& cols);

// Rank of the reduction at each local component's residue field.
std::vector<int> residue_ranks(const BaseRing& R, const Mat& m);
int residue_rank(const BaseRing& R, const Mat& m, int comp);
bool is_invertible(const BaseRing& R, const Mat& m);
std::optional<Mat> inverse(const BaseRing& R, const Mat& m);

// Some solution of m x = b, if one exists.
std::optional<Vec> solve(const BaseRing& R, const Mat& m, const Vec& b);

// Solution module of m x = 0.  When every component has the same number of
// free generators and no torsion the module is free and `basis` spans it.
struct Kernel {
    bool is_free = true;
    std::vector<Vec> basis;
    std::vector<int> free_rank;  // per component
};
Kernel kernel(const BaseRing& R, const Mat& m);

// Division-free determinant (Berkowitz), valid over any commutative ring.
RingElem det(const BaseRing& R, const Mat& m);
RingElem trace(const BaseRing& R, const Mat& m);

// Indices of columns forming a basis of the column space at every residue
// field (greedy, left to right); used to pick free complements.
std::vector<int> independent_columns(const BaseRing& R, const Mat& m, int comp);

}  // namespace octwitt
