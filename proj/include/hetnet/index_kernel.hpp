#pragma once

#include <array>
#include <string>

#include "hetnet/ext_real.hpp"

namespace hetnet {

// Linearisation rates at one node of a cycle. r, c, e are stored positive
// (eigenvalues -r, -c, +e); t is the transverse eigenvalue with its sign.
struct NodeEigenvalues {
    double r = 1.0;
    double c = 1.0;
    double e = 1.0;
    double t = 0.0;
};

struct CycleNodeParams {
    double a = 1.0;  // c / e
    double b = 0.0;  // -t / e
};

// Index function for second argument 1:
//   alpha >= 0        -> +inf
//   -1 < alpha < 0    -> -1/alpha - 1
//   alpha < -1        -> alpha + 1
// Throws NonGeneric when alpha is within tolerance of -1.
ExtReal f_index(double alpha);

// Throws PositivityViolation / NonGeneric on invalid node data
// (non-positive rates or two rates of equal magnitude).
CycleNodeParams node_ab(const NodeEigenvalues& n);

struct CycleIndices2 {
    std::array<ExtReal, 2> sigma;
    int rotation = 0;        // input position that became node 1
    std::string branch;      // "i", "ii.a", "ii.b", "iii.a", "iii.b"
};

struct CycleIndices3 {
    std::array<ExtReal, 3> sigma;
    int rotation = 0;        // input position that became node 1
    std::string branch;      // "i", "ii.a", "ii.b", "iii.a", "iii.b", "iv.a", "iv.b"
};

// sigma[j] is the index of the connection arriving at node j (input order).
CycleIndices2 b2_cycle_indices(const std::array<CycleNodeParams, 2>& p);
CycleIndices3 b3_cycle_indices(const std::array<CycleNodeParams, 3>& p);

}  // namespace hetnet
