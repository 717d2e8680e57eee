#pragma once

#include <array>
#include <string>
#include <vector>

#include "hetnet/wedge.hpp"

namespace hetnet {

using Mat2 = std::array<std::array<double, 2>, 2>;

// One local map between two reduced cross-sections. In logarithmic
// coordinates (u, v) = (ln x, ln y) it acts linearly: (u', v') = P (u, v).
// The image must stay inside the neighbourhood: every output coordinate
// below the domain margin.
struct LocalMap {
    std::string name;
    int from = 0;
    int to = 0;
    Mat2 P{};
    unsigned cycles = 0;      // bit mask of the cycles using this map
    std::string domain_text;  // human-readable domain inequality
};

// Network of reduced sections joined by local maps (global maps are the
// identity). Sections with two outgoing maps are the branching points.
struct Skeleton {
    std::vector<std::string> sections;
    std::vector<LocalMap> maps;
    std::vector<std::string> cycle_names;

    unsigned all_cycles() const { return (1u << cycle_names.size()) - 1u; }
    int section_index(const std::string& name) const;
    int map_index(const std::string& name) const;
    std::vector<int> outgoing(int section, unsigned cycles) const;
};

// Composition P2 * P1 (first P1, then P2).
Mat2 compose(const Mat2& P2, const Mat2& P1);

// Asymptotic escape-set engine. A point near the origin of a section is
// described by r = ln y / ln x; a local map sends r to a ratio given by a
// Moebius transformation and is admissible on an open r-interval. The
// escaping set at each section is the least fixed point of
//   E(s) = (complement of admissible domains) U U_m m^{-1}(E(target of m)).
struct EscapeOptions {
    int max_iter = 10000;
    double exponent_cap = 1e9;  // exponents beyond this count as infinite
    double merge_tol = 1e-12;
};

struct EscapeResult {
    std::vector<ExponentSet> per_section;
    int iterations = 0;
};

// Throws CapExceeded if the iteration does not settle within max_iter.
EscapeResult escape_sets(const Skeleton& sk, unsigned cycles, const EscapeOptions& opt = {});

// Open interval of r on which map P keeps both output coordinates small.
ExponentInterval admissible_interval(const Mat2& P);
// Ratio image of r under P (r may be +inf).
double ratio_image(const Mat2& P, double r);

}  // namespace hetnet
