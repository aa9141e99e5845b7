#pragma once

#include "gridcode/lattice.hpp"

#include <array>
#include <vector>

namespace gridcode {

struct SearchSolution {
    std::int64_t d = 0;
    std::array<std::int64_t, 3> abc{};  // integer witness triple
    double theta1 = 0, theta2 = 0;
    Mat S;  // validated generator matrix (A integral, det(A) = d^2)
};

// true iff d is not of the form 4^f (8g + 7)
bool legendre_representable(std::int64_t d);

// Hypercubic family: all (a,b,c) with a^2 + b^2 + c^2 = d, a >= b >= c >= 0.
std::vector<SearchSolution> search_tesseract(std::int64_t d);

// D4 family: integer triples with 2a^2 + b^2 + c^2 = 4d and a, b, c of equal
// parity (equivalent to the quadratic form 3x^2+4xy+4y^2+z^2 = 4d).
// Solutions deduplicated by canonical sign ordering unless full_orbit.
std::vector<SearchSolution> search_d4(std::int64_t d, bool full_orbit = false);

}  // namespace gridcode
