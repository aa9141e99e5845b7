#include "gridcode/search.hpp"

#include "gridcode/symplectic.hpp"

#include <cmath>

namespace gridcode {

bool legendre_representable(std::int64_t d) {
    if (d < 1) throw validation_error("legendre_representable: d must be positive");
    while (d % 4 == 0) d /= 4;
    return d % 8 != 7;
}

namespace {

// validate and package a candidate basis
bool finish(SearchSolution& sol) {
    Mat W = omega(static_cast<int>(sol.S.rows()) / 2);
    Mat A = sol.S * W * sol.S.transpose();
    auto Ai = round_to_int(A, 1e-9);
    if (!Ai) return false;
    double det = Ai->cast<double>().determinant();
    return std::abs(det - static_cast<double>(sol.d) * static_cast<double>(sol.d)) < 1e-6;
}

}  // namespace

std::vector<SearchSolution> search_tesseract(std::int64_t d) {
    if (d < 1) throw validation_error("search_tesseract: d must be positive");
    std::vector<SearchSolution> out;
    double sd = std::sqrt(static_cast<double>(d));
    for (std::int64_t a = 0; a * a <= d; ++a)
        for (std::int64_t b = 0; b <= a; ++b)
            for (std::int64_t c = 0; c <= b; ++c) {
                if (a * a + b * b + c * c != d) continue;
                SearchSolution sol;
                sol.d = d;
                sol.abc = {a, b, c};
                // cos t1 cos t2 = a/sqrt(d), sin t1 cos t2 = b/sqrt(d), sin t2 = c/sqrt(d)
                sol.theta2 = std::asin(static_cast<double>(c) / sd);
                double ct2 = std::cos(sol.theta2);
                sol.theta1 = ct2 < 1e-12
                                 ? 0.0
                                 : std::atan2(static_cast<double>(b), static_cast<double>(a));
                sol.S = std::pow(static_cast<double>(d), 0.25) *
                        givens_gate(2, 1, 2, sol.theta1) * givens_gate(2, 1, 3, sol.theta2);
                if (!finish(sol))
                    throw numerical_error("search_tesseract: candidate failed validation");
                out.push_back(sol);
            }
    return out;
}

std::vector<SearchSolution> search_d4(std::int64_t d, bool full_orbit) {
    if (d < 1) throw validation_error("search_d4: d must be positive");
    std::vector<SearchSolution> out;
    double sd = std::sqrt(static_cast<double>(d));
    Mat S0 = catalog("d4_qunaught").lat.S;  // includes the 2^{1/4} scale, det 1
    std::int64_t bound = static_cast<std::int64_t>(std::ceil(2.0 * sd));
    for (std::int64_t a = -bound; a <= bound; ++a)
        for (std::int64_t b1 = -bound; b1 <= bound; ++b1)
            for (std::int64_t c = -bound; c <= bound; ++c) {
                if (2 * a * a + b1 * b1 + c * c != 4 * d) continue;
                if (((a ^ b1) & 1) != 0 || ((a ^ c) & 1) != 0) continue;  // equal parity
                if (!full_orbit && (a < 0 || b1 < 0 || c < 0)) continue;
                SearchSolution sol;
                sol.d = d;
                sol.abc = {a, b1, c};
                // sin t1 cos t2 = a/sqrt(2d), cos t1 cos t2 = b/(2 sqrt d),
                // sin t2 = c/(2 sqrt d)
                double s2 = static_cast<double>(c) / (2.0 * sd);
                sol.theta2 = std::asin(s2);
                double ct2 = std::cos(sol.theta2);
                sol.theta1 = ct2 < 1e-12
                                 ? 0.0
                                 : std::atan2(static_cast<double>(a) / std::sqrt(2.0),
                                              static_cast<double>(b1) / 2.0);
                sol.S = std::pow(static_cast<double>(d), 0.25) * S0 *
                        givens_gate(2, 1, 2, sol.theta1) * givens_gate(2, 1, 3, sol.theta2);
                if (!finish(sol))
                    throw numerical_error("search_d4: candidate failed validation");
                out.push_back(sol);
            }
    return out;
}

}  // namespace gridcode
