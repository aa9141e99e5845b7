#pragma once

#include "gridcode/symplectic.hpp"
#include "gridcode/types.hpp"

#include <string>
#include <vector>

namespace gridcode {

// A lattice Lambda = {S^T a : a in Z^{2m}} whose generators index commuting
// stabilizer translations. Lengths are in units of l = sqrt(2*pi).
struct GkpLattice {
    int m = 0;
    std::int64_t d = 0;   // code dimension, det(A) = d^2
    Mat S;                // rows are the generators s_j
    Mat Sdual;            // S* = A^{-1} S, rows generate the dual
    IMat A;               // symplectic Gram matrix, exactly integral
};

// Base Pauli representatives (rows x0, y0, z0) for a qubit code.
struct LogicalFrame {
    Mat L0;  // 3 x 2m
};

// Binary sign data: which +-1 eigenvalue each stabilizer generator (mu) and
// Pauli representative (upsilon, order x,y,z) takes on the tracked state.
struct GaugeState {
    IVec mu;       // Z2^{2m}
    IVec upsilon;  // Z2^3
};

// A named code: lattice plus (when defined) logical frame and trivial gauge.
struct CodeBundle {
    std::string name;
    GkpLattice lat;
    bool has_frame = false;
    LogicalFrame frame;  // valid when has_frame
    GaugeState gauge;    // mu sized 2m; upsilon sized 3 (zero when no frame)
};

GkpLattice build(const Mat& S, double tol = 1e-9);

// Named catalog. `param` is eta for rectangular/qunaught, the mode count m for
// d2m, and the scale a for e8; ignored otherwise (pass 0 for defaults).
CodeBundle catalog(const std::string& name, double param = 0.0);
std::vector<std::string> catalog_names();

// All lattice (or dual-lattice) points v with |v| <= radius, each exactly
// once, via LLL reduction + bounded coefficient search. Throws a
// capacity error past `cap` points.
std::vector<Vec> enumerate_points(const GkpLattice& lat, double radius,
                                  bool dual = false, std::size_t cap = 1000000);

struct PackingReport {
    double min_stab_len = 0;
    double min_pauli_len = 0;
    double packing_ratio = 0;           // Delta
    double max_correctable_radius = 0;  // 2 (Delta / (d V_{2m}))^{1/(2m)}
};
PackingReport packing_report(const GkpLattice& lat);
double gaussian_error_estimate(const GkpLattice& lat, double sigma);

// Class of p in the dual quotient Lambda*/Lambda for a qubit code.
// '\0' when p is not a dual vector; otherwise one of 'I','X','Y','Z'.
char pauli_class(const GkpLattice& lat, const LogicalFrame& frame, const Vec& p,
                 double tol = 1e-6);

// Floating-point LLL (delta = 0.75) on the rows of S; returns the unimodular
// transform R and the reduced basis S_red = R * S.
struct LllResult {
    IMat R;
    Mat S_red;
};
LllResult lll_reduce(const Mat& S);

// Derive a minimum-length logical frame for a qubit code by enumerating short
// dual vectors (x0 = shortest nontrivial coset rep, z0 = next distinct coset,
// y0 = remaining coset).
LogicalFrame derive_frame(const GkpLattice& lat);

// JSON round-trip ({name, m, S, L0, mu, upsilon}).
std::string to_json(const CodeBundle& bundle);
CodeBundle from_json(const std::string& text);

}  // namespace gridcode
