#pragma once

#include "gridcode/gauge.hpp"
#include "gridcode/lattice.hpp"

#include <string>
#include <vector>

namespace gridcode {

bool same_lattice(const Mat& S1, const Mat& S2, double tol = 1e-6);
bool sublattice(const Mat& S1, const Mat& S2, double tol = 1e-6);  // Lambda_1 inside Lambda_2

// Binary-symplectic stabilizer code from Pauli strings ("XZZXI", one per
// generator). Y contributes both an X and a Z bit.
struct QubitStabilizerCode {
    int n = 0;  // qubits
    int k = 0;  // logicals
    IMat B;     // (n-k) x 2n, column-interleaved: X bit of qubit j at 2j, Z at 2j+1
    std::vector<std::string> generators;
};
QubitStabilizerCode parse_stabilizer_code(const std::vector<std::string>& paulis);

// Row-style Hermite normal form of the row span of G over Z: returns the
// full-rank upper-triangular H (rows generate the same integer row space).
IMat hermite_normal_form(const IMat& G);

// Concatenation: lift `code` over the single-mode qubit code `base`.
// S_q = T L with L = (S*_base) repeated per qubit and T the exact basis of the
// integer row space of (B; 2I). The basis is LLL-reduced. A logical frame is
// derived by enumeration when the result is a qubit code.
CodeBundle concatenate(const CodeBundle& base, const QubitStabilizerCode& code);

// Splitting a code C into separable targets A, B (given their generator
// matrices over the first/last modes). Gauges and Pauli frames follow the
// merge/split update rules; when the resulting mu violates the physicality
// constraint, fix_translation holds the lattice translation restoring mu = 0.
struct SplitResult {
    CodeBundle a;
    CodeBundle b;
    bool needs_fix = false;
    Vec fix_translation;  // apply T(fix/2) physically when needs_fix
};
SplitResult split(const GkpLattice& lat_C, const LogicalFrame& frame_C,
                  const GaugeState& gs_C, const Mat& S_A, const Mat& S_B);

// Merging codes A and B by measuring the translation T(lambda_m / 2)
// (lambda_m in Lambda_C, not in Lambda_A + Lambda_B) with a given outcome.
struct MergeSpec {
    Vec lambda_m;
    int outcome = +1;  // +-1
};
CodeBundle merge(const CodeBundle& a, const CodeBundle& b, const MergeSpec& spec,
                 const Mat& S_C, const Mat& L0_C);

}  // namespace gridcode
