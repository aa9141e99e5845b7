#pragma once

#include "gridcode/types.hpp"

#include <optional>

namespace gridcode {

// Symplectic form on m modes in (q1,p1,q2,p2,...) ordering:
// block-diagonal with 2x2 blocks [[0,1],[-1,0]].
Mat omega(int num_modes);
IMat omega_int(int num_modes);

// u^T Omega v
double omega_form(const Vec& u, const Vec& v);

// Single-mode / two-mode Gaussian gates as 2m x 2m symplectic matrices acting
// on the quadrature column vector.
Mat rotation_gate(int num_modes, int mode, double theta);
Mat squeeze_gate(int num_modes, int mode, double lambda);  // diag(e^l, e^-l) on the mode
Mat shear_gate(int num_modes, int mode, double s);
// 50/50 beamsplitter from mode j into mode k:
// (q_j,p_j,q_k,p_k) -> ((q_j - q_k)/sqrt2, (p_j - p_k)/sqrt2, (q_j + q_k)/sqrt2, ...)
Mat beamsplitter_gate(int num_modes, int j, int k);
// Givens rotation in the (i,j) quadrature plane; i, j are 0-based quadrature
// indices. Orthogonal but generally not symplectic.
Mat givens_gate(int num_modes, int i, int j, double theta);
Mat sum_gate(int num_modes, int ctrl, int targ, double g);

bool is_symplectic(const Mat& M, double tol = 1e-9);
bool is_orthogonal(const Mat& M, double tol = 1e-9);

// ---- exact integer linear algebra (inputs are small; intermediates use
// 128-bit accumulation internally) ----

std::int64_t det_int(const IMat& M);                 // fraction-free (Bareiss)
IMat adjugate_int(const IMat& M);                    // adj(M), M * adj(M) = det(M) * I
IMat inverse_unimodular(const IMat& M);              // requires |det| == 1
bool is_antisymmetric(const IMat& M);

// Round a real matrix to integers, verifying every entry is within tol of an
// integer. Returns nothing if any entry is not integral.
std::optional<IMat> round_to_int(const Mat& M, double tol = 1e-9);
std::optional<IVec> round_to_int_vec(const Vec& v, double tol = 1e-9);

// Normal form of an integral antisymmetric nonsingular matrix A:
// R A R^T = [[0, D], [-D, 0]] with D = diag(d_1 >= d_2 >= ... >= d_m > 0),
// d_{t+1} | d_t, R unimodular. All arithmetic exact.
struct NormalForm {
    IMat R;     // unimodular transform, rows ordered (q-block, p-block)
    IVec D;     // diagonal of D, positive non-increasing
    IMat form;  // R A R^T
};
NormalForm symplectic_normal_form(const IMat& A);

// Gaussian (symplectic) map M with R S M = S_target for a unimodular R,
// so the phase-space map x -> M^T x carries the source lattice onto the
// target lattice. Returns nothing when the normal forms differ (lattices are
// symplectically inequivalent).
struct GaussianMap {
    Mat M;    // symplectic: R * S * M == S_target
    IMat R;   // unimodular basis change on the source rows
};
std::optional<GaussianMap> gaussian_map_between(const Mat& S, const Mat& S_target,
                                                double tol = 1e-9);

}  // namespace gridcode
