#pragma once

#include "gridcode/lattice.hpp"

namespace gridcode {

// Sign of the translation T(lambda) on the tracked state, lambda in Lambda:
// exp{i pi (a^T Adn a + a^T mu)} with a = S^{-T} lambda and Adn the strictly
// lower-triangular part of A. Exact integer arithmetic on coordinates.
int nu(const GkpLattice& lat, const IVec& mu, const Vec& lambda, double tol = 1e-6);

// Sign for a dual vector p in the class of Pauli P ('X','Y','Z'):
// exp{i pi (p0^T Omega p + upsilon_P)} * nu(p - p0).
int nu_pauli(const GkpLattice& lat, const LogicalFrame& frame, const GaugeState& gs,
             char pauli, const Vec& p, double tol = 1e-6);

// Sign of T(p) whatever its class: nu for class I, nu_pauli otherwise.
int sign_of(const GkpLattice& lat, const LogicalFrame& frame, const GaugeState& gs,
            const Vec& p, double tol = 1e-6);

// Physicality constraint: 2 A^{-1} mu = 0 mod 2 over exact rationals.
bool validate_gauge(const GkpLattice& lat, const IVec& mu);

// Gauge after the physical translation T(tau/2), tau in Lambda:
// mu' = mu + S Omega tau, upsilon' = upsilon + L0 Omega tau (mod 2).
GaugeState update_after_translation(const GkpLattice& lat, const LogicalFrame& frame,
                                    const GaugeState& gs, const Vec& tau,
                                    double tol = 1e-6);

// Lattice vector tau with update_after_translation reaching mu_target:
// tau = -Omega S^{-1} ((mu_target + mu) mod 2).
Vec gauge_setting_translation(const GkpLattice& lat, const IVec& mu,
                              const IVec& mu_target);

// Gauge after a Gaussian U(M) that is a lattice symmetry (S M^T S^{-1}
// integral). M_L is the induced signed permutation on (X,Y,Z).
GaugeState update_after_gaussian(const GkpLattice& lat, const LogicalFrame& frame,
                                 const GaugeState& gs, const Mat& M,
                                 const IMat& M_L);

// mu in the new basis S' = R S (also covers splitting with |det R| > 1):
// mu' = R mu + diag(R Adn R^T) mod 2.
IVec update_after_basis_change(const GkpLattice& lat, const IMat& R, const IVec& mu);

// upsilon for a changed frame L0' of the same lattice/state: each entry is the
// tracked sign of the new representative evaluated in the old frame.
IVec upsilon_after_frame_change(const GkpLattice& lat, const LogicalFrame& old_frame,
                                const GaugeState& gs, const Mat& L0_new);

// strictly lower-triangular part of A
IMat lower_part(const IMat& A);

}  // namespace gridcode
