#pragma once

#include <optional>
#include <vector>

#include "gauge.hpp"
#include "lattice.hpp"
#include "rng.hpp"
#include "types.hpp"

namespace gridcode {

// truncated Fock-space state over one or two oscillator modes, with an
// optional two-level ancilla tacked on as the fastest-varying index.
// ancilla basis: index 0 = |g>, index 1 = |e>.
struct FockState {
    std::vector<int> dims;  // per-mode cutoffs
    bool has_ancilla = false;
    CVec amp;

    long total_dim() const;
    static FockState vacuum(std::vector<int> dims, bool ancilla);
    double norm() const;
    void normalize();
    // population in the top `frac` fraction of levels of any mode
    double leakage(double frac = 0.1) const;
};

// single-mode operators -----------------------------------------------------

CMat displacement_matrix(int n, cplx alpha);  // cached
CMat annihilation_matrix(int n);

void apply_mode_op(FockState& st, int mode, const CMat& u, int anc_branch = -1);
// diag(i) phase factors, i = fock level of `mode`
void apply_mode_diag(FockState& st, int mode, const CVec& d, int anc_branch = -1);
void apply_two_mode_diag(FockState& st, int ma, int mb, const CMat& d);
void apply_ancilla_op(FockState& st, const Eigen::Matrix2cd& u);

// multimode translation T(v) = exp{ i l x^T Omega v }, alpha_j = l(v_{2j} + i v_{2j+1})/sqrt(2)
void apply_translation(FockState& st, const Vec& v);
// controlled translation CT(v) = exp{ i (sigma_z/2) l x^T Omega v }:
// T(+v/2) on |g>, T(-v/2) on |e>
void apply_controlled_translation(FockState& st, const Vec& v);
// ancilla rotation exp{-i theta sigma_y / 2}
void apply_ancilla_ry(FockState& st, double theta);
void apply_ancilla_x(FockState& st);

// Gaussian unitary for symplectic M acting on the listed modes
// (M is 2k x 2k for k = modes.size())
void apply_gaussian(FockState& st, const std::vector<int>& modes, const Mat& m);

void apply_kerr(FockState& st, int mode, double theta);              // exp{i theta n^2}
void apply_cross_kerr(FockState& st, int ma, int mb, double theta);  // exp{i theta na nb}
void apply_rotation(FockState& st, int mode, double theta);          // exp{i theta n}

// finite-energy envelope exp{-beta n_total}
void apply_envelope(FockState& st, double beta, bool renorm = true);

// amplitude damping channel on one mode, trajectory-sampled: picks a Kraus
// branch K_k with probability ||K_k psi||^2 and returns k.
int apply_amplitude_damping(FockState& st, int mode, double gamma, Rng& rng);

// measure the ancilla in the z basis, collapse, reset to |g>; returns 0/1
int measure_reset_ancilla(FockState& st, Rng& rng);

// codewords ------------------------------------------------------------------

// finite-energy codeword: sum over lattice translates (optionally offset by a
// Pauli representative) of displaced vacua with analytic envelope weights.
// `pauli` = 'I' for the +1 eigenstate picked out by the gauge alone, or one of
// the frame classes to superpose the p0-shifted coset with its nu^P sign.
// `extra_seed` optionally shifts the seed displacement (on top of the one the
// gauge requires); use it to pick the other image of a degenerate projector,
// e.g. a logical-Y offset for the negative Hadamard eigenstate.
FockState build_codeword(const CodeBundle& code, char pauli, double beta,
                         const std::vector<int>& dims, bool ancilla,
                         double radius_factor = 3.0, const Vec& extra_seed = Vec());

// <psi| E_beta T(v) E_beta^{-1} |psi> with a top-level guard projection before
// the inverse envelope (keeps the amplified tail from dominating)
cplx expectation_t(const FockState& st, const Vec& v, double beta);

// sBs stabilization ----------------------------------------------------------

struct SbsOptions {
    double epsilon = 0.1;
    // decay injection: with probability (eps,1,eps)/(1+2eps) pick one of the
    // three CT segments and interrupt it with an ancilla flip at a uniform time
    bool inject_decay = false;
};

// one small-big-small round for stabilizer row j of code.lat.S.
// mu_j is the current gauge bit for that stabilizer (controls the final
// small-step sign). returns the ancilla outcome.
int sbs_round(FockState& st, const GkpLattice& lat, int j, int mu_j,
              const SbsOptions& opt, Rng& rng);

// prepare a Pauli eigenstate, hit it with T(e), stabilize for `cycles` full
// generator sweeps, read the tracked logical back out. Returns the flip
// probability over `trials` trajectories.
struct FlipEstimate {
    double p = 0;
    double stderr_ = 0;
};
FlipEstimate quantum_error_prob(const CodeBundle& code, char pauli, const Vec& e,
                                double epsilon, int cycles, int trials,
                                std::uint64_t seed, const std::vector<int>& dims,
                                int threads = 1);

// P(logical error | one ancilla decay during a random sBs round), averaged
// over the three Pauli preparations (sum of flip probabilities / 2).
FlipEstimate decay_error_prob(const CodeBundle& code, double epsilon,
                              int settle_cycles, int recover_cycles,
                              int trials_per_pauli, std::uint64_t seed,
                              const std::vector<int>& dims, int threads = 1);

// convenience driver owning state + gauge bookkeeping
struct SbsDriver {
    CodeBundle code;
    std::vector<int> dims;
    double epsilon;
    double beta;  // arcsinh(2 eps)
    FockState state;

    SbsDriver(CodeBundle c, std::vector<int> d, double eps);

    void prepare(char pauli);
    // run one sBs round on stabilizer j (also advances the gauge)
    int round(int j, const SbsOptions& opt, Rng& rng);
    // gauge-corrected stabilizer expectation (-1)^{mu_j} Re<T_beta(s_j)>
    double stabilizer_expectation(int j) const;
    // gauge-corrected logical expectation for a frame class
    double pauli_expectation(char pauli) const;
};

}  // namespace gridcode
