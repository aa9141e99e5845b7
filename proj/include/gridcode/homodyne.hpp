#pragma once

#include "gridcode/lattice.hpp"

#include <cstdint>

namespace gridcode {

struct NoiseModel {
    double sigma = 0.1;
    bool noisy_ancilla = false;
    double db() const;                      // 10 log10((1/2)/sigma^2)
    static NoiseModel from_db(double db, bool noisy = false);
};

struct DecodeOutcome {
    Vec syndrome;        // xi, 2m entries in (-pi, pi]
    Vec correction;      // delta
    char residual_class = 'I';
    bool success = true;
};

// xi = -l^2 S Omega e mod 2pi in (-pi, pi]; correction delta with
// e + delta in the dual lattice exactly.
DecodeOutcome syndrome_and_correct(const GkpLattice& lat, const Vec& e);

// fills residual_class/success from the dual residual e + delta
DecodeOutcome classify_residual(const GkpLattice& lat, const LogicalFrame& frame,
                                const Vec& e, const Vec& delta);

// single decode under the noisy-ancilla model (sequential syndromes)
bool noisy_trial_success(const GkpLattice& lat, const LogicalFrame& frame,
                         const NoiseModel& noise, Vec e, std::uint64_t seed,
                         std::uint64_t trial);

struct TrialResult {
    double p_logical = 0;
    double stderr_ = 0;
    long trials = 0;
};
TrialResult run_trials(const GkpLattice& lat, const LogicalFrame& frame,
                       const NoiseModel& noise, long trials, std::uint64_t seed,
                       int threads = 1);

}  // namespace gridcode
