#pragma once

#include "gridcode/lattice.hpp"

#include <cstdint>
#include <vector>

namespace gridcode {

struct FlowConfig {
    double step = 0.01;
    long max_steps = 100000;
    double convergence_tol = 1e-9;
};

struct SmearConfig {
    double epsilon = 0.1;
    int mc_samples = 20000;
    double sigma() const;  // sqrt(tanh(arcsinh(2 eps)/2))
};

// Fixed point of the modular gradient flow starting at e.
// Throws a flow-stalled error on (measure-zero) separatrices.
Vec flow_relax(const GkpLattice& lat, const Vec& e, const FlowConfig& cfg = {});

// Pauli class of the dual point the flow relaxes to.
char classify_error(const GkpLattice& lat, const LogicalFrame& frame, const Vec& e,
                    const FlowConfig& cfg = {});

struct ProbEstimate {
    double estimate = 0;
    double stderr_ = 0;
    int samples = 0;
};

// P(logical error) for a Gaussian-smeared error centered at e.
ProbEstimate smeared_error_prob(const GkpLattice& lat, const LogicalFrame& frame,
                                const Vec& e, const SmearConfig& smear,
                                std::uint64_t seed, int threads = 1);

// Integrated error probability for an ancilla decay at a uniform point along
// the controlled translation toward s_j; `waypoints` inserts intermediate
// stops (zig-zag paths): the path is 0 -> w1 -> ... -> s_j.
ProbEstimate ancilla_decay_error_prob(const GkpLattice& lat, const LogicalFrame& frame,
                                      int j, const SmearConfig& smear,
                                      const std::vector<Vec>& waypoints,
                                      std::uint64_t seed, int threads = 1);

// classify_error over a grid spanning [-0.25, 1.25]^2 in (s_i, s_j)
// coordinates; stalled points labeled 'B'.
struct GridCell {
    double u, v;
    char label;
};
std::vector<GridCell> error_map_grid(const GkpLattice& lat, const LogicalFrame& frame,
                                     int i, int j, int resolution);

// eigenvalues of l^2 Omega^T S^T S Omega, non-decreasing
Vec hessian_rates(const GkpLattice& lat);

}  // namespace gridcode
