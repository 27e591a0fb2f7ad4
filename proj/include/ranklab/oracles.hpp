#pragma once

#include "ranklab/dynamics.hpp"
#include "ranklab/matrix.hpp"

namespace ranklab {

// Two analytically solvable two-token systems used as ground truth against
// the general simulator. Both run with LayerNorm on and N = d = 2.
//
//   StructuredLtiPair: fixed mixing [[1,0],[2,1]], input I2. The state is
//   parametrised by a scalar alpha_k >= 1.
//
//   SelectivePair: selective mixing with unit decay and identity
//   projections, input [[1,0],[a0,b0]/norm]. The second row has an explicit
//   power form in (2+lambda) and (1+lambda).
enum class CounterexampleSystem { StructuredLtiPair, SelectivePair };

struct CounterexampleSpec {
    CounterexampleSystem system = CounterexampleSystem::StructuredLtiPair;
    double lambda = 0.0;
    double alpha0 = 1.0;  // SelectivePair only, must be > 0
    double beta0 = 0.0;   // SelectivePair only
};

// One step of the scalar recurrence for the structured-LTI pair:
//   alpha' = alpha (1 + 4/(1+lambda)^2) + (4/(1+lambda)) sqrt(alpha-1) sqrt(alpha).
// Throws LambdaSingular at lambda == -1 and DomainError when alpha < 1.
double lti_pair_alpha_step(double alpha_k, double lambda);

// Closed-form state of the structured-LTI pair after k layers:
//   [[1, 0], [sqrt((a_k-1)/a_k), 1/sqrt(a_k)]],  a_0 = 1.
// Valid as the simulated trajectory only for lambda > -1; for
// lambda < -1 row-normalisation flips row signs that this form cannot
// represent (see oracle_vs_simulator).
Matrix lti_pair_state(int k, double lambda);

// Closed-form state of the selective pair after k layers. The second row is
//   ((2+l)^k a0, (1+l)^k b0) / sqrt((2+l)^(2k) a0^2 + (1+l)^(2k) b0^2)
// and the first row is sign(1+l)^k * (1, 0): row-normalisation preserves
// the sign of (1+l), so the first row alternates when 1+l < 0.
Matrix selective_pair_state(int k, double lambda, double alpha0, double beta0);

// Builds the model the closed forms describe.
ModelSpec counterexample_model(const CounterexampleSpec& spec, int big_k);

// Initial state fed to both routes.
Matrix counterexample_input(const CounterexampleSpec& spec);

// Runs the general simulator against the closed form for k <= big_k and
// returns the worst entrywise deviation.
double oracle_vs_simulator(const CounterexampleSpec& spec, int big_k);

}  // namespace ranklab
