#pragma once

#include "ranklab/dynamics.hpp"
#include "ranklab/rng.hpp"

namespace ranklab {

enum class InitKind { Gaussian, Orthogonal };

const char* to_string(InitKind k);

// Knobs for seeded random model construction. Weight entries are Gaussian
// with standard deviation init_scale/sqrt(d); the orthogonal option projects
// a Gaussian draw onto the orthogonal group by flattening its singular
// values to 1.
struct GenOptions {
    MixingKind block = MixingKind::Selective;
    int n = 8;
    int d = 8;
    int k_layers = 24;
    double lambda = 1.0;
    bool layernorm = true;
    bool gating = false;
    InitKind init = InitKind::Gaussian;
    double init_scale = 1.0;
    bool shared_weights = false;  // same mixing weights at every layer
};

Matrix random_gaussian(int rows, int cols, double stddev, SplitMix64& rng);
Matrix random_orthogonal(int d, SplitMix64& rng);

MixingSpec random_mixing(const GenOptions& opt, SplitMix64& rng);
ModelSpec random_model(const GenOptions& opt, SplitMix64& rng);

// Gaussian input sequence, entries N(0, scale^2).
Matrix random_input(int n, int d, double scale, SplitMix64& rng);

}  // namespace ranklab
