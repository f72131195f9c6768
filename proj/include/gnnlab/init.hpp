#pragma once

#include <string>

#include "gnnlab/linalg.hpp"

namespace gnnlab {

enum class InitKind {
    XavierNormal,
    XavierUniform,
    KaimingNormal,
    KaimingUniform,
    GInit,
};

struct InitScheme {
    InitKind kind = InitKind::GInit;
    double d = 2.0;  // GInit only

    static InitScheme from_name(const std::string& name, double ginit_d = 2.0);
    std::string name() const;
};

/// Standard deviation of the weight law for the given fan-in. Uniform
/// variants report the std of their uniform law (limit / sqrt(3)).
double target_std(const InitScheme& scheme, std::size_t fan);

/// Weight matrix sample; fan = rows (fan-in).
DenseMatrix sample_weight(RngStream& rng, const InitScheme& scheme,
                          std::size_t rows, std::size_t cols);

/// Predicted eigenvalue-disk radius sigma * sqrt(n) of an n x n weight matrix.
double predicted_disk_radius(const InitScheme& scheme, std::size_t n);

}  // namespace gnnlab
