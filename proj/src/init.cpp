#include "gnnlab/init.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

namespace gnnlab {

InitScheme InitScheme::from_name(const std::string& name, double ginit_d) {
    if (name == "xavier-normal") return {InitKind::XavierNormal};
    if (name == "xavier-uniform") return {InitKind::XavierUniform};
    if (name == "kaiming-normal") return {InitKind::KaimingNormal};
    if (name == "kaiming-uniform") return {InitKind::KaimingUniform};
    if (name == "g-init") {
        if (!(ginit_d > 1.0 && ginit_d <= 2.0)) {
            std::cerr << "warning: g-init d=" << ginit_d
                      << " outside the recommended (1, 2] range\n";
        }
        return {InitKind::GInit, ginit_d};
    }
    throw std::invalid_argument("unknown init scheme: " + name);
}

std::string InitScheme::name() const {
    switch (kind) {
        case InitKind::XavierNormal: return "xavier-normal";
        case InitKind::XavierUniform: return "xavier-uniform";
        case InitKind::KaimingNormal: return "kaiming-normal";
        case InitKind::KaimingUniform: return "kaiming-uniform";
        case InitKind::GInit: return "g-init";
    }
    return "?";
}

double target_std(const InitScheme& scheme, std::size_t fan) {
    if (fan == 0) throw std::invalid_argument("target_std: fan == 0");
    const double f = static_cast<double>(fan);
    switch (scheme.kind) {
        case InitKind::XavierNormal: return std::sqrt(1.0 / f);
        case InitKind::XavierUniform: return std::sqrt(3.0 / f) / std::sqrt(3.0);
        case InitKind::KaimingNormal: return std::sqrt(2.0 / f);
        case InitKind::KaimingUniform: return std::sqrt(6.0 / f) / std::sqrt(3.0);
        case InitKind::GInit: return std::sqrt(2.0 * scheme.d / f);
    }
    throw std::logic_error("target_std: bad scheme");
}

DenseMatrix sample_weight(RngStream& rng, const InitScheme& scheme,
                          std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("sample_weight: empty shape");
    const std::size_t fan = rows;
    switch (scheme.kind) {
        case InitKind::XavierUniform: {
            const double limit = std::sqrt(3.0 / static_cast<double>(fan));
            return sample_uniform(rng, rows, cols, -limit, limit);
        }
        case InitKind::KaimingUniform: {
            const double limit = std::sqrt(6.0 / static_cast<double>(fan));
            return sample_uniform(rng, rows, cols, -limit, limit);
        }
        default:
            return sample_gaussian(rng, rows, cols, 0.0, target_std(scheme, fan));
    }
}

double predicted_disk_radius(const InitScheme& scheme, std::size_t n) {
    return target_std(scheme, n) * std::sqrt(static_cast<double>(n));
}

}  // namespace gnnlab
