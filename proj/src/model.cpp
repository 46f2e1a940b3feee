#include "qdbell/model.hpp"

#include <cmath>
#include <stdexcept>

namespace qdbell::model {

void ModelParams::validate() const {
    if (!std::isfinite(band_gap) || !std::isfinite(interdot) || !std::isfinite(laser_freq) ||
        !std::isfinite(drive) || !std::isfinite(dephasing) || !std::isfinite(alpha)) {
        throw std::invalid_argument("ModelParams: parameters must be finite");
    }
    if (dephasing < 0.0) throw std::invalid_argument("ModelParams: dephasing rate must be >= 0");
    if (alpha < 0.0) throw std::invalid_argument("ModelParams: alpha must be >= 0");
    if (fock_cutoff < 0) throw std::invalid_argument("ModelParams: fock_cutoff must be >= 0");
}

int default_fock_truncation(double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("default_fock_truncation: alpha must be >= 0");
    return static_cast<int>(std::ceil(alpha * alpha + 8.0 * alpha + 10.0));
}

std::vector<double> poisson_weights(double alpha, int n_max) {
    if (n_max < 0) throw std::invalid_argument("poisson_weights: n_max must be >= 0");
    std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (alpha == 0.0) {
        w[0] = 1.0;
        return w;
    }
    const double mean = alpha * alpha;
    const double log_mean = std::log(mean);
    for (int m = 0; m <= n_max; ++m) {
        // log P(m) = -alpha^2 + m log(alpha^2) - log m!
        w[static_cast<std::size_t>(m)] = std::exp(-mean + m * log_mean - std::lgamma(m + 1.0));
    }
    return w;
}

double poisson_tail(double alpha, int n_max) {
    const auto w = poisson_weights(alpha, n_max);
    double covered = 0.0;
    for (double p : w) covered += p;
    return std::max(0.0, 1.0 - covered);
}

EnergyLevels energies(const ModelParams& params) {
    if (params.energy_override) return *params.energy_override;
    const double e = params.band_gap;
    const double w = params.interdot;
    const double omega = params.laser_freq;
    return EnergyLevels{w - e + 0.5 * omega, 2.0 * w - 0.5 * omega, w + e + 0.5 * omega};
}

int composite_index(int exciton, int photon, int n_max) {
    if (exciton < 0 || exciton > 2) throw std::invalid_argument("composite_index: exciton level out of range");
    if (photon < 0 || photon > n_max) throw std::invalid_argument("composite_index: photon number out of range");
    return exciton * (n_max + 1) + photon;
}

SectorIndices sector_indices(int n, int n_max) {
    if (n < 0 || n >= n_max) throw std::invalid_argument("sector_indices: need 0 <= n < n_max");
    return SectorIndices{
        composite_index(1, n, n_max),
        composite_index(0, n + 1, n_max),
        composite_index(2, n + 1, n_max),
    };
}

ComplexMatrix block_hamiltonian(const ModelParams& params, int n) {
    if (n < 0) throw std::invalid_argument("block_hamiltonian: n must be >= 0");
    const auto [e0, e1, e2] = energies(params);
    // factored as in the composite-space construction so the sector block of
    // full_hamiltonian matches this matrix exactly, not just to rounding
    const double g = (std::sqrt(2.0) * params.drive) * std::sqrt(n + 1.0);
    ComplexMatrix h = ComplexMatrix::Zero(3, 3);
    h(0, 0) = e1;
    h(1, 1) = e0;
    h(2, 2) = e2;
    h(0, 1) = h(1, 0) = g;
    h(0, 2) = h(2, 0) = g;
    return h;
}

ComplexMatrix full_hamiltonian(const ModelParams& params, int n_max) {
    if (n_max < 1) throw std::invalid_argument("full_hamiltonian: n_max must be >= 1");
    const auto [e0, e1, e2] = energies(params);

    const auto fock = linalg::fock_ops(n_max);
    const int photon_dim = n_max + 1;
    const ComplexMatrix photon_id = ComplexMatrix::Identity(photon_dim, photon_dim);

    ComplexMatrix exciton_diag = ComplexMatrix::Zero(3, 3);
    exciton_diag(0, 0) = e0;
    exciton_diag(1, 1) = e1;
    exciton_diag(2, 2) = e2;

    // |1><0| + |1><2| on the exciton factor
    ComplexMatrix raise_to_one = ComplexMatrix::Zero(3, 3);
    raise_to_one(1, 0) = 1.0;
    raise_to_one(1, 2) = 1.0;

    const double root2_a = std::sqrt(2.0) * params.drive;
    ComplexMatrix h = linalg::tensor_product(exciton_diag, photon_id);
    const ComplexMatrix coupling = root2_a * linalg::tensor_product(raise_to_one, fock.a);
    h += coupling + coupling.adjoint();
    return h;
}

ComplexMatrix full_hamiltonian(const ModelParams& params) {
    return full_hamiltonian(params, params.fock_cutoff);
}

ComplexMatrix jz_full(int n_max) {
    const int photon_dim = n_max + 1;
    ComplexMatrix jz = ComplexMatrix::Zero(3, 3);
    jz(0, 0) = -1.0;
    jz(2, 2) = 1.0;
    return linalg::tensor_product(jz, ComplexMatrix::Identity(photon_dim, photon_dim));
}

double DressedBlock::energy(Dressed a) const {
    switch (a) {
        case Dressed::Dark: return e_dark;
        case Dressed::Plus: return e_plus;
        case Dressed::Minus: return e_minus;
    }
    throw std::logic_error("DressedBlock::energy: bad label");
}

double DressedBlock::coeff(Dressed a, int exciton_level) const {
    // Block columns are (|1,n>, |0,n+1>, |2,n+1>).
    int col;
    switch (exciton_level) {
        case 0: col = 1; break;
        case 1: col = 0; break;
        case 2: col = 2; break;
        default: throw std::invalid_argument("DressedBlock::coeff: exciton level out of range");
    }
    return rows(static_cast<int>(a), col);
}

DressedBlock dressed_block(const ModelParams& params, int n) {
    if (n < 0) throw std::invalid_argument("dressed_block: n must be >= 0");
    const auto [e0, e1, e2] = energies(params);

    DressedBlock block;
    block.n = n;
    block.omega1 = std::sqrt(2.0 * (n + 1.0)) * params.drive;
    const double detuning = e1 - e0;
    block.omega = std::sqrt(8.0 * block.omega1 * block.omega1 + detuning * detuning);

    const double scale = std::max({std::abs(e0), std::abs(e2), block.omega});
    if (std::abs(e0 - e2) > 1e-9 * scale) {
        throw std::invalid_argument(
            "dressed_block: requires E0 = E2 (the dark-state structure breaks otherwise)");
    }

    block.theta = std::atan2(2.0 * std::sqrt(2.0) * block.omega1, detuning);
    block.e_dark = e0;
    block.e_plus = e0 + block.omega * (std::cos(block.theta) + 1.0) / 2.0;
    block.e_minus = e0 + block.omega * (std::cos(block.theta) - 1.0) / 2.0;

    const double half = 0.5 * block.theta;
    const double s = std::sin(half);
    const double c = std::cos(half);
    const double r = std::sqrt(2.0) / 2.0;
    block.rows <<
        0.0,     r,        -r,
        c,       r * s,     r * s,
        s,      -r * c,    -r * c;
    return block;
}

double mean_rabi_frequency(const ModelParams& params) {
    if (params.fock_cutoff < 1) {
        throw std::invalid_argument("mean_rabi_frequency: needs at least one coupled sector");
    }
    const auto weights = poisson_weights(params.alpha, params.fock_cutoff);
    const auto [e0, e1, e2] = energies(params);
    const double detuning = e1 - e0;
    double wsum = 0.0;
    double acc = 0.0;
    for (int n = 0; n + 1 <= params.fock_cutoff; ++n) {
        const double w = weights[static_cast<std::size_t>(n) + 1];
        const double omega1 = std::sqrt(2.0 * (n + 1.0)) * params.drive;
        acc += w * std::sqrt(8.0 * omega1 * omega1 + detuning * detuning);
        wsum += w;
    }
    if (wsum <= 0.0) {
        // Vacuum field: fall back to the n = 0 sector splitting.
        const double omega1 = std::sqrt(2.0) * params.drive;
        return std::sqrt(8.0 * omega1 * omega1 + detuning * detuning);
    }
    return acc / wsum;
}

} // namespace qdbell::model
