// model.hpp — Physical parameters, the exciton-photon Hamiltonian of the two
// coupled quantum dots, and its dressed eigensystem.
//
// Exciton basis (two dots, J = 1): |0> vacuum (M = -1), |1> single exciton
// (M = 0), |2> biexciton (M = +1). Composite basis ordering is exciton index
// slow, photon index fast, so |i,n> sits at index i*(n_max+1) + n.
//
// All quantities are in angular-frequency units with hbar = 1; the CLI layer
// normalizes its inputs so the laser frequency is 1 and the numbers handled
// here stay O(1).

#pragma once

#include "qdbell/linalg.hpp"

#include <optional>
#include <vector>

namespace qdbell::model {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

// --------------------------- parameters --------------------------------------

struct EnergyLevels {
    double e0; // exciton vacuum
    double e1; // single exciton
    double e2; // biexciton
};

struct ModelParams {
    double band_gap = 0.0;        // e
    double interdot = 0.1;        // W, interdot interaction
    double laser_freq = 1.0;      // omega
    double drive = 0.04;          // A, real drive amplitude (coupling x field)
    double dephasing = 0.0;       // Gamma, pure-dephasing rate
    double alpha = 5.0;           // coherent-state amplitude of the field
    int fock_cutoff = 75;         // n_max

    // When set, replaces the derived (E0, E1, E2); lets the E0 = E2 regime be
    // reached with arbitrary level placement.
    std::optional<EnergyLevels> energy_override;

    // Throws std::invalid_argument when a field is outside its domain.
    void validate() const;
};

// Smallest cutoff keeping the Poisson tail mass below ~1e-10 for alpha <= 10:
// ceil(alpha^2 + 8*alpha + 10).
int default_fock_truncation(double alpha);

// Poisson photon-number probabilities P(0..n_max) for a coherent field, and
// the truncated tail mass sum_{m > n_max} P(m).
std::vector<double> poisson_weights(double alpha, int n_max);
double poisson_tail(double alpha, int n_max);

// (E0, E1, E2): the override when present, otherwise
// E0 = W - e + omega/2, E1 = 2W - omega/2, E2 = W + e + omega/2.
EnergyLevels energies(const ModelParams& params);

// --------------------------- composite-space layout ---------------------------

inline int composite_dim(int n_max) { return 3 * (n_max + 1); }
int composite_index(int exciton, int photon, int n_max);

// Photon sector n couples |1,n>, |0,n+1>, |2,n+1>; valid for 0 <= n < n_max.
struct SectorIndices {
    int one_n;
    int zero_np1;
    int two_np1;
};
SectorIndices sector_indices(int n, int n_max);

// --------------------------- Hamiltonians ------------------------------------

// 3x3 sector Hamiltonian in basis order (|1,n>, |0,n+1>, |2,n+1>):
// diagonal (E1, E0, E2), coupling sqrt(2(n+1))*A between |1,n> and each of
// |0,n+1>, |2,n+1>.
ComplexMatrix block_hamiltonian(const ModelParams& params, int n);

// Full Hamiltonian on the 3*(n_max+1)-dimensional composite space:
//   sum_i E_i |i><i| ⊗ I  +  sqrt(2) A [ (|1><0| + |1><2|) ⊗ a + h.c. ].
ComplexMatrix full_hamiltonian(const ModelParams& params, int n_max);
ComplexMatrix full_hamiltonian(const ModelParams& params); // uses params.fock_cutoff

// Jz ⊗ I on the composite space (Jz = diag(-1, 0, +1) on the exciton factor).
ComplexMatrix jz_full(int n_max);

// --------------------------- dressed eigensystem ------------------------------

enum class Dressed { Dark = 0, Plus = 1, Minus = 2 };

// Eigensystem of one photon sector in the E0 = E2 regime.
//
// With Omega1 = sqrt(2(n+1))*A, Omega = sqrt(8*Omega1^2 + (E1-E0)^2) and
// theta = atan2(2*sqrt(2)*Omega1, E1-E0):
//   E_dark = E0,  E_± = E0 + Omega*(cos(theta) ± 1)/2,
// and the eigenrows over (|1,n>, |0,n+1>, |2,n+1>) are
//   dark  = (0,           sqrt2/2,            -sqrt2/2)
//   plus  = (cos(t/2),    sqrt2/2 sin(t/2),    sqrt2/2 sin(t/2))
//   minus = (sin(t/2),   -sqrt2/2 cos(t/2),   -sqrt2/2 cos(t/2)).
// The dark row has no |1,n> component, so it evolves by phase only.
struct DressedBlock {
    int n = 0;
    double omega1 = 0.0;
    double omega = 0.0;  // splitting E_plus - E_minus (Rabi frequency)
    double theta = 0.0;
    double e_dark = 0.0;
    double e_plus = 0.0;
    double e_minus = 0.0;
    Eigen::Matrix3d rows; // row a in {dark, plus, minus}; block basis columns

    double energy(Dressed a) const;
    // B_{a,i} with i the exciton label (0, 1, 2), i.e. the coefficient of
    // |i, n or n+1> in |E_a>.
    double coeff(Dressed a, int exciton_level) const;
};

// Throws std::invalid_argument unless |E0 - E2| <= 1e-9 * max(|E0|, |E2|, Omega),
// the regime in which the dark-state structure holds.
DressedBlock dressed_block(const ModelParams& params, int n);

// Poisson-weighted mean Rabi frequency over the populated sectors; sets the
// collapse/revival envelope window.
double mean_rabi_frequency(const ModelParams& params);

} // namespace qdbell::model
