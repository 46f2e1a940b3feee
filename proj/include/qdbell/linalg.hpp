// linalg.hpp — Dense complex linear algebra and the angular-momentum /
// photon-mode operators the rest of the library is built from.
//
// Conventions fixed here and used everywhere else:
//   * angular-momentum basis ordered by M ascending (M = -j ... +j),
//   * Fock basis |0> ... |n_max>,
//   * tensor products put the LEFT factor on the slow index:
//     (A ⊗ B)[i*dim(B)+k][j*dim(B)+l] = A[i][j] * B[k][l].

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace qdbell::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// --------------------------- norms and predicates ----------------------------

// Largest entry magnitude (0 for an empty matrix).
double max_abs(const ComplexMatrix& m);

// max|M - M†| <= rel_tol * max|M|
bool is_hermitian(const ComplexMatrix& m, double rel_tol = 1e-12);

// max|U†U - I| <= tol
bool is_unitary(const ComplexMatrix& u, double tol = 1e-10);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

// --------------------------- operator construction ---------------------------

struct AngularMomentumOps {
    ComplexMatrix jp; // <M+1|J+|M> = sqrt(j(j+1) - M(M+1))
    ComplexMatrix jm; // J- = (J+)†
    ComplexMatrix jz; // diagonal, entries M
};

// Spin-j operators on the (2j+1)-dimensional space. Rejects j unless 2j is a
// nonnegative integer.
AngularMomentumOps angular_momentum_ops(double j);

struct FockOps {
    ComplexMatrix a;     // a|n> = sqrt(n)|n-1>
    ComplexMatrix a_dag; // a† = transpose-conjugate of a
};

// Truncated photon ladder operators on |0> ... |n_max>.
FockOps fock_ops(int n_max);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

// --------------------------- Hermitian eigensystem ---------------------------

struct HermitianEig {
    Eigen::VectorXd values;  // ascending
    ComplexMatrix vectors;   // orthonormal columns, vectors.col(k) <-> values[k]
};

// Eigendecomposition of a Hermitian matrix. Input must be Hermitian within
// 1e-10 * max|M| (throws std::invalid_argument otherwise).
//
// Output is deterministic: eigenvalues ascending; every eigenvector is
// phase-normalized so its first non-negligible component is real positive;
// exactly equal eigenvalues are ordered by lexicographic comparison of the
// normalized vectors.
HermitianEig hermitian_eig(const ComplexMatrix& m);

// exp(-i H t) v for Hermitian H given its precomputed eigensystem.
ComplexVector propagate(const HermitianEig& eig, const ComplexVector& v, double t);

} // namespace qdbell::linalg
