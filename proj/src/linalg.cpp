#include "qdbell/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qdbell::linalg {

double max_abs(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = max_abs(m);
    return max_abs(m - m.adjoint()) <= rel_tol * scale;
}

bool is_unitary(const ComplexMatrix& u, double tol) {
    if (u.rows() != u.cols()) return false;
    const ComplexMatrix gram = u.adjoint() * u;
    return max_abs(gram - ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a * b - b * a;
}

AngularMomentumOps angular_momentum_ops(double j) {
    const double two_j = 2.0 * j;
    const double rounded = std::round(two_j);
    if (j < 0.0 || std::abs(two_j - rounded) > 1e-9) {
        throw std::invalid_argument("angular_momentum_ops: 2j must be a nonnegative integer");
    }
    const int dim = static_cast<int>(rounded) + 1;

    AngularMomentumOps ops;
    ops.jp = ComplexMatrix::Zero(dim, dim);
    ops.jz = ComplexMatrix::Zero(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const double m = -j + r;
        ops.jz(r, r) = m;
        if (r + 1 < dim) {
            ops.jp(r + 1, r) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
        }
    }
    ops.jm = ops.jp.adjoint();
    return ops;
}

FockOps fock_ops(int n_max) {
    if (n_max < 0) throw std::invalid_argument("fock_ops: n_max must be nonnegative");
    const int dim = n_max + 1;
    FockOps ops;
    ops.a = ComplexMatrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        ops.a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    ops.a_dag = ops.a.adjoint();
    return ops;
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            out.block(i * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(i, k) * b;
        }
    }
    return out;
}

namespace {

// Rotate the global phase so the first component above the noise floor is
// real positive.
void normalize_phase(Eigen::Ref<ComplexVector> v) {
    const double floor = 1e-12 * v.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > floor) {
            v *= std::conj(v(i)) / mag;
            v(i) = Complex(std::abs(v(i)), 0.0); // kill the rounding residue
            return;
        }
    }
}

bool lex_less(const ComplexVector& a, const ComplexVector& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
        if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
    }
    return false;
}

} // namespace

HermitianEig hermitian_eig(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("hermitian_eig: matrix must be square");
    }
    if (!is_hermitian(m, 1e-10)) {
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()));
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eig: eigensolver failed to converge");
    }

    HermitianEig eig;
    eig.values = solver.eigenvalues();
    eig.vectors = solver.eigenvectors();
    for (Eigen::Index k = 0; k < eig.vectors.cols(); ++k) {
        normalize_phase(eig.vectors.col(k));
    }

    // Ascending eigenvalues; exact ties broken by the normalized vectors so
    // the labeling of degenerate subspaces is reproducible.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(eig.values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index p, Eigen::Index q) {
        if (eig.values(p) != eig.values(q)) return eig.values(p) < eig.values(q);
        return lex_less(eig.vectors.col(p), eig.vectors.col(q));
    });

    HermitianEig sorted;
    sorted.values.resize(eig.values.size());
    sorted.vectors.resize(eig.vectors.rows(), eig.vectors.cols());
    for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
        sorted.values(k) = eig.values(order[static_cast<std::size_t>(k)]);
        sorted.vectors.col(k) = eig.vectors.col(order[static_cast<std::size_t>(k)]);
    }
    return sorted;
}

ComplexVector propagate(const HermitianEig& eig, const ComplexVector& v, double t) {
    ComplexVector coeffs = eig.vectors.adjoint() * v;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
        coeffs(k) *= std::exp(Complex(0.0, -eig.values(k) * t));
    }
    return eig.vectors * coeffs;
}

} // namespace qdbell::linalg
