#include "qdbell/decoherence.hpp"

#include "qdbell/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace qdbell::decoherence {

ComplexMatrix dephasing_term(const DensityMatrix& rho, const ComplexMatrix& jz) {
    if (rho.rows() != jz.rows() || rho.cols() != jz.cols() || rho.rows() != rho.cols()) {
        throw std::invalid_argument("dephasing_term: dimension mismatch");
    }
    return jz * (jz * rho) - 2.0 * (jz * rho * jz) + (rho * jz) * jz;
}

ComplexMatrix block_jz() {
    ComplexMatrix jz = ComplexMatrix::Zero(3, 3);
    jz(1, 1) = -1.0; // |0,n+1>, M = -1
    jz(2, 2) = 1.0;  // |2,n+1>, M = +1
    return jz;
}

bool is_physical_density(const DensityMatrix& rho) {
    if (rho.rows() != rho.cols()) return false;
    if (!linalg::is_hermitian(rho, 1e-10)) return false;
    if (std::abs(rho.trace().real() - 1.0) > 1e-9 || std::abs(rho.trace().imag()) > 1e-9) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()));
    return solver.info() == Eigen::Success && solver.eigenvalues().minCoeff() >= -1e-8;
}

namespace {

void check_grid(std::span<const double> t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("time grid must be nonempty");
    if (t_grid.front() != 0.0) throw std::invalid_argument("time grid must start at t = 0");
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        if (!(t_grid[k] > t_grid[k - 1])) {
            throw std::invalid_argument("time grid must be strictly increasing");
        }
    }
}

double min_eigenvalue(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()),
                                                        Eigen::EigenvaluesOnly);
    return solver.info() == Eigen::Success ? solver.eigenvalues().minCoeff()
                                           : -std::numeric_limits<double>::infinity();
}

} // namespace

Trajectory integrate_master(const ComplexMatrix& h, const ComplexMatrix& jz, double gamma,
                            const DensityMatrix& rho0, std::span<const double> t_grid,
                            const ode::Options& opt) {
    if (gamma < 0.0) throw std::invalid_argument("integrate_master: gamma must be >= 0");
    if (!is_physical_density(rho0)) {
        throw std::invalid_argument("integrate_master: rho0 is not a physical density matrix");
    }
    check_grid(t_grid);

    const Complex minus_i(0.0, -1.0);
    auto rhs = [&](double, const ComplexMatrix& rho, ComplexMatrix& drho) {
        drho = minus_i * (h * rho - rho * h);
        if (gamma != 0.0) drho -= gamma * dephasing_term(rho, jz);
    };

    Trajectory traj;
    traj.times.assign(t_grid.begin(), t_grid.end());
    traj.states.reserve(t_grid.size());

    const double trace0 = rho0.trace().real();
    DensityMatrix rho = rho0;
    traj.states.push_back(rho);
    traj.min_eigenvalue = min_eigenvalue(rho);

    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        ode::integrate(rhs, rho, t_grid[k - 1], t_grid[k], opt);
        traj.states.push_back(rho);
        traj.max_trace_drift =
            std::max(traj.max_trace_drift, std::abs(rho.trace().real() - trace0));
        traj.min_eigenvalue = std::min(traj.min_eigenvalue, min_eigenvalue(rho));
    }
    if (traj.max_trace_drift > 1e-9) {
        throw NumericalError("integrate_master: trace drift exceeded 1e-9",
                             t_grid.back(), traj.max_trace_drift);
    }
    return traj;
}

Trajectory integrate_master(const ModelParams& params, const DensityMatrix& rho0,
                            std::span<const double> t_grid) {
    return integrate_master(model::full_hamiltonian(params), model::jz_full(params.fock_cutoff),
                            params.dephasing, rho0, t_grid);
}

Trajectory integrate_master_block(const ModelParams& params, int n, const DensityMatrix& rho0,
                                  std::span<const double> t_grid) {
    return integrate_master(model::block_hamiltonian(params, n), block_jz(), params.dephasing,
                            rho0, t_grid);
}

// --------------------------- perturbative hierarchy ----------------------------

namespace {

// out_ab = exp(sign * i (lambda_a - lambda_b) t) * m_ab
ComplexMatrix apply_phases(const ComplexMatrix& m, const Eigen::VectorXd& lambda, double sign,
                           double t) {
    ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
        for (Eigen::Index a = 0; a < m.rows(); ++a) {
            out(a, b) = m(a, b) * std::exp(Complex(0.0, sign * (lambda(a) - lambda(b)) * t));
        }
    }
    return out;
}

} // namespace

PerturbationSeries perturbative_hierarchy(const ComplexMatrix& h, const ComplexMatrix& jz,
                                          const DensityMatrix& rho0,
                                          std::span<const double> t_grid, int order,
                                          const quad::Options& opt) {
    if (order < 0 || order > 2) throw std::invalid_argument("perturbative_hierarchy: order in {0,1,2}");
    check_grid(t_grid);

    // Everything happens in the eigenbasis of H, where the unitary flow is an
    // elementwise phase and the interaction-picture integrals stay explicit.
    const linalg::HermitianEig eig = linalg::hermitian_eig(h);
    const ComplexMatrix k_op = eig.vectors.adjoint() * jz * eig.vectors;
    const ComplexMatrix k_sq = k_op * k_op;
    const ComplexMatrix r0 = eig.vectors.adjoint() * rho0 * eig.vectors;

    auto double_comm = [&](const ComplexMatrix& x) -> ComplexMatrix {
        return k_sq * x - 2.0 * (k_op * x * k_op) + x * k_sq;
    };
    auto rho_tilde_zero = [&](double tau) { return apply_phases(r0, eig.values, -1.0, tau); };

    // Interaction-picture source of rho1.
    auto g_one = [&](double tau) -> ComplexMatrix {
        return apply_phases(double_comm(rho_tilde_zero(tau)), eig.values, 1.0, tau);
    };

    PerturbationSeries series;
    series.order = order;
    series.times.assign(t_grid.begin(), t_grid.end());
    const Eigen::Index dim = h.rows();

    for (double t : t_grid) {
        series.rho_zero.push_back(eig.vectors * rho_tilde_zero(t) * eig.vectors.adjoint());
    }
    if (order == 0) return series;

    // Cumulative I(t_k) = ∫_0^{t_k} g_one; rho1 = -U (I∘phases) U†.
    std::vector<ComplexMatrix> accum_one;
    accum_one.reserve(t_grid.size());
    ComplexMatrix acc = ComplexMatrix::Zero(dim, dim);
    accum_one.push_back(acc);
    series.rho_one.push_back(ComplexMatrix::Zero(dim, dim));
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        quad::Info info;
        acc += quad::integrate(g_one, t_grid[k - 1], t_grid[k], opt, &info);
        series.quadrature_error += info.error_estimate;
        accum_one.push_back(acc);
        const ComplexMatrix rho1_tilde = -apply_phases(acc, eig.values, -1.0, t_grid[k]);
        series.rho_one.push_back(eig.vectors * rho1_tilde * eig.vectors.adjoint());
    }
    if (order == 1) return series;

    // rho1 at arbitrary tau: resume the cumulative integral from the nearest
    // grid point below tau.
    auto rho_tilde_one = [&](double tau) -> ComplexMatrix {
        std::size_t base = 0;
        for (std::size_t k = 1; k < t_grid.size() && t_grid[k] <= tau; ++k) base = k;
        ComplexMatrix integral = accum_one[base];
        if (tau > t_grid[base]) {
            integral += quad::integrate(g_one, t_grid[base], tau, opt);
        }
        return -apply_phases(integral, eig.values, -1.0, tau);
    };
    auto g_two = [&](double tau) -> ComplexMatrix {
        return apply_phases(double_comm(rho_tilde_one(tau)), eig.values, 1.0, tau);
    };

    ComplexMatrix acc2 = ComplexMatrix::Zero(dim, dim);
    series.rho_two.push_back(ComplexMatrix::Zero(dim, dim));
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
        quad::Info info;
        acc2 += quad::integrate(g_two, t_grid[k - 1], t_grid[k], opt, &info);
        series.quadrature_error += info.error_estimate;
        const ComplexMatrix rho2_tilde = -2.0 * apply_phases(acc2, eig.values, -1.0, t_grid[k]);
        series.rho_two.push_back(eig.vectors * rho2_tilde * eig.vectors.adjoint());
    }
    return series;
}

PerturbationSeries perturbative_hierarchy_block(const ModelParams& params, int n,
                                                std::span<const double> t_grid, int order) {
    DensityMatrix rho0 = DensityMatrix::Zero(3, 3);
    rho0(1, 1) = 1.0; // |0,n+1><0,n+1|
    return perturbative_hierarchy(model::block_hamiltonian(params, n), block_jz(), rho0, t_grid,
                                  order);
}

double expectation_expanded(const PerturbationSeries& series, std::size_t k, double gamma,
                            const ComplexMatrix& b) {
    if (k >= series.times.size()) throw std::invalid_argument("expectation_expanded: index out of range");
    if (!linalg::is_hermitian(b, 1e-10)) {
        throw std::invalid_argument("expectation_expanded: observable must be Hermitian");
    }
    double value = (series.rho_zero[k] * b).trace().real();
    if (series.order >= 1) value += gamma * (series.rho_one[k] * b).trace().real();
    if (series.order >= 2) value += 0.5 * gamma * gamma * (series.rho_two[k] * b).trace().real();
    return value;
}

// --------------------------- dressed-basis first order -------------------------

DressedFirstOrder rho1_dressed_elements(const ModelParams& params, int n, double t) {
    if (t < 0.0) throw std::invalid_argument("rho1_dressed_elements: t must be >= 0");
    const model::DressedBlock block = model::dressed_block(params, n);
    const double s = std::sin(0.5 * block.theta);
    const double c = std::cos(0.5 * block.theta);

    DressedFirstOrder out;
    out.f_dd_mean = 2.0 * s * s * c * c;
    if (t == 0.0) {
        out.rho1.setZero();
        out.rho1_parallel.setZero();
        out.rho1_numeric.setZero();
        return out;
    }

    // Exciton coherence of the unitary flow, <0,n+1|rho(tau,0)|2,n+1>.
    auto rho02 = [&](double tau) -> Complex {
        const auto amps = dynamics::psi_components(params, n, tau);
        return amps.c0 * std::conj(amps.c2);
    };

    const model::Dressed labels[3] = {model::Dressed::Dark, model::Dressed::Plus,
                                      model::Dressed::Minus};
    for (int ia = 0; ia < 3; ++ia) {
        for (int ib = 0; ib < 3; ++ib) {
            const double ba0 = block.coeff(labels[ia], 0);
            const double ba2 = block.coeff(labels[ia], 2);
            const double bb0 = block.coeff(labels[ib], 0);
            const double bb2 = block.coeff(labels[ib], 2);
            const double de = block.energy(labels[ia]) - block.energy(labels[ib]);

            auto kernel = [&](double tau, double w02, double w20) -> Complex {
                const Complex r = rho02(tau);
                const Complex f = 4.0 * w02 * r + 4.0 * w20 * std::conj(r);
                return f * std::exp(Complex(0.0, -de * (t - tau)));
            };
            out.rho1(ia, ib) = -quad::integrate(
                [&](double tau) { return kernel(tau, ba0 * bb2, ba2 * bb0); }, 0.0, t);
            out.rho1_parallel(ia, ib) = -quad::integrate(
                [&](double tau) { return kernel(tau, ba0 * bb0, ba2 * bb2); }, 0.0, t);
        }
    }

    // Reference: the full hierarchy, projected into the dressed rows.
    const double grid[2] = {0.0, t};
    const auto series =
        perturbative_hierarchy_block(params, n, std::span<const double>(grid, 2), 1);
    const ComplexMatrix& rho1_block = series.rho_one.back();
    for (int ia = 0; ia < 3; ++ia) {
        for (int ib = 0; ib < 3; ++ib) {
            Complex acc = 0.0;
            for (int p = 0; p < 3; ++p) {
                for (int q = 0; q < 3; ++q) {
                    acc += block.rows(ia, p) * rho1_block(p, q) * block.rows(ib, q);
                }
            }
            out.rho1_numeric(ia, ib) = acc;
        }
    }

    out.residual_cross = linalg::max_abs(out.rho1 - out.rho1_numeric);
    out.residual_parallel = linalg::max_abs(out.rho1_parallel - out.rho1_numeric);
    return out;
}

// --------------------------- post-selection on mixed states --------------------

namespace {

PostSelectedOutput finish_output(const Eigen::Matrix3cd& exciton, double residual_one) {
    PostSelectedOutput out;
    out.rho_e << exciton(0, 0), exciton(0, 2), exciton(2, 0), exciton(2, 2);
    out.p_plus = 0.5 * (exciton(0, 0) + exciton(2, 2) + exciton(0, 2) + exciton(2, 0)).real();
    out.p_minus = 0.5 * (exciton(0, 0) + exciton(2, 2) - exciton(0, 2) - exciton(2, 0)).real();
    out.residual_one = residual_one;
    return out;
}

} // namespace

PostSelectedOutput post_selected_output(const DensityMatrix& rho_full, int photon_outcome,
                                        int n_max) {
    if (rho_full.rows() != model::composite_dim(n_max) || rho_full.rows() != rho_full.cols()) {
        throw std::invalid_argument("post_selected_output: composite dimension mismatch");
    }
    if (photon_outcome < 0 || photon_outcome > n_max) {
        throw std::invalid_argument("post_selected_output: photon outcome outside the Fock cutoff");
    }
    Eigen::Matrix3cd exciton;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            exciton(i, j) = rho_full(model::composite_index(i, photon_outcome, n_max),
                                     model::composite_index(j, photon_outcome, n_max));
        }
    }
    double residual = 0.0;
    for (int i = 0; i < 3; ++i) {
        residual = std::max({residual, std::abs(exciton(1, i)), std::abs(exciton(i, 1))});
    }
    return finish_output(exciton, residual);
}

PostSelectedOutput post_selected_output_block(const DensityMatrix& rho_block) {
    if (rho_block.rows() != 3 || rho_block.cols() != 3) {
        throw std::invalid_argument("post_selected_output_block: expected a 3x3 sector block");
    }
    // Block basis (|1,n>, |0,n+1>, |2,n+1>): selecting photon n+1 keeps the
    // lower-right 2x2; |1,n+1> is outside the sector entirely.
    Eigen::Matrix3cd exciton = Eigen::Matrix3cd::Zero();
    exciton(0, 0) = rho_block(1, 1);
    exciton(0, 2) = rho_block(1, 2);
    exciton(2, 0) = rho_block(2, 1);
    exciton(2, 2) = rho_block(2, 2);
    return finish_output(exciton, 0.0);
}

} // namespace qdbell::decoherence
