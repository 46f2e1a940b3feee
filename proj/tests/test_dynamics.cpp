// Sector evolution against the numerical propagator route, coherent-field
// population averaging, and the collapse/revival envelope metrics.

#include <doctest.h>

#include "qdbell/dynamics.hpp"
#include "support/oracles.hpp"

#include <numbers>
#include <random>

using namespace qdbell;
using dynamics::BlockAmplitudes;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using model::ModelParams;

namespace {

ModelParams resonant_params(double drive) {
    ModelParams params;
    params.interdot = 1.0; // W = omega, e = 0: E0 = E1 = E2
    params.drive = drive;
    return params;
}

ComplexVector to_vector(const BlockAmplitudes& amps) {
    ComplexVector v(3);
    v << amps.c1, amps.c0, amps.c2;
    return v;
}

BlockAmplitudes random_amplitudes(int n, std::mt19937& rng) {
    const ComplexVector v = oracles::random_state(3, rng);
    return BlockAmplitudes{n, v(0), v(1), v(2)};
}

} // namespace

TEST_CASE("evolve_block: identity at t = 0 and dark-state phase evolution") {
    ModelParams params;
    params.energy_override = model::EnergyLevels{0.4, -1.1, 0.4};
    params.drive = 0.6;
    const auto block = model::dressed_block(params, 2);

    std::mt19937 rng(42);
    const BlockAmplitudes init = random_amplitudes(2, rng);
    const BlockAmplitudes still = dynamics::evolve_block(block, init, 0.0);
    // basis completeness reconstructs the input (to rounding)
    CHECK(std::abs(still.c1 - init.c1) <= 1e-15);
    CHECK(std::abs(still.c0 - init.c0) <= 1e-15);
    CHECK(std::abs(still.c2 - init.c2) <= 1e-15);

    // the dark row only acquires the phase e^{-i E_d t}
    const double r = std::sqrt(2.0) / 2.0;
    const BlockAmplitudes dark{2, 0.0, r, -r};
    const double t = 3.7;
    const BlockAmplitudes out = dynamics::evolve_block(block, dark, t);
    const Complex phase = std::exp(Complex(0.0, -block.e_dark * t));
    CHECK(std::abs(out.c1) <= 1e-14);
    CHECK(std::abs(out.c0 - phase * r) <= 1e-13);
    CHECK(std::abs(out.c2 + phase * r) <= 1e-13);
}

TEST_CASE("evolve_block matches the numerical propagator on random input") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> uni(0.05, 0.9);
    for (int draw = 0; draw < 25; ++draw) {
        ModelParams params;
        const double e0 = uni(rng);
        params.energy_override = model::EnergyLevels{e0, e0 + 3.0 * (uni(rng) - 0.5), e0};
        params.drive = uni(rng);
        const int n = draw % 7;
        const double t = 40.0 * uni(rng);
        CAPTURE(draw);

        const auto block = model::dressed_block(params, n);
        const BlockAmplitudes init = random_amplitudes(n, rng);
        const BlockAmplitudes evolved = dynamics::evolve_block(block, init, t);

        const ComplexVector expect =
            oracles::propagate_eig(model::block_hamiltonian(params, n), to_vector(init), t);
        CHECK((to_vector(evolved) - expect).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("evolve_block: norm preserved over long evolutions") {
    const ModelParams params = resonant_params(0.3);
    const auto block = model::dressed_block(params, 5);
    std::mt19937 rng(7);
    const BlockAmplitudes init = random_amplitudes(5, rng);
    const double period = 2.0 * std::numbers::pi / block.omega;
    for (double t : {0.5 * period, 10.0 * period, 1000.0 * period}) {
        const BlockAmplitudes out = dynamics::evolve_block(block, init, t);
        CHECK(std::abs(out.norm2() - init.norm2()) <= 1e-10);
    }
}

TEST_CASE("psi_components: initial condition, resonance half-transfer, propagator match") {
    const ModelParams params = resonant_params(0.25);
    const int n = 3;
    const auto block = model::dressed_block(params, n);

    const BlockAmplitudes at0 = dynamics::psi_components(params, n, 0.0);
    CHECK(std::abs(at0.c1) <= 1e-15);
    CHECK(std::abs(at0.c0 - Complex(1.0, 0.0)) <= 1e-15);
    CHECK(std::abs(at0.c2) <= 1e-15);

    // |c1|^2 = 2 s^2 c^2 sin^2(Omega t / 2) peaks at 1/2 at t = pi/Omega on resonance
    const double t_half = std::numbers::pi / block.omega;
    CHECK(std::norm(dynamics::psi_components(params, n, t_half).c1) ==
          doctest::Approx(0.5).epsilon(1e-12));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uni(0.0, 50.0);
    ComplexVector init(3);
    init << 0.0, 1.0, 0.0;
    for (int k = 0; k < 10; ++k) {
        const double t = uni(rng);
        const ComplexVector expect =
            oracles::propagate_eig(model::block_hamiltonian(params, n), init, t);
        const BlockAmplitudes got = dynamics::psi_components(params, n, t);
        CHECK((to_vector(got) - expect).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("psi_components equals evolve_block from (0,1,0)") {
    ModelParams params;
    params.energy_override = model::EnergyLevels{-0.3, 1.7, -0.3};
    params.drive = 0.45;
    const int n = 8;
    const auto block = model::dressed_block(params, n);
    const BlockAmplitudes init{n, 0.0, 1.0, 0.0};
    for (double t : {0.1, 2.3, 17.9}) {
        const BlockAmplitudes a = dynamics::psi_components(params, n, t);
        const BlockAmplitudes b = dynamics::evolve_block(block, init, t);
        CHECK((to_vector(a) - to_vector(b)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("dark-state protection: dark overlap constant for any initial condition") {
    ModelParams params;
    params.energy_override = model::EnergyLevels{0.2, -0.9, 0.2};
    params.drive = 0.33;
    const auto block = model::dressed_block(params, 1);
    std::mt19937 rng(55);
    const BlockAmplitudes init = random_amplitudes(1, rng);
    const Eigen::Vector3d dark = block.rows.row(0);

    auto dark_overlap = [&](const BlockAmplitudes& amps) {
        return std::abs(dark(0) * amps.c1 + dark(1) * amps.c0 + dark(2) * amps.c2);
    };
    const double base = dark_overlap(init);
    for (double t : {0.7, 5.0, 42.0, 333.0}) {
        CHECK(std::abs(dark_overlap(dynamics::evolve_block(block, init, t)) - base) <= 1e-10);
    }
}

TEST_CASE("initial |0,n+1>: the (|0>-|2>)/sqrt2 amplitude is sqrt2/2 e^{-i E_d t}") {
    const ModelParams params = resonant_params(0.4);
    const int n = 6;
    const auto block = model::dressed_block(params, n);
    const double r = std::sqrt(2.0) / 2.0;
    for (double t : {0.0, 1.3, 9.4, 77.7}) {
        const BlockAmplitudes amps = dynamics::psi_components(params, n, t);
        const Complex minus_amp = (amps.c0 - amps.c2) / std::sqrt(2.0);
        CHECK(std::abs(minus_amp - r * std::exp(Complex(0.0, -block.e_dark * t))) <= 1e-12);
        CHECK(std::norm(minus_amp) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("closed form vs full-space propagation across random parameter draws") {
    std::mt19937 rng(999);
    std::uniform_real_distribution<double> uni(0.05, 0.5);
    for (int draw = 0; draw < 100; ++draw) {
        ModelParams params;
        params.band_gap = 0.0; // E0 = E2 through the level formulas
        params.interdot = 0.2 + uni(rng);
        params.drive = uni(rng);
        params.fock_cutoff = 4;
        const int n = draw % 4;
        const double t = 30.0 * uni(rng);
        CAPTURE(draw);

        const ComplexMatrix h = model::full_hamiltonian(params);
        const auto idx = model::sector_indices(n, params.fock_cutoff);
        ComplexVector init = ComplexVector::Zero(h.rows());
        init(idx.zero_np1) = 1.0;
        const ComplexVector expect = oracles::propagate_eig(h, init, t);

        const BlockAmplitudes got = dynamics::psi_components(params, n, t);
        CHECK(std::abs(got.c1 - expect(idx.one_n)) <= 1e-9);
        CHECK(std::abs(got.c0 - expect(idx.zero_np1)) <= 1e-9);
        CHECK(std::abs(got.c2 - expect(idx.two_np1)) <= 1e-9);
        // nothing leaks outside the sector
        ComplexVector rest = expect;
        rest(idx.one_n) = rest(idx.zero_np1) = rest(idx.two_np1) = 0.0;
        CHECK(rest.cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("exciton population: zero at t = 0 and for a vacuum field") {
    ModelParams params; // reference defaults
    CHECK(dynamics::exciton_population(params, 0.0) == doctest::Approx(0.0).epsilon(1e-15));

    ModelParams vacuum = params;
    vacuum.alpha = 0.0;
    vacuum.fock_cutoff = 10;
    for (double t : {0.0, 1.0, 10.0}) {
        CHECK(dynamics::exciton_population(vacuum, t) == 0.0);
    }
}

TEST_CASE("joint state: norm near 1 and population consistency") {
    ModelParams params;
    params.fock_cutoff = model::default_fock_truncation(params.alpha);
    const auto initial = dynamics::coherent_initial(params);
    CHECK(std::abs(initial.norm2() - 1.0) <= 1e-9);

    const double t = 12.5;
    const auto evolved = dynamics::evolve(params, initial, t);
    CHECK(std::abs(evolved.norm2() - 1.0) <= 1e-9);
    CHECK(evolved.p_one() == doctest::Approx(dynamics::exciton_population(params, t)).epsilon(1e-12));
}

TEST_CASE("population series agrees with the pointwise evaluation") {
    ModelParams params;
    params.alpha = 2.0;
    params.fock_cutoff = model::default_fock_truncation(2.0);
    const auto series = dynamics::exciton_population_series(params, 30.0, 64);
    for (std::size_t k = 0; k < series.times.size(); k += 16) {
        CHECK(series.p1[k] ==
              doctest::Approx(dynamics::exciton_population(params, series.times[k])).epsilon(1e-12));
    }
    CHECK(series.truncation_tail <= 1e-10);
}

TEST_CASE("collapse metrics: flat series has no collapse") {
    std::vector<double> t(600), p(600, 0.25);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = 0.01 * static_cast<double>(k);
    const double rabi = 2.0 * std::numbers::pi; // window of 100 samples
    const auto metrics = dynamics::collapse_metrics(t, p, rabi, rabi);
    CHECK_FALSE(metrics.collapse_time.has_value());
    CHECK_FALSE(metrics.revival_time.has_value());
}

TEST_CASE("collapse metrics: rejects under-resolved series") {
    std::vector<double> t(100), p(100, 0.0);
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = static_cast<double>(k); // dt = 1
    CHECK_THROWS_AS(dynamics::collapse_metrics(t, p, 1.0, 10.0), std::invalid_argument);
}

TEST_CASE("collapse and revival at the reference operating point; collapse time halves when the drive doubles") {
    // Reference parameters, then the same with A doubled.
    auto run = [](double drive) {
        ModelParams params;
        params.drive = drive;
        const double mean = model::mean_rabi_frequency(params);
        const double slope = 8.0 * params.drive * params.drive / mean;
        const double t_max = 1.5 * (2.0 * std::numbers::pi / slope);
        // sampling rule: >= 40 points per the fastest populated sector
        const auto [e0, e1, e2] = model::energies(params);
        const double omega1_max = std::sqrt(2.0 * params.fock_cutoff) * params.drive;
        const double fastest =
            std::sqrt(8.0 * omega1_max * omega1_max + (e1 - e0) * (e1 - e0));
        const int steps = static_cast<int>(
            std::ceil(t_max / ((2.0 * std::numbers::pi / fastest) / 40.0)));
        const auto series = dynamics::exciton_population_series(params, t_max, steps);
        return dynamics::collapse_metrics(params, series);
    };

    const auto slow = run(0.04);
    const auto fast = run(0.08);
    REQUIRE(slow.collapse_time.has_value());
    REQUIRE(slow.revival_time.has_value());
    REQUIRE(fast.collapse_time.has_value());
    REQUIRE(fast.revival_time.has_value());

    // doubling A halves the collapse time within 25%
    const double ratio = *slow.collapse_time / *fast.collapse_time;
    CHECK(ratio >= 1.5);
    CHECK(ratio <= 2.5);

    // revival well separated from the collapse
    CHECK(*slow.revival_time / *slow.collapse_time > 5.0);
}
