#include "qdbell/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdbell::dynamics {

namespace {

Complex phase(double energy, double t) { return std::exp(Complex(0.0, -energy * t)); }

} // namespace

BlockAmplitudes evolve_block(const DressedBlock& block, const BlockAmplitudes& c_init, double t) {
    if (t < 0.0) throw std::invalid_argument("evolve_block: t must be >= 0");

    const Eigen::Vector3cd c(c_init.c1, c_init.c0, c_init.c2);
    Eigen::Vector3cd out = Eigen::Vector3cd::Zero();
    for (int a = 0; a < 3; ++a) {
        const Eigen::Vector3d row = block.rows.row(a);
        const Complex overlap = row(0) * c(0) + row(1) * c(1) + row(2) * c(2);
        out += phase(block.energy(static_cast<model::Dressed>(a)), t) * overlap *
               row.cast<Complex>();
    }
    return BlockAmplitudes{c_init.n, out(0), out(1), out(2)};
}

BlockAmplitudes psi_components(const ModelParams& params, int n, double t) {
    const DressedBlock block = model::dressed_block(params, n);
    const double s = std::sin(0.5 * block.theta);
    const double c = std::cos(0.5 * block.theta);
    const Complex ep = phase(block.e_plus, t);
    const Complex em = phase(block.e_minus, t);
    const Complex ed = phase(block.e_dark, t);

    BlockAmplitudes amps;
    amps.n = n;
    amps.c1 = (std::sqrt(2.0) / 2.0) * s * c * (ep - em);
    const Complex bright = 0.5 * s * s * ep + 0.5 * c * c * em;
    amps.c0 = bright + 0.5 * ed;
    amps.c2 = bright - 0.5 * ed;
    return amps;
}

double JointState::norm2() const {
    double acc = std::norm(vacuum);
    for (const auto& sector : sectors) acc += sector.norm2();
    return acc;
}

double JointState::p_one() const {
    double acc = 0.0;
    for (const auto& sector : sectors) acc += std::norm(sector.c1);
    return acc;
}

JointState coherent_initial(const ModelParams& params) {
    params.validate();
    const auto weights = model::poisson_weights(params.alpha, params.fock_cutoff);
    JointState state;
    state.vacuum = std::sqrt(weights[0]);
    state.sectors.reserve(static_cast<std::size_t>(std::max(params.fock_cutoff, 0)));
    for (int n = 0; n + 1 <= params.fock_cutoff; ++n) {
        BlockAmplitudes amps;
        amps.n = n;
        amps.c0 = std::sqrt(weights[static_cast<std::size_t>(n) + 1]);
        state.sectors.push_back(amps);
    }
    return state;
}

JointState evolve(const ModelParams& params, const JointState& state, double t) {
    const auto [e0, e1, e2] = model::energies(params);
    JointState out;
    out.vacuum = state.vacuum * phase(e0, t); // |0,0> is uncoupled
    out.sectors.reserve(state.sectors.size());
    for (const auto& sector : state.sectors) {
        out.sectors.push_back(evolve_block(model::dressed_block(params, sector.n), sector, t));
    }
    return out;
}

double exciton_population(const ModelParams& params, double t) {
    params.validate();
    const auto weights = model::poisson_weights(params.alpha, params.fock_cutoff);
    double p1 = 0.0;
    for (int n = 0; n + 1 <= params.fock_cutoff; ++n) {
        const double w = weights[static_cast<std::size_t>(n) + 1];
        if (w == 0.0) continue;
        p1 += w * std::norm(psi_components(params, n, t).c1);
    }
    return p1;
}

PopulationSeries exciton_population_series(const ModelParams& params, double t_max, int t_steps) {
    params.validate();
    if (t_max < 0.0 || t_steps < 1) {
        throw std::invalid_argument("exciton_population_series: need t_max >= 0 and t_steps >= 1");
    }

    const auto weights = model::poisson_weights(params.alpha, params.fock_cutoff);
    struct SectorTerms {
        double weight;
        double prefactor; // 2 s^2 c^2 * weight
        double omega;
    };
    std::vector<SectorTerms> sectors;
    for (int n = 0; n + 1 <= params.fock_cutoff; ++n) {
        const double w = weights[static_cast<std::size_t>(n) + 1];
        if (w == 0.0) continue;
        const DressedBlock block = model::dressed_block(params, n);
        const double s = std::sin(0.5 * block.theta);
        const double c = std::cos(0.5 * block.theta);
        sectors.push_back({w, 2.0 * w * s * s * c * c, block.omega});
    }

    PopulationSeries series;
    series.truncation_tail = model::poisson_tail(params.alpha, params.fock_cutoff);
    series.times.resize(static_cast<std::size_t>(t_steps) + 1);
    series.p1.resize(static_cast<std::size_t>(t_steps) + 1);
    for (int k = 0; k <= t_steps; ++k) {
        const double t = t_max * static_cast<double>(k) / static_cast<double>(t_steps);
        // |c1|^2 = 2 s^2 c^2 sin^2(Omega t / 2) per sector
        double p1 = 0.0;
        for (const auto& sector : sectors) {
            const double s = std::sin(0.5 * sector.omega * t);
            p1 += sector.prefactor * s * s;
        }
        series.times[static_cast<std::size_t>(k)] = t;
        series.p1[static_cast<std::size_t>(k)] = p1;
    }
    return series;
}

CollapseMetrics collapse_metrics(std::span<const double> times, std::span<const double> p1,
                                 double rabi_frequency, double fastest_rabi_frequency) {
    if (times.size() != p1.size() || times.size() < 3) {
        throw std::invalid_argument("collapse_metrics: need matching series with >= 3 samples");
    }
    if (!(rabi_frequency > 0.0) || !(fastest_rabi_frequency > 0.0)) {
        throw std::invalid_argument("collapse_metrics: Rabi frequencies must be positive");
    }
    const double dt = times[1] - times[0];
    const double fastest_period = 2.0 * std::numbers::pi / fastest_rabi_frequency;
    if (dt > fastest_period / 40.0) {
        throw std::invalid_argument(
            "collapse_metrics: series too coarse (need >= 40 samples per fastest Rabi period)");
    }

    // Oscillation envelope (max-min)/2 over one mean Rabi period, advanced in
    // half-window strides so local maxima are well separated.
    const double window_time = 2.0 * std::numbers::pi / rabi_frequency;
    const std::size_t wlen =
        std::max<std::size_t>(4, static_cast<std::size_t>(std::llround(window_time / dt)));
    if (times.size() < 2 * wlen) {
        throw std::invalid_argument("collapse_metrics: series shorter than two envelope windows");
    }
    const std::size_t stride = std::max<std::size_t>(1, wlen / 2);

    std::vector<double> env;
    std::vector<double> env_time;
    for (std::size_t start = 0; start + wlen <= times.size(); start += stride) {
        double lo = p1[start];
        double hi = p1[start];
        for (std::size_t i = start; i < start + wlen; ++i) {
            lo = std::min(lo, p1[i]);
            hi = std::max(hi, p1[i]);
        }
        env.push_back(0.5 * (hi - lo));
        env_time.push_back(times[start] + 0.5 * wlen * dt);
    }

    CollapseMetrics metrics;
    metrics.initial_envelope = env.front();
    if (metrics.initial_envelope <= 0.0) return metrics; // flat series: nothing to detect

    const double collapse_level = 0.2 * metrics.initial_envelope;
    const double revival_level = 0.5 * metrics.initial_envelope;
    const std::size_t hold = 3 * (wlen / stride); // three consecutive windows

    std::size_t collapse_idx = env.size();
    for (std::size_t k = 0; k + hold < env.size(); ++k) {
        bool held = true;
        for (std::size_t j = k; j <= k + hold; ++j) {
            if (env[j] >= collapse_level) {
                held = false;
                break;
            }
        }
        if (held) {
            collapse_idx = k;
            metrics.collapse_time = env_time[k];
            break;
        }
    }
    if (!metrics.collapse_time) return metrics;

    // First envelope local maximum after the collapse that recovers >= 50%.
    for (std::size_t k = collapse_idx + 1; k + 1 < env.size(); ++k) {
        if (env[k] >= revival_level && env[k] >= env[k - 1] && env[k] >= env[k + 1]) {
            metrics.revival_time = env_time[k];
            break;
        }
    }
    return metrics;
}

CollapseMetrics collapse_metrics(const ModelParams& params, const PopulationSeries& series) {
    const auto [e0, e1, e2] = model::energies(params);
    const double detuning = e1 - e0;
    const double omega1_max = std::sqrt(2.0 * params.fock_cutoff) * params.drive;
    const double fastest = std::sqrt(8.0 * omega1_max * omega1_max + detuning * detuning);
    return collapse_metrics(series.times, series.p1, model::mean_rabi_frequency(params), fastest);
}

} // namespace qdbell::dynamics
