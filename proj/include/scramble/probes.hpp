#pragma once

// Scrambling probes: subsystem spectral form factor, return amplitude,
// dual-state two-point function and the out-of-time-ordered correlator.

#include "scramble/dynamics.hpp"
#include "scramble/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace scramble {

/// Seeded sequence of uniformly random computational-basis product states.
struct ProductStateEnsemble {
    int           count = 32;
    std::uint64_t seed  = 0;

    [[nodiscard]] std::vector<std::uint64_t> draw(int L) const {
        detail::require(count >= 1, "ensemble count must be positive");
        const std::uint64_t        mask = (std::uint64_t{1} << L) - 1;
        std::mt19937_64            gen(seed);
        std::vector<std::uint64_t> states(static_cast<std::size_t>(count));
        for(auto &s : states) s = gen() & mask;
        return states;
    }
};

/// phase: sum_ij exp(-i tau (l_i - l_j)); literal: sum_ij exp(-tau (l_i - l_j)).
enum class SsfConvention { phase, literal };

inline SsfConvention parse_ssf_convention(const std::string &s) {
    if(s == "phase") return SsfConvention::phase;
    if(s == "literal") return SsfConvention::literal;
    throw ArgumentError("unknown SSF convention '" + s + "'");
}

inline const char *ssf_convention_name(SsfConvention c) { return c == SsfConvention::phase ? "phase" : "literal"; }

struct SsfPoint {
    double tau;
    double g;
};

namespace detail {
inline int register_qubits(const EigenSystem &evo) {
    const auto L = static_cast<int>(std::lround(std::log2(static_cast<double>(evo.dim()))));
    require(register_dim(L) == evo.dim(), "eigensystem dimension is not a power of two");
    return L;
}
} // namespace detail

/// Entanglement spectrum of sites A after evolving |s> for time t (all 2^|A| eigenvalues).
inline RealVector evolved_entanglement_spectrum(std::uint64_t s, const std::vector<int> &sites, double t, const EigenSystem &evo) {
    const int           L      = detail::register_qubits(evo);
    const ComplexVector phases = (-imag_unit * t * evo.values.cast<Complex>()).array().exp();
    const ComplexVector coeffs = evo.vectors.row(static_cast<Index>(s)).adjoint();
    ComplexVector       psi    = evo.vectors * (phases.array() * coeffs.array()).matrix();
    psi.normalize();
    const DensityMatrix rho = partial_trace(StateVector(L, std::move(psi)), std::span<const int>(sites));
    return eigvalsh(DenseOperator(rho.entries));
}

/// g(tau) for one entanglement spectrum.
inline std::vector<double> ssf_from_spectrum(const RealVector &lambda, const std::vector<double> &tau_grid, SsfConvention conv) {
    std::vector<double> g;
    g.reserve(tau_grid.size());
    for(double tau : tau_grid) {
        if(conv == SsfConvention::phase) {
            Complex z = 0.0;
            for(Index i = 0; i < lambda.size(); ++i) z += std::polar(1.0, -tau * lambda(i));
            g.push_back(std::norm(z));
        } else {
            double down = 0.0, up = 0.0;
            for(Index i = 0; i < lambda.size(); ++i) {
                down += std::exp(-tau * lambda(i));
                up += std::exp(tau * lambda(i));
            }
            g.push_back(down * up);
        }
    }
    return g;
}

/// Ensemble-averaged subsystem spectral form factor of sites A at evolution time t.
inline std::vector<SsfPoint> ssf(const std::vector<int> &sites, double t, const std::vector<double> &tau_grid, const EigenSystem &evo,
                                 const ProductStateEnsemble &ensemble, SsfConvention conv, unsigned threads = 1) {
    detail::require(!sites.empty(), "SSF needs a nonempty subsystem");
    const int  L      = detail::register_qubits(evo);
    const auto states = ensemble.draw(L);

    std::vector<std::vector<double>> per_member(states.size());
    parallel_for(states.size(), threads, [&](std::size_t m) {
        per_member[m] = ssf_from_spectrum(evolved_entanglement_spectrum(states[m], sites, t, evo), tau_grid, conv);
    });

    std::vector<SsfPoint> out;
    for(std::size_t k = 0; k < tau_grid.size(); ++k) {
        double sum = 0.0;
        for(const auto &g : per_member) sum += g[k];
        out.push_back({tau_grid[k], sum / static_cast<double>(states.size())});
    }
    return out;
}

/// Local Pauli operator moved into the eigenbasis of the evolution, with the
/// thermal state of H0 in the same basis; serves repeated evaluations over t.
class PauliProbe {
  public:
    PauliProbe(Axis alpha, int a, const EigenSystem &evo, const ThermalEnsemble &ens)
        : alpha_(alpha), site_(a), L_(detail::register_qubits(evo)), energies_(evo.values), beta_(ens.beta()) {
        detail::require(ens.dim() == evo.dim(), "ensemble dimension does not match the evolution");
        const DenseOperator sigma = pauli_site(alpha, a, L_);
        sigma_                    = evo.vectors.adjoint() * sigma * evo.vectors;
        if(beta_ > 0.0) rho_ = evo.vectors.adjoint() * ens.density_matrix() * evo.vectors;
        otoc_norm_ = beta_ > 0.0 ? ens.doubled_partition_function() : static_cast<double>(evo.dim());
    }

    /// Heisenberg operator sigma(t) = exp(iHt) sigma exp(-iHt) in the eigenbasis.
    [[nodiscard]] Eigen::MatrixXcd heisenberg(double t) const {
        const ComplexVector p = (imag_unit * t * energies_.cast<Complex>()).array().exp();
        return p.asDiagonal() * sigma_ * p.conjugate().asDiagonal();
    }

    /// <sigma(0) sigma(t)> in the thermal state of H0.
    [[nodiscard]] Complex return_amplitude(double t) const {
        const Eigen::MatrixXcd w = heisenberg(t);
        if(beta_ == 0.0) return sigma_.cwiseProduct(w.transpose()).sum() / static_cast<double>(sigma_.rows());
        return (rho_ * sigma_ * w).trace();
    }

    /// Tr[sigma(t) sigma sigma(t) sigma] / Tr exp(-2 beta H0).
    [[nodiscard]] double otoc(double t) const {
        const Eigen::MatrixXcd x = heisenberg(t) * sigma_;
        return x.cwiseProduct(x.transpose()).sum().real() / otoc_norm_;
    }

  private:
    Axis             alpha_;
    int              site_;
    int              L_;
    RealVector       energies_;
    double           beta_;
    Eigen::MatrixXcd sigma_;
    Eigen::MatrixXcd rho_;
    double           otoc_norm_;
};

inline Complex return_amplitude(Axis alpha, int a, double t, const EigenSystem &evo, const ThermalEnsemble &ens) {
    return PauliProbe(alpha, a, evo, ens).return_amplitude(t);
}

inline double otoc(Axis alpha, int a, double t, const EigenSystem &evo, const ThermalEnsemble &ens) {
    return PauliProbe(alpha, a, evo, ens).otoc(t);
}

namespace detail {
/// Phase picked up by basis state s under a single-site Pauli: sigma|s> = phase |s ^ mask>.
inline Complex pauli_phase(Axis alpha, std::uint64_t s, int a, int L) {
    const int bit = qubit_bit(s, a, L);
    switch(alpha) {
        case Axis::x: return 1.0;
        case Axis::y: return bit == 0 ? imag_unit : -imag_unit;
        case Axis::z: return bit == 0 ? 1.0 : -1.0;
    }
    return 1.0;
}
} // namespace detail

/// <Psi| sigma^(1)_x sigma^(2)_x |Psi> on a dual matrix M: Tr[M^dagger X M Y^T].
inline Complex two_point(Axis alpha, int x, const Eigen::MatrixXcd &m, int L) {
    detail::require(x >= 1 && x <= L, "site index " + std::to_string(x) + " outside 1.." + std::to_string(L));
    const Index         d    = register_dim(L);
    const std::uint64_t mask = alpha == Axis::z ? 0 : qubit_mask(x, L);
    Complex             acc  = 0.0;
    for(Index k = 0; k < d; ++k) {
        const auto    col_src = static_cast<std::uint64_t>(k);
        const Index   col_dst = static_cast<Index>(col_src ^ mask);
        const Complex pc      = detail::pauli_phase(alpha, col_src, x, L);
        for(Index i = 0; i < d; ++i) {
            const auto    row_src = static_cast<std::uint64_t>(i);
            const Index   row_dst = static_cast<Index>(row_src ^ mask);
            const Complex pr      = detail::pauli_phase(alpha, row_src, x, L);
            acc += std::conj(m(row_dst, col_dst)) * pr * pc * m(i, k);
        }
    }
    return acc;
}

inline Complex two_point(Axis alpha, int x, double t, const EigenSystem &evo, const ThermalEnsemble &ens) {
    const int L = detail::register_qubits(evo);
    return two_point(alpha, x, dual_matrix(t, evo, ens), L);
}

} // namespace scramble
