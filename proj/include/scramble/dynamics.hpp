#pragma once

// Thermal expectation values under a quench to a (deformed) Hamiltonian, and
// the dual (channel-state) vector of the regularized evolution operator.

#include "scramble/hilbert.hpp"

#include <cmath>
#include <memory>
#include <string>
#include <vector>

namespace scramble {

/// Thermal state exp(-beta H0) / Z of the undeformed chain, held in H0's eigenbasis.
class ThermalEnsemble {
  public:
    ThermalEnsemble(std::shared_ptr<const EigenSystem> base, double beta) : base_(std::move(base)), beta_(beta) {
        detail::require(base_ != nullptr, "thermal ensemble needs an eigensystem");
        detail::require(std::isfinite(beta_) && beta_ >= 0.0, "inverse temperature must be finite and >= 0");
        const double e0 = base_->values.size() ? base_->values.minCoeff() : 0.0;
        // Shifting by the ground energy keeps the exponentials bounded.
        weights_  = (-beta_ * (base_->values.array() - e0)).exp().matrix();
        weights_ /= weights_.sum();
        const RealVector sq = (-2.0 * beta_ * (base_->values.array() - e0)).exp().matrix();
        half_     = (-beta_ * (base_->values.array() - e0)).exp().matrix() / std::sqrt(sq.sum());
    }

    [[nodiscard]] double             beta() const { return beta_; }
    [[nodiscard]] const EigenSystem &base() const { return *base_; }
    [[nodiscard]] Index              dim() const { return base_->dim(); }

    /// Boltzmann weights of the H0 eigenstates; they sum to one.
    [[nodiscard]] const RealVector &weights() const { return weights_; }

    /// rho = exp(-beta H0) / Tr exp(-beta H0).
    [[nodiscard]] DenseOperator density_matrix() const {
        if(beta_ == 0.0) return DenseOperator::Identity(dim(), dim()) / static_cast<double>(dim());
        return base_->vectors * weights_.cast<Complex>().asDiagonal() * base_->vectors.adjoint();
    }

    /// exp(-beta H0) / sqrt(Tr exp(-2 beta H0)), the matrix whose vectorization
    /// is the regularized dual state at t = 0.
    [[nodiscard]] DenseOperator half_weight() const {
        if(beta_ == 0.0) return DenseOperator::Identity(dim(), dim()) / std::sqrt(static_cast<double>(dim()));
        return base_->vectors * half_.cast<Complex>().asDiagonal() * base_->vectors.adjoint();
    }

    /// Tr exp(-2 beta H0) without any energy shift.
    [[nodiscard]] double doubled_partition_function() const { return (-2.0 * beta_ * base_->values.array()).exp().sum(); }

  private:
    std::shared_ptr<const EigenSystem> base_;
    double                             beta_;
    RealVector                         weights_;
    RealVector                         half_;
};

/// Tr[ exp(iHt) O exp(-iHt) rho_beta ] for many t. Construction moves O and rho
/// to the eigenbasis of H once; each evaluation is then O(d^2).
class ThermalExpectation {
  public:
    ThermalExpectation(const DenseOperator &op, const EigenSystem &evo, const ThermalEnsemble &ens) : energies_(evo.values) {
        detail::require(op.rows() == evo.dim() && op.cols() == evo.dim(), "operator dimension does not match the evolution");
        detail::require(ens.dim() == evo.dim(), "ensemble dimension does not match the evolution");
        const Eigen::MatrixXcd o   = evo.vectors.adjoint() * op * evo.vectors;
        const Eigen::MatrixXcd rho = evo.vectors.adjoint() * ens.density_matrix() * evo.vectors;
        kernel_                    = o.cwiseProduct(rho.transpose());
    }

    [[nodiscard]] Complex value(double t) const {
        const ComplexVector p = (imag_unit * t * energies_.cast<Complex>()).array().exp();
        return p.transpose() * kernel_ * p.conjugate();
    }

    double operator()(double t) const { return value(t).real(); }

  private:
    RealVector       energies_;
    Eigen::MatrixXcd kernel_; // O'_ij rho'_ji
};

inline double thermal_expectation(const DenseOperator &op, double t, const EigenSystem &evo, const ThermalEnsemble &ens) {
    return ThermalExpectation(op, evo, ens)(t);
}

/// exp(-i H t) exp(-beta H0) / sqrt(Tr exp(-2 beta H0)) as a 2^L x 2^L matrix,
/// rows indexed by copy 1 and columns by copy 2.
inline Eigen::MatrixXcd dual_matrix(double t, const EigenSystem &evo, const ThermalEnsemble &ens) {
    detail::require(ens.dim() == evo.dim(), "ensemble dimension does not match the evolution");
    const DenseOperator w = ens.half_weight();
    if(t == 0.0) return w;
    if(ens.beta() == 0.0) return propagator(evo, t) / std::sqrt(static_cast<double>(evo.dim()));
    return evolve(w, evo, t);
}

/// Flattens the dual matrix onto the 2L-qubit register: copy-1 sites are
/// qubits 1..L and copy-2 sites qubits L+1..2L.
inline StateVector flatten_dual(const Eigen::MatrixXcd &m, int L) {
    const Index   d = register_dim(L);
    detail::require(m.rows() == d && m.cols() == d, "dual matrix dimension does not match 2^L");
    ComplexVector v(d * d);
    for(Index r = 0; r < d; ++r)
        for(Index c = 0; c < d; ++c) v(r * d + c) = m(r, c);
    return {2 * L, std::move(v)};
}

inline StateVector dual_state(double t, const EigenSystem &evo, const ThermalEnsemble &ens, int L) {
    return flatten_dual(dual_matrix(t, evo, ens), L);
}

enum class GridKind { linear, log10 };

inline GridKind parse_grid_kind(const std::string &s) {
    if(s == "linear") return GridKind::linear;
    if(s == "log10" || s == "log") return GridKind::log10;
    throw ArgumentError("unknown time grid kind '" + s + "'");
}

/// Linear: t_min + k step. Log10: t_min 10^(k step). Both include t_max when it
/// falls on the grid (within round-off).
inline std::vector<double> time_grid(GridKind kind, double t_min, double t_max, double step) {
    detail::require(std::isfinite(t_min) && std::isfinite(t_max) && t_min < t_max, "time grid needs t_min < t_max");
    detail::require(std::isfinite(step) && step > 0.0, "time grid step must be positive");
    double span = t_max - t_min;
    if(kind == GridKind::log10) {
        detail::require(t_min > 0.0, "log grid needs t_min > 0");
        span = std::log10(t_max / t_min);
    }
    const auto          count = static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for(std::size_t k = 0; k < count; ++k) {
        const double x = static_cast<double>(k) * step;
        grid[k]        = kind == GridKind::linear ? t_min + x : t_min * std::pow(10.0, x);
    }
    return grid;
}

} // namespace scramble
