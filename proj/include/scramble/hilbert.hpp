#pragma once

// Dense linear algebra on qubit registers.
//
// Bit order: qubit (or site) 1 is the most significant bit of a basis index,
// so for an n-qubit register qubit q lives at bit position n - q. Every module
// of the library shares this convention.

#include "scramble/detail/lapack.hpp"
#include "scramble/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scramble {

using Complex       = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using RealVector    = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;
using Index         = Eigen::Index;

inline constexpr Complex imag_unit{0.0, 1.0};

enum class Axis { x, y, z };

inline char axis_name(Axis a) {
    switch(a) {
        case Axis::x: return 'x';
        case Axis::y: return 'y';
        case Axis::z: return 'z';
    }
    return '?';
}

inline Axis parse_axis(std::string_view s) {
    if(s == "x") return Axis::x;
    if(s == "y") return Axis::y;
    if(s == "z") return Axis::z;
    throw ArgumentError("unknown Pauli axis '" + std::string(s) + "' (expected x, y or z)");
}

/// Basis-index bit of qubit `q` (1-based, qubit 1 = MSB) in an n-qubit register.
constexpr int qubit_bit(std::uint64_t index, int q, int n) { return static_cast<int>((index >> (n - q)) & 1u); }
constexpr std::uint64_t qubit_mask(int q, int n) { return std::uint64_t{1} << (n - q); }

inline Index register_dim(int qubits) {
    detail::require(qubits >= 0 && qubits < 31, "qubit count out of range: " + std::to_string(qubits));
    return Index{1} << qubits;
}

/// Spectral decomposition H = V diag(values) V^dagger, eigenvalues ascending.
struct EigenSystem {
    RealVector      values;
    Eigen::MatrixXcd vectors; // column k is eigenvector k

    [[nodiscard]] Index dim() const { return values.size(); }
};

/// Normalized pure state of a qubit register.
class StateVector {
  public:
    StateVector(int qubits, ComplexVector amplitudes) : qubits_(qubits), amps_(std::move(amplitudes)) {
        detail::require(amps_.size() == register_dim(qubits_), "state length does not match 2^qubits");
        if(std::abs(amps_.norm() - 1.0) > 1e-10)
            throw ValidationError("state vector is not normalized (norm = " + std::to_string(amps_.norm()) + ")");
    }

    static StateVector basis(int qubits, std::uint64_t index) {
        ComplexVector v = ComplexVector::Zero(register_dim(qubits));
        detail::require(static_cast<Index>(index) < v.size(), "basis index out of range");
        v(static_cast<Index>(index)) = 1.0;
        return {qubits, std::move(v)};
    }

    [[nodiscard]] int                  qubits() const { return qubits_; }
    [[nodiscard]] const ComplexVector &amplitudes() const { return amps_; }

  private:
    int           qubits_;
    ComplexVector amps_;
};

/// Reduced (mixed) state on a subset of qubits.
struct DensityMatrix {
    int              qubits = 0;
    Eigen::MatrixXcd entries;

    [[nodiscard]] Index dim() const { return entries.rows(); }
};

inline double max_abs(const Eigen::MatrixXcd &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline bool is_hermitian(const DenseOperator &h, double rel_tol = 1e-12) {
    if(h.rows() != h.cols()) return false;
    const double scale = std::max(max_abs(h), 1e-300);
    return max_abs(h - h.adjoint()) <= rel_tol * scale;
}

inline bool is_real(const Eigen::MatrixXcd &m) { return m.size() == 0 || m.imag().cwiseAbs().maxCoeff() == 0.0; }

/// I x ... x sigma_alpha x ... x I with sigma at site `a` of an L-site register.
inline DenseOperator pauli_site(Axis alpha, int a, int L) {
    detail::require(L >= 1, "chain length must be positive");
    detail::require(a >= 1 && a <= L, "site index " + std::to_string(a) + " outside 1.." + std::to_string(L));
    const Index         d    = register_dim(L);
    const std::uint64_t mask = qubit_mask(a, L);
    DenseOperator       op   = DenseOperator::Zero(d, d);
    for(Index i = 0; i < d; ++i) {
        const auto s   = static_cast<std::uint64_t>(i);
        const int  bit = qubit_bit(s, a, L);
        switch(alpha) {
            case Axis::z: op(i, i) = bit == 0 ? 1.0 : -1.0; break;
            case Axis::x: op(static_cast<Index>(s ^ mask), i) = 1.0; break;
            // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
            case Axis::y: op(static_cast<Index>(s ^ mask), i) = bit == 0 ? imag_unit : -imag_unit; break;
        }
    }
    return op;
}

namespace detail {
inline void require_hermitian(const DenseOperator &h) {
    if(h.rows() != h.cols()) throw ValidationError("operator is not square");
    if(!is_hermitian(h)) throw ValidationError("operator is not Hermitian within tolerance");
}
} // namespace detail

/// Full eigendecomposition of a Hermitian operator. Real-symmetric input takes
/// the real solver, which yields real eigenvectors.
inline EigenSystem eigh(const DenseOperator &h) {
    detail::require_hermitian(h);
    EigenSystem es;
    if(is_real(h)) {
        Eigen::MatrixXd a = h.real();
        detail::syevd(a, es.values, true);
        es.vectors = a.cast<Complex>();
    } else {
        es.vectors = h;
        detail::heevd(es.vectors, es.values, true);
    }
    return es;
}

/// Eigenvalues only, ascending.
inline RealVector eigvalsh(const DenseOperator &h) {
    detail::require_hermitian(h);
    RealVector w;
    if(is_real(h)) {
        Eigen::MatrixXd a = h.real();
        detail::syevd(a, w, false);
    } else {
        Eigen::MatrixXcd a = h;
        detail::heevd(a, w, false);
    }
    return w;
}

inline RealVector eigvalsh(const Eigen::MatrixXd &h) {
    Eigen::MatrixXd a = h;
    RealVector      w;
    detail::syevd(a, w, false);
    return w;
}

namespace detail {

inline void validate_keep(std::span<const int> keep, int qubits) {
    require(!keep.empty(), "partial trace needs at least one kept qubit");
    std::vector<bool> seen(static_cast<std::size_t>(qubits) + 1, false);
    for(int q : keep) {
        require(q >= 1 && q <= qubits, "kept qubit " + std::to_string(q) + " outside 1.." + std::to_string(qubits));
        require(!seen[static_cast<std::size_t>(q)], "duplicate kept qubit " + std::to_string(q));
        seen[static_cast<std::size_t>(q)] = true;
    }
}

/// Reshape psi into M with rows indexed by the kept qubits (in the given order,
/// first = most significant) and columns by the remaining qubits (ascending).
inline Eigen::MatrixXcd bipartition(const StateVector &psi, std::span<const int> keep) {
    const int n = psi.qubits();
    validate_keep(keep, n);
    const int        k = static_cast<int>(keep.size());
    std::vector<int> rest;
    for(int q = 1; q <= n; ++q)
        if(std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);

    Eigen::MatrixXcd m(Index{1} << k, Index{1} << (n - k));
    const auto      &amps = psi.amplitudes();
    for(Index i = 0; i < amps.size(); ++i) {
        const auto    s = static_cast<std::uint64_t>(i);
        std::uint64_t r = 0, c = 0;
        for(int q : keep) r = (r << 1) | static_cast<std::uint64_t>(qubit_bit(s, q, n));
        for(int q : rest) c = (c << 1) | static_cast<std::uint64_t>(qubit_bit(s, q, n));
        m(static_cast<Index>(r), static_cast<Index>(c)) = amps(i);
    }
    return m;
}

} // namespace detail

/// rho_keep = tr_rest |psi><psi|, computed as M M^dagger of the bipartition reshape.
inline DensityMatrix partial_trace(const StateVector &psi, std::span<const int> keep) {
    const Eigen::MatrixXcd m = detail::bipartition(psi, keep);
    DensityMatrix          rho;
    rho.qubits  = static_cast<int>(keep.size());
    rho.entries = m * m.adjoint();
    return rho;
}

inline DensityMatrix partial_trace(const StateVector &psi, std::initializer_list<int> keep) {
    return partial_trace(psi, std::span<const int>(keep.begin(), keep.size()));
}

/// Nonzero spectrum of rho_keep from the smaller Gram matrix of the bipartition.
/// The returned vector has min(2^|keep|, 2^(n-|keep|)) entries.
inline RealVector schmidt_probabilities(const StateVector &psi, std::span<const int> keep) {
    const Eigen::MatrixXcd m = detail::bipartition(psi, keep);
    const Eigen::MatrixXcd g = m.rows() <= m.cols() ? Eigen::MatrixXcd(m * m.adjoint()) : Eigen::MatrixXcd(m.adjoint() * m);
    Eigen::MatrixXcd       a = g;
    RealVector             w;
    detail::heevd(a, w, false);
    return w;
}

/// -sum p ln p with p clipped to [0, 1] and 0 ln 0 = 0. Values at or below the
/// clip tolerance count as exact zeros.
inline double entropy_of_probabilities(const RealVector &p, double clip = 1e-12) {
    double s = 0.0;
    for(Index i = 0; i < p.size(); ++i) {
        const double v = std::min(p(i), 1.0);
        if(v <= clip) continue;
        s -= v * std::log(v);
    }
    return s;
}

inline double von_neumann_entropy(const DensityMatrix &rho) {
    const double tr = rho.entries.trace().real();
    if(std::abs(tr - 1.0) > 1e-8) throw ValidationError("density matrix trace " + std::to_string(tr) + " deviates from 1");
    return entropy_of_probabilities(eigvalsh(DenseOperator(rho.entries)));
}

/// exp(-i H t) = V exp(-i D t) V^dagger.
inline Eigen::MatrixXcd propagator(const EigenSystem &eig, double t) {
    const ComplexVector phases = (-imag_unit * t * eig.values.cast<Complex>()).array().exp();
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

inline ComplexVector evolve(const ComplexVector &psi, const EigenSystem &eig, double t) {
    detail::require(psi.size() == eig.dim(), "state dimension does not match the eigensystem");
    const ComplexVector phases = (-imag_unit * t * eig.values.cast<Complex>()).array().exp();
    const ComplexVector coeffs = eig.vectors.adjoint() * psi;
    return eig.vectors * (phases.array() * coeffs.array()).matrix();
}

inline StateVector evolve(const StateVector &psi, const EigenSystem &eig, double t) {
    return {psi.qubits(), evolve(psi.amplitudes(), eig, t)};
}

/// Applies exp(-i H t) to every column of `m`.
inline Eigen::MatrixXcd evolve(const Eigen::MatrixXcd &m, const EigenSystem &eig, double t) {
    detail::require(m.rows() == eig.dim(), "matrix dimension does not match the eigensystem");
    const ComplexVector phases = (-imag_unit * t * eig.values.cast<Complex>()).array().exp();
    return eig.vectors * (phases.asDiagonal() * (eig.vectors.adjoint() * m));
}

/// Heisenberg picture O(t) = exp(iHt) O exp(-iHt).
inline DenseOperator heisenberg(const DenseOperator &op, const EigenSystem &eig, double t) {
    const Eigen::MatrixXcd u = propagator(eig, t);
    return u.adjoint() * op * u;
}

} // namespace scramble
