#pragma once

// Brute-force reference computations used only by the tests. None of these
// routes through the library's eigenbasis shortcuts or reshape tricks.

#include "scramble/freefermion.hpp"
#include "scramble/hilbert.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using scramble::Complex;
using Eigen::Index;

/// Seeded random normalized state on n qubits.
inline Eigen::VectorXcd random_state(int n, std::uint64_t seed) {
    std::mt19937_64                  gen(seed);
    std::normal_distribution<double> g;
    Eigen::VectorXcd                 v(Index{1} << n);
    for(Index i = 0; i < v.size(); ++i) v(i) = Complex(g(gen), g(gen));
    return v.normalized();
}

/// rho_keep(r, r') = sum over traced configurations, by explicit index loops.
inline Eigen::MatrixXcd loop_partial_trace(const Eigen::VectorXcd &psi, int n, const std::vector<int> &keep) {
    const int        k = static_cast<int>(keep.size());
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(Index{1} << k, Index{1} << k);
    auto             bit = [n](Index s, int q) { return static_cast<int>((s >> (n - q)) & 1); };
    for(Index s = 0; s < psi.size(); ++s)
        for(Index t = 0; t < psi.size(); ++t) {
            // Traced qubits must agree.
            bool same_rest = true;
            for(int q = 1; q <= n && same_rest; ++q) {
                bool kept = false;
                for(int kq : keep) kept = kept || kq == q;
                if(!kept && bit(s, q) != bit(t, q)) same_rest = false;
            }
            if(!same_rest) continue;
            Index r = 0, c = 0;
            for(int kq : keep) {
                r = (r << 1) | bit(s, kq);
                c = (c << 1) | bit(t, kq);
            }
            rho(r, c) += psi(s) * std::conj(psi(t));
        }
    return rho;
}

inline double entropy_by_solver(const Eigen::MatrixXcd &rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    double                                          s = 0;
    for(Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if(p > 1e-14) s -= p * std::log(p);
    }
    return s;
}

/// dim of momentum sector l from the character formula (1/L) sum_j w^{-lj} Tr T^j, Tr T^j = 2^gcd(j,L).
inline long momentum_dim_by_characters(int L, int l) {
    Complex sum = 0;
    for(int j = 0; j < L; ++j) sum += std::polar(1.0, -2.0 * std::numbers::pi * l * j / L) * std::pow(2.0, std::gcd(j, L));
    return std::lround(sum.real() / L);
}

/// exp(-i H t) by Eigen's Pade scaling-and-squaring, no eigendecomposition.
inline Eigen::MatrixXcd pade_propagator(const Eigen::MatrixXcd &h, double t) {
    const Eigen::MatrixXcd x = Complex(0, -t) * h;
    return x.exp();
}

/// Composite Simpson rule on [a, b] with n (even) panels.
template<class F>
double simpson(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double       s = f(a) + f(b);
    for(int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// ---------------------------------------------------------------------------
// Exact many-body thermofield-double state of 2L fermionic modes.
//
// Mode j of the Fock register is qubit j + 1 (MSB first); modes 0..L-1 are
// copy A sites 1..L and modes L..2L-1 are copy B sites 1..L. Creation and
// annihilation carry the Jordan-Wigner sign of the occupied modes to the left.
class FermionFock {
  public:
    explicit FermionFock(int modes) : n_(modes) {}

    [[nodiscard]] int   modes() const { return n_; }
    [[nodiscard]] Index dim() const { return Index{1} << n_; }

    [[nodiscard]] bool occupied(Index s, int j) const { return (s >> (n_ - 1 - j)) & 1; }

    [[nodiscard]] int sign_before(Index s, int j) const {
        int c = 0;
        for(int i = 0; i < j; ++i) c += occupied(s, i);
        return c % 2 ? -1 : 1;
    }

    /// out += amp * c_j^dagger in
    void add_create(const Eigen::VectorXcd &in, int j, Complex amp, Eigen::VectorXcd &out) const {
        const Index m = Index{1} << (n_ - 1 - j);
        for(Index s = 0; s < in.size(); ++s)
            if(in(s) != 0.0 && !occupied(s, j)) out(s | m) += amp * static_cast<double>(sign_before(s, j)) * in(s);
    }
    /// out += amp * c_j in
    void add_annihilate(const Eigen::VectorXcd &in, int j, Complex amp, Eigen::VectorXcd &out) const {
        const Index m = Index{1} << (n_ - 1 - j);
        for(Index s = 0; s < in.size(); ++s)
            if(in(s) != 0.0 && occupied(s, j)) out(s & ~m) += amp * static_cast<double>(sign_before(s, j)) * in(s);
    }

  private:
    int n_;
};

struct TfdOracle {
    int              L;
    Eigen::VectorXcd state; // canonical order A_1..A_L, B_1..B_L

    /// Entropy of a mode subset: reorder the Fock basis so the subset comes first
    /// (with fermionic reordering signs), then trace out the remaining qubits.
    [[nodiscard]] double entropy(const std::vector<scramble::ModeSite> &sub) const {
        const int        n = 2 * L;
        std::vector<int> order; // new position -> old mode
        std::vector<bool> used(static_cast<std::size_t>(n), false);
        for(const auto &m : sub) {
            const int j = (m.copy == scramble::FermionCopy::A ? 0 : L) + m.site - 1;
            order.push_back(j);
            used[static_cast<std::size_t>(j)] = true;
        }
        for(int j = 0; j < n; ++j)
            if(!used[static_cast<std::size_t>(j)]) order.push_back(j);

        Eigen::VectorXcd re = Eigen::VectorXcd::Zero(state.size());
        for(Index s = 0; s < state.size(); ++s) {
            if(state(s) == 0.0) continue;
            // Occupied modes listed in the new order; the sign is the parity of
            // the permutation that sorts them back to canonical order.
            std::vector<int> occ;
            Index            t = 0;
            for(int p = 0; p < n; ++p) {
                const int  j  = order[static_cast<std::size_t>(p)];
                const bool on = (s >> (n - 1 - j)) & 1;
                if(on) {
                    occ.push_back(j);
                    t |= Index{1} << (n - 1 - p);
                }
            }
            int inversions = 0;
            for(std::size_t a = 0; a < occ.size(); ++a)
                for(std::size_t b = a + 1; b < occ.size(); ++b) inversions += occ[a] > occ[b];
            re(t) += (inversions % 2 ? -1.0 : 1.0) * state(s);
        }
        std::vector<int> keep;
        for(std::size_t p = 0; p < sub.size(); ++p) keep.push_back(static_cast<int>(p) + 1);
        const int        k = static_cast<int>(keep.size());
        Eigen::MatrixXcd m(Index{1} << k, Index{1} << (n - k));
        for(Index s = 0; s < re.size(); ++s) m(s >> (n - k), s & ((Index{1} << (n - k)) - 1)) = re(s);
        return entropy_by_solver(m * m.adjoint());
    }
};

/// Builds prod_k (cos_k + sin_k a_k^dagger beta_k) |A empty, B full>, then
/// evolves copy A with exp(-i t H_A), H_A = sum_xy h_xy a_x^dagger a_y, by a
/// stepped Taylor series in the Fock space.
inline TfdOracle build_tfd(const Eigen::MatrixXd &hopping, double beta, double t, bool flip_sign = false) {
    const int  L = static_cast<int>(hopping.rows());
    FermionFock fock(2 * L);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hopping);
    const Eigen::MatrixXd                          v = es.eigenvectors();
    const Eigen::VectorXd                          e = es.eigenvalues();

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(fock.dim());
    Index            full_b = 0;
    for(int x = 0; x < L; ++x) full_b |= Index{1} << (2 * L - 1 - (L + x));
    psi(full_b) = 1.0;

    for(int k = 0; k < L; ++k) {
        const double x   = (flip_sign ? -1.0 : 1.0) * beta * e(k);
        const double sn  = std::exp(0.5 * x) / std::sqrt(1.0 + std::exp(x));
        const double cs  = 1.0 / std::sqrt(1.0 + std::exp(x));
        Eigen::VectorXcd bpsi = Eigen::VectorXcd::Zero(psi.size());
        for(int y = 0; y < L; ++y) fock.add_annihilate(psi, L + y, v(y, k), bpsi); // beta_k = sum_y V*_yk b_y
        Eigen::VectorXcd pair = Eigen::VectorXcd::Zero(psi.size());
        for(int xx = 0; xx < L; ++xx) fock.add_create(bpsi, xx, v(xx, k), pair); // a_k^dagger = sum_x V_xk a_x^dagger
        psi = cs * psi + sn * pair;
    }

    auto apply_h = [&](const Eigen::VectorXcd &in) {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size());
        for(int xx = 0; xx < L; ++xx)
            for(int y = 0; y < L; ++y) {
                if(hopping(xx, y) == 0.0) continue;
                Eigen::VectorXcd tmp = Eigen::VectorXcd::Zero(in.size());
                fock.add_annihilate(in, y, 1.0, tmp);
                fock.add_create(tmp, xx, hopping(xx, y), out);
            }
        return out;
    };

    if(t != 0.0) {
        const int    steps = static_cast<int>(std::ceil(std::abs(t) / 0.05));
        const double dt    = t / steps;
        for(int st = 0; st < steps; ++st) {
            Eigen::VectorXcd term = psi, acc = psi;
            for(int order = 1; order <= 20; ++order) {
                term = (Complex(0, -dt) / static_cast<double>(order)) * apply_h(term);
                acc += term;
            }
            psi = acc;
        }
    }
    return {L, psi};
}

} // namespace oracle
