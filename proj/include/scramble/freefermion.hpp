#pragma once

// Operator entanglement of deformed free fermions by the correlation-matrix
// method. The doubled state pairs mode k of copy A with mode k of copy B
// (particle-hole transformed), with occupation angles theta_k; copy A evolves
// under the deformed hopping Hamiltonian.

#include "scramble/hilbert.hpp"
#include "scramble/model.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace scramble {

struct SingleParticleModel {
    int             L = 0;
    Eigen::MatrixXd hopping; // real symmetric L x L
    RealVector      energies;
    Eigen::MatrixXd modes; // column k is the mode with energy energies(k)
};

/// H_{x,x+1} = H_{x+1,x} = -envelope_bond(x) on a ring.
inline SingleParticleModel sp_hamiltonian(int L, const Deformation &d) {
    detail::require(L >= 2, "fermion chain needs at least 2 sites");
    SingleParticleModel m;
    m.L       = L;
    m.hopping = Eigen::MatrixXd::Zero(L, L);
    for(int x = 1; x <= L; ++x) {
        const int    y = wrap_site(x + 1, L);
        const double w = -envelope_bond(x, L, d);
        m.hopping(x - 1, y - 1) += w;
        m.hopping(y - 1, x - 1) += w;
    }
    m.modes = m.hopping;
    detail::syevd(m.modes, m.energies, true);
    return m;
}

enum class TfdSign {
    occupied_high, // sin(theta_k) = exp(beta e_k / 2) / sqrt(1 + exp(beta e_k))
    occupied_low   // same with e_k -> -e_k
};

struct ModeAngles {
    RealVector sin;
    RealVector cos;
    RealVector theta;
    double     beta = 0.0;
};

/// sin^2 = 1 / (1 + exp(-x)), cos^2 = 1 / (1 + exp(x)) with x = +-beta e_k;
/// the logistic form is the overflow-free rewrite of the exponential ratio.
inline ModeAngles mode_angles(const SingleParticleModel &model, double beta, TfdSign sign = TfdSign::occupied_high) {
    detail::require(std::isfinite(beta) && beta >= 0.0, "inverse temperature must be finite and >= 0");
    const Index n = model.energies.size();
    ModeAngles  a;
    a.beta = beta;
    a.sin.resize(n);
    a.cos.resize(n);
    a.theta.resize(n);
    for(Index k = 0; k < n; ++k) {
        const double x  = (sign == TfdSign::occupied_high ? 1.0 : -1.0) * beta * model.energies(k);
        const double s2 = 1.0 / (1.0 + std::exp(-x));
        const double c2 = 1.0 / (1.0 + std::exp(x));
        a.sin(k)        = std::sqrt(s2);
        a.cos(k)        = std::sqrt(c2);
        a.theta(k)      = std::atan2(a.sin(k), a.cos(k));
    }
    return a;
}

enum class FermionCopy { A, B };

struct ModeSite {
    FermionCopy copy;
    int         site; // 1..L
};

struct DoubledCorrelator {
    std::vector<ModeSite> subsystem;
    Eigen::MatrixXcd      entries;
};

/// C[(I,x),(J,x')] = sum_k V_xk^* K_k^{IJ}(t) V_x'k with the 2x2 mode kernel
/// [[sin^2, sin cos e^{i t e}], [sin cos e^{-i t e}, cos^2]].
inline DoubledCorrelator doubled_correlator(const SingleParticleModel &model, const ModeAngles &angles, double t, std::vector<ModeSite> sub) {
    const Index n = model.energies.size();
    detail::require(angles.sin.size() == n, "mode angles do not match the model");
    for(const auto &s : sub)
        detail::require(s.site >= 1 && s.site <= model.L, "site index " + std::to_string(s.site) + " outside 1.." + std::to_string(model.L));

    Eigen::VectorXcd pair(n);
    Eigen::VectorXd  occ_a(n), occ_b(n);
    for(Index k = 0; k < n; ++k) {
        const double sc = angles.sin(k) * angles.cos(k);
        pair(k)         = sc * std::polar(1.0, t * model.energies(k));
        occ_a(k)        = angles.sin(k) * angles.sin(k);
        occ_b(k)        = angles.cos(k) * angles.cos(k);
    }

    const auto       m = static_cast<Index>(sub.size());
    Eigen::MatrixXcd c(m, m);
    for(Index i = 0; i < m; ++i) {
        const auto vi = model.modes.row(sub[static_cast<std::size_t>(i)].site - 1);
        for(Index j = i; j < m; ++j) {
            const auto vj = model.modes.row(sub[static_cast<std::size_t>(j)].site - 1);
            const auto I  = sub[static_cast<std::size_t>(i)].copy, J = sub[static_cast<std::size_t>(j)].copy;
            Complex    v;
            if(I == FermionCopy::A && J == FermionCopy::A) v = (vi.array() * occ_a.transpose().array() * vj.array()).sum();
            else if(I == FermionCopy::B && J == FermionCopy::B) v = (vi.array() * occ_b.transpose().array() * vj.array()).sum();
            else if(I == FermionCopy::A) v = (vi.transpose().cast<Complex>().array() * pair.array() * vj.transpose().cast<Complex>().array()).sum();
            else v = (vi.transpose().cast<Complex>().array() * pair.conjugate().array() * vj.transpose().cast<Complex>().array()).sum();
            c(i, j) = v;
            c(j, i) = std::conj(v);
        }
        c(i, i) = c(i, i).real();
    }
    return {std::move(sub), std::move(c)};
}

/// -sum [nu ln nu + (1 - nu) ln(1 - nu)] over correlator eigenvalues.
inline double ff_entropy(const DoubledCorrelator &c) {
    if(c.entries.rows() == 0) return 0.0;
    Eigen::MatrixXcd a = c.entries;
    RealVector       nu;
    detail::heevd(a, nu, false);
    double s = 0.0;
    for(Index i = 0; i < nu.size(); ++i) {
        if(nu(i) < -1e-8 || nu(i) > 1.0 + 1e-8)
            throw ValidationError("correlator eigenvalue " + std::to_string(nu(i)) + " outside [0, 1]");
        const double v = std::clamp(nu(i), 0.0, 1.0);
        if(v > 0.0) s -= v * std::log(v);
        if(v < 1.0) s -= (1.0 - v) * std::log1p(-v);
    }
    return s;
}

struct FfBomiValue {
    double S_A = 0, S_B = 0, S_AuB = 0, I = 0;
};

inline FfBomiValue ff_bomi(const SingleParticleModel &model, const ModeAngles &angles, double t, const std::vector<int> &a_sites,
                           const std::vector<int> &b_sites) {
    std::vector<ModeSite> a, b;
    for(int x : a_sites) a.push_back({FermionCopy::A, x});
    for(int x : b_sites) b.push_back({FermionCopy::B, x});
    std::vector<ModeSite> ab = a;
    ab.insert(ab.end(), b.begin(), b.end());

    FfBomiValue r;
    r.S_A   = ff_entropy(doubled_correlator(model, angles, t, a));
    r.S_B   = ff_entropy(doubled_correlator(model, angles, t, b));
    r.S_AuB = ff_entropy(doubled_correlator(model, angles, t, ab));
    r.I     = r.S_A + r.S_B - r.S_AuB;
    return r;
}

/// Sites pc - half .. pc + half wrapped onto 1..L.
inline std::vector<int> centered_block(int pc, int half, int L) {
    std::vector<int> s;
    for(int k = -half; k <= half; ++k) s.push_back(wrap_site(pc + k, L));
    return s;
}

} // namespace scramble
