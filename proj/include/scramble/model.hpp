#pragma once

// Ising chain with transverse and longitudinal fields on a ring, and its
// Moebius / sine-square deformed versions.
//
// Bond a joins sites a and a+1 (mod L). Bond L closes the ring and is the
// weakest bond of a deformed chain; bond L/2 is the strongest.

#include "scramble/hilbert.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <string>

namespace scramble {

struct ChainConfig {
    int    L  = 8;
    double hx = -1.05;
    double hz = 0.5;

    static constexpr ChainConfig chaotic(int L) { return {L, -1.05, 0.5}; }

    void validate() const {
        detail::require(L >= 2, "chain length must be at least 2");
        detail::require(L % 2 == 0, "chain length must be even");
        detail::require(std::isfinite(hx) && std::isfinite(hz), "couplings must be finite");
    }
};

class Deformation {
  public:
    enum class Kind { uniform, moebius, ssd };

    static Deformation uniform() { return Deformation(Kind::uniform, 0.0); }
    static Deformation ssd() { return Deformation(Kind::ssd, 0.0); }
    static Deformation moebius(double theta) {
        detail::require(std::isfinite(theta) && theta >= 0.0, "Moebius parameter must be finite and >= 0");
        return Deformation(Kind::moebius, theta);
    }

    /// Accepts "uniform", "ssd" or a numeric theta.
    static Deformation parse(const std::string &s) {
        if(s == "ssd" || s == "SSD" || s == "inf") return ssd();
        if(s == "uniform") return uniform();
        std::size_t pos   = 0;
        double      theta = 0.0;
        try {
            theta = std::stod(s, &pos);
        } catch(const std::exception &) { pos = 0; }
        if(pos != s.size() || s.empty()) throw ArgumentError("cannot parse deformation '" + s + "'");
        return moebius(theta);
    }

    [[nodiscard]] Kind   kind() const { return kind_; }
    [[nodiscard]] double theta() const { return theta_; }
    [[nodiscard]] bool   is_uniform() const { return kind_ == Kind::uniform || (kind_ == Kind::moebius && theta_ == 0.0); }

    /// Column value for CSV output: the theta value or "ssd".
    [[nodiscard]] std::string label() const {
        if(kind_ == Kind::ssd) return "ssd";
        if(kind_ == Kind::uniform) return "0";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", theta_);
        return buf;
    }

    friend bool operator==(const Deformation &, const Deformation &) = default;

  private:
    Deformation(Kind k, double theta) : kind_(k), theta_(theta) {}
    Kind   kind_;
    double theta_;
};

namespace detail {
// 1 - tanh(2 theta) cos(phase); the SSD limit is written as 1 - cos(phase),
// which equals 2 sin^2(phase / 2) and is exactly zero on the closing bond.
inline double envelope(double phase, const Deformation &d) {
    switch(d.kind()) {
        case Deformation::Kind::uniform: return 1.0;
        case Deformation::Kind::moebius: return 1.0 - std::tanh(2.0 * d.theta()) * std::cos(phase);
        case Deformation::Kind::ssd: return 1.0 - std::cos(phase);
    }
    return 1.0;
}
} // namespace detail

inline double envelope_bond(int a, int L, const Deformation &d) {
    detail::require(L >= 1 && a >= 1 && a <= L, "bond index " + std::to_string(a) + " outside 1.." + std::to_string(L));
    return detail::envelope(2.0 * std::numbers::pi * a / L, d);
}

inline double envelope_site(int a, int L, const Deformation &d) {
    detail::require(L >= 1 && a >= 1 && a <= L, "site index " + std::to_string(a) + " outside 1.." + std::to_string(L));
    return detail::envelope(std::numbers::pi * (2.0 * a - 1.0) / L, d);
}

/// Periodic site index in 1..L.
constexpr int wrap_site(int a, int L) { return ((a - 1) % L + L) % L + 1; }

/// sum_a [ f_bond(a) Z_a Z_{a+1} + f_site(a) (hx X_a + hz Z_a) ], built directly
/// from bit operations. Real symmetric in the computational basis.
inline DenseOperator build_hamiltonian(const ChainConfig &cfg, const Deformation &d) {
    cfg.validate();
    const int   L   = cfg.L;
    const Index dim = register_dim(L);

    std::vector<double> bond(static_cast<std::size_t>(L)), site(static_cast<std::size_t>(L));
    for(int a = 1; a <= L; ++a) {
        bond[static_cast<std::size_t>(a - 1)] = envelope_bond(a, L, d);
        site[static_cast<std::size_t>(a - 1)] = envelope_site(a, L, d);
    }

    DenseOperator h = DenseOperator::Zero(dim, dim);
    for(Index i = 0; i < dim; ++i) {
        const auto s    = static_cast<std::uint64_t>(i);
        double     diag = 0.0;
        for(int a = 1; a <= L; ++a) {
            const double za = 1 - 2 * qubit_bit(s, a, L);
            const double zb = 1 - 2 * qubit_bit(s, wrap_site(a + 1, L), L);
            const auto   k  = static_cast<std::size_t>(a - 1);
            diag += bond[k] * za * zb + site[k] * cfg.hz * za;
            h(static_cast<Index>(s ^ qubit_mask(a, L)), i) += site[k] * cfg.hx;
        }
        h(i, i) += diag;
    }
    return h;
}

/// h_{0,a} = (Z_{a-1} Z_a + Z_a Z_{a+1}) / 2 + hx X_a + hz Z_a, periodic.
inline DenseOperator energy_density_operator(int a, const ChainConfig &cfg) {
    cfg.validate();
    const int L = cfg.L;
    detail::require(a >= 1 && a <= L, "site index " + std::to_string(a) + " outside 1.." + std::to_string(L));
    const Index   dim  = register_dim(L);
    const int     prev = wrap_site(a - 1, L), next = wrap_site(a + 1, L);
    DenseOperator h    = DenseOperator::Zero(dim, dim);
    for(Index i = 0; i < dim; ++i) {
        const auto   s  = static_cast<std::uint64_t>(i);
        const double za = 1 - 2 * qubit_bit(s, a, L);
        const double zp = 1 - 2 * qubit_bit(s, prev, L);
        const double zn = 1 - 2 * qubit_bit(s, next, L);
        h(i, i) += 0.5 * (zp * za + za * zn) + cfg.hz * za;
        h(static_cast<Index>(s ^ qubit_mask(a, L)), i) += cfg.hx;
    }
    return h;
}

} // namespace scramble
