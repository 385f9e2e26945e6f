#pragma once

// Operator entanglement of the dual state on the doubled chain.

#include "scramble/dynamics.hpp"
#include "scramble/model.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace scramble {

struct SiteRef {
    int copy; // 1 or 2
    int site; // 1..L

    friend auto operator<=>(const SiteRef &, const SiteRef &) = default;
};

class Subsystem {
  public:
    Subsystem() = default;
    explicit Subsystem(std::vector<SiteRef> members) : members_(std::move(members)) {
        std::set<SiteRef> seen;
        for(const auto &m : members_) {
            detail::require(m.copy == 1 || m.copy == 2, "copy label must be 1 or 2");
            detail::require(m.site >= 1, "site index must be positive");
            detail::require(seen.insert(m).second, "duplicate subsystem member");
        }
    }

    static Subsystem in_copy(int copy, const std::vector<int> &sites) {
        std::vector<SiteRef> m;
        for(int s : sites) m.push_back({copy, s});
        return Subsystem(std::move(m));
    }

    [[nodiscard]] const std::vector<SiteRef> &members() const { return members_; }
    [[nodiscard]] std::size_t                 size() const { return members_.size(); }
    [[nodiscard]] bool                        empty() const { return members_.empty(); }

    [[nodiscard]] std::vector<int> sites() const {
        std::vector<int> s;
        for(const auto &m : members_) s.push_back(m.site);
        return s;
    }

    /// Qubit indices on the doubled register (copy 1 -> a, copy 2 -> L + a).
    [[nodiscard]] std::vector<int> qubits(int L) const {
        std::vector<int> q;
        for(const auto &m : members_) {
            detail::require(m.site <= L, "subsystem site " + std::to_string(m.site) + " exceeds chain length");
            q.push_back(m.copy == 1 ? m.site : L + m.site);
        }
        return q;
    }

    [[nodiscard]] Subsystem united(const Subsystem &other) const {
        auto m = members_;
        m.insert(m.end(), other.members_.begin(), other.members_.end());
        return Subsystem(std::move(m));
    }

  private:
    std::vector<SiteRef> members_;
};

/// Contiguous block of l sites around centre pc, wrapped onto 1..L.
/// Odd l is centred on pc; even l spans pc - l/2 + 1 .. pc + l/2.
inline Subsystem subsystem_from_center(int pc, int l, int copy, int L) {
    detail::require(L >= 1, "chain length must be positive");
    detail::require(l >= 1 && l <= L, "subsystem size " + std::to_string(l) + " outside 1.." + std::to_string(L));
    const int first = l % 2 == 1 ? pc - (l - 1) / 2 : pc - l / 2 + 1;
    std::vector<int> sites;
    for(int k = 0; k < l; ++k) sites.push_back(wrap_site(first + k, L));
    return Subsystem::in_copy(copy, sites);
}

/// Von Neumann entropy (nats) of subsystem V of a dual state.
inline double oee(const StateVector &psi, const Subsystem &v) {
    detail::require(!v.empty(), "operator entanglement needs a nonempty subsystem");
    detail::require(psi.qubits() % 2 == 0, "dual state must live on an even number of qubits");
    const auto q = v.qubits(psi.qubits() / 2);
    return entropy_of_probabilities(schmidt_probabilities(psi, q));
}

struct BomiValue {
    double S_A = 0, S_B = 0, S_AuB = 0, I = 0;
};

/// I_{A,B} = S_A + S_B - S_{A u B} on a given dual state.
inline BomiValue bomi(const StateVector &psi, const Subsystem &a, const Subsystem &b) {
    const int L  = psi.qubits() / 2;
    const auto qa = a.qubits(L), qb = b.qubits(L);
    for(int q : qa)
        detail::require(std::find(qb.begin(), qb.end(), q) == qb.end(), "subsystems A and B overlap");
    BomiValue r;
    r.S_A   = oee(psi, a);
    r.S_B   = oee(psi, b);
    r.S_AuB = oee(psi, a.united(b));
    r.I     = r.S_A + r.S_B - r.S_AuB;
    return r;
}

inline BomiValue bomi(double t, const Subsystem &a, const Subsystem &b, const EigenSystem &evo, const ThermalEnsemble &ens) {
    const int L = static_cast<int>(std::lround(std::log2(static_cast<double>(evo.dim()))));
    return bomi(dual_state(t, evo, ens, L), a, b);
}

} // namespace scramble
