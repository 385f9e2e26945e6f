#pragma once

// Experiment orchestration: a flat, serializable configuration, the built-in
// per-figure recipes, and runners that turn a configuration into CSV tables.

#include "scramble/dynamics.hpp"
#include "scramble/freefermion.hpp"
#include "scramble/model.hpp"
#include "scramble/opent.hpp"
#include "scramble/parallel.hpp"
#include "scramble/probes.hpp"
#include "scramble/spectra.hpp"
#include "scramble/version.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace scramble {

inline constexpr int max_spin_sites    = 14;
inline constexpr int max_fermion_sites = 4096;

enum class ExperimentKind { level_stats, energy_density, bomi, ssf, return_amp, two_point, otoc, ff_bomi };

inline const std::vector<std::pair<ExperimentKind, std::string>> &experiment_names() {
    static const std::vector<std::pair<ExperimentKind, std::string>> names = {
        {ExperimentKind::level_stats, "level-stats"}, {ExperimentKind::energy_density, "energy-density"},
        {ExperimentKind::bomi, "bomi"},               {ExperimentKind::ssf, "ssf"},
        {ExperimentKind::return_amp, "return-amp"},   {ExperimentKind::two_point, "two-point"},
        {ExperimentKind::otoc, "otoc"},               {ExperimentKind::ff_bomi, "ff-bomi"},
    };
    return names;
}

inline std::string experiment_name(ExperimentKind k) {
    for(const auto &[kind, name] : experiment_names())
        if(kind == k) return name;
    return "?";
}

inline ExperimentKind parse_experiment(const std::string &s) {
    std::string valid;
    for(const auto &[kind, name] : experiment_names()) {
        if(name == s) return kind;
        valid += (valid.empty() ? "" : ", ") + name;
    }
    throw ArgumentError("unknown experiment '" + s + "' (valid: " + valid + ")");
}

namespace detail {

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    if(s.empty()) return out;
    std::string       item;
    std::stringstream ss(s);
    while(std::getline(ss, item, sep)) out.push_back(item);
    if(s.back() == sep) out.emplace_back();
    return out;
}

inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if(b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string &key, const std::string &s) {
    std::size_t pos = 0;
    double      v   = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch(const std::exception &) { pos = 0; }
    if(s.empty() || pos != s.size()) throw ArgumentError("key '" + key + "': expected a number, got '" + s + "'");
    return v;
}

inline long long parse_integer(const std::string &key, const std::string &s) {
    std::size_t pos = 0;
    long long   v   = 0;
    try {
        v = std::stoll(s, &pos);
    } catch(const std::exception &) { pos = 0; }
    if(s.empty() || pos != s.size()) throw ArgumentError("key '" + key + "': expected an integer, got '" + s + "'");
    return v;
}

inline std::uint64_t parse_unsigned(const std::string &key, const std::string &s) {
    std::size_t   pos = 0;
    std::uint64_t v   = 0;
    try {
        if(!s.empty() && s[0] != '-') v = std::stoull(s, &pos);
    } catch(const std::exception &) { pos = 0; }
    if(s.empty() || pos != s.size()) throw ArgumentError("key '" + key + "': expected a nonnegative integer, got '" + s + "'");
    return v;
}

/// "1,2,5-8" -> {1,2,5,6,7,8}
inline std::vector<int> parse_int_list(const std::string &key, const std::string &s) {
    std::vector<int> out;
    for(const auto &raw : split(s, ',')) {
        const auto item = trim(raw);
        const auto dash = item.find('-', 1);
        if(dash == std::string::npos) {
            out.push_back(static_cast<int>(parse_integer(key, item)));
            continue;
        }
        const auto lo = parse_integer(key, item.substr(0, dash)), hi = parse_integer(key, item.substr(dash + 1));
        if(hi < lo) throw ArgumentError("key '" + key + "': empty range '" + item + "'");
        for(auto v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    }
    return out;
}

inline std::vector<double> parse_double_list(const std::string &key, const std::string &s) {
    std::vector<double> out;
    for(const auto &item : split(s, ',')) out.push_back(parse_double(key, trim(item)));
    return out;
}

template<class T, class F>
std::string join(const std::vector<T> &v, F f, const std::string &sep = ",") {
    std::string s;
    for(std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + f(v[i]);
    return s;
}

/// Compact site-set label, e.g. "1-5+96-100".
inline std::string site_label(const std::vector<int> &sites) {
    std::string s;
    for(std::size_t i = 0; i < sites.size();) {
        std::size_t j = i;
        while(j + 1 < sites.size() && sites[j + 1] == sites[j] + 1) ++j;
        s += (s.empty() ? "" : "+") + std::to_string(sites[i]);
        if(j > i) s += "-" + std::to_string(sites[j]);
        i = j + 1;
    }
    return s;
}

inline std::string deformation_token(const Deformation &d) { return d.kind() == Deformation::Kind::uniform ? "uniform" : d.label(); }

} // namespace detail

/// Every knob of every experiment. Keys not used by the selected experiment
/// are carried along unchanged so a configuration always round-trips.
struct ExperimentConfig {
    ExperimentKind           kind = ExperimentKind::bomi;
    std::string              name;
    ChainConfig              chain;
    std::vector<Deformation> deformations{Deformation::uniform()};
    double                   beta = 0.0;

    GridKind grid   = GridKind::linear;
    double   t_min  = 0.0;
    double   t_max  = 4.0;
    double   t_step = 0.25;

    std::vector<int> centers{1};
    int              l_A = 3;
    int              l_B = 3;
    std::vector<int> sites;

    std::vector<Axis> alphas{Axis::z};

    std::vector<double> t_evo{10.0};
    GridKind            tau_grid  = GridKind::log10;
    double              tau_min   = 0.01;
    double              tau_max   = 1e4;
    double              tau_step  = 0.01;
    SsfConvention       convention = SsfConvention::phase;
    int                 ensemble  = 32;
    std::uint64_t       seed      = 0;

    int    unfold_degree = 8;
    double bin_width     = 0.1;
    double s_max         = 4.0;

    TfdSign                       tfd_sign   = TfdSign::occupied_high;
    int                           half_width = 5;
    std::vector<std::vector<int>> ff_subsystems;

    friend bool operator==(const ExperimentConfig &a, const ExperimentConfig &b) {
        return a.to_kv() == b.to_kv();
    }

    /// Ordered key=value view; the inverse of set().
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> to_kv() const {
        using detail::fmt;
        using detail::join;
        auto ints = [](int v) { return std::to_string(v); };
        return {
            {"experiment", experiment_name(kind)},
            {"name", name},
            {"L", std::to_string(chain.L)},
            {"hx", fmt(chain.hx)},
            {"hz", fmt(chain.hz)},
            {"theta", join(deformations, detail::deformation_token)},
            {"beta", fmt(beta)},
            {"grid", grid == GridKind::linear ? "linear" : "log10"},
            {"t_min", fmt(t_min)},
            {"t_max", fmt(t_max)},
            {"t_step", fmt(t_step)},
            {"centers", join(centers, ints)},
            {"l_A", std::to_string(l_A)},
            {"l_B", std::to_string(l_B)},
            {"sites", join(sites, ints)},
            {"alpha", join(alphas, [](Axis a) { return std::string(1, axis_name(a)); })},
            {"t_evo", join(t_evo, fmt)},
            {"tau_grid", tau_grid == GridKind::linear ? "linear" : "log10"},
            {"tau_min", fmt(tau_min)},
            {"tau_max", fmt(tau_max)},
            {"tau_step", fmt(tau_step)},
            {"convention", ssf_convention_name(convention)},
            {"ensemble", std::to_string(ensemble)},
            {"seed", std::to_string(seed)},
            {"unfold_degree", std::to_string(unfold_degree)},
            {"bin_width", fmt(bin_width)},
            {"s_max", fmt(s_max)},
            {"tfd_sign", tfd_sign == TfdSign::occupied_high ? "high" : "low"},
            {"half_width", std::to_string(half_width)},
            {"ff_subsystems", join(ff_subsystems, [&](const std::vector<int> &s) { return join(s, ints); }, ";")},
        };
    }

    void set(const std::string &key, const std::string &raw) {
        using namespace detail;
        const std::string v = trim(raw);
        if(key == "experiment") kind = parse_experiment(v);
        else if(key == "name") name = v;
        else if(key == "L") chain.L = static_cast<int>(parse_integer(key, v));
        else if(key == "hx") chain.hx = parse_double(key, v);
        else if(key == "hz") chain.hz = parse_double(key, v);
        else if(key == "theta") {
            deformations.clear();
            for(const auto &item : split(v, ',')) deformations.push_back(Deformation::parse(trim(item)));
        } else if(key == "beta") beta = parse_double(key, v);
        else if(key == "grid") grid = parse_grid_kind(v);
        else if(key == "t_min") t_min = parse_double(key, v);
        else if(key == "t_max") t_max = parse_double(key, v);
        else if(key == "t_step") t_step = parse_double(key, v);
        else if(key == "centers") centers = parse_int_list(key, v);
        else if(key == "l_A") l_A = static_cast<int>(parse_integer(key, v));
        else if(key == "l_B") l_B = static_cast<int>(parse_integer(key, v));
        else if(key == "sites") sites = parse_int_list(key, v);
        else if(key == "alpha") {
            alphas.clear();
            for(const auto &item : split(v, ',')) alphas.push_back(parse_axis(trim(item)));
        } else if(key == "t_evo") t_evo = parse_double_list(key, v);
        else if(key == "tau_grid") tau_grid = parse_grid_kind(v);
        else if(key == "tau_min") tau_min = parse_double(key, v);
        else if(key == "tau_max") tau_max = parse_double(key, v);
        else if(key == "tau_step") tau_step = parse_double(key, v);
        else if(key == "convention") convention = parse_ssf_convention(v);
        else if(key == "ensemble") ensemble = static_cast<int>(parse_integer(key, v));
        else if(key == "seed") seed = parse_unsigned(key, v);
        else if(key == "unfold_degree") unfold_degree = static_cast<int>(parse_integer(key, v));
        else if(key == "bin_width") bin_width = parse_double(key, v);
        else if(key == "s_max") s_max = parse_double(key, v);
        else if(key == "tfd_sign") {
            if(v == "high") tfd_sign = TfdSign::occupied_high;
            else if(v == "low") tfd_sign = TfdSign::occupied_low;
            else throw ArgumentError("key 'tfd_sign': expected 'high' or 'low', got '" + v + "'");
        } else if(key == "half_width") half_width = static_cast<int>(parse_integer(key, v));
        else if(key == "ff_subsystems") {
            ff_subsystems.clear();
            for(const auto &item : split(v, ';')) ff_subsystems.push_back(parse_int_list(key, trim(item)));
        } else throw ArgumentError("unknown configuration key '" + key + "'");
    }

    /// "key=value" lines; '#' starts a comment.
    [[nodiscard]] std::string serialize() const {
        std::string s;
        for(const auto &[k, v] : to_kv()) s += k + "=" + v + "\n";
        return s;
    }

    void apply_text(const std::string &text) {
        std::stringstream ss(text);
        std::string       line;
        int               lineno = 0;
        while(std::getline(ss, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if(hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if(line.empty()) continue;
            const auto eq = line.find('=');
            if(eq == std::string::npos) throw ArgumentError("config line " + std::to_string(lineno) + ": expected key=value");
            set(detail::trim(line.substr(0, eq)), line.substr(eq + 1));
        }
    }

    static ExperimentConfig parse(const std::string &text) {
        ExperimentConfig c;
        c.apply_text(text);
        return c;
    }

    [[nodiscard]] bool spin_chain() const { return kind != ExperimentKind::ff_bomi; }

    [[nodiscard]] std::string stem() const { return name.empty() ? experiment_name(kind) : name; }

    [[nodiscard]] std::vector<double> times() const { return time_grid(grid, t_min, t_max, t_step); }

    /// Checks the configuration against the module contracts and the dense-method size limits.
    void validate() const {
        using detail::require;
        const int L = chain.L;
        if(spin_chain() && L > max_spin_sites)
            throw ResourceLimitError("L=" + std::to_string(L) + " exceeds the dense spin-chain limit of " + std::to_string(max_spin_sites) +
                                     " sites (memory and time grow as 4^L and 8^L); lower L");
        if(!spin_chain() && L > max_fermion_sites)
            throw ResourceLimitError("L=" + std::to_string(L) + " exceeds the free-fermion limit of " + std::to_string(max_fermion_sites) +
                                     " sites (L x L eigensolve); lower L");
        if(spin_chain()) chain.validate();
        else require(L >= 2, "chain length must be at least 2");
        require(!deformations.empty(), "key 'theta': at least one deformation is required");
        require(std::isfinite(beta) && beta >= 0.0, "key 'beta': inverse temperature must be finite and >= 0");
        auto in_range = [&](const std::vector<int> &v, const std::string &key) {
            for(int s : v) require(s >= 1 && s <= L, "key '" + key + "': site " + std::to_string(s) + " outside 1.." + std::to_string(L));
        };
        switch(kind) {
            case ExperimentKind::level_stats:
                require(unfold_degree >= 0, "key 'unfold_degree' must be >= 0");
                require(bin_width > 0.0 && s_max > bin_width, "keys 'bin_width'/'s_max': need 0 < bin_width < s_max");
                break;
            case ExperimentKind::energy_density: (void)times(); break;
            case ExperimentKind::bomi:
                (void)times();
                require(!centers.empty(), "key 'centers' must list at least one centre");
                in_range(centers, "centers");
                require(l_A >= 1 && l_A <= L && l_B >= 1 && l_B <= L, "keys 'l_A'/'l_B' must lie in 1..L");
                break;
            case ExperimentKind::ssf:
                require(!sites.empty(), "key 'sites' must list the SSF subsystem");
                in_range(sites, "sites");
                require(!t_evo.empty(), "key 't_evo' must list at least one evolution time");
                require(ensemble >= 1, "key 'ensemble' must be positive");
                (void)time_grid(tau_grid, tau_min, tau_max, tau_step);
                break;
            case ExperimentKind::return_amp:
            case ExperimentKind::two_point:
            case ExperimentKind::otoc:
                (void)times();
                require(!sites.empty(), "key 'sites' must list at least one site");
                require(!alphas.empty(), "key 'alpha' must list at least one axis");
                in_range(sites, "sites");
                break;
            case ExperimentKind::ff_bomi:
                (void)times();
                if(ff_subsystems.empty()) {
                    require(!centers.empty(), "ff-bomi needs 'ff_subsystems' or 'centers'");
                    in_range(centers, "centers");
                    require(half_width >= 0 && 2 * half_width + 1 <= L, "key 'half_width' too large for L");
                }
                for(const auto &s : ff_subsystems) {
                    require(!s.empty(), "key 'ff_subsystems': empty subsystem");
                    in_range(s, "ff_subsystems");
                }
                break;
        }
    }
};

/// One CSV file worth of results.
struct Table {
    std::string                           name;
    std::vector<std::string>              columns;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::string csv() const {
        std::string s = detail::join(columns, [](const std::string &c) { return c; }) + "\n";
        for(const auto &r : rows) s += detail::join(r, [](const std::string &c) { return c; }) + "\n";
        return s;
    }
};

namespace detail {

inline std::shared_ptr<const EigenSystem> base_system(const ChainConfig &cfg) {
    return std::make_shared<const EigenSystem>(eigh(build_hamiltonian(cfg, Deformation::uniform())));
}

/// Eigensystem of the evolution Hamiltonian; reuses H0's when undeformed.
inline std::shared_ptr<const EigenSystem> evolution_system(const ChainConfig &cfg, const Deformation &d,
                                                           const std::shared_ptr<const EigenSystem> &base) {
    if(d.kind() == Deformation::Kind::uniform) return base;
    return std::make_shared<const EigenSystem>(eigh(build_hamiltonian(cfg, d)));
}

inline std::vector<Table> run_level_stats(const ExperimentConfig &c, unsigned threads) {
    Table levels{c.stem() + "_levels", {"theta_or_ssd", "sector_label", "level_index", "energy", "unfolded"}, {}};
    Table hist{c.stem() + "_histogram", {"theta_or_ssd", "s_lo", "s_hi", "density", "goe", "poisson"}, {}};
    Table ks{c.stem() + "_ks", {"theta_or_ssd", "n_spacings", "ks_goe", "ks_poisson"}, {}};
    for(const auto &d : c.deformations) {
        auto sectors = sector_split(build_hamiltonian(c.chain, d), d, c.chain.L, threads);
        for(auto &s : sectors) s = unfold(s, c.unfold_degree);
        for(const auto &s : sectors)
            for(Index i = 0; i < s.levels.size(); ++i)
                levels.rows.push_back({d.label(), s.label.str(), std::to_string(i), fmt(s.levels(i)), fmt((*s.unfolded)(i))});
        const auto sample = normalized_spacings(sectors);
        for(const auto &b : spacing_histogram(sample, c.bin_width, c.s_max)) {
            const double mid = 0.5 * (b.lo + b.hi);
            hist.rows.push_back({d.label(), fmt(b.lo), fmt(b.hi), fmt(b.density), fmt(reference_pdf(ReferenceKind::goe, mid)),
                                 fmt(reference_pdf(ReferenceKind::poisson, mid))});
        }
        ks.rows.push_back({d.label(), std::to_string(sample.values.size()), fmt(ks_distance(sample, ReferenceKind::goe)),
                           fmt(ks_distance(sample, ReferenceKind::poisson))});
    }
    return {levels, hist, ks};
}

inline std::vector<Table> run_energy_density(const ExperimentConfig &c, unsigned threads) {
    const int  L     = c.chain.L;
    const auto ts    = c.times();
    const auto base  = base_system(c.chain);
    ThermalEnsemble ens(base, c.beta);
    Table series{c.stem(), {"theta_or_ssd", "beta", "t", "site", "value"}, {}};
    Table average{c.stem() + "_average", {"theta_or_ssd", "beta", "site", "t_min", "t_max", "points", "average"}, {}};
    for(const auto &d : c.deformations) {
        const auto evo = evolution_system(c.chain, d, base);
        std::vector<std::unique_ptr<ThermalExpectation>> per_site(static_cast<std::size_t>(L));
        parallel_for(per_site.size(), threads, [&](std::size_t a) {
            per_site[a] = std::make_unique<ThermalExpectation>(energy_density_operator(static_cast<int>(a) + 1, c.chain), *evo, ens);
        });
        std::vector<double> values(ts.size() * static_cast<std::size_t>(L));
        parallel_for(ts.size(), threads, [&](std::size_t k) {
            for(std::size_t a = 0; a < per_site.size(); ++a) values[k * per_site.size() + a] = (*per_site[a])(ts[k]);
        });
        for(std::size_t k = 0; k < ts.size(); ++k)
            for(int a = 1; a <= L; ++a)
                series.rows.push_back({d.label(), fmt(c.beta), fmt(ts[k]), std::to_string(a), fmt(values[k * static_cast<std::size_t>(L) + static_cast<std::size_t>(a - 1)])});
        for(int a = 1; a <= L; ++a) {
            double sum = 0.0;
            for(std::size_t k = 0; k < ts.size(); ++k) sum += values[k * static_cast<std::size_t>(L) + static_cast<std::size_t>(a - 1)];
            average.rows.push_back({d.label(), fmt(c.beta), std::to_string(a), fmt(ts.front()), fmt(ts.back()), std::to_string(ts.size()),
                                    fmt(sum / static_cast<double>(ts.size()))});
        }
    }
    return {series, average};
}

inline std::vector<Table> run_bomi(const ExperimentConfig &c, unsigned threads) {
    const int  L    = c.chain.L;
    const auto ts   = c.times();
    const auto base = base_system(c.chain);
    ThermalEnsemble ens(base, c.beta);
    Table out{c.stem(), {"theta_or_ssd", "beta", "P_c", "l_A", "l_B", "t", "S_A", "S_B", "S_AuB", "I_AB"}, {}};
    for(const auto &d : c.deformations) {
        const auto             evo = evolution_system(c.chain, d, base);
        std::vector<BomiValue> values(ts.size() * c.centers.size());
        parallel_for(ts.size(), threads, [&](std::size_t k) {
            const auto psi = dual_state(ts[k], *evo, ens, L);
            for(std::size_t p = 0; p < c.centers.size(); ++p)
                values[k * c.centers.size() + p] =
                    bomi(psi, subsystem_from_center(c.centers[p], c.l_A, 1, L), subsystem_from_center(c.centers[p], c.l_B, 2, L));
        });
        for(std::size_t p = 0; p < c.centers.size(); ++p)
            for(std::size_t k = 0; k < ts.size(); ++k) {
                const auto &v = values[k * c.centers.size() + p];
                out.rows.push_back({d.label(), fmt(c.beta), std::to_string(c.centers[p]), std::to_string(c.l_A), std::to_string(c.l_B), fmt(ts[k]),
                                    fmt(v.S_A), fmt(v.S_B), fmt(v.S_AuB), fmt(v.I)});
            }
    }
    return {out};
}

inline std::vector<Table> run_ssf(const ExperimentConfig &c, unsigned threads) {
    const auto           tau = time_grid(c.tau_grid, c.tau_min, c.tau_max, c.tau_step);
    ProductStateEnsemble ensemble{c.ensemble, c.seed};
    Table out{c.stem(), {"theta", "t", "tau", "g", "convention", "seed", "count"}, {}};
    for(const auto &d : c.deformations) {
        const EigenSystem evo = eigh(build_hamiltonian(c.chain, d));
        for(double t : c.t_evo)
            for(const auto &p : ssf(c.sites, t, tau, evo, ensemble, c.convention, threads))
                out.rows.push_back({d.label(), fmt(t), fmt(p.tau), fmt(p.g), ssf_convention_name(c.convention), std::to_string(c.seed),
                                    std::to_string(c.ensemble)});
    }
    return {out};
}

inline std::vector<Table> run_probe(const ExperimentConfig &c, unsigned threads) {
    const int  L    = c.chain.L;
    const auto ts   = c.times();
    const auto base = base_system(c.chain);
    ThermalEnsemble ens(base, c.beta);
    Table out{c.stem(), {"theta", "alpha", "a", "t", "re", "im"}, {}};
    for(const auto &d : c.deformations) {
        const auto           evo = evolution_system(c.chain, d, base);
        const std::size_t    np  = c.alphas.size() * c.sites.size();
        std::vector<Complex> values(ts.size() * np);
        if(c.kind == ExperimentKind::two_point) {
            parallel_for(ts.size(), threads, [&](std::size_t k) {
                const auto m = dual_matrix(ts[k], *evo, ens);
                for(std::size_t i = 0; i < c.alphas.size(); ++i)
                    for(std::size_t j = 0; j < c.sites.size(); ++j) values[k * np + i * c.sites.size() + j] = two_point(c.alphas[i], c.sites[j], m, L);
            });
        } else {
            parallel_for(np, threads, [&](std::size_t q) {
                const PauliProbe probe(c.alphas[q / c.sites.size()], c.sites[q % c.sites.size()], *evo, ens);
                for(std::size_t k = 0; k < ts.size(); ++k)
                    values[k * np + q] = c.kind == ExperimentKind::otoc ? Complex(probe.otoc(ts[k])) : probe.return_amplitude(ts[k]);
            });
        }
        for(std::size_t i = 0; i < c.alphas.size(); ++i)
            for(std::size_t j = 0; j < c.sites.size(); ++j)
                for(std::size_t k = 0; k < ts.size(); ++k) {
                    const Complex v = values[k * np + i * c.sites.size() + j];
                    out.rows.push_back({d.label(), std::string(1, axis_name(c.alphas[i])), std::to_string(c.sites[j]), fmt(ts[k]), fmt(v.real()), fmt(v.imag())});
                }
    }
    return {out};
}

inline std::vector<Table> run_ff_bomi(const ExperimentConfig &c, unsigned threads) {
    const int  L  = c.chain.L;
    const auto ts = c.times();
    std::vector<std::pair<std::string, std::vector<int>>> subs;
    if(!c.ff_subsystems.empty())
        for(const auto &s : c.ff_subsystems) subs.emplace_back(site_label(s), s);
    else
        for(int pc : c.centers) subs.emplace_back("P_c=" + std::to_string(pc), centered_block(pc, c.half_width, L));

    Table out{c.stem(), {"theta_or_ssd", "beta", "subsystem", "t", "S_A", "S_B", "S_AuB", "I_AB"}, {}};
    for(const auto &d : c.deformations) {
        const auto               model  = sp_hamiltonian(L, d);
        const auto               angles = mode_angles(model, c.beta, c.tfd_sign);
        std::vector<FfBomiValue> values(subs.size() * ts.size());
        parallel_for(values.size(), threads, [&](std::size_t q) {
            const auto &sites = subs[q / ts.size()].second;
            values[q]         = ff_bomi(model, angles, ts[q % ts.size()], sites, sites);
        });
        for(std::size_t s = 0; s < subs.size(); ++s)
            for(std::size_t k = 0; k < ts.size(); ++k) {
                const auto &v = values[s * ts.size() + k];
                out.rows.push_back({d.label(), fmt(c.beta), subs[s].first, fmt(ts[k]), fmt(v.S_A), fmt(v.S_B), fmt(v.S_AuB), fmt(v.I)});
            }
    }
    return {out};
}

} // namespace detail

/// Validates the configuration and computes all of its tables. Output does not
/// depend on `threads`.
inline std::vector<Table> run_experiment(const ExperimentConfig &c, unsigned threads = 1) {
    c.validate();
    switch(c.kind) {
        case ExperimentKind::level_stats: return detail::run_level_stats(c, threads);
        case ExperimentKind::energy_density: return detail::run_energy_density(c, threads);
        case ExperimentKind::bomi: return detail::run_bomi(c, threads);
        case ExperimentKind::ssf: return detail::run_ssf(c, threads);
        case ExperimentKind::return_amp:
        case ExperimentKind::two_point:
        case ExperimentKind::otoc: return detail::run_probe(c, threads);
        case ExperimentKind::ff_bomi: return detail::run_ff_bomi(c, threads);
    }
    return {};
}

struct Recipe {
    std::string      name;
    std::string      figure;
    std::string      description;
    ExperimentConfig config;
};

inline std::vector<Recipe> list_recipes() {
    auto make = [](const std::string &name, const std::string &text) {
        auto c = ExperimentConfig::parse(text);
        c.name = name;
        return c;
    };
    const std::string probe_common = "L=8\ntheta=0,0.5,1,2.5,ssd\nbeta=0\nsites=1,2,3,4\ngrid=linear\nt_min=0\nt_max=50\nt_step=0.05\n";
    return {
        {"fig1", "Fig. 1", "level-spacing statistics, L=12, theta in {0,0.5,1,ssd}",
         make("fig1", "experiment=level-stats\nL=12\ntheta=0,0.5,1,ssd\nbin_width=0.1\n")},
        {"fig2", "Fig. 2", "energy density under SSD and uniform evolution, L=8, beta=1, 30<t<1000",
         make("fig2", "experiment=energy-density\nL=8\nbeta=1\ntheta=0,ssd\ngrid=log10\nt_min=30\nt_max=1000\nt_step=1.62e-3\n")},
        {"fig3", "Fig. 3", "BOMI, L=8, l_A=l_B=3, theta sweep and P_c in {1,2,3,4}",
         make("fig3", "experiment=bomi\nL=8\nl_A=3\nl_B=3\ntheta=0,0.5,1,2.5,ssd\ncenters=1,2,3,4\nbeta=0\ngrid=linear\nt_min=0\nt_max=50\nt_step=0.25\n")},
        {"fig4", "Fig. 4", "subsystem spectral form factor, L=12, A={1,2,11,12}",
         make("fig4", "experiment=ssf\nL=12\ntheta=0.5,2.5,ssd\nsites=1,2,11,12\nt_evo=1,10,100\ntau_grid=log10\ntau_min=0.01\ntau_max=10000\n"
                      "tau_step=0.01\nensemble=32\nconvention=phase\n")},
        {"fig5", "Fig. 5", "return amplitude of sigma_z, L=8, a in {1,2,3,4}",
         make("fig5", "experiment=return-amp\nalpha=z\n" + probe_common)},
        {"fig6", "Fig. 6", "OTOC of sigma_z, L=8, a in {1,2,3,4}", make("fig6", "experiment=otoc\nalpha=z\n" + probe_common)},
        {"figA1", "Fig. A1 (left)", "free-fermion BOMI, L=100, A=B={1..5}u{96..100}, theta sweep",
         make("figA1", "experiment=ff-bomi\nL=100\nbeta=1\ntheta=0,0.5,1,2,ssd\nff_subsystems=1-5,96-100\ngrid=linear\nt_min=0\nt_max=100\nt_step=0.5\n")},
        {"figA1-positions", "Fig. A1 (right)", "free-fermion BOMI under SSD, A=B={P_c-5..P_c+5}",
         make("figA1-positions",
              "experiment=ff-bomi\nL=100\nbeta=1\ntheta=ssd\ncenters=1,25,50\nhalf_width=5\ngrid=linear\nt_min=0\nt_max=100\nt_step=0.5\n")},
        {"appC", "App. C", "return amplitude of sigma_x, sigma_y", make("appC", "experiment=return-amp\nalpha=x,y\n" + probe_common)},
        {"appD", "App. D", "dual-state two-point function C^alpha_x", make("appD", "experiment=two-point\nalpha=x,y,z\n" + probe_common)},
        {"appE", "App. E", "OTOC of sigma_x, sigma_y", make("appE", "experiment=otoc\nalpha=x,y\n" + probe_common)},
        {"appF", "App. F", "late-time energy density, L=8, beta=1, 100<t<1e5",
         make("appF", "experiment=energy-density\nL=8\nbeta=1\ntheta=0.2,0.5,1,ssd\ngrid=log10\nt_min=100\nt_max=100000\nt_step=1.62e-3\n")},
    };
}

inline Recipe find_recipe(const std::string &name) {
    std::string valid;
    for(auto &r : list_recipes()) {
        if(r.name == name) return r;
        valid += (valid.empty() ? "" : ", ") + r.name;
    }
    throw ArgumentError("unknown recipe '" + name + "' (valid: " + valid + ")");
}

} // namespace scramble
