#pragma once

// Symmetry-resolved level statistics: reflection / translation sectors,
// polynomial unfolding of the level staircase, and nearest-neighbour spacing
// distributions compared against GOE and Poisson references.

#include "scramble/hilbert.hpp"
#include "scramble/model.hpp"
#include "scramble/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scramble {

/// |s_1 ... s_L> -> |s_L ... s_1>
constexpr std::uint64_t reflect_index(std::uint64_t s, int L) {
    std::uint64_t r = 0;
    for(int q = 0; q < L; ++q) r |= ((s >> q) & 1u) << (L - 1 - q);
    return r;
}

/// |s_1 ... s_L> -> |s_L s_1 ... s_{L-1}>, a right rotation of the bit string.
constexpr std::uint64_t translate_index(std::uint64_t s, int L) {
    return (s >> 1) | ((s & 1u) << (L - 1));
}

namespace detail {
template<class Perm>
DenseOperator permutation_operator(int L, Perm perm) {
    const Index   d = register_dim(L);
    DenseOperator p = DenseOperator::Zero(d, d);
    for(Index i = 0; i < d; ++i) p(static_cast<Index>(perm(static_cast<std::uint64_t>(i))), i) = 1.0;
    return p;
}

/// max |H(i,j) - H(p(i),p(j))|, i.e. the norm of P H P^-1 - H for a permutation P.
template<class Perm>
double permutation_commutator(const DenseOperator &h, Perm perm) {
    double worst = 0.0;
    for(Index j = 0; j < h.cols(); ++j) {
        const auto pj = static_cast<Index>(perm(static_cast<std::uint64_t>(j)));
        for(Index i = 0; i < h.rows(); ++i)
            worst = std::max(worst, std::abs(h(i, j) - h(static_cast<Index>(perm(static_cast<std::uint64_t>(i))), pj)));
    }
    return worst;
}
} // namespace detail

inline DenseOperator reflection_operator(int L) {
    return detail::permutation_operator(L, [L](std::uint64_t s) { return reflect_index(s, L); });
}

inline DenseOperator translation_operator(int L) {
    return detail::permutation_operator(L, [L](std::uint64_t s) { return translate_index(s, L); });
}

struct SectorLabel {
    int                parity = 0; // +1, -1, or 0 when unresolved
    std::optional<int> momentum;   // l in 0..L-1, T eigenvalue exp(2 pi i l / L)

    [[nodiscard]] std::string str() const {
        std::string s;
        if(momentum) s = "k=" + std::to_string(*momentum);
        if(parity != 0) {
            if(!s.empty()) s += ';';
            s += parity > 0 ? "P=+1" : "P=-1";
        }
        return s.empty() ? "all" : s;
    }
};

struct SectorSpectrum {
    SectorLabel               label;
    RealVector                levels;
    std::optional<RealVector> unfolded;
};

struct SpacingSample {
    std::vector<double> values;
};

/// Sector-projected block of an operator together with its label.
struct SectorBlock {
    SectorLabel      label;
    Eigen::MatrixXcd block;
};

namespace detail {

// Orthonormal symmetry-adapted basis stored column-sparse. Every basis state
// of the register contributes to at most one column, which makes projection a
// single lookup per state.
struct SparseBasis {
    std::vector<std::vector<std::pair<std::uint64_t, Complex>>> columns;
    std::vector<std::int64_t>                                   owner; // column of each basis state, -1 if none
    std::vector<Complex>                                        coeff; // its amplitude in that column

    explicit SparseBasis(Index dim) : owner(static_cast<std::size_t>(dim), -1), coeff(static_cast<std::size_t>(dim)) {}

    void add(std::vector<std::pair<std::uint64_t, Complex>> col) {
        const auto id = static_cast<std::int64_t>(columns.size());
        for(const auto &[s, c] : col) {
            owner[s] = id;
            coeff[s] = c;
        }
        columns.push_back(std::move(col));
    }
    [[nodiscard]] Index size() const { return static_cast<Index>(columns.size()); }
};

/// Q^dagger H Q for a sparse orthonormal Q.
inline Eigen::MatrixXcd project(const DenseOperator &h, const SparseBasis &q) {
    const Index      n = q.size();
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(n, n);
    ComplexVector    hq(h.rows());
    for(Index j = 0; j < n; ++j) {
        hq.setZero();
        for(const auto &[s, c] : q.columns[static_cast<std::size_t>(j)]) hq += c * h.col(static_cast<Index>(s));
        for(Index s = 0; s < h.rows(); ++s) {
            const auto i = q.owner[static_cast<std::size_t>(s)];
            if(i >= 0) block(i, j) += std::conj(q.coeff[static_cast<std::size_t>(s)]) * hq(s);
        }
    }
    return block;
}

/// Q^dagger P Q for a basis permutation P.
template<class Perm>
Eigen::MatrixXcd project_permutation(const SparseBasis &q, Perm perm) {
    const Index      n = q.size();
    Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(n, n);
    for(Index j = 0; j < n; ++j)
        for(const auto &[s, c] : q.columns[static_cast<std::size_t>(j)]) {
            const auto t = perm(s);
            const auto i = q.owner[t];
            if(i >= 0) block(i, j) += std::conj(q.coeff[t]) * c;
        }
    return block;
}

/// Reflection-even and reflection-odd bases.
inline std::pair<SparseBasis, SparseBasis> parity_bases(int L) {
    const Index  d = register_dim(L);
    SparseBasis  even(d), odd(d);
    const double r = std::numbers::sqrt2 / 2.0;
    for(std::uint64_t s = 0; s < static_cast<std::uint64_t>(d); ++s) {
        const auto p = reflect_index(s, L);
        if(p == s) even.add({{s, 1.0}});
        else if(s < p) {
            even.add({{s, r}, {p, r}});
            odd.add({{s, r}, {p, -r}});
        }
    }
    return {std::move(even), std::move(odd)};
}

/// Translation eigenbases built from orbit representatives, one per momentum l.
inline std::vector<SparseBasis> momentum_bases(int L) {
    const Index              d = register_dim(L);
    std::vector<SparseBasis> bases;
    bases.reserve(static_cast<std::size_t>(L));
    for(int l = 0; l < L; ++l) bases.emplace_back(d);
    for(std::uint64_t s = 0; s < static_cast<std::uint64_t>(d); ++s) {
        std::vector<std::uint64_t> orbit{s};
        bool                       representative = true;
        for(auto t = translate_index(s, L); t != s; t = translate_index(t, L)) {
            if(t < s) {
                representative = false;
                break;
            }
            orbit.push_back(t);
        }
        if(!representative) continue;
        const auto   period = static_cast<int>(orbit.size());
        const double norm   = 1.0 / std::sqrt(static_cast<double>(period));
        for(int l = 0; l < L; ++l) {
            if((l * period) % L != 0) continue;
            std::vector<std::pair<std::uint64_t, Complex>> col;
            col.reserve(orbit.size());
            for(int j = 0; j < period; ++j)
                col.emplace_back(orbit[static_cast<std::size_t>(j)], norm * std::polar(1.0, -2.0 * std::numbers::pi * l * j / L));
            bases[static_cast<std::size_t>(l)].add(std::move(col));
        }
    }
    return bases;
}

} // namespace detail

/// Number of basis states in each momentum sector l = 0..L-1.
inline std::vector<Index> momentum_sector_dims(int L) {
    std::vector<Index> dims;
    for(const auto &b : detail::momentum_bases(L)) dims.push_back(b.size());
    return dims;
}

/// Projects H onto its symmetry sectors. Deformed chains are split by the
/// reflection P only. The uniform chain is split by momentum first; the
/// momenta with T = T^-1 (l = 0 and l = L/2) are further split by P.
inline std::vector<SectorBlock> sector_blocks(const DenseOperator &h, const Deformation &d, int L, double tol = 1e-10) {
    detail::require(h.rows() == register_dim(L) && h.cols() == h.rows(), "operator dimension does not match 2^L");
    const auto reflect = [L](std::uint64_t s) { return reflect_index(s, L); };
    if(detail::permutation_commutator(h, reflect) > tol) throw ValidationError("operator does not commute with the reflection P");

    std::vector<SectorBlock> out;
    if(!d.is_uniform()) {
        auto [even, odd] = detail::parity_bases(L);
        out.push_back({{+1, std::nullopt}, detail::project(h, even)});
        out.push_back({{-1, std::nullopt}, detail::project(h, odd)});
        return out;
    }

    const auto translate = [L](std::uint64_t s) { return translate_index(s, L); };
    if(detail::permutation_commutator(h, translate) > tol) throw ValidationError("operator does not commute with the translation T");

    const auto bases = detail::momentum_bases(L);
    for(int l = 0; l < L; ++l) {
        const auto      &basis = bases[static_cast<std::size_t>(l)];
        Eigen::MatrixXcd hl    = detail::project(h, basis);
        if((2 * l) % L != 0) {
            out.push_back({{0, l}, std::move(hl)});
            continue;
        }
        // P commutes with T inside this sector; diagonalize it and split.
        const Eigen::MatrixXcd pl = detail::project_permutation(basis, reflect);
        const EigenSystem      pe = eigh(pl);
        const Index            n_minus = (pe.values.array() < 0.0).count();
        const Eigen::MatrixXcd w_minus = pe.vectors.leftCols(n_minus);
        const Eigen::MatrixXcd w_plus  = pe.vectors.rightCols(pe.dim() - n_minus);
        out.push_back({{+1, l}, w_plus.adjoint() * hl * w_plus});
        out.push_back({{-1, l}, w_minus.adjoint() * hl * w_minus});
    }
    return out;
}

/// Sector-resolved spectrum of H; sector dimensions sum to 2^L.
inline std::vector<SectorSpectrum> sector_split(const DenseOperator &h, const Deformation &d, int L, unsigned threads = 1) {
    auto                        blocks = sector_blocks(h, d, L);
    std::vector<SectorSpectrum> out(blocks.size());
    parallel_for(blocks.size(), threads, [&](std::size_t i) {
        auto &b = blocks[i].block;
        // Hermitize away projection round-off before the solver's check.
        b = (0.5 * (b + b.adjoint())).eval();
        if(b.imag().cwiseAbs().maxCoeff() <= 1e-14 * std::max(max_abs(b), 1.0)) b = b.real().cast<Complex>();
        out[i] = {blocks[i].label, b.rows() ? eigvalsh(b) : RealVector(), std::nullopt};
    });
    return out;
}

/// Fits the staircase N(E_i) = i + 1 by a polynomial of degree `degree + 1`
/// (a degree-`degree` density) and maps E_i -> fit(E_i) - fit(E_1).
inline SectorSpectrum unfold(const SectorSpectrum &s, int degree = 8) {
    detail::require(degree >= 0, "unfolding degree must be nonnegative");
    const Index n      = s.levels.size();
    const Index params = degree + 2;
    detail::require(n >= params, "unfolding needs at least " + std::to_string(params) + " levels, got " + std::to_string(n));

    const double lo = s.levels.minCoeff(), hi = s.levels.maxCoeff();
    const double center = 0.5 * (hi + lo), half = hi > lo ? 0.5 * (hi - lo) : 1.0;

    // Chebyshev basis on the spectrum's range keeps the normal equations well conditioned.
    Eigen::MatrixXd a(n, params);
    Eigen::VectorXd y(n);
    for(Index i = 0; i < n; ++i) {
        const double x = (s.levels(i) - center) / half;
        a(i, 0)        = 1.0;
        if(params > 1) a(i, 1) = x;
        for(Index k = 2; k < params; ++k) a(i, k) = 2.0 * x * a(i, k - 1) - a(i, k - 2);
        y(i) = static_cast<double>(i + 1);
    }
    const Eigen::VectorXd coef   = a.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd fitted = a * coef;

    SectorSpectrum out = s;
    out.unfolded       = (fitted.array() - fitted(0)).matrix();
    return out;
}

/// Pools nearest-neighbour spacings of the unfolded sectors and normalizes by their mean.
inline SpacingSample normalized_spacings(const std::vector<SectorSpectrum> &sectors) {
    SpacingSample sample;
    for(const auto &sec : sectors) {
        detail::require(sec.unfolded.has_value(), "sector " + sec.label.str() + " has not been unfolded");
        const auto &u = *sec.unfolded;
        for(Index i = 0; i + 1 < u.size(); ++i) sample.values.push_back(u(i + 1) - u(i));
    }
    detail::require(!sample.values.empty(), "no spacings to normalize");
    const double mean = std::accumulate(sample.values.begin(), sample.values.end(), 0.0) / static_cast<double>(sample.values.size());
    detail::require(mean > 0.0, "mean spacing is not positive");
    for(auto &v : sample.values) v /= mean;
    return sample;
}

enum class ReferenceKind { goe, poisson };

inline ReferenceKind parse_reference(const std::string &s) {
    if(s == "goe") return ReferenceKind::goe;
    if(s == "poisson") return ReferenceKind::poisson;
    throw ArgumentError("unknown reference distribution '" + s + "'");
}

inline double reference_pdf(ReferenceKind kind, double s) {
    detail::require(s >= 0.0, "spacing must be nonnegative");
    if(kind == ReferenceKind::goe) return 0.5 * std::numbers::pi * s * std::exp(-0.25 * std::numbers::pi * s * s);
    return std::exp(-s);
}

inline double reference_cdf(ReferenceKind kind, double s) {
    if(s <= 0.0) return 0.0;
    if(kind == ReferenceKind::goe) return -std::expm1(-0.25 * std::numbers::pi * s * s);
    return -std::expm1(-s);
}

/// Kolmogorov-Smirnov sup distance between the empirical CDF and the reference CDF.
inline double ks_distance(const SpacingSample &sample, ReferenceKind kind) {
    detail::require(!sample.values.empty(), "empty spacing sample");
    std::vector<double> v = sample.values;
    std::sort(v.begin(), v.end());
    const auto n     = static_cast<double>(v.size());
    double     worst = 0.0;
    for(std::size_t i = 0; i < v.size(); ++i) {
        const double f = reference_cdf(kind, v[i]);
        worst          = std::max({worst, std::abs(static_cast<double>(i + 1) / n - f), std::abs(f - static_cast<double>(i) / n)});
    }
    return std::min(worst, 1.0);
}

struct HistogramBin {
    double lo, hi, density;
};

/// Normalized histogram of a spacing sample on [0, s_max).
inline std::vector<HistogramBin> spacing_histogram(const SpacingSample &sample, double bin_width, double s_max = 4.0) {
    detail::require(bin_width > 0.0 && s_max > bin_width, "invalid histogram range");
    const auto           bins = static_cast<std::size_t>(std::ceil(s_max / bin_width - 1e-9));
    std::vector<double>  counts(bins, 0.0);
    for(double v : sample.values) {
        const auto k = static_cast<std::size_t>(std::floor(v / bin_width));
        if(v >= 0.0 && k < bins) counts[k] += 1.0;
    }
    std::vector<HistogramBin> out;
    const auto                n = static_cast<double>(sample.values.size());
    for(std::size_t k = 0; k < bins; ++k)
        out.push_back({static_cast<double>(k) * bin_width, static_cast<double>(k + 1) * bin_width, counts[k] / (n * bin_width)});
    return out;
}

} // namespace scramble
