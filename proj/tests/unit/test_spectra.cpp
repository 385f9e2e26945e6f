#include "oracles/oracles.hpp"
#include "scramble/spectra.hpp"

#include <gtest/gtest.h>

using namespace scramble;

namespace {
std::vector<double> pooled_levels(const std::vector<SectorSpectrum> &sectors) {
    std::vector<double> all;
    for(const auto &s : sectors)
        for(Index i = 0; i < s.levels.size(); ++i) all.push_back(s.levels(i));
    std::sort(all.begin(), all.end());
    return all;
}

SectorSpectrum equally_spaced(int n, double start, double step) {
    SectorSpectrum s;
    s.levels.resize(n);
    for(int i = 0; i < n; ++i) s.levels(i) = start + step * i;
    return s;
}
} // namespace

TEST(Symmetry, ReflectionBasics) {
    EXPECT_EQ(reflection_operator(1), DenseOperator(DenseOperator::Identity(2, 2)));
    const auto p = reflection_operator(6);
    EXPECT_EQ(max_abs(p * p - DenseOperator::Identity(64, 64)), 0.0);
    const auto h = build_hamiltonian(ChainConfig::chaotic(6), Deformation::moebius(0.7));
    EXPECT_LE(max_abs(p * h - h * p), 1e-12);
}

TEST(Symmetry, TranslationBasics) {
    const auto    t  = translation_operator(4);
    DenseOperator tl = DenseOperator::Identity(16, 16);
    for(int k = 0; k < 4; ++k) tl = t * tl;
    EXPECT_EQ(max_abs(tl - DenseOperator::Identity(16, 16)), 0.0);

    // T maps |s1 s2 s3 s4> to |s4 s1 s2 s3>: |1000> (index 8) -> |0100> (index 4).
    EXPECT_EQ(t(4, 8), Complex(1));

    const auto t8 = translation_operator(8);
    const auto h0 = build_hamiltonian(ChainConfig::chaotic(8), Deformation::uniform());
    EXPECT_LE(max_abs(t8 * h0 - h0 * t8), 1e-12);
    const auto hs = build_hamiltonian(ChainConfig::chaotic(8), Deformation::ssd());
    EXPECT_GT(max_abs(t8 * hs - hs * t8), 0.1);
}

TEST(SectorSplit, ParitySectorDimensions) {
    const auto h       = build_hamiltonian(ChainConfig::chaotic(8), Deformation::moebius(0.5));
    const auto sectors = sector_split(h, Deformation::moebius(0.5), 8);
    ASSERT_EQ(sectors.size(), 2u);
    // 2^4 palindromes are fixed points of P: (256 +- 16) / 2.
    EXPECT_EQ(sectors[0].levels.size(), 136);
    EXPECT_EQ(sectors[1].levels.size(), 120);
    EXPECT_EQ(sectors[0].label.str(), "P=+1");
}

TEST(SectorSplit, MomentumDimensionsMatchCharacterFormula) {
    const auto dims = momentum_sector_dims(4);
    EXPECT_EQ(dims, (std::vector<Index>{6, 3, 4, 3}));
    for(int L : {2, 4, 6, 8, 10}) {
        const auto d = momentum_sector_dims(L);
        for(int l = 0; l < L; ++l) EXPECT_EQ(d[static_cast<std::size_t>(l)], oracle::momentum_dim_by_characters(L, l)) << "L=" << L << " l=" << l;
    }
}

TEST(SectorSplit, UnionIsFullSpectrum) {
    for(int L : {6, 8})
        for(auto d : {Deformation::uniform(), Deformation::moebius(0.5), Deformation::ssd()}) {
            const auto h       = build_hamiltonian(ChainConfig::chaotic(L), d);
            const auto full    = eigvalsh(h);
            const auto sectors = sector_split(h, d, L);
            const auto pooled  = pooled_levels(sectors);
            ASSERT_EQ(static_cast<Index>(pooled.size()), full.size());
            for(Index i = 0; i < full.size(); ++i) EXPECT_NEAR(pooled[static_cast<std::size_t>(i)], full(i), 1e-9);
        }
}

TEST(SectorSplit, UniformChainLabels) {
    const auto h       = build_hamiltonian(ChainConfig::chaotic(6), Deformation::uniform());
    const auto sectors = sector_split(h, Deformation::uniform(), 6);
    // l = 0 and l = 3 split by parity, the other four momenta stay whole.
    EXPECT_EQ(sectors.size(), 8u);
    EXPECT_EQ(sectors[0].label.str(), "k=0;P=+1");
    EXPECT_EQ(sectors[2].label.str(), "k=1");
}

TEST(SectorSplit, ThreadCountDoesNotChangeResult) {
    const auto h = build_hamiltonian(ChainConfig::chaotic(8), Deformation::uniform());
    const auto a = sector_split(h, Deformation::uniform(), 8, 1);
    const auto b = sector_split(h, Deformation::uniform(), 8, 4);
    ASSERT_EQ(a.size(), b.size());
    for(std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].levels, b[i].levels);
}

TEST(SectorSplit, RejectsNonCommutingOperator) {
    const auto h = build_hamiltonian(ChainConfig::chaotic(6), Deformation::ssd());
    EXPECT_THROW(sector_split(h, Deformation::uniform(), 6), ValidationError);
    DenseOperator broken = h;
    broken += 0.3 * pauli_site(Axis::x, 1, 6);
    EXPECT_THROW(sector_split(broken, Deformation::ssd(), 6), ValidationError);
}

TEST(Unfold, LinearStaircaseGivesEqualSpacings) {
    const auto u = unfold(equally_spaced(40, -3.0, 0.25));
    ASSERT_TRUE(u.unfolded.has_value());
    EXPECT_EQ((*u.unfolded)(0), 0.0);
    for(Index i = 1; i < 40; ++i) EXPECT_NEAR((*u.unfolded)(i) - (*u.unfolded)(i - 1), 1.0, 1e-9);

    const auto sample = normalized_spacings({u});
    for(double v : sample.values) EXPECT_NEAR(v, 1.0, 1e-9);
}

TEST(Unfold, NeedsEnoughLevels) {
    EXPECT_THROW(unfold(equally_spaced(9, 0.0, 1.0)), ArgumentError);
    EXPECT_NO_THROW(unfold(equally_spaced(10, 0.0, 1.0)));
    EXPECT_NO_THROW(unfold(equally_spaced(4, 0.0, 1.0), 2));
}

TEST(Unfold, ChaoticSectorsAreMonotoneWithUnitMeanSpacing) {
    const auto d = Deformation::moebius(0.5);
    const auto h = build_hamiltonian(ChainConfig::chaotic(10), d);
    for(const auto &s : sector_split(h, d, 10)) {
        const auto u  = unfold(s);
        const auto &e = *u.unfolded;
        EXPECT_EQ(e(0), 0.0);
        for(Index i = 1; i < e.size(); ++i) EXPECT_GE(e(i), e(i - 1)) << s.label.str() << " level " << i;
        const double mean = e(e.size() - 1) / static_cast<double>(e.size() - 1);
        EXPECT_NEAR(mean, 1.0, 0.02);
    }
}

TEST(Spacings, MeanIsOneAndCountsAdd) {
    const auto d       = Deformation::ssd();
    const auto h       = build_hamiltonian(ChainConfig::chaotic(8), d);
    auto       sectors = sector_split(h, d, 8);
    for(auto &s : sectors) s = unfold(s);
    const auto   sample = normalized_spacings(sectors);
    EXPECT_EQ(sample.values.size(), (136u - 1) + (120u - 1));
    const double mean = std::accumulate(sample.values.begin(), sample.values.end(), 0.0) / static_cast<double>(sample.values.size());
    EXPECT_NEAR(mean, 1.0, 1e-12);
}

TEST(Spacings, RejectsMissingUnfoldingAndEmptyPool) {
    EXPECT_THROW(normalized_spacings({equally_spaced(20, 0, 1)}), ArgumentError);
    EXPECT_THROW(normalized_spacings({}), ArgumentError);
}

TEST(Reference, PointValues) {
    EXPECT_EQ(reference_pdf(ReferenceKind::poisson, 0.0), 1.0);
    EXPECT_EQ(reference_pdf(ReferenceKind::goe, 0.0), 0.0);
    EXPECT_THROW(reference_pdf(ReferenceKind::goe, -0.1), ArgumentError);
}

TEST(Reference, GoeNormalizedWithUnitMean) {
    auto pdf  = [](double s) { return reference_pdf(ReferenceKind::goe, s); };
    auto mean = [&](double s) { return s * pdf(s); };
    EXPECT_NEAR(oracle::simpson(pdf, 0.0, 12.0, 4000), 1.0, 1e-8);
    EXPECT_NEAR(oracle::simpson(mean, 0.0, 12.0, 4000), 1.0, 1e-8);
    // CDF agrees with the integral of the density.
    EXPECT_NEAR(oracle::simpson(pdf, 0.0, 1.3, 2000), reference_cdf(ReferenceKind::goe, 1.3), 1e-10);
}

TEST(KsDistance, QuantileSampleIsClose) {
    const int     n = 500;
    SpacingSample sample;
    for(int i = 1; i <= n; ++i) sample.values.push_back(-std::log(1.0 - (i - 0.5) / n));
    EXPECT_LE(ks_distance(sample, ReferenceKind::poisson), 1.0 / (2 * n) + 1e-12);
}

TEST(KsDistance, AllOnesAgainstPoisson) {
    SpacingSample ones{std::vector<double>(50, 1.0)};
    EXPECT_NEAR(ks_distance(ones, ReferenceKind::poisson), 1.0 - std::exp(-1.0), 1e-12);
    EXPECT_GE(ks_distance(ones, ReferenceKind::goe), 0.0);
    EXPECT_LE(ks_distance(ones, ReferenceKind::goe), 1.0);
}

TEST(LevelStatistics, ChaoticChainIsCloserToGoe) {
    const auto d       = Deformation::moebius(0.5);
    auto       sectors = sector_split(build_hamiltonian(ChainConfig::chaotic(10), d), d, 10);
    for(auto &s : sectors) s = unfold(s);
    const auto sample = normalized_spacings(sectors);
    EXPECT_LT(ks_distance(sample, ReferenceKind::goe), ks_distance(sample, ReferenceKind::poisson));
}

TEST(Histogram, NormalizedDensity) {
    SpacingSample sample{{0.05, 0.15, 0.15, 0.95}};
    const auto    bins = spacing_histogram(sample, 0.1, 1.0);
    ASSERT_EQ(bins.size(), 10u);
    EXPECT_NEAR(bins[1].density, 2.0 / (4 * 0.1), 1e-12);
    double total = 0;
    for(const auto &b : bins) total += b.density * (b.hi - b.lo);
    EXPECT_NEAR(total, 1.0, 1e-12);
}
