#include "oracles/oracles.hpp"
#include "scramble/model.hpp"
#include "scramble/probes.hpp"

#include <gtest/gtest.h>

using namespace scramble;

namespace {
struct Chain {
    ChainConfig                        cfg;
    std::shared_ptr<const EigenSystem> base;
    DenseOperator                      h;
    EigenSystem                        evo;
    Chain(int L, const Deformation &d) : cfg(ChainConfig::chaotic(L)) {
        base = std::make_shared<const EigenSystem>(eigh(build_hamiltonian(cfg, Deformation::uniform())));
        h    = build_hamiltonian(cfg, d);
        evo  = eigh(h);
    }
};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for(int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}
} // namespace

TEST(Ensemble, DeterministicAndMasked) {
    ProductStateEnsemble e{16, 99};
    const auto           a = e.draw(6), b = e.draw(6);
    EXPECT_EQ(a, b);
    for(auto s : a) EXPECT_LT(s, 64u);
    EXPECT_NE(a, (ProductStateEnsemble{16, 100}.draw(6)));
    EXPECT_THROW((ProductStateEnsemble{0, 1}.draw(4)), ArgumentError);
}

TEST(Ssf, ValueAtZeroIsDimensionSquared) {
    Chain      c(8, Deformation::moebius(0.5));
    const auto out = ssf({1, 2, 7, 8}, 3.0, {0.0}, c.evo, ProductStateEnsemble{8, 5}, SsfConvention::phase);
    EXPECT_EQ(out[0].g, 256.0);
    const auto lit = ssf({1, 2, 7, 8}, 3.0, {0.0}, c.evo, ProductStateEnsemble{8, 5}, SsfConvention::literal);
    EXPECT_NEAR(lit[0].g, 256.0, 1e-9);
}

TEST(Ssf, PureProductStateClosedForm) {
    Chain      c(6, Deformation::ssd());
    const auto tau = linspace(0.0, 20.0, 41);
    const auto out = ssf({1, 2, 3}, 0.0, tau, c.evo, ProductStateEnsemble{4, 11}, SsfConvention::phase);
    for(std::size_t k = 0; k < tau.size(); ++k)
        EXPECT_NEAR(out[k].g, std::norm(std::polar(1.0, -tau[k]) + 7.0), 1e-9) << "tau=" << tau[k];
}

TEST(Ssf, LongTimePlateauNearSubsystemDimension) {
    Chain      c(8, Deformation::moebius(0.5));
    const auto tau = linspace(1000.0, 10000.0, 2001);
    const auto out = ssf({1, 2, 7, 8}, 40.0, tau, c.evo, ProductStateEnsemble{8, 7}, SsfConvention::phase);
    double     avg = 0.0;
    for(const auto &p : out) {
        EXPECT_GE(p.g, 0.0);
        avg += p.g;
    }
    avg /= static_cast<double>(out.size());
    EXPECT_NEAR(avg, 16.0, 0.25 * 16.0);
}

TEST(Ssf, SeedAndThreadDeterminism) {
    Chain      c(6, Deformation::moebius(1.0));
    const auto tau = linspace(0.0, 50.0, 26);
    const auto a   = ssf({1, 6}, 2.0, tau, c.evo, ProductStateEnsemble{6, 3}, SsfConvention::phase, 1);
    const auto b   = ssf({1, 6}, 2.0, tau, c.evo, ProductStateEnsemble{6, 3}, SsfConvention::phase, 4);
    for(std::size_t k = 0; k < tau.size(); ++k) EXPECT_EQ(a[k].g, b[k].g);
    EXPECT_THROW(ssf({}, 1.0, tau, c.evo, ProductStateEnsemble{}, SsfConvention::phase), ArgumentError);
    EXPECT_EQ(parse_ssf_convention("literal"), SsfConvention::literal);
    EXPECT_THROW(parse_ssf_convention("abs"), ArgumentError);
}

TEST(ReturnAmplitude, UnityAtTimeZero) {
    Chain c(6, Deformation::moebius(2.5));
    for(double beta : {0.0, 1.0}) {
        ThermalEnsemble ens(c.base, beta);
        for(Axis a : {Axis::x, Axis::y, Axis::z})
            for(int site : {1, 3, 6}) EXPECT_NEAR(std::abs(return_amplitude(a, site, 0.0, c.evo, ens) - 1.0), 0.0, 1e-12);
    }
}

TEST(ReturnAmplitude, MatchesDenseProductOracle) {
    Chain c(4, Deformation::moebius(0.9));
    for(double beta : {0.0, 0.7}) {
        ThermalEnsemble     ens(c.base, beta);
        const DenseOperator rho = ens.density_matrix();
        for(Axis alpha : {Axis::x, Axis::y, Axis::z})
            for(double t : {0.4, 2.9}) {
                const DenseOperator u     = oracle::pade_propagator(c.h, t);
                const DenseOperator sigma = pauli_site(alpha, 2, 4);
                const DenseOperator st    = u.adjoint() * sigma * u;
                const Complex       want  = (rho * sigma * st).trace();
                EXPECT_LE(std::abs(return_amplitude(alpha, 2, t, c.evo, ens) - want), 1e-10);
            }
    }
}

TEST(Otoc, UnityAtTimeZeroAndDenseOracle) {
    Chain           c(4, Deformation::ssd());
    ThermalEnsemble ens(c.base, 0.0);
    EXPECT_NEAR(otoc(Axis::z, 1, 0.0, c.evo, ens), 1.0, 1e-12);
    for(Axis alpha : {Axis::x, Axis::y, Axis::z})
        for(double t : {0.3, 1.7, 8.0}) {
            const DenseOperator u     = oracle::pade_propagator(c.h, t);
            const DenseOperator sigma = pauli_site(alpha, 3, 4);
            const DenseOperator st    = u.adjoint() * sigma * u;
            const double        want  = (st * sigma * st * sigma).trace().real() / 16.0;
            const double        got   = otoc(alpha, 3, t, c.evo, ens);
            EXPECT_NEAR(got, want, 1e-10);
            EXPECT_LE(std::abs(got), 1.0 + 1e-10);
        }
}

TEST(Otoc, FiniteTemperatureNormalization) {
    Chain               c(4, Deformation::moebius(0.3));
    ThermalEnsemble     ens(c.base, 0.5);
    const double        t     = 1.3;
    const DenseOperator u     = oracle::pade_propagator(c.h, t);
    const DenseOperator sigma = pauli_site(Axis::x, 1, 4);
    const DenseOperator st    = u.adjoint() * sigma * u;
    const auto          h0    = build_hamiltonian(c.cfg, Deformation::uniform());
    const DenseOperator e2    = (-2 * 0.5 * h0).exp();
    EXPECT_NEAR(otoc(Axis::x, 1, t, c.evo, ens), (st * sigma * st * sigma).trace().real() / e2.trace().real(), 1e-10);
}

TEST(Probes, UniformChainTranslationInvariance) {
    Chain           c(6, Deformation::uniform());
    ThermalEnsemble ens(c.base, 0.0);
    for(double t : {0.5, 2.0}) {
        const Complex a1 = return_amplitude(Axis::z, 1, t, c.evo, ens);
        const double  f1 = otoc(Axis::z, 1, t, c.evo, ens);
        for(int a = 2; a <= 6; ++a) {
            EXPECT_LE(std::abs(return_amplitude(Axis::z, a, t, c.evo, ens) - a1), 1e-9);
            EXPECT_NEAR(otoc(Axis::z, a, t, c.evo, ens), f1, 1e-9);
        }
    }
}

TEST(Probes, ReflectionInvariance) {
    for(auto d : {Deformation::moebius(0.8), Deformation::ssd()}) {
        Chain           c(6, d);
        ThermalEnsemble ens(c.base, 0.0);
        for(int a = 1; a <= 6; ++a) {
            EXPECT_LE(std::abs(return_amplitude(Axis::x, a, 1.1, c.evo, ens) - return_amplitude(Axis::x, 7 - a, 1.1, c.evo, ens)), 1e-9);
            EXPECT_NEAR(otoc(Axis::y, a, 1.1, c.evo, ens), otoc(Axis::y, 7 - a, 1.1, c.evo, ens), 1e-9);
        }
    }
}

TEST(TwoPoint, EprValuesAtTimeZero) {
    Chain           c(4, Deformation::moebius(1.0));
    ThermalEnsemble ens(c.base, 0.0);
    for(int x = 1; x <= 4; ++x) {
        EXPECT_EQ(two_point(Axis::z, x, 0.0, c.evo, ens), Complex(1.0));
        EXPECT_EQ(two_point(Axis::x, x, 0.0, c.evo, ens), Complex(1.0));
        EXPECT_EQ(two_point(Axis::y, x, 0.0, c.evo, ens), Complex(-1.0));
    }
}

TEST(TwoPoint, MatchesDoubledRegisterOperator) {
    Chain c(4, Deformation::ssd());
    for(double beta : {0.0, 0.6}) {
        ThermalEnsemble ens(c.base, beta);
        for(Axis alpha : {Axis::x, Axis::y, Axis::z})
            for(double t : {0.8, 4.5}) {
                const auto          psi = dual_state(t, c.evo, ens, 4).amplitudes();
                const DenseOperator op  = pauli_site(alpha, 2, 8) * pauli_site(alpha, 6, 8);
                const Complex       want = psi.dot(op * psi);
                const Complex       got  = two_point(alpha, 2, t, c.evo, ens);
                EXPECT_LE(std::abs(got - want), 1e-12);
                EXPECT_LE(std::abs(got), 1.0 + 1e-12);
            }
    }
    EXPECT_THROW(two_point(Axis::z, 5, 0.0, c.evo, ThermalEnsemble(c.base, 0.0)), ArgumentError);
}
