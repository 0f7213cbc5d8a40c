#include <doctest.h>

#include <numbers>

#include "dirsim/model.hpp"

using namespace dirsim;
using P = SystemParams<double>;
using C = std::complex<double>;

namespace {

constexpr double pi = std::numbers::pi;

P make(double big_gamma, double g, double theta = 0, double phi = 0)
{
    P p;
    p.big_gamma = big_gamma;
    p.g = g;
    p.theta = theta;
    p.phi = phi;
    p.omega = 0.1;
    return p;
}

bool near(C a, C b, double tol = 1e-14)
{
    return std::abs(a - b) <= tol;
}

} // namespace

TEST_CASE("validate accepts physical parameters and names the first violation")
{
    CHECK_FALSE(validate(make(0.5, 0.5)).has_value());

    P p = make(1.2, 0.5);
    CHECK(validate(p) == Errc::GammaExceedsLoss);
    CHECK_THROWS_AS(require_valid(p), Error);

    p = make(0.5, 0.5);
    p.gamma = 0;
    CHECK(validate(p) == Errc::NonPositiveLoss);

    p = make(0.5, -0.1);
    CHECK(validate(p) == Errc::NegativeMagnitude);

    p = make(0.5, 0.5);
    p.theta = std::nan("");
    CHECK(validate(p) == Errc::NonFinite);

    // Γ = γ is allowed; only the steady state is lost.
    CHECK_FALSE(validate(make(1.0, 0.0)).has_value());
}

TEST_CASE("damping matrix")
{
    auto c = damping_matrix(make(0, 0, 0, 1.234));
    CHECK(c.isApprox(Matrix2c<double>::Identity()));

    c = damping_matrix(make(1, 0));
    Eigen::SelfAdjointEigenSolver<Matrix2c<double>> es(c);
    CHECK(es.eigenvalues()(0) == doctest::Approx(0).epsilon(1e-14));
    CHECK(es.eigenvalues()(1) == doctest::Approx(2));

    c = damping_matrix(make(0.8, 0, 0, pi / 2));
    CHECK(near(c(0, 1), C(0, 0.8)));
    CHECK(near(c(1, 0), C(0, -0.8)));
    CHECK(near(c(0, 0), 1.0));
}

TEST_CASE("hamiltonian matrix")
{
    CHECK(hamiltonian_matrix(make(0, 0)).isZero());

    auto h = hamiltonian_matrix(make(0, 0.5, pi / 2));
    CHECK(near(h(0, 1), C(0, 0.5)));
    CHECK(near(h(1, 0), C(0, -0.5)));

    P p = make(0, 1);
    p.omega_delta = 2;
    h = hamiltonian_matrix(p);
    Matrix2c<double> expected;
    expected << 2, 1, 1, 2;
    CHECK(h.isApprox(expected));
}

TEST_CASE("dynamical matrix")
{
    auto m = dynamical_matrix(make(0, 0)).m;
    CHECK(near(m(0, 0), C(0, -0.5)));
    CHECK(near(m(0, 1), 0.0));
    CHECK(near(m(1, 1), C(0, -0.5)));

    m = dynamical_matrix(make(1, 0.5, pi / 2)).m;
    CHECK(near(m(0, 1), 0.0));
    CHECK(near(m(1, 0), C(0, -1)));

    m = dynamical_matrix(make(0, 0.5)).m;
    CHECK(near(m(0, 1), 0.5));
    CHECK(near(m(1, 0), 0.5));
}

TEST_CASE("generalized couplings sit in the dynamical matrix")
{
    auto gc = generalized_couplings(make(1, 0.5, pi / 2));
    CHECK(near(gc.g_minus, 0.0));
    CHECK(near(gc.g_plus, C(0, 1)));

    gc = generalized_couplings(make(0, 0.7, 0.3));
    CHECK(near(gc.g_plus, std::polar(0.7, 0.3)));
    CHECK(near(gc.g_minus, gc.g_plus));

    gc = generalized_couplings(make(0.8, 0));
    CHECK(near(gc.g_plus, C(0, 0.4)));
    CHECK(near(gc.g_minus, C(0, -0.4)));

    const P p = make(0.6, 0.9, 1.1, 0.4);
    const auto m = dynamical_matrix(p).m;
    gc = generalized_couplings(p);
    CHECK(near(m(0, 1), gc.g_minus));
    CHECK(near(m(1, 0), std::conj(gc.g_plus)));
}

TEST_CASE("regime classification")
{
    CHECK(classify_regime(make(1, 0.5, pi / 2)) == Regime::UnidirectionalRight);
    CHECK(classify_regime(make(1, 0.5, 3 * pi / 2)) == Regime::UnidirectionalLeft);
    CHECK(classify_regime(make(0, 0.5)) == Regime::Coherent);
    CHECK(classify_regime(make(0.8, 0)) == Regime::Dissipative);
    CHECK(classify_regime(make(0, 0)) == Regime::Uncoupled);
    CHECK(classify_regime(make(0.8, 0.5, 1.0)) == Regime::Asymmetric);
    // Γ = 2g but wrong phase is not one-way.
    CHECK(classify_regime(make(1, 0.5, 0)) == Regime::Asymmetric);
    CHECK_THROWS_AS(classify_regime(make(1, 0.5), 0.0), Error);
}

TEST_CASE("regime classification is invariant under 2π phase shifts")
{
    for (double theta : {0.0, 0.4, pi / 2, 2.0, 3 * pi / 2, 5.5})
        for (double phi : {0.0, 1.0, pi}) {
            for (double big_gamma : {0.0, 0.5, 1.0}) {
                const P p = make(big_gamma, 0.5, theta, phi);
                const Regime r = classify_regime(p);
                CHECK(classify_regime(make(big_gamma, 0.5, theta + 2 * pi, phi)) == r);
                CHECK(classify_regime(make(big_gamma, 0.5, theta, phi + 2 * pi)) == r);
                CHECK(classify_regime(make(big_gamma, 0.5, theta - 2 * pi, phi - 2 * pi)) == r);
            }
        }
}

TEST_CASE("eigenmodes")
{
    auto e = eigenmodes(dynamical_matrix(make(0, 0.5)));
    const C hi = e.lambda_plus.real() > 0 ? e.lambda_plus : e.lambda_minus;
    const C lo = e.lambda_plus.real() > 0 ? e.lambda_minus : e.lambda_plus;
    CHECK(near(hi, C(0.5, -0.5)));
    CHECK(near(lo, C(-0.5, -0.5)));
    CHECK_FALSE(e.degenerate);
    CHECK(e.strictly_stable(1e-12));

    SUBCASE("exceptional point")
    {
        e = eigenmodes(dynamical_matrix(make(1, 0.5, pi / 2)));
        CHECK(e.degenerate);
        CHECK(near(e.lambda_plus, C(0, -0.5), 1e-12));
        CHECK(near(e.lambda_minus, C(0, -0.5), 1e-12));
    }

    SUBCASE("marginal dissipative coupling")
    {
        e = eigenmodes(dynamical_matrix(make(1, 0)));
        const double a = std::abs(e.lambda_plus);
        const C zero = a < 0.5 ? e.lambda_plus : e.lambda_minus;
        const C other = a < 0.5 ? e.lambda_minus : e.lambda_plus;
        CHECK(near(zero, 0.0));
        CHECK(near(other, C(0, -1)));
        CHECK_FALSE(e.strictly_stable(1e-12));
    }
}

TEST_CASE("templated on the scalar type")
{
    SystemParams<long double> p;
    p.g = 0.5L;
    p.big_gamma = 1;
    p.theta = std::numbers::pi_v<long double> / 2;
    const auto e = eigenmodes(dynamical_matrix(p));
    CHECK(e.degenerate);
    CHECK(std::abs(e.lambda_plus - std::complex<long double>(0, -0.5L)) < 1e-15L);
}
