#include <doctest.h>

#include <numbers>

#include "dirsim/fock.hpp"

using namespace dirsim;
using namespace dirsim::fock;
using Init = InitialCondition<double>;

namespace {

constexpr double pi = std::numbers::pi;

Params make(double big_gamma, double g, double theta = 0, double omega = 0.1)
{
    Params p;
    p.big_gamma = big_gamma;
    p.g = g;
    p.theta = theta;
    p.omega = omega;
    return p;
}

Matrix random_hermitian(Eigen::Index dim, unsigned seed)
{
    std::srand(seed);
    Matrix a = Matrix::Random(dim, dim);
    Matrix h = a * a.adjoint();
    return h / h.trace();
}

} // namespace

TEST_CASE("ladder operators")
{
    const auto ops = mode_operators(2);
    CHECK(ops.dim == 9);
    // Lowering matrix of one mode sits in the b2 block for n1 = 0.
    const Matrix b2 = Matrix(ops.b2);
    CHECK(std::abs(b2(0, 1) - 1.0) < 1e-15);
    CHECK(std::abs(b2(1, 2) - std::sqrt(2.0)) < 1e-15);

    const Matrix b1 = Matrix(ops.b1);
    CHECK((b1 * b2 - b2 * b1).cwiseAbs().maxCoeff() == 0);

    const Matrix n1 = b1.adjoint() * b1;
    const Eigen::Index one_zero = 1 * 3 + 0;
    CHECK(std::abs(n1(one_zero, one_zero) - 1.0) < 1e-15);

    // [a, a†] = 1 below the cutoff.
    const Matrix comm = b1 * b1.adjoint() - b1.adjoint() * b1;
    for (Eigen::Index idx = 0; idx < 6; ++idx)
        CHECK(std::abs(comm(idx, idx) - 1.0) < 1e-14);

    CHECK_THROWS_AS(mode_operators(0), Error);
}

TEST_CASE("master equation right-hand side")
{
    const auto vac = initial_density(Init::vacuum(), 3);
    CHECK(lindblad_rhs(make(0.6, 0.8, 1.0, 0.0), vac).cwiseAbs().maxCoeff() < 1e-15);

    const LindbladGenerator gen(make(0.6, 0.8, 1.0, 0.3), 3);
    for (unsigned seed : {1u, 2u, 3u}) {
        const Matrix d = gen.apply(random_hermitian(16, seed));
        CHECK(std::abs(d.trace()) < 1e-13);
        CHECK((d - d.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    }

    const auto one = initial_density(Init::single_excitation_first(), 3);
    const LindbladGenerator decay(make(0, 0, 0, 0.0), 3);
    const Matrix d = decay.apply(one.rho);
    const auto o = observe(decay.operators(), d, 0.0);
    CHECK(o.n11 == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("superoperator matches the structural generator")
{
    const LindbladGenerator gen(make(0.7, 0.4, 2.0, 0.2), 2);
    const Matrix rho = random_hermitian(9, 7);
    const Matrix l = gen.superoperator();
    const Eigen::VectorXcd v = l * Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
    const Matrix d = gen.apply(rho);
    CHECK((Eigen::Map<const Matrix>(v.data(), 9, 9) - d).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("undriven vacuum evolution is trivial")
{
    const auto obs = evolve_rho(make(0.5, 0.5, 0.3, 0.0), Init::vacuum(), 3, 2.0, 1e-2);
    for (const auto& o : obs) {
        CHECK(std::abs(o.b1) == 0);
        CHECK(o.n11 == 0);
        CHECK(o.n22 == 0);
        CHECK(o.trace == doctest::Approx(1.0));
    }
    CHECK(convergence_check(make(0.5, 0.5, 0.3, 0.0), 2, Init::vacuum(), 1.0, 1e-2) == 0);
}

TEST_CASE("coherent-coupling dynamics match the moment engine")
{
    const Params p = make(0, 2);
    const auto obs = evolve_rho(p, Init::single_excitation_first(), 6, 20.0, 1e-3);
    const auto traj = evolve(p, Init::single_excitation_first(), 20.0, 1e-3, Method::ExactPropagator);
    REQUIRE(obs.size() == traj.size());
    double worst = 0;
    double drift = 0;
    for (std::size_t k = 0; k < obs.size(); ++k) {
        worst = std::max({worst, std::abs(obs[k].n11 - traj.states[k].n(0, 0).real()),
                          std::abs(obs[k].n22 - traj.states[k].n(1, 1).real())});
        drift = std::max(drift, std::abs(obs[k].trace - 1));
        CHECK(obs[k].hermiticity < 1e-10);
    }
    CHECK(worst < 1e-6);
    CHECK(drift < 1e-8);
}

TEST_CASE("vacuum start relaxes to a pure state")
{
    const auto obs = evolve_rho(make(0, 0.5), Init::vacuum(), 4, 30.0, 1e-2);
    CHECK(obs.back().purity == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("steady density matrix")
{
    auto ops = mode_operators(4);
    auto rho = steady_rho(make(0, 0.5), 4);
    auto o = observe(ops, rho.rho, 0);
    CHECK(o.n11 == doctest::Approx(0.01).epsilon(1e-6));
    CHECK(std::abs(o.n11 - 0.01) < 1e-8);
    CHECK(std::abs(o.n22 - 0.01) < 1e-8);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-6));
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.rho);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);

    // n11 = 0.04 leaves about 1e-7 on |4, 0>, above the cutoff rule, but the
    // undriven mode is still empty.
    CHECK_THROWS_AS(steady_rho(make(1, 0.5, 3 * pi / 2), 4), Error);
    rho = steady_rho(make(1, 0.5, 3 * pi / 2), 4, false);
    CHECK(boundary_occupation(rho) > 1e-8);
    o = observe(ops, rho.rho, 0);
    CHECK(o.n22 < 1e-10);
    CHECK(o.n11 == doctest::Approx(0.04).epsilon(1e-6));

    rho = steady_rho(make(0.4, 0.7, 1.0, 0.0), 2);
    CHECK(std::abs(rho.rho(0, 0) - 1.0) < 1e-12);
    CHECK(std::abs(purity(rho) - 1.0) < 1e-12);
}

TEST_CASE("steady density matrix errors")
{
    try {
        steady_rho(make(1, 0), 3);
        FAIL("expected MarginallyStable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MarginallyStable);
    }
    // A strong drive needs more than one excitation per mode.
    try {
        steady_rho(make(0, 0, 0, 1.0), 1);
        FAIL("expected CutoffTooSmall");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::CutoffTooSmall);
    }
    CHECK_NOTHROW(steady_rho(make(0, 0, 0, 1.0), 1, false));
}

TEST_CASE("coherent starts are not supported by the oracle")
{
    CHECK_THROWS_AS(initial_density(Init::coherent({0.1, 0}, {0, 0}), 3), Error);
}

TEST_CASE("truncation error grows with the population")
{
    const double weak = convergence_check(make(0.8, 0, 0, 0.1), 2, Init::vacuum(), 5.0, 1e-2);
    const double strong = convergence_check(make(0.99, 0, 0, 0.1), 2, Init::vacuum(), 5.0, 1e-2);
    CHECK(weak > 0);
    CHECK(strong > weak);
}
