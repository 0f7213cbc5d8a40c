#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "dirsim/model.hpp"

namespace dirsim {

/**
 * Gaussian moments of the two modes.
 *
 * b holds <b_1>, <b_2>; n(m, k) = <b_m^† b_k>, so n is Hermitian with the
 * occupations on the diagonal.
 */
template <typename Real>
struct MomentState
{
    Vector2c<Real> b{Vector2c<Real>::Zero()};
    Matrix2c<Real> n{Matrix2c<Real>::Zero()};

    /// n - <b>^* <b>^T: the part of n not carried by the coherent amplitudes.
    Matrix2c<Real> fluctuation() const { return n - b.conjugate() * b.transpose(); }
};

template <typename Real>
bool is_physical(const MomentState<Real>& s, Real tol)
{
    const auto& n = s.n;
    if (std::abs(n(1, 0) - std::conj(n(0, 1))) > tol)
        return false;
    if (std::abs(n(0, 0).imag()) > tol || std::abs(n(1, 1).imag()) > tol)
        return false;
    const Real n11 = n(0, 0).real();
    const Real n22 = n(1, 1).real();
    if (n11 < -tol || n22 < -tol)
        return false;
    if (std::norm(n(0, 1)) > n11 * n22 + tol)
        return false;
    const Matrix2c<Real> f = s.fluctuation();
    const Matrix2c<Real> herm = (f + f.adjoint()) / Real(2);
    Eigen::SelfAdjointEigenSolver<Matrix2c<Real>> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol;
}

template <typename Real>
struct InitialCondition
{
    enum class Kind { Vacuum, SingleExcitationFirst, CoherentAmplitudes };

    Kind kind{Kind::Vacuum};
    Complex<Real> alpha1{};
    Complex<Real> alpha2{};

    static InitialCondition vacuum() { return {}; }
    static InitialCondition single_excitation_first() { return {Kind::SingleExcitationFirst, {}, {}}; }
    static InitialCondition coherent(Complex<Real> a1, Complex<Real> a2)
    {
        return {Kind::CoherentAmplitudes, a1, a2};
    }

    MomentState<Real> state() const
    {
        MomentState<Real> s;
        switch (kind) {
        case Kind::Vacuum:
            break;
        case Kind::SingleExcitationFirst:
            s.n(0, 0) = 1;
            break;
        case Kind::CoherentAmplitudes:
            s.b << alpha1, alpha2;
            s.n = s.b.conjugate() * s.b.transpose();
            break;
        }
        return s;
    }
};

/**
 * Time derivative of the moments.
 *
 *   d<b>/dt = -i M <b> - i Ω e₁
 *   dn/dt   = i (M^* n - n M^T) + i Ω (e₁ <b>^T - <b>^* e₁^T)
 *
 * Zero-temperature jump operators are linear in the modes, so the
 * normally ordered second moments pick up no noise term.
 */
template <typename Real>
MomentState<Real> moment_rhs(const SystemParams<Real>& p, const MomentState<Real>& s)
{
    const Complex<Real> i(0, 1);
    const Matrix2c<Real> m = dynamical_matrix(p).m;
    MomentState<Real> d;
    d.b = -i * (m * s.b);
    d.b(0) -= i * p.omega;
    d.n = i * (m.conjugate() * s.n - s.n * m.transpose());
    const Complex<Real> drive = i * p.omega;
    for (int k = 0; k < 2; ++k) {
        d.n(0, k) += drive * s.b(k);
        d.n(k, 0) -= drive * std::conj(s.b(k));
    }
    return d;
}

namespace detail {

template <typename Real>
Complex<Real> sinc(Complex<Real> z)
{
    if (std::abs(z) < Real(1e-3)) {
        const Complex<Real> z2 = z * z;
        return Real(1) - z2 / Real(6) + z2 * z2 / Real(120);
    }
    return std::sin(z) / z;
}

} // namespace detail

/**
 * U(t) = exp(-i M t) for the 2x2 dynamical matrix.
 *
 * Writing M = μ I + K with K² = δ² I gives U = e^{-iμt} (cos(δt) I - i t sinc(δt) K),
 * which is entire in δ². At a flagged exceptional point the Jordan form
 * e^{-iλt} (I - i N t), N = M - λ I, is used directly.
 */
template <typename Real>
Matrix2c<Real> propagator(const DynamicalMatrix<Real>& dm, Real t, bool degenerate)
{
    const Complex<Real> i(0, 1);
    const auto& m = dm.m;
    const Complex<Real> mean = (m(0, 0) + m(1, 1)) / Real(2);
    const Matrix2c<Real> k = m - mean * Matrix2c<Real>::Identity();
    const Complex<Real> phase = std::exp(-i * mean * t);
    if (degenerate)
        return phase * (Matrix2c<Real>::Identity() - i * t * k);
    const Complex<Real> half_split = (m(0, 0) - m(1, 1)) / Real(2);
    const Complex<Real> delta = std::sqrt(half_split * half_split + m(0, 1) * m(1, 0));
    const Complex<Real> z = delta * t;
    return phase * (std::cos(z) * Matrix2c<Real>::Identity() - i * t * detail::sinc(z) * k);
}

template <typename Real>
Matrix2c<Real> propagator(const DynamicalMatrix<Real>& dm, Real t)
{
    return propagator(dm, t, eigenmodes(dm).degenerate);
}

enum class Method { RK4, ExactPropagator };

template <typename Real>
struct Trajectory
{
    std::vector<Real> times;
    std::vector<MomentState<Real>> states;
    std::vector<std::string> warnings;

    std::size_t size() const { return times.size(); }

    /// Occupation of mode 0 or 1 at every sample.
    std::vector<Real> population(int mode) const
    {
        std::vector<Real> out;
        out.reserve(states.size());
        for (const auto& s : states)
            out.push_back(s.n(mode, mode).real());
        return out;
    }

    std::vector<std::optional<Real>> imbalance() const;
};

/// (n11 - n22) / (n11 + n22); throws BothEmpty when the total vanishes.
template <typename Real>
Real imbalance(Real n11, Real n22)
{
    const Real total = n11 + n22;
    if (!(total > 0))
        throw Error(Errc::BothEmpty, "imbalance undefined for empty resonators");
    return (n11 - n22) / total;
}

template <typename Real>
std::optional<Real> try_imbalance(Real n11, Real n22)
{
    if (!(n11 + n22 > 0))
        return std::nullopt;
    return (n11 - n22) / (n11 + n22);
}

template <typename Real>
std::vector<std::optional<Real>> Trajectory<Real>::imbalance() const
{
    std::vector<std::optional<Real>> out;
    out.reserve(states.size());
    for (const auto& s : states)
        out.push_back(try_imbalance(s.n(0, 0).real(), s.n(1, 1).real()));
    return out;
}

/// Strict stability margin used for steady-state existence.
template <typename Real>
Real stability_margin(const SystemParams<Real>& p)
{
    return Real(1e-12) * p.gamma;
}

template <typename Real>
bool strictly_stable(const SystemParams<Real>& p)
{
    return eigenmodes(dynamical_matrix(p)).strictly_stable(stability_margin(p));
}

/// Solves M b = -Ω e₁.
template <typename Real>
Vector2c<Real> steady_first_moments(const SystemParams<Real>& p)
{
    require_valid(p);
    const auto dm = dynamical_matrix(p);
    if (!eigenmodes(dm).strictly_stable(stability_margin(p)))
        throw Error(Errc::MarginallyStable, "no steady state: an eigenvalue of M has Im >= 0");
    Vector2c<Real> rhs(Complex<Real>(-p.omega), Complex<Real>(0));
    return dm.m.partialPivLu().solve(rhs);
}

/// Steady second moments as the coherent-state outer product <b>^* <b>^T.
template <typename Real>
Matrix2c<Real> steady_second_moments(const SystemParams<Real>& p)
{
    const Vector2c<Real> b = steady_first_moments(p);
    return b.conjugate() * b.transpose();
}

/**
 * Steady second moments from the 4x4 linear system dn/dt = 0, independent
 * of the outer-product shortcut. Uses column-major vec(n).
 */
template <typename Real>
Matrix2c<Real> steady_second_moments_direct(const SystemParams<Real>& p)
{
    using Matrix4c = Eigen::Matrix<Complex<Real>, 4, 4>;
    using Vector4c = Eigen::Matrix<Complex<Real>, 4, 1>;
    const Complex<Real> i(0, 1);
    const Vector2c<Real> b = steady_first_moments(p);
    const Matrix2c<Real> m = dynamical_matrix(p).m;
    const Matrix2c<Real> mc = m.conjugate();

    // vec(A X B) = (B^T ⊗ A) vec(X):  M^* n -> I ⊗ M^*,  n M^T -> M ⊗ I.
    Matrix4c op = Matrix4c::Zero();
    for (int r1 = 0; r1 < 2; ++r1)
        for (int c1 = 0; c1 < 2; ++c1)
            for (int r2 = 0; r2 < 2; ++r2)
                for (int c2 = 0; c2 < 2; ++c2) {
                    const Real eye1 = r1 == c1 ? Real(1) : Real(0);
                    const Real eye2 = r2 == c2 ? Real(1) : Real(0);
                    op(2 * r1 + r2, 2 * c1 + c2) = i * (eye1 * mc(r2, c2) - m(r1, c1) * eye2);
                }

    Matrix2c<Real> drive = Matrix2c<Real>::Zero();
    for (int k = 0; k < 2; ++k) {
        drive(0, k) += i * p.omega * b(k);
        drive(k, 0) -= i * p.omega * std::conj(b(k));
    }
    Vector4c rhs = -Eigen::Map<const Vector4c>(drive.data());
    Vector4c sol = op.fullPivLu().solve(rhs);
    return Eigen::Map<const Matrix2c<Real>>(sol.data());
}

template <typename Real>
struct SteadyPopulations
{
    Real n11{};
    Real n22{};
    std::optional<Real> delta; ///< undefined when both resonators are empty
};

template <typename Real>
SteadyPopulations<Real> steady_populations(const SystemParams<Real>& p)
{
    const Matrix2c<Real> n = steady_second_moments(p);
    SteadyPopulations<Real> out;
    out.n11 = n(0, 0).real();
    out.n22 = n(1, 1).real();
    out.delta = try_imbalance(out.n11, out.n22);
    return out;
}

/// Output sampling stride: at most ~2000 intervals per trajectory.
inline std::size_t output_stride(std::size_t steps)
{
    return std::max<std::size_t>(1, steps / 2000);
}

/// Number of fixed steps covering [0, t_end] with step no larger than dt (up to rounding).
template <typename Real>
std::size_t step_count(Real t_end, Real dt)
{
    const Real ratio = t_end / dt;
    const Real nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= Real(1e-9) * std::max(Real(1), ratio))
        return std::max<std::size_t>(1, static_cast<std::size_t>(nearest));
    return static_cast<std::size_t>(std::ceil(ratio));
}

namespace detail {

template <typename Real>
MomentState<Real> axpy(const MomentState<Real>& s, Real h, const MomentState<Real>& d)
{
    return {s.b + h * d.b, s.n + h * d.n};
}

template <typename Real>
MomentState<Real> rk4_step(const SystemParams<Real>& p, const MomentState<Real>& s, Real h)
{
    const auto k1 = moment_rhs(p, s);
    const auto k2 = moment_rhs(p, axpy(s, h / 2, k1));
    const auto k3 = moment_rhs(p, axpy(s, h / 2, k2));
    const auto k4 = moment_rhs(p, axpy(s, h, k3));
    return {s.b + (h / 6) * (k1.b + 2 * k2.b + 2 * k3.b + k4.b),
            s.n + (h / 6) * (k1.n + 2 * k2.n + 2 * k3.n + k4.n)};
}

} // namespace detail

/**
 * Moment dynamics on [0, t_end].
 *
 * RK4 integrates moment_rhs with a fixed step. ExactPropagator evaluates
 * b(t) = U(t)(b₀ - b_ss) + b_ss and n(t) = b^* b^T + U^* ñ₀ U^T at each
 * sample; when the system is not strictly stable it falls back to the
 * affine flow exp([[-iM, -iΩe₁], [0, 0]] t) for the first moments and
 * records an UnstableSystem warning.
 */
template <typename Real>
Trajectory<Real> evolve(const SystemParams<Real>& p, const InitialCondition<Real>& init,
                        Real t_end, Real dt, Method method)
{
    require_valid(p);
    if (!(t_end > 0) || !(dt > 0))
        throw Error(Errc::InvalidArgument, "t_end and dt must be positive");

    const std::size_t steps = step_count(t_end, dt);
    const Real h = t_end / static_cast<Real>(steps);
    const std::size_t stride = output_stride(steps);
    const auto dm = dynamical_matrix(p);
    const auto modes = eigenmodes(dm);
    const MomentState<Real> s0 = init.state();

    Trajectory<Real> traj;
    traj.times.reserve(steps / stride + 2);
    traj.states.reserve(steps / stride + 2);
    auto sample_at = [&](std::size_t k) { return k % stride == 0 || k == steps; };

    if (method == Method::RK4) {
        const Real rate = std::max(std::abs(modes.lambda_plus), std::abs(modes.lambda_minus));
        if (h * rate > Real(0.1))
            traj.warnings.push_back("StepTooLarge: dt * max|lambda| exceeds 0.1");
        MomentState<Real> s = s0;
        traj.times.push_back(0);
        traj.states.push_back(s);
        for (std::size_t k = 1; k <= steps; ++k) {
            s = detail::rk4_step(p, s, h);
            if (sample_at(k)) {
                traj.times.push_back(h * static_cast<Real>(k));
                traj.states.push_back(s);
            }
        }
        return traj;
    }

    const bool stable = modes.strictly_stable(stability_margin(p));
    Vector2c<Real> b_ss = Vector2c<Real>::Zero();
    Eigen::Matrix<Complex<Real>, 3, 3> affine = Eigen::Matrix<Complex<Real>, 3, 3>::Zero();
    const Complex<Real> i(0, 1);
    if (stable) {
        b_ss = steady_first_moments(p);
    } else {
        traj.warnings.push_back("UnstableSystem: using the affine flow without a steady offset");
        affine.template topLeftCorner<2, 2>() = -i * dm.m;
        affine(0, 2) = -i * p.omega;
    }
    const Matrix2c<Real> fluct0 = s0.fluctuation();

    for (std::size_t k = 0; k <= steps; ++k) {
        if (!sample_at(k))
            continue;
        const Real t = h * static_cast<Real>(k);
        const Matrix2c<Real> u = propagator(dm, t, modes.degenerate);
        MomentState<Real> s;
        if (stable) {
            s.b = u * (s0.b - b_ss) + b_ss;
        } else {
            const Eigen::Matrix<Complex<Real>, 3, 3> e = (affine * t).exp();
            s.b = e.template topLeftCorner<2, 2>() * s0.b + e.template block<2, 1>(0, 2);
        }
        s.n = s.b.conjugate() * s.b.transpose() + u.conjugate() * fluct0 * u.transpose();
        traj.times.push_back(t);
        traj.states.push_back(s);
    }
    return traj;
}

} // namespace dirsim
