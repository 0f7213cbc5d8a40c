#pragma once

#include <cmath>
#include <complex>
#include <optional>

#include "dirsim/model.hpp"
#include "dirsim/moments.hpp"

/// Analytic steady states and population dynamics of the resonator pair.
///
/// Every function here assumes zero detuning. The dynamical forms start
/// from one excitation in the first resonator (b = 0, n = diag(1, 0)).
namespace dirsim::closed {

template <typename Real>
struct SteadyResult
{
    Real n1{};
    Real n2{};
    std::optional<Real> delta;
};

template <typename Real>
struct Populations
{
    Real n11{};
    Real n22{};
};

namespace detail {

template <typename Real>
void require_positive_loss(Real gamma)
{
    if (!(gamma > 0))
        throw Error(Errc::NonPositiveLoss, "closed forms need gamma > 0");
}

template <typename Real>
void require_resonant(const SystemParams<Real>& p)
{
    if (p.omega_delta != 0)
        throw Error(Errc::DetunedClosedForm, "closed forms hold only at zero detuning");
}

template <typename Real>
SteadyResult<Real> make_result(Real n1, Real n2)
{
    return {n1, n2, try_imbalance(n1, n2)};
}

} // namespace detail

/// Purely coherent coupling (Γ = 0).
template <typename Real>
SteadyResult<Real> ss_coherent(Real gamma, Real g, Real omega)
{
    detail::require_positive_loss(gamma);
    const Real a = gamma * gamma + 4 * g * g;
    const Real n1 = std::pow(2 * gamma * omega / a, 2);
    const Real n2 = std::pow(4 * g * omega / a, 2);
    SteadyResult<Real> r{n1, n2, std::nullopt};
    if (omega > 0)
        r.delta = 1 - 8 * g * g / a;
    return r;
}

/// Purely dissipative coupling (g = 0). Diverges as Γ → γ.
template <typename Real>
SteadyResult<Real> ss_dissipative(Real gamma, Real big_gamma, Real omega)
{
    detail::require_positive_loss(gamma);
    if (big_gamma >= gamma)
        throw Error(Errc::DivergentSteadyState, "dissipative steady state needs Gamma < gamma");
    const Real c = gamma * gamma - big_gamma * big_gamma;
    const Real n1 = std::pow(2 * gamma * omega / c, 2);
    const Real n2 = std::pow(2 * big_gamma * omega / c, 2);
    SteadyResult<Real> r{n1, n2, std::nullopt};
    if (omega > 0)
        r.delta = 1 - 2 * big_gamma * big_gamma / (big_gamma * big_gamma + gamma * gamma);
    return r;
}

/// Rightward one-way coupling: g = Γ/2, θ - φ = π/2. The driven resonator sees no backaction.
template <typename Real>
SteadyResult<Real> ss_unidirectional(Real gamma, Real big_gamma, Real omega)
{
    detail::require_positive_loss(gamma);
    const Real n1 = std::pow(2 * omega / gamma, 2);
    const Real n2 = std::pow(4 * big_gamma * omega / (gamma * gamma), 2);
    SteadyResult<Real> r{n1, n2, std::nullopt};
    if (omega > 0)
        r.delta = 1 - 8 * big_gamma * big_gamma / (gamma * gamma + 4 * big_gamma * big_gamma);
    return r;
}

/// S = 4g² + Γ² + 4gΓ sin(θ-φ) = |2 G₊|², the effective rightward transfer strength.
template <typename Real>
Real transfer_strength(Real g, Real big_gamma, Real relative_phase)
{
    return 4 * g * g + big_gamma * big_gamma + 4 * g * big_gamma * std::sin(relative_phase);
}

/// D = 16g⁴ + 8g²γ² + (γ² - Γ²)² + 8g²Γ² cos(2(θ-φ)) = 16 |det M|².
template <typename Real>
Real response_denominator(Real gamma, Real g, Real big_gamma, Real relative_phase)
{
    const Real g2 = g * g;
    const Real c = gamma * gamma - big_gamma * big_gamma;
    return 16 * g2 * g2 + 8 * g2 * gamma * gamma + c * c +
           8 * g2 * big_gamma * big_gamma * std::cos(2 * relative_phase);
}

/// Steady imbalance for arbitrary couplings; depends only on n2/n1 = S/γ².
template <typename Real>
Real imbalance_general(Real gamma, Real g, Real big_gamma, Real relative_phase)
{
    const Real s = transfer_strength(g, big_gamma, relative_phase);
    return 2 * gamma * gamma / (gamma * gamma + s) - 1;
}

template <typename Real>
SteadyResult<Real> ss_general(const SystemParams<Real>& p)
{
    require_valid(p);
    detail::require_resonant(p);
    if (!strictly_stable(p))
        throw Error(Errc::MarginallyStable, "no steady state: an eigenvalue of M has Im >= 0");
    const Real x = p.relative_phase();
    const Real s = transfer_strength(p.g, p.big_gamma, x);
    const Real d = response_denominator(p.gamma, p.g, p.big_gamma, x);
    const Real w2 = p.omega * p.omega;
    SteadyResult<Real> r{4 * p.gamma * p.gamma * w2 / d, 4 * w2 * s / d, std::nullopt};
    if (p.omega > 0)
        r.delta = imbalance_general(p.gamma, p.g, p.big_gamma, x);
    return r;
}

/// Coherent regime (Γ = 0) populations; independent of θ.
template <typename Real>
Populations<Real> dyn_coherent(Real gamma, Real g, Real omega, Real t)
{
    detail::require_positive_loss(gamma);
    const Real a = gamma * gamma + 4 * g * g;
    const Real a2 = a * a;
    const Real w2 = omega * omega;
    const Real slow = std::exp(-gamma * t / 2);
    const Real fast = std::exp(-gamma * t);
    const Real c1 = std::cos(g * t), s1 = std::sin(g * t);
    const Real c2 = std::cos(2 * g * t), s2 = std::sin(2 * g * t);
    const Real base = a * (a + 4 * w2);
    const Real osc = a2 + 4 * w2 * (gamma * gamma - 4 * g * g);
    const Real cross = 16 * g * gamma * w2;

    Populations<Real> out;
    out.n11 = std::pow(2 * gamma * omega / a, 2) +
              8 * gamma * w2 / a2 * (2 * g * s1 - gamma * c1) * slow +
              (base + osc * c2 - cross * s2) * fast / (2 * a2);
    out.n22 = std::pow(4 * g * omega / a, 2) -
              16 * g * w2 / a2 * (2 * g * c1 + gamma * s1) * slow +
              (base - osc * c2 + cross * s2) * fast / (2 * a2);
    return out;
}

/// Dissipative regime (g = 0, Γ < γ) populations; independent of φ.
template <typename Real>
Populations<Real> dyn_dissipative(Real gamma, Real big_gamma, Real omega, Real t)
{
    detail::require_positive_loss(gamma);
    if (big_gamma >= gamma)
        throw Error(Errc::DivergentSteadyState, "dissipative dynamics form needs Gamma < gamma");
    const Real sum = gamma + big_gamma;
    const Real diff = gamma - big_gamma;
    const Real c = gamma * gamma - big_gamma * big_gamma;
    const Real w2 = omega * omega;
    const Real fast = std::exp(-gamma * t);
    const Real ch = std::cosh(big_gamma * t);
    const Real squares =
        w2 * (std::exp(-sum * t) / (sum * sum) + std::exp(-diff * t) / (diff * diff));
    const Real e_sum = std::exp(-sum * t / 2) / sum;
    const Real e_diff = std::exp(-diff * t / 2) / diff;

    Populations<Real> out;
    out.n11 = std::pow(2 * gamma * omega / c, 2) + (ch + 1 + 4 * w2 / c) * fast / 2 + squares -
              4 * gamma * w2 / c * (e_sum + e_diff);
    out.n22 = std::pow(2 * big_gamma * omega / c, 2) + (ch - 1 - 4 * w2 / c) * fast / 2 +
              squares + 4 * big_gamma * w2 / c * (e_sum - e_diff);
    return out;
}

/// Rightward one-way regime (g = Γ/2, θ - φ = π/2). Secular (2 + γt) terms come from the Jordan block.
template <typename Real>
Populations<Real> dyn_unidirectional(Real gamma, Real big_gamma, Real omega, Real t)
{
    detail::require_positive_loss(gamma);
    const Real single = std::pow(2 * omega / gamma, 2);
    const Real slow = std::exp(-gamma * t / 2);
    const Real fast = std::exp(-gamma * t);
    const Real gt = gamma * t;
    const Real k = std::pow(4 * big_gamma * omega / (gamma * gamma), 2);

    Populations<Real> out;
    out.n11 = single - 2 * single * slow + (1 + single) * fast;
    out.n22 = k - k * (2 + gt) * slow +
              std::pow(big_gamma / gamma, 2) * (gt * gt + (2 + gt) * (2 + gt) * single) * fast;
    return out;
}

/**
 * Exact populations for arbitrary couplings at zero detuning, from the
 * eigendecomposition M = V diag(λ) V⁻¹ (Jordan form at an exceptional
 * point). Each eigen-amplitude obeys c' = -iλc + f, so
 * c(t) = e^{-iλt} c(0) + f (1 - e^{-iλt}) / (iλ), which stays finite for
 * λ → 0 on a marginal mode.
 */
template <typename Real>
MomentState<Real> dyn_closed_form_state(const SystemParams<Real>& p, const InitialCondition<Real>& init,
                                        Real t)
{
    using C = Complex<Real>;
    require_valid(p);
    detail::require_resonant(p);
    const C i(0, 1);
    const auto dm = dynamical_matrix(p);
    const Matrix2c<Real>& m = dm.m;
    const auto modes = eigenmodes(dm);
    const MomentState<Real> s0 = init.state();
    const Vector2c<Real> force(C(-i * p.omega), C(0));

    MomentState<Real> out;
    Matrix2c<Real> u;
    if (modes.degenerate) {
        // Equal diagonals make λ = M₀₀ and N = M - λ I strictly off-diagonal.
        const C lambda = modes.lambda_plus;
        const Matrix2c<Real> nil = m - lambda * Matrix2c<Real>::Identity();
        u = std::exp(-i * lambda * t) * (Matrix2c<Real>::Identity() - i * t * nil);
        // Cramer's rule; det = λ² ≠ 0 here because Im λ = -γ/2.
        const C det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        const Vector2c<Real> b_ss(C(-p.omega) * m(1, 1) / det, C(p.omega) * m(1, 0) / det);
        out.b = u * (s0.b - b_ss) + b_ss;
    } else {
        Matrix2c<Real> v;
        for (int j = 0; j < 2; ++j) {
            const C lambda = j == 0 ? modes.lambda_plus : modes.lambda_minus;
            if (std::abs(m(0, 1)) >= std::abs(m(1, 0)))
                v.col(j) << m(0, 1), lambda - m(0, 0);
            else
                v.col(j) << lambda - m(1, 1), m(1, 0);
        }
        const Matrix2c<Real> v_inv = v.inverse();
        const Vector2c<Real> c0 = v_inv * s0.b;
        const Vector2c<Real> f = v_inv * force;
        Vector2c<Real> ct;
        Vector2c<Real> decay;
        for (int j = 0; j < 2; ++j) {
            const C lambda = j == 0 ? modes.lambda_plus : modes.lambda_minus;
            const C e = std::exp(-i * lambda * t);
            const C z = lambda * t;
            const C phi1 = std::abs(z) < Real(1e-8) ? t * (Real(1) - i * z / Real(2))
                                                    : (Real(1) - e) / (i * lambda);
            decay(j) = e;
            ct(j) = e * c0(j) + f(j) * phi1;
        }
        out.b = v * ct;
        u = v * decay.asDiagonal() * v_inv;
    }
    out.n = out.b.conjugate() * out.b.transpose() + u.conjugate() * s0.fluctuation() * u.transpose();
    return out;
}

template <typename Real>
Populations<Real> dyn_closed_form(const SystemParams<Real>& p, const InitialCondition<Real>& init,
                                  Real t)
{
    const auto s = dyn_closed_form_state(p, init, t);
    return {s.n(0, 0).real(), s.n(1, 1).real()};
}

/**
 * Forms with known defects, kept so tests can show they disagree with the
 * moment dynamics. Each comment names the defect.
 */
namespace uncorrected {

/// Dissipative part lacks the factor i, so neither coupling vanishes at the one-way point.
template <typename Real>
GeneralizedCouplings<Real> generalized_couplings(const SystemParams<Real>& p)
{
    const Complex<Real> coherent = std::polar(p.g, p.theta);
    const Complex<Real> dissipative = Real(0.5) * std::polar(p.big_gamma, p.phi);
    return {coherent + dissipative, coherent - dissipative};
}

/// Single-period cross terms miss the 1/γ (mode 1) and 1/g (mode 2) factors.
template <typename Real>
Populations<Real> dyn_coherent(Real gamma, Real g, Real omega, Real t)
{
    const Real a = gamma * gamma + 4 * g * g;
    const Real a2 = a * a;
    const Real w2 = omega * omega;
    const Real slow = std::exp(-gamma * t / 2);
    const Real fast = std::exp(-gamma * t);
    const Real c1 = std::cos(g * t), s1 = std::sin(g * t);
    const Real c2 = std::cos(2 * g * t), s2 = std::sin(2 * g * t);
    const Real base = a * (a + 4 * w2);
    const Real osc = a2 + 4 * w2 * (gamma * gamma - 4 * g * g);
    const Real cross = 16 * g * gamma * w2;
    const Real p1 = std::pow(2 * gamma * omega / a, 2);
    const Real p2 = std::pow(4 * g * omega / a, 2);
    return {p1 + 2 * p1 * (2 * g * s1 - gamma * c1) * slow + (base + osc * c2 - cross * s2) * fast / (2 * a2),
            p2 - p2 * (2 * g * c1 + gamma * s1) * slow + (base - osc * c2 + cross * s2) * fast / (2 * a2)};
}

/// Driven-resonator population scales as 1/γ⁴ instead of 1/γ².
template <typename Real>
SteadyResult<Real> ss_unidirectional(Real gamma, Real big_gamma, Real omega)
{
    const Real n1 = std::pow(2 * omega / (gamma * gamma), 2);
    const Real n2 = std::pow(4 * big_gamma * omega / (gamma * gamma), 2);
    return detail::make_result(n1, n2);
}

/// Steady and secular terms of mode 2 use (4ΓΩ/γ)² instead of (4ΓΩ/γ²)².
template <typename Real>
Populations<Real> dyn_unidirectional(Real gamma, Real big_gamma, Real omega, Real t)
{
    const Real single = std::pow(2 * omega / gamma, 2);
    const Real slow = std::exp(-gamma * t / 2);
    const Real fast = std::exp(-gamma * t);
    const Real gt = gamma * t;
    const Real k = std::pow(4 * big_gamma * omega / gamma, 2);
    return {single - 2 * single * slow + (1 + single) * fast,
            k - k * (2 + gt) * slow +
                std::pow(big_gamma / gamma, 2) * (gt * gt + (2 + gt) * (2 + gt) * single) * fast};
}

/// Mode-2 numerator squares S, giving the wrong dimension and wrong Γ = 0 / g = 0 limits.
/// The imbalance divides by D instead of γ² + S.
template <typename Real>
SteadyResult<Real> ss_general(const SystemParams<Real>& p)
{
    const Real x = p.relative_phase();
    const Real s = transfer_strength(p.g, p.big_gamma, x);
    const Real d = response_denominator(p.gamma, p.g, p.big_gamma, x);
    const Real w2 = p.omega * p.omega;
    return {4 * p.gamma * p.gamma * w2 / d, 4 * w2 * s * s / d, 2 * p.gamma * p.gamma / d - 1};
}

} // namespace uncorrected

} // namespace dirsim::closed
