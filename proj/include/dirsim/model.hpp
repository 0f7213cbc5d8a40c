#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "dirsim/errors.hpp"

namespace dirsim {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using Matrix2c = Eigen::Matrix<std::complex<Real>, 2, 2>;

template <typename Real>
using Vector2c = Eigen::Matrix<std::complex<Real>, 2, 1>;

/**
 * Physical parameters of the driven resonator pair.
 *
 * All rates share one frequency unit; the intrinsic loss gamma sets the
 * scale. Phases are stored as given and only ever compared modulo 2 pi.
 */
template <typename Real>
struct SystemParams
{
    Real gamma{1};       ///< intrinsic loss rate of each resonator
    Real big_gamma{0};   ///< bath-mediated (dissipative) coupling magnitude
    Real g{0};           ///< coherent coupling magnitude
    Real theta{0};       ///< coherent coupling phase
    Real phi{0};         ///< dissipative coupling phase
    Real omega{0};       ///< drive amplitude on the first resonator
    Real omega_delta{0}; ///< detuning in the frame rotating with the drive

    Real relative_phase() const { return theta - phi; }
};

/// Returns the first violated invariant, or nothing when params are physical.
template <typename Real>
[[nodiscard]] std::optional<Errc> validate(const SystemParams<Real>& p)
{
    using std::isfinite;
    if (!isfinite(p.gamma) || !isfinite(p.big_gamma) || !isfinite(p.g) ||
        !isfinite(p.theta) || !isfinite(p.phi) || !isfinite(p.omega) ||
        !isfinite(p.omega_delta))
        return Errc::NonFinite;
    if (!(p.gamma > 0))
        return Errc::NonPositiveLoss;
    if (p.g < 0 || p.omega < 0 || p.big_gamma < 0)
        return Errc::NegativeMagnitude;
    // Gamma > gamma makes the damping matrix indefinite.
    if (p.big_gamma > p.gamma)
        return Errc::GammaExceedsLoss;
    return std::nullopt;
}

template <typename Real>
void require_valid(const SystemParams<Real>& p)
{
    if (auto err = validate(p))
        throw Error(*err, "invalid system parameters");
}

/// Hermitian, positive-semidefinite matrix of loss rates: [[γ, Γe^{iφ}], [Γe^{-iφ}, γ]].
template <typename Real>
Matrix2c<Real> damping_matrix(const SystemParams<Real>& p)
{
    Matrix2c<Real> c;
    c(0, 0) = p.gamma;
    c(0, 1) = std::polar(p.big_gamma, p.phi);
    c(1, 0) = std::polar(p.big_gamma, -p.phi);
    c(1, 1) = p.gamma;
    return c;
}

/// Single-particle block of the Hamiltonian; the drive enters separately as an affine term.
template <typename Real>
Matrix2c<Real> hamiltonian_matrix(const SystemParams<Real>& p)
{
    Matrix2c<Real> h;
    h(0, 0) = p.omega_delta;
    h(0, 1) = std::polar(p.g, p.theta);
    h(1, 0) = std::polar(p.g, -p.theta);
    h(1, 1) = p.omega_delta;
    return h;
}

/// Non-Hermitian generator M of the first moments: i d<b>/dt = M <b> + Ω e₁.
template <typename Real>
struct DynamicalMatrix
{
    Matrix2c<Real> m;

    const Complex<Real>& operator()(Eigen::Index r, Eigen::Index c) const { return m(r, c); }
};

template <typename Real>
DynamicalMatrix<Real> dynamical_matrix(const SystemParams<Real>& p)
{
    const Complex<Real> half_i(0, Real(0.5));
    return {hamiltonian_matrix(p) - half_i * damping_matrix(p)};
}

/**
 * Rightward/leftward coupling constants, G± = g e^{iθ} ± (i/2) Γ e^{iφ}.
 *
 * g_minus is the entry M₁₂ (resonator 2 acting on resonator 1) and
 * conj(g_plus) the entry M₂₁. The factor i on the dissipative part is what
 * the master equation produces; without it the one-way conditions
 * Γ = 2g, θ - φ = π/2 or 3π/2 would not make either entry vanish.
 */
template <typename Real>
struct GeneralizedCouplings
{
    Complex<Real> g_plus;
    Complex<Real> g_minus;
};

template <typename Real>
GeneralizedCouplings<Real> generalized_couplings(const SystemParams<Real>& p)
{
    const Complex<Real> coherent = std::polar(p.g, p.theta);
    const Complex<Real> dissipative =
        Complex<Real>(0, Real(0.5)) * std::polar(p.big_gamma, p.phi);
    return {coherent + dissipative, coherent - dissipative};
}

enum class Regime {
    Uncoupled,
    Coherent,
    Dissipative,
    UnidirectionalRight,
    UnidirectionalLeft,
    Asymmetric,
};

constexpr std::string_view to_string(Regime r) noexcept
{
    switch (r) {
    case Regime::Uncoupled: return "Uncoupled";
    case Regime::Coherent: return "Coherent";
    case Regime::Dissipative: return "Dissipative";
    case Regime::UnidirectionalRight: return "UnidirectionalRight";
    case Regime::UnidirectionalLeft: return "UnidirectionalLeft";
    case Regime::Asymmetric: return "Asymmetric";
    }
    return "Unknown";
}

/// Labels the coupling regime. tol is relative to g + Γ/2 (and to γ for the zero tests).
template <typename Real>
Regime classify_regime(const SystemParams<Real>& p, Real tol = Real(1e-9))
{
    if (!(tol > 0))
        throw Error(Errc::InvalidArgument, "classification tolerance must be positive");
    const Real zero_scale = tol * p.gamma;
    const bool no_g = p.g <= zero_scale;
    const bool no_big_gamma = p.big_gamma <= zero_scale;
    if (no_g && no_big_gamma)
        return Regime::Uncoupled;
    if (no_big_gamma)
        return Regime::Coherent;
    if (no_g)
        return Regime::Dissipative;

    const Real scale = tol * (p.g + p.big_gamma / 2);
    const auto couplings = generalized_couplings(p);
    const Real plus = std::abs(couplings.g_plus);
    const Real minus = std::abs(couplings.g_minus);
    if (minus <= scale && plus > scale)
        return Regime::UnidirectionalRight;
    if (plus <= scale && minus > scale)
        return Regime::UnidirectionalLeft;
    return Regime::Asymmetric;
}

template <typename Real>
struct Eigenmodes
{
    Complex<Real> lambda_plus;
    Complex<Real> lambda_minus;
    bool degenerate{false}; ///< exceptional point: M is defective

    Real max_imag() const { return std::max(lambda_plus.imag(), lambda_minus.imag()); }
    bool stable() const { return max_imag() < 0; }
    /// Im λ < -margin for both modes.
    bool strictly_stable(Real margin) const { return max_imag() < -margin; }
};

/**
 * Eigenvalues of a 2x2 dynamical matrix.
 *
 * An off-diagonal entry below `triangular_tol` times the largest entry is
 * treated as exactly zero. Near an exceptional point the square root of
 * the discriminant would otherwise turn 1e-17 rounding in that entry into
 * a 1e-8 eigenvalue splitting. Degeneracy is flagged when the two
 * eigenvalues differ by less than `degenerate_tol` times the same scale.
 */
template <typename Real>
Eigenmodes<Real> eigenmodes(const DynamicalMatrix<Real>& dm,
                            Real degenerate_tol = Real(1e-12),
                            Real triangular_tol = Real(1e-12))
{
    const auto& m = dm.m;
    const Real scale = m.cwiseAbs().maxCoeff();
    Eigenmodes<Real> out;
    if (std::abs(m(0, 1)) <= triangular_tol * scale ||
        std::abs(m(1, 0)) <= triangular_tol * scale) {
        out.lambda_plus = m(0, 0);
        out.lambda_minus = m(1, 1);
    } else {
        const Complex<Real> mean = (m(0, 0) + m(1, 1)) / Real(2);
        const Complex<Real> half_split = (m(0, 0) - m(1, 1)) / Real(2);
        const Complex<Real> root = std::sqrt(half_split * half_split + m(0, 1) * m(1, 0));
        out.lambda_plus = mean + root;
        out.lambda_minus = mean - root;
    }
    out.degenerate = std::abs(out.lambda_plus - out.lambda_minus) <= degenerate_tol * scale;
    return out;
}

} // namespace dirsim
