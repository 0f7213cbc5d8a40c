#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dirsim/model.hpp"
#include "dirsim/moments.hpp"

/// Brute-force density-matrix evolution in a truncated two-mode Fock space.
namespace dirsim::fock {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using Params = SystemParams<double>;

/// Basis |n1, n2>, 0 <= n_i <= cutoff, flattened as n1 * (cutoff + 1) + n2.
struct ModeOperators
{
    int cutoff{};
    Eigen::Index dim{};
    SparseMatrix b1;
    SparseMatrix b2;
};

ModeOperators mode_operators(int cutoff);

struct FockDensityMatrix
{
    int cutoff{};
    Matrix rho;
};

/**
 * Generator of the master equation, stored as
 *
 *   dρ/dt = -i (K ρ - ρ K^†) + Σ_jk C_jk b_k ρ b_j^†,
 *   K = H - (i/2) Σ_jk C_jk b_j^† b_k,
 *
 * with C the damping matrix and H including the drive Ω (b₁ + b₁^†).
 * Applied with sparse products, no superoperator is formed.
 */
class LindbladGenerator
{
public:
    LindbladGenerator(const Params& params, int cutoff);

    /// Scratch matrices for apply; one per thread.
    struct Workspace
    {
        Matrix rk;
        Matrix r[2];
        Matrix y;
        Matrix z;
    };

    /// dρ/dt for a Hermitian ρ.
    Matrix apply(const Matrix& rho) const;
    /// Same, writing into `out` and reusing the buffers in `ws`.
    void apply(const Matrix& rho, Matrix& out, Workspace& ws) const;

    /// Dense Liouvillian acting on column-major vec(ρ); size dim² x dim².
    Matrix superoperator() const;

    const ModeOperators& operators() const { return m_ops; }

private:
    ModeOperators m_ops;
    Matrix2c<double> m_damping;
    SparseMatrix m_k;
    SparseMatrix m_k_adj;
    SparseMatrix m_b_adj[2];
};

/// One-shot right-hand side; builds the generator on every call.
Matrix lindblad_rhs(const Params& params, const FockDensityMatrix& rho);

FockDensityMatrix initial_density(const InitialCondition<double>& init, int cutoff);

struct Observables
{
    double t{};
    cplx b1{};
    cplx b2{};
    double n11{};
    double n22{};
    cplx n12{};
    double trace{};
    double purity{};
    double hermiticity{}; ///< max |ρ - ρ^†| entry, before re-symmetrization
};

Observables observe(const ModeOperators& ops, const Matrix& rho, double t);

/**
 * RK4 evolution of ρ with re-symmetrization after every step. Samples on
 * the same grid as dirsim::evolve. Throws TraceDrift if the trace leaves
 * 1 by more than 1e-6.
 */
std::vector<Observables> evolve_rho(const Params& params, const InitialCondition<double>& init,
                                    int cutoff, double t_end, double dt);

/// Largest diagonal weight on states with n1 = cutoff or n2 = cutoff.
double boundary_occupation(const FockDensityMatrix& rho);

/**
 * Steady state from the dense Liouvillian null space with one row
 * replaced by the trace condition. Throws MarginallyStable when the
 * moment dynamics have no attractor, CutoffTooSmall when the boundary
 * states carry more than 1e-8 (unless check_cutoff is false).
 */
FockDensityMatrix steady_rho(const Params& params, int cutoff, bool check_cutoff = true);

double purity(const FockDensityMatrix& rho);

/// Sup over the evolve_rho grid of |Δn11|, |Δn22| between two runs.
double max_population_difference(const std::vector<Observables>& a,
                                 const std::vector<Observables>& b);

/// max_population_difference between cutoffs N and N + 2.
double convergence_check(const Params& params, int cutoff,
                         const InitialCondition<double>& init, double t_end, double dt);

} // namespace dirsim::fock
