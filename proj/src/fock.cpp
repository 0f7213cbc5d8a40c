#include "dirsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace dirsim::fock {

namespace {

SparseMatrix lowering(int cutoff)
{
    SparseMatrix a(cutoff + 1, cutoff + 1);
    std::vector<Eigen::Triplet<cplx>> entries;
    for (int n = 1; n <= cutoff; ++n)
        entries.emplace_back(n - 1, n, std::sqrt(static_cast<double>(n)));
    a.setFromTriplets(entries.begin(), entries.end());
    return a;
}

SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b)
{
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Eigen::Triplet<cplx>> entries;
    for (int ka = 0; ka < a.outerSize(); ++ka)
        for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia)
            for (int kb = 0; kb < b.outerSize(); ++kb)
                for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib)
                    entries.emplace_back(ia.row() * b.rows() + ib.row(),
                                         ia.col() * b.cols() + ib.col(),
                                         ia.value() * ib.value());
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

SparseMatrix identity(Eigen::Index n)
{
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

void check_cutoff(int cutoff)
{
    if (cutoff < 1)
        throw Error(Errc::InvalidArgument, "Fock cutoff must be at least 1");
}

// out += x a^†, one column of out at a time. a is row-major, so row c of a
// lists the columns of x that feed column c of the product.
// Written out in real arithmetic: both Eigen's out.col(c) += v * x.col(s)
// and std::complex multiplication in the inner loop are several times slower.
void add_times_adjoint(const Matrix& x, const SparseMatrix& a, Matrix& out)
{
    const Eigen::Index rows = x.rows();
    for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
        double* __restrict dst = reinterpret_cast<double*>(out.data() + c * rows);
        for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
            const double re = it.value().real();
            const double im = -it.value().imag();
            const double* __restrict src = reinterpret_cast<const double*>(x.data() + it.col() * rows);
            for (Eigen::Index r = 0; r < 2 * rows; r += 2) {
                dst[r] += re * src[r] - im * src[r + 1];
                dst[r + 1] += re * src[r + 1] + im * src[r];
            }
        }
    }
}

// y = a x + b z, in real arithmetic like add_times_adjoint.
void combine(cplx a, const Matrix& x, cplx b, const Matrix& z, Matrix& y)
{
    y.resize(x.rows(), x.cols());
    const Eigen::Index n = 2 * x.size();
    const double* __restrict xs = reinterpret_cast<const double*>(x.data());
    const double* __restrict zs = reinterpret_cast<const double*>(z.data());
    double* __restrict ys = reinterpret_cast<double*>(y.data());
    for (Eigen::Index r = 0; r < n; r += 2) {
        ys[r] = a.real() * xs[r] - a.imag() * xs[r + 1] + b.real() * zs[r] - b.imag() * zs[r + 1];
        ys[r + 1] = a.real() * xs[r + 1] + a.imag() * xs[r] + b.real() * zs[r + 1] + b.imag() * zs[r];
    }
}

} // namespace

ModeOperators mode_operators(int cutoff)
{
    check_cutoff(cutoff);
    const SparseMatrix a = lowering(cutoff);
    const SparseMatrix id = identity(cutoff + 1);
    ModeOperators ops;
    ops.cutoff = cutoff;
    ops.dim = static_cast<Eigen::Index>(cutoff + 1) * (cutoff + 1);
    ops.b1 = kron(a, id);
    ops.b2 = kron(id, a);
    return ops;
}

LindbladGenerator::LindbladGenerator(const Params& params, int cutoff)
  : m_ops(mode_operators(cutoff)), m_damping(damping_matrix(params))
{
    require_valid(params);
    const cplx i(0, 1);
    const SparseMatrix b1_adj = m_ops.b1.adjoint();
    const SparseMatrix b2_adj = m_ops.b2.adjoint();
    m_b_adj[0] = b1_adj;
    m_b_adj[1] = b2_adj;

    const cplx hop = std::polar(params.g, params.theta);
    const SparseMatrix n1 = b1_adj * m_ops.b1;
    const SparseMatrix n2 = b2_adj * m_ops.b2;
    const SparseMatrix right = b1_adj * m_ops.b2;
    const SparseMatrix left = b2_adj * m_ops.b1;
    SparseMatrix h = cplx(params.omega_delta) * (n1 + n2);
    h += hop * right;
    h += std::conj(hop) * left;
    h += cplx(params.omega) * (m_ops.b1 + b1_adj);

    const SparseMatrix* b[2] = {&m_ops.b1, &m_ops.b2};
    SparseMatrix loss(m_ops.dim, m_ops.dim);
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            const SparseMatrix term = m_b_adj[j] * (*b[k]);
            loss += m_damping(j, k) * term;
        }
    m_k = h - (0.5 * i) * loss;
    m_k.prune(cplx(0));
    m_k_adj = m_k.adjoint();
}

Matrix LindbladGenerator::apply(const Matrix& rho) const
{
    Workspace ws;
    Matrix out;
    apply(rho, out, ws);
    return out;
}

void LindbladGenerator::apply(const Matrix& rho, Matrix& out, Workspace& ws) const
{
    // With ρ Hermitian, K ρ = (ρ K^†)^† and b_k ρ = (ρ b_k^†)^†, so only
    // right products are formed:
    //   dρ/dt = (i ρK^† + Z)^† + i ρK^†,   Z = Σ_j b_j Σ_k conj(C_jk) ρ b_k^†.
    const Eigen::Index dim = rho.rows();
    const cplx i(0, 1);
    ws.rk.setZero(dim, dim);
    add_times_adjoint(rho, m_k, ws.rk);
    ws.rk *= i;
    for (int k = 0; k < 2; ++k)
        ws.r[k].setZero(dim, dim);
    add_times_adjoint(rho, m_ops.b1, ws.r[0]);
    add_times_adjoint(rho, m_ops.b2, ws.r[1]);

    ws.z = ws.rk;
    for (int j = 0; j < 2; ++j) {
        const SparseMatrix& bj = j == 0 ? m_ops.b1 : m_ops.b2;
        combine(std::conj(m_damping(j, 0)), ws.r[0], std::conj(m_damping(j, 1)), ws.r[1], ws.y);
        // Ladder matrix entries are real.
        for (Eigen::Index row = 0; row < bj.outerSize(); ++row)
            for (SparseMatrix::InnerIterator it(bj, row); it; ++it) {
                const double w = it.value().real();
                const Eigen::Index from = it.col();
                for (Eigen::Index col = 0; col < dim; ++col) {
                    double* dst = reinterpret_cast<double*>(ws.z.data() + col * dim + row);
                    const double* src = reinterpret_cast<const double*>(ws.y.data() + col * dim + from);
                    dst[0] += w * src[0];
                    dst[1] += w * src[1];
                }
            }
    }
    out = ws.z.adjoint();
    out += ws.rk;
}

Matrix LindbladGenerator::superoperator() const
{
    // vec(A ρ B) = (B^T ⊗ A) vec(ρ)
    const cplx i(0, 1);
    const SparseMatrix id = identity(m_ops.dim);
    const SparseMatrix k_adj_t = SparseMatrix(m_k_adj.transpose());
    SparseMatrix l = -i * (kron(id, m_k) - kron(k_adj_t, id));
    const SparseMatrix* b[2] = {&m_ops.b1, &m_ops.b2};
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            const SparseMatrix bj_adj_t = SparseMatrix(m_b_adj[j].transpose());
            l += m_damping(j, k) * kron(bj_adj_t, *b[k]);
        }
    return Matrix(l);
}

Matrix lindblad_rhs(const Params& params, const FockDensityMatrix& rho)
{
    return LindbladGenerator(params, rho.cutoff).apply(rho.rho);
}

FockDensityMatrix initial_density(const InitialCondition<double>& init, int cutoff)
{
    check_cutoff(cutoff);
    const Eigen::Index dim = static_cast<Eigen::Index>(cutoff + 1) * (cutoff + 1);
    FockDensityMatrix out{cutoff, Matrix::Zero(dim, dim)};
    using Kind = InitialCondition<double>::Kind;
    switch (init.kind) {
    case Kind::Vacuum:
        out.rho(0, 0) = 1;
        break;
    case Kind::SingleExcitationFirst:
        out.rho(cutoff + 1, cutoff + 1) = 1; // |1, 0>
        break;
    case Kind::CoherentAmplitudes:
        throw Error(Errc::InvalidArgument, "Fock oracle supports vacuum and single-excitation starts only");
    }
    return out;
}

Observables observe(const ModeOperators& ops, const Matrix& rho, double t)
{
    Observables o;
    o.t = t;
    const int side = ops.cutoff + 1;
    // <b> = tr(b ρ) = Σ b_ij ρ_ji
    auto expect = [&rho](const SparseMatrix& op) {
        cplx acc = 0;
        for (int r = 0; r < op.outerSize(); ++r)
            for (SparseMatrix::InnerIterator it(op, r); it; ++it)
                acc += it.value() * rho(it.col(), it.row());
        return acc;
    };
    o.b1 = expect(ops.b1);
    o.b2 = expect(ops.b2);
    cplx trace = 0;
    double n11 = 0;
    double n22 = 0;
    for (Eigen::Index idx = 0; idx < ops.dim; ++idx) {
        const double p = rho(idx, idx).real();
        trace += rho(idx, idx);
        n11 += static_cast<double>(idx / side) * p;
        n22 += static_cast<double>(idx % side) * p;
    }
    o.n11 = n11;
    o.n22 = n22;
    o.trace = trace.real();
    // <b1^† b2> = tr(b1^† b2 ρ)
    const SparseMatrix hop = SparseMatrix(ops.b1.adjoint()) * ops.b2;
    o.n12 = expect(hop);
    o.purity = rho.squaredNorm();
    o.hermiticity = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    return o;
}

std::vector<Observables> evolve_rho(const Params& params, const InitialCondition<double>& init,
                                    int cutoff, double t_end, double dt)
{
    if (!(t_end > 0) || !(dt > 0))
        throw Error(Errc::InvalidArgument, "t_end and dt must be positive");
    const LindbladGenerator gen(params, cutoff);
    const std::size_t steps = step_count(t_end, dt);
    const double h = t_end / static_cast<double>(steps);
    const std::size_t stride = output_stride(steps);

    Matrix rho = initial_density(init, cutoff).rho;
    std::vector<Observables> out;
    out.reserve(steps / stride + 2);
    out.push_back(observe(gen.operators(), rho, 0.0));
    LindbladGenerator::Workspace ws;
    Matrix k1, k2, k3, k4, stage;
    for (std::size_t k = 1; k <= steps; ++k) {
        gen.apply(rho, k1, ws);
        stage = rho + (h / 2) * k1;
        gen.apply(stage, k2, ws);
        stage = rho + (h / 2) * k2;
        gen.apply(stage, k3, ws);
        stage = rho + h * k3;
        gen.apply(stage, k4, ws);
        rho += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        const bool sample = k % stride == 0 || k == steps;
        double asym = 0;
        if (sample)
            asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        stage = rho.adjoint();
        rho = (rho + stage) / 2.0;
        if (sample) {
            Observables o = observe(gen.operators(), rho, h * static_cast<double>(k));
            o.hermiticity = asym;
            if (std::abs(o.trace - 1) > 1e-6)
                throw Error(Errc::TraceDrift, "trace drifted to " + std::to_string(o.trace));
            out.push_back(o);
        }
    }
    return out;
}

double boundary_occupation(const FockDensityMatrix& rho)
{
    const int side = rho.cutoff + 1;
    double worst = 0;
    for (Eigen::Index idx = 0; idx < rho.rho.rows(); ++idx) {
        const bool edge = idx / side == rho.cutoff || idx % side == rho.cutoff;
        if (edge)
            worst = std::max(worst, rho.rho(idx, idx).real());
    }
    return worst;
}

FockDensityMatrix steady_rho(const Params& params, int cutoff, bool check_cutoff)
{
    require_valid(params);
    if (!strictly_stable(params))
        throw Error(Errc::MarginallyStable, "no steady state: an eigenvalue of M has Im >= 0");
    const LindbladGenerator gen(params, cutoff);
    const Eigen::Index dim = gen.operators().dim;
    Matrix l = gen.superoperator();
    // Replace the first equation with tr(ρ) = 1.
    l.row(0).setZero();
    for (Eigen::Index idx = 0; idx < dim; ++idx)
        l(0, idx * dim + idx) = 1;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(dim * dim);
    rhs(0) = 1;
    const Eigen::VectorXcd vec = l.partialPivLu().solve(rhs);

    FockDensityMatrix out{cutoff, Eigen::Map<const Matrix>(vec.data(), dim, dim)};
    out.rho = (out.rho + out.rho.adjoint()).eval() / 2.0;
    if (const double edge = boundary_occupation(out); check_cutoff && edge > 1e-8) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "boundary occupation %.3e at cutoff %d", edge, cutoff);
        throw Error(Errc::CutoffTooSmall, buf);
    }
    return out;
}

double purity(const FockDensityMatrix& rho)
{
    return rho.rho.squaredNorm();
}

double max_population_difference(const std::vector<Observables>& a,
                                  const std::vector<Observables>& b)
{
    if (a.size() != b.size())
        throw Error(Errc::InvalidArgument, "observable series have different lengths");
    double worst = 0;
    for (std::size_t k = 0; k < a.size(); ++k)
        worst = std::max({worst, std::abs(a[k].n11 - b[k].n11), std::abs(a[k].n22 - b[k].n22)});
    return worst;
}

double convergence_check(const Params& params, int cutoff, const InitialCondition<double>& init,
                         double t_end, double dt)
{
    if (cutoff < 2)
        throw Error(Errc::InvalidArgument, "convergence check needs cutoff >= 2");
    return max_population_difference(evolve_rho(params, init, cutoff, t_end, dt),
                                     evolve_rho(params, init, cutoff + 2, t_end, dt));
}

} // namespace dirsim::fock
