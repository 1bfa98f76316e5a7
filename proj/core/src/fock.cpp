#include "opexp/fock.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "opexp/errors.hpp"

namespace opexp {

namespace {

void require_operator_dim(Index dim, const char* where)
{
    if (dim < 2) {
        throw InvalidDimension(std::string(where) + ": dim must be >= 2, got " +
                               std::to_string(dim));
    }
}

std::string describe(const DensityDefects& d)
{
    std::ostringstream os;
    os << "hermiticity " << d.hermiticity << ", trace error " << d.trace_error
       << ", min eigenvalue " << d.min_eigenvalue;
    return os.str();
}

} // namespace

ComplexMatrix identity_op(Index dim)
{
    if (dim < 1) {
        throw InvalidDimension("identity_op: dim must be >= 1");
    }
    return ComplexMatrix::Identity(dim, dim);
}

ComplexMatrix annihilation_op(Index dim)
{
    require_operator_dim(dim, "annihilation_op");
    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (Index n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

ComplexMatrix creation_op(Index dim)
{
    return annihilation_op(dim).adjoint();
}

ComplexMatrix number_op(Index dim)
{
    require_operator_dim(dim, "number_op");
    ComplexMatrix n = ComplexMatrix::Zero(dim, dim);
    for (Index k = 0; k < dim; ++k) {
        n(k, k) = static_cast<double>(k);
    }
    return n;
}

ComplexMatrix parity_op(Index dim)
{
    require_operator_dim(dim, "parity_op");
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (Index k = 0; k < dim; ++k) {
        p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
    }
    return p;
}

ComplexMatrix position_op(Index dim)
{
    require_operator_dim(dim, "position_op");
    ComplexMatrix x = ComplexMatrix::Zero(dim, dim);
    for (Index m = 0; m + 1 < dim; ++m) {
        const double element = std::sqrt(static_cast<double>(m + 1) / 2.0);
        x(m, m + 1) = element;
        x(m + 1, m) = element;
    }
    return x;
}

ComplexMatrix sg_lowering_op(Index dim)
{
    require_operator_dim(dim, "sg_lowering_op");
    ComplexMatrix v = ComplexMatrix::Zero(dim, dim);
    for (Index n = 1; n < dim; ++n) {
        v(n - 1, n) = 1.0;
    }
    return v;
}

ComplexMatrix projector(Index n, Index dim)
{
    if (n < 0 || n >= dim) {
        throw OutOfRange("projector: index " + std::to_string(n) + " outside dim " +
                         std::to_string(dim));
    }
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    p(n, n) = 1.0;
    return p;
}

StateVector::StateVector(ComplexVector amplitudes, Normalization check, double tol_norm)
    : amplitudes_(std::move(amplitudes))
{
    if (amplitudes_.size() < 1) {
        throw InvalidDimension("StateVector: empty amplitude vector");
    }
    if (!amplitudes_.allFinite()) {
        throw ContractViolation("StateVector: non-finite amplitude");
    }
    if (check == Normalization::Checked && std::abs(amplitudes_.norm() - 1.0) > tol_norm) {
        throw InvariantViolation("StateVector: norm " + std::to_string(amplitudes_.norm()) +
                                 " deviates from 1");
    }
}

DensityDefects density_defects(const ComplexMatrix& m)
{
    require_square(m, "density_defects");
    DensityDefects d;
    d.hermiticity = hermiticity_defect(m);
    d.trace_error = std::abs(m.trace() - 1.0);
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::EigenvaluesOnly);
    d.min_eigenvalue = solver.eigenvalues()(0);
    return d;
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, const Tolerances& tol) : matrix_(std::move(matrix))
{
    require_square(matrix_, "DensityMatrix");
    if (!matrix_.allFinite()) {
        throw ContractViolation("DensityMatrix: non-finite entry");
    }
    const DensityDefects d = density_defects(matrix_);
    if (d.hermiticity > tol.herm || d.trace_error > tol.trace || d.min_eigenvalue < -tol.pos) {
        throw InvariantViolation("DensityMatrix: " + describe(d));
    }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi, const Tolerances& tol)
{
    const ComplexVector& v = psi.amplitudes();
    return DensityMatrix(v * v.adjoint(), tol);
}

double DensityMatrix::min_eigenvalue() const
{
    return density_defects(matrix_).min_eigenvalue;
}

StateVector fock_state(Index n, Index dim)
{
    if (dim < 1) {
        throw InvalidDimension("fock_state: dim must be >= 1");
    }
    if (n < 0 || n >= dim) {
        throw OutOfRange("fock_state: n = " + std::to_string(n) + " not below dim = " +
                         std::to_string(dim));
    }
    ComplexVector v = ComplexVector::Zero(dim);
    v(n) = 1.0;
    return StateVector(std::move(v));
}

Index default_coherent_dim(cplx alpha)
{
    const double r = std::abs(alpha);
    return std::max<Index>(32, static_cast<Index>(std::ceil(r * r + 8.0 * r + 16.0)));
}

Index default_thermal_dim(double nbar0, double tol_trunc)
{
    if (nbar0 < 0.0) {
        throw OutOfRange("default_thermal_dim: nbar0 must be >= 0");
    }
    if (nbar0 == 0.0) {
        return 2;
    }
    const double ratio = nbar0 / (nbar0 + 1.0);
    const double needed = std::log(tol_trunc) / std::log(ratio);
    return std::max<Index>(2, static_cast<Index>(std::floor(needed)) + 1);
}

double coherent_tail_mass(cplx alpha, Index dim)
{
    const double mean = std::norm(alpha);
    if (mean == 0.0) {
        return 0.0;
    }
    // Sum the Poisson tail directly from n = dim; terms decrease once n > mean.
    const double log_mean = std::log(mean);
    double tail = 0.0;
    for (Index n = dim;; ++n) {
        const double log_p = -mean + static_cast<double>(n) * log_mean -
                             std::lgamma(static_cast<double>(n) + 1.0);
        const double p = std::exp(log_p);
        tail += p;
        if (static_cast<double>(n) > mean && p <= 1e-18 * std::max(tail, 1e-300)) {
            break;
        }
        if (static_cast<double>(n) > mean && p == 0.0) {
            break;
        }
    }
    return tail;
}

StateVector coherent_state(cplx alpha, Index dim, double tol_trunc)
{
    if (dim < 1) {
        throw InvalidDimension("coherent_state: dim must be >= 1");
    }
    const double tail = coherent_tail_mass(alpha, dim);
    if (tail > tol_trunc) {
        throw TruncationError("coherent_state: dimension too small for |alpha| = " +
                                  std::to_string(std::abs(alpha)),
                              tail, default_coherent_dim(alpha));
    }
    ComplexVector v(dim);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (Index n = 1; n < dim; ++n) {
        v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    return StateVector(std::move(v), StateVector::Normalization::Checked,
                       std::max(Tolerances{}.norm, tol_trunc));
}

DensityMatrix thermal_state(double nbar0, Index dim, double tol_trunc)
{
    if (!(nbar0 >= 0.0) || !std::isfinite(nbar0)) {
        throw OutOfRange("thermal_state: nbar0 must be finite and >= 0");
    }
    if (dim < 1) {
        throw InvalidDimension("thermal_state: dim must be >= 1");
    }
    const double ratio = nbar0 / (nbar0 + 1.0);
    const double tail = std::pow(ratio, static_cast<double>(dim));
    if (tail > tol_trunc) {
        throw TruncationError("thermal_state: dimension too small for nbar0 = " +
                                  std::to_string(nbar0),
                              tail, default_thermal_dim(nbar0, tol_trunc));
    }
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    double p = 1.0 / (nbar0 + 1.0);
    for (Index n = 0; n < dim; ++n) {
        rho(n, n) = p;
        p *= ratio;
    }
    return DensityMatrix(std::move(rho));
}

DensityMatrix random_density_matrix(Index dim, std::uint64_t seed, Index rank)
{
    if (dim < 1) {
        throw InvalidDimension("random_density_matrix: dim must be >= 1");
    }
    if (rank <= 0 || rank > dim) {
        rank = dim;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(dim, rank);
    for (Index j = 0; j < rank; ++j) {
        for (Index i = 0; i < dim; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = cplx(re, im);
        }
    }
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    // Remove rounding asymmetry so the result is Hermitian to the last bit.
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return DensityMatrix(std::move(rho));
}

cplx expectation(const ComplexMatrix& op, const ComplexMatrix& rho)
{
    require_same_dim(op, rho, "expectation");
    // Tr[op rho] = sum_ij op_ij rho_ji
    return op.cwiseProduct(rho.transpose()).sum();
}

cplx expectation(const ComplexMatrix& op, const DensityMatrix& rho)
{
    return expectation(op, rho.matrix());
}

cplx expectation(const ComplexMatrix& op, const StateVector& psi)
{
    if (op.rows() != psi.dim() || op.cols() != psi.dim()) {
        throw DimensionMismatch("expectation", op.rows(), psi.dim());
    }
    return psi.amplitudes().dot(op * psi.amplitudes());
}

} // namespace opexp
