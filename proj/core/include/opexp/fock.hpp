// fock.hpp: truncated Fock-space operators and canonical states.
//
// All operators act on span{|0>, ..., |dim-1>}. Identities that only hold in
// infinite dimension (e.g. [a, a^dagger] = 1, V V^dagger = 1) acquire a defect
// in the last basis element; nothing here hides it.

#pragma once

#include <cstdint>

#include "opexp/linalg.hpp"

namespace opexp {

ComplexMatrix identity_op(Index dim);

// a|n> = sqrt(n)|n-1>
ComplexMatrix annihilation_op(Index dim);
ComplexMatrix creation_op(Index dim);
ComplexMatrix number_op(Index dim);
// (-1)^n
ComplexMatrix parity_op(Index dim);
// x = (a + a^dagger)/sqrt(2)
ComplexMatrix position_op(Index dim);
// Susskind-Glogower lowering operator V = (1 + n)^{-1/2} a, i.e. V|n> = |n-1>, V|0> = 0.
ComplexMatrix sg_lowering_op(Index dim);
// |n><n|
ComplexMatrix projector(Index n, Index dim);

class StateVector {
public:
    enum class Normalization { Checked, Unchecked };

    explicit StateVector(ComplexVector amplitudes,
                         Normalization check = Normalization::Checked,
                         double tol_norm = Tolerances{}.norm);

    Index dim() const noexcept { return amplitudes_.size(); }
    const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
    cplx operator[](Index i) const { return amplitudes_(i); }
    double norm() const { return amplitudes_.norm(); }

private:
    ComplexVector amplitudes_;
};

// Hermitian, unit-trace, positive semidefinite matrix. Checked at construction.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix matrix, const Tolerances& tol = {});

    static DensityMatrix from_pure(const StateVector& psi, const Tolerances& tol = {});

    Index dim() const noexcept { return matrix_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    cplx trace() const { return matrix_.trace(); }
    double min_eigenvalue() const;

private:
    ComplexMatrix matrix_;
};

struct DensityDefects {
    double hermiticity = 0.0;
    double trace_error = 0.0;
    double min_eigenvalue = 0.0;
};

// Measures how far an arbitrary matrix is from being a density matrix.
DensityDefects density_defects(const ComplexMatrix& m);

StateVector fock_state(Index n, Index dim);

// Truncation dimension heuristics: max(32, ceil(|a|^2 + 8|a| + 16)) for coherent
// states, smallest dim with geometric tail below tol for thermal states.
Index default_coherent_dim(cplx alpha);
Index default_thermal_dim(double nbar0, double tol_trunc = Tolerances{}.trunc);

// Poisson mass beyond the truncation: sum_{n >= dim} e^{-|a|^2} |a|^{2n}/n!
double coherent_tail_mass(cplx alpha, Index dim);

// Amplitudes e^{-|a|^2/2} a^n / sqrt(n!) for n < dim, not renormalized.
// Throws TruncationError when the discarded tail exceeds tol_trunc.
StateVector coherent_state(cplx alpha, Index dim, double tol_trunc = Tolerances{}.trunc);

// diag((1/(n0+1)) (n0/(n0+1))^n). Throws TruncationError when (n0/(n0+1))^dim > tol_trunc.
DensityMatrix thermal_state(double nbar0, Index dim, double tol_trunc = Tolerances{}.trunc);

// G G^dagger / Tr for a complex Gaussian dim x rank matrix G (rank 0 means full rank).
DensityMatrix random_density_matrix(Index dim, std::uint64_t seed, Index rank = 0);

// Tr[op rho]
cplx expectation(const ComplexMatrix& op, const DensityMatrix& rho);
cplx expectation(const ComplexMatrix& op, const ComplexMatrix& rho);
cplx expectation(const ComplexMatrix& op, const StateVector& psi);

} // namespace opexp
