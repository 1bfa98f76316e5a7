// linalg.hpp: dense complex linear algebra used by every module:
// matrix aliases, max-norm helpers, Hermitian eigendecomposition and the
// scaling-and-squaring matrix exponential.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace opexp {

using cplx = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Default tolerances shared across the library.
struct Tolerances {
    double norm = 1e-10;   // state-vector normalization
    double herm = 1e-10;   // Hermiticity, max-norm of M - M^dagger
    double trace = 1e-8;   // density-matrix trace
    double pos = 1e-8;     // allowed negative eigenvalue magnitude
    double trunc = 1e-10;  // Fock-space tail mass
};

// Max-norm (largest entry modulus).
double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// max |M - M^dagger|
double hermiticity_defect(const ComplexMatrix& m);

void require_square(const ComplexMatrix& m, const char* where);
void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* where);

struct EigenDecomposition {
    RealVector values;      // ascending
    ComplexMatrix vectors;  // orthonormal columns
};

// Hermitian eigendecomposition. Throws ContractViolation when the input is not
// Hermitian to within tol_herm * max(1, |M|_max).
EigenDecomposition eigh(const ComplexMatrix& h, double tol_herm = Tolerances{}.herm);

// U f(Lambda) U^dagger for a decomposition of a Hermitian matrix.
ComplexMatrix apply_spectral(const EigenDecomposition& eig, const std::function<cplx(double)>& f);

// Matrix exponential by scaling and squaring with a diagonal Pade core
// (degree 3, 5, 7, 9 or 13 chosen from the 1-norm).
ComplexMatrix expm(const ComplexMatrix& m);

// Direct power by repeated multiplication; k = 0 gives the identity.
ComplexMatrix matrix_power(const ComplexMatrix& m, int k);

// Runs body(i) for i in [0, count) on up to `threads` workers. Iterations must
// be independent; results are written by index so output order never depends
// on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

} // namespace opexp
