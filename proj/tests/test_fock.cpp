#include <gtest/gtest.h>

#include <cmath>

#include "opexp/errors.hpp"
#include "opexp/fock.hpp"

using namespace opexp;

TEST(Operators, AnnihilationSmall)
{
    const ComplexMatrix a2 = annihilation_op(2);
    EXPECT_EQ(a2(0, 1), cplx(1.0));
    EXPECT_EQ(a2(0, 0), cplx(0.0));
    EXPECT_EQ(a2(1, 0), cplx(0.0));
    EXPECT_EQ(a2(1, 1), cplx(0.0));
    EXPECT_DOUBLE_EQ(annihilation_op(3)(1, 2).real(), std::sqrt(2.0));
}

TEST(Operators, NumberFromLadder)
{
    const ComplexMatrix n = creation_op(8) * annihilation_op(8);
    for (Index i = 0; i < 8; ++i) {
        EXPECT_NEAR(n(i, i).real(), static_cast<double>(i), 1e-14);
    }
    EXPECT_LT(max_abs_diff(n, number_op(8)), 1e-14);
}

TEST(Operators, CommutatorCornerDefect)
{
    for (Index dim : {2, 5, 17}) {
        const ComplexMatrix a = annihilation_op(dim);
        ComplexMatrix expected = ComplexMatrix::Identity(dim, dim);
        expected(dim - 1, dim - 1) = 1.0 - static_cast<double>(dim);
        EXPECT_LT(max_abs_diff(a * a.adjoint() - a.adjoint() * a, expected), 1e-13);
    }
}

TEST(Operators, ParityAndPosition)
{
    const ComplexMatrix p = parity_op(3);
    EXPECT_EQ(p(0, 0), cplx(1.0));
    EXPECT_EQ(p(1, 1), cplx(-1.0));
    EXPECT_EQ(p(2, 2), cplx(1.0));
    EXPECT_NEAR(position_op(3)(0, 1).real(), 0.70710678118654752, 1e-15);
    for (Index dim = 2; dim <= 40; ++dim) {
        const ComplexMatrix x = position_op(dim);
        const ComplexMatrix q = parity_op(dim);
        EXPECT_EQ(max_abs(q * x + x * q), 0.0) << dim;
    }
}

TEST(Operators, LoweringTruncationStatements)
{
    for (Index dim : {2, 6, 33}) {
        const ComplexMatrix v = sg_lowering_op(dim);
        EXPECT_EQ(max_abs_diff(v.adjoint() * v, identity_op(dim) - projector(0, dim)), 0.0);
        EXPECT_EQ(max_abs_diff(v * v.adjoint(), identity_op(dim) - projector(dim - 1, dim)), 0.0);
    }
    const ComplexVector shifted = sg_lowering_op(6) * fock_state(3, 6).amplitudes();
    EXPECT_EQ((shifted - fock_state(2, 6).amplitudes()).norm(), 0.0);
}

TEST(Operators, InvalidDimensions)
{
    EXPECT_THROW(annihilation_op(1), InvalidDimension);
    EXPECT_THROW(number_op(0), InvalidDimension);
    EXPECT_THROW(parity_op(1), InvalidDimension);
    EXPECT_THROW(position_op(-3), InvalidDimension);
    EXPECT_THROW(sg_lowering_op(1), InvalidDimension);
    EXPECT_THROW(projector(4, 4), OutOfRange);
}

TEST(FockState, Basics)
{
    const StateVector s0 = fock_state(0, 4);
    const StateVector s3 = fock_state(3, 4);
    EXPECT_EQ(s0[0], cplx(1.0));
    EXPECT_EQ(s3[3], cplx(1.0));
    EXPECT_DOUBLE_EQ(s3.norm(), 1.0);
    EXPECT_THROW(fock_state(4, 4), OutOfRange);
    EXPECT_THROW(fock_state(-1, 4), OutOfRange);
}

TEST(StateVector, NormalizationGuard)
{
    ComplexVector v = ComplexVector::Zero(3);
    v(0) = 1.1;
    EXPECT_THROW(StateVector{v}, InvariantViolation);
    EXPECT_NO_THROW(StateVector(v, StateVector::Normalization::Unchecked));
    v(0) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(StateVector(v, StateVector::Normalization::Unchecked), ContractViolation);
}

TEST(CoherentState, VacuumAndMoments)
{
    EXPECT_LT((coherent_state(0.0, 16).amplitudes() - fock_state(0, 16).amplitudes()).norm(), 1e-15);
    const StateVector psi = coherent_state(3.0, 64);
    EXPECT_NEAR(expectation(number_op(64), psi).real(), 9.0, 1e-9);
    EXPECT_LT(std::abs(psi.norm() - 1.0), 1e-10);
}

TEST(CoherentState, PoissonWeights)
{
    const cplx alpha(1.5, -2.0);
    const StateVector psi = coherent_state(alpha, 80);
    const double mean = std::norm(alpha);
    for (Index n = 0; n < 80; ++n) {
        const double poisson = std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
        EXPECT_NEAR(std::norm(psi[n]), poisson, 1e-12) << n;
    }
}

TEST(CoherentState, TruncationGuard)
{
    EXPECT_THROW(coherent_state(3.0, 8), TruncationError);
    try {
        coherent_state(3.0, 8);
    } catch (const TruncationError& e) {
        EXPECT_GT(e.tail_mass(), 1e-3);
        EXPECT_GT(e.suggested_dim(), 8);
    }
    EXPECT_EQ(default_coherent_dim(0.0), 32);
    EXPECT_EQ(default_coherent_dim(std::sqrt(40.0)), 107);
}

TEST(ThermalState, Distribution)
{
    const DensityMatrix vac = thermal_state(0.0, 8);
    EXPECT_LT(max_abs_diff(vac.matrix(), projector(0, 8)), 1e-15);
    const DensityMatrix th = thermal_state(3.0, 256);
    EXPECT_NEAR(th.matrix()(0, 0).real(), 0.25, 1e-15);
    for (Index n = 0; n < 20; ++n) {
        EXPECT_NEAR(th.matrix()(n + 1, n + 1).real() / th.matrix()(n, n).real(), 0.75, 1e-13);
    }
    EXPECT_NEAR(expectation(number_op(256), th).real(), 3.0, 1e-6);
    EXPECT_THROW(thermal_state(3.0, 10), TruncationError);
    EXPECT_THROW(thermal_state(-1.0, 10), OutOfRange);
}

TEST(Expectation, Identities)
{
    const DensityMatrix rho = random_density_matrix(7, 42);
    EXPECT_NEAR(expectation(identity_op(7), rho).real(), 1.0, 1e-12);
    EXPECT_EQ(expectation(number_op(5), DensityMatrix::from_pure(fock_state(0, 5))), cplx(0.0));
    EXPECT_THROW(expectation(number_op(4), fock_state(0, 5)), DimensionMismatch);
}

TEST(DensityMatrix, InvariantsEnforced)
{
    ComplexMatrix m = projector(0, 3);
    EXPECT_NO_THROW(DensityMatrix{m});
    m(0, 1) = 0.5;
    EXPECT_THROW(DensityMatrix{m}, InvariantViolation);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix{neg}, InvariantViolation);
    EXPECT_THROW(DensityMatrix{ComplexMatrix::Zero(2, 3)}, DimensionMismatch);
}

TEST(RandomDensityMatrix, DeterministicAndValid)
{
    const DensityMatrix a = random_density_matrix(9, 5);
    const DensityMatrix b = random_density_matrix(9, 5);
    EXPECT_EQ(max_abs_diff(a.matrix(), b.matrix()), 0.0);
    EXPECT_GT(max_abs_diff(a.matrix(), random_density_matrix(9, 6).matrix()), 1e-3);
    const DensityDefects d = density_defects(random_density_matrix(9, 5, 2).matrix());
    EXPECT_LT(d.hermiticity, 1e-15);
    EXPECT_LT(d.trace_error, 1e-14);
    EXPECT_GT(d.min_eigenvalue, -1e-14);
}
