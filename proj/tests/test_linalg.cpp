#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "opexp/errors.hpp"
#include "opexp/fock.hpp"
#include "opexp/linalg.hpp"

using namespace opexp;

namespace {

ComplexMatrix random_matrix(Index n, unsigned seed, double scale)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    ComplexMatrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            m(i, j) = scale * cplx(nd(rng), nd(rng));
        }
    }
    return m;
}

ComplexMatrix random_hermitian(Index n, unsigned seed)
{
    const ComplexMatrix g = random_matrix(n, seed, 1.0);
    return 0.5 * (g + g.adjoint());
}

} // namespace

TEST(Expm, ZeroIsIdentity)
{
    EXPECT_EQ(max_abs_diff(expm(ComplexMatrix::Zero(5, 5)), ComplexMatrix::Identity(5, 5)), 0.0);
}

TEST(Expm, Diagonal)
{
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    const ComplexMatrix e = expm(d);
    EXPECT_NEAR(e(0, 0).real(), std::exp(1.0), 1e-15);
    EXPECT_NEAR(e(1, 1).real(), std::exp(2.0), 1e-14);
    EXPECT_EQ(std::abs(e(0, 1)), 0.0);
}

TEST(Expm, MinusIPiParityIsMinusIdentity)
{
    const ComplexMatrix e = expm(-kI * std::numbers::pi * parity_op(4));
    EXPECT_LT(max_abs_diff(e, -ComplexMatrix::Identity(4, 4)), 1e-14);
}

TEST(Expm, MatchesEigenUnsupportedAcrossNormScales)
{
    // Norms straddle every Pade order and the squaring branch.
    for (double scale : {1e-4, 0.01, 0.1, 0.5, 1.0, 3.0, 20.0}) {
        const ComplexMatrix m = random_matrix(6, 7, scale);
        const ComplexMatrix ours = expm(m);
        const ComplexMatrix ref = m.exp();
        EXPECT_LT(max_abs_diff(ours, ref), 1e-12 * std::max(1.0, max_abs(ref))) << "scale " << scale;
    }
}

TEST(Expm, AntiHermitianGivesUnitary)
{
    for (unsigned seed = 1; seed <= 10; ++seed) {
        const ComplexMatrix u = expm(-kI * 3.0 * random_hermitian(12, seed));
        EXPECT_LT(max_abs_diff(u.adjoint() * u, ComplexMatrix::Identity(12, 12)), 1e-10);
    }
}

TEST(Expm, RejectsNonFiniteAndNonSquare)
{
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(1, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(expm(m), ContractViolation);
    EXPECT_THROW(expm(ComplexMatrix::Zero(2, 3)), DimensionMismatch);
}

TEST(Eigh, Reconstruction)
{
    for (unsigned seed = 1; seed <= 10; ++seed) {
        const ComplexMatrix h = random_hermitian(16, seed);
        const EigenDecomposition eig = eigh(h);
        const ComplexMatrix rebuilt =
            eig.vectors * eig.values.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
        EXPECT_LT(max_abs_diff(h, rebuilt), 1e-10);
        for (Index i = 1; i < eig.values.size(); ++i) {
            EXPECT_LE(eig.values(i - 1), eig.values(i));
        }
    }
}

TEST(Eigh, RejectsNonHermitian)
{
    ComplexMatrix m = random_hermitian(4, 3);
    m(0, 1) += 1e-6;
    EXPECT_THROW(eigh(m), ContractViolation);
}

TEST(ApplySpectral, ExponentialMatchesExpm)
{
    const ComplexMatrix h = random_hermitian(10, 5);
    const ComplexMatrix via_eig =
        apply_spectral(eigh(h), [](double l) { return std::exp(cplx(0.0, -0.7 * l)); });
    EXPECT_LT(max_abs_diff(via_eig, expm(-kI * 0.7 * h)), 1e-12);
}

TEST(MatrixPower, SmallCases)
{
    const ComplexMatrix m = random_matrix(5, 11, 0.5);
    EXPECT_EQ(max_abs_diff(matrix_power(m, 0), ComplexMatrix::Identity(5, 5)), 0.0);
    EXPECT_EQ(max_abs_diff(matrix_power(m, 1), m), 0.0);
    EXPECT_LT(max_abs_diff(matrix_power(m, 7), m * m * m * m * m * m * m), 1e-12);
    EXPECT_THROW(matrix_power(m, -1), OutOfRange);
}

TEST(Helpers, HermiticityDefectAndDims)
{
    ComplexMatrix m = ComplexMatrix::Identity(3, 3);
    EXPECT_EQ(hermiticity_defect(m), 0.0);
    m(0, 2) = cplx(0.0, 0.25);
    EXPECT_DOUBLE_EQ(hermiticity_defect(m), 0.25);
    EXPECT_THROW(require_same_dim(m, ComplexMatrix::Zero(4, 4), "t"), DimensionMismatch);
}

TEST(ParallelFor, VisitsEveryIndexOnce)
{
    for (unsigned threads : {1u, 2u, 5u, 64u}) {
        std::vector<std::atomic<int>> hits(37);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
        for (const auto& h : hits) {
            EXPECT_EQ(h.load(), 1);
        }
    }
}

TEST(ParallelFor, PropagatesExceptions)
{
    EXPECT_THROW(parallel_for(10, 3,
                              [](std::size_t i) {
                                  if (i == 7) {
                                      throw RangeError("boom");
                                  }
                              }),
                 RangeError);
}
