#include "opexp/identities.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "opexp/errors.hpp"

namespace opexp {

const char* to_string(PairRelation r)
{
    switch (r) {
    case PairRelation::NilCross:
        return "NilCross";
    case PairRelation::Anticommuting:
        return "Anticommuting";
    }
    return "unknown";
}

StructuredPair::StructuredPair(ComplexMatrix a, ComplexMatrix b, PairRelation relation, double tol)
    : a_(std::move(a)), b_(std::move(b)), relation_(relation)
{
    require_square(a_, "StructuredPair");
    require_same_dim(a_, b_, "StructuredPair");
    const double defect = relation_defect();
    if (!(defect < tol)) {
        std::ostringstream os;
        os << "StructuredPair: pair does not satisfy " << to_string(relation) << " (defect "
           << defect << ")";
        throw ContractViolation(os.str());
    }
}

double StructuredPair::relation_defect() const
{
    const ComplexMatrix ba = b_ * a_;
    if (relation_ == PairRelation::NilCross) {
        return max_abs(ba);
    }
    return max_abs(ba + a_ * b_);
}

namespace {

void require_relation(const StructuredPair& pair, PairRelation wanted, const char* where)
{
    if (pair.relation() != wanted) {
        throw ContractViolation(std::string(where) + ": requires a " + to_string(wanted) +
                                " pair, got " + to_string(pair.relation()));
    }
}

} // namespace

ComplexMatrix power_sum(const StructuredPair& pair, int k)
{
    require_relation(pair, PairRelation::NilCross, "power_sum");
    if (k < 0) {
        throw OutOfRange("power_sum: k must be >= 0");
    }
    const Index n = pair.dim();
    // b_pows[j] = B^j for j = 0..k
    std::vector<ComplexMatrix> b_pows;
    b_pows.reserve(static_cast<std::size_t>(k) + 1);
    b_pows.push_back(ComplexMatrix::Identity(n, n));
    for (int j = 1; j <= k; ++j) {
        b_pows.push_back(b_pows.back() * pair.b());
    }
    ComplexMatrix result = b_pows[static_cast<std::size_t>(k)];
    ComplexMatrix a_pow = ComplexMatrix::Identity(n, n);
    for (int m = 1; m <= k; ++m) {
        a_pow = (a_pow * pair.a()).eval();
        result += a_pow * b_pows[static_cast<std::size_t>(k - m)];
    }
    return result;
}

SplitPowers split_powers(const StructuredPair& pair, double omega, double g, int n)
{
    require_relation(pair, PairRelation::Anticommuting, "split_powers");
    if (n < 0) {
        throw OutOfRange("split_powers: n must be >= 0");
    }
    const ComplexMatrix& a = pair.a();
    const ComplexMatrix& b = pair.b();
    const ComplexMatrix square = omega * omega * (a * a) + g * g * (b * b);
    const ComplexMatrix linear = omega * a + g * b;
    SplitPowers out;
    out.even = matrix_power(square, n);
    out.odd = linear * out.even;
    return out;
}

double sin_sqrt_ratio(double t, double lambda)
{
    const double arg = t * t * lambda;
    if (arg < 1e-8) {
        // t (1 - t^2 l/6 + t^4 l^2/120)
        return t * (1.0 - arg / 6.0 + arg * arg / 120.0);
    }
    const double root = std::sqrt(lambda);
    return std::sin(t * root) / root;
}

ComplexMatrix exp_anticommuting(const StructuredPair& pair, double omega, double g, double t,
                                const ClosedFormOptions& opts)
{
    require_relation(pair, PairRelation::Anticommuting, "exp_anticommuting");
    const ComplexMatrix& a = pair.a();
    const ComplexMatrix& b = pair.b();
    const ComplexMatrix square = omega * omega * (a * a) + g * g * (b * b);
    const double scale = std::max(1.0, max_abs(square));

    const double herm = hermiticity_defect(square);
    if (herm > opts.tol_herm * scale) {
        std::ostringstream os;
        os << "exp_anticommuting: w^2 A^2 + g^2 B^2 is not Hermitian (defect " << herm
           << "); the spectral closed form is not supported for this pair";
        throw UnsupportedInstance(os.str());
    }
    const EigenDecomposition eig = eigh(square, opts.tol_herm);
    const double min_eig = eig.values(0);
    if (min_eig < -opts.tol_pos * scale) {
        std::ostringstream os;
        os << "exp_anticommuting: w^2 A^2 + g^2 B^2 is indefinite (min eigenvalue " << min_eig
           << "); the spectral closed form is not supported for this pair";
        throw UnsupportedInstance(os.str());
    }

    const ComplexMatrix cos_part = apply_spectral(eig, [t](double lambda) {
        return cplx(std::cos(t * std::sqrt(std::max(lambda, 0.0))), 0.0);
    });
    const ComplexMatrix sin_part = apply_spectral(eig, [t](double lambda) {
        return cplx(sin_sqrt_ratio(t, std::max(lambda, 0.0)), 0.0);
    });
    return cos_part - kI * ((omega * a + g * b) * sin_part);
}

namespace {

ComplexMatrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = cplx(re, im);
        }
    }
    return m;
}

} // namespace

StructuredPair random_nilcross_pair(Index dim, std::uint64_t seed)
{
    if (dim < 2) {
        throw InvalidDimension("random_nilcross_pair: dim must be >= 2");
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> rank_dist(1, dim - 1);
    const Index rank = rank_dist(rng);

    // Orthonormal basis from a Householder QR of a Gaussian matrix.
    const ComplexMatrix q = gaussian_matrix(dim, dim, rng).householderQr().householderQ();
    const ComplexMatrix range = q.leftCols(rank);
    const ComplexMatrix kernel = q.rightCols(dim - rank);
    const ComplexMatrix x = gaussian_matrix(dim, dim, rng);
    const ComplexMatrix y = gaussian_matrix(dim, dim, rng);

    // P = range range^dagger, I - P = kernel kernel^dagger
    ComplexMatrix a = range * (range.adjoint() * x);
    ComplexMatrix b = (y * kernel) * kernel.adjoint();
    a /= a.norm();
    b /= b.norm();
    return StructuredPair(std::move(a), std::move(b), PairRelation::NilCross);
}

StructuredPair random_anticommuting_pair(Index dim, std::uint64_t seed, bool hermitian_b)
{
    if (dim < 2) {
        throw InvalidDimension("random_anticommuting_pair: dim must be >= 2");
    }
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> scale_dist(0.5, 1.5);

    std::vector<double> grading(static_cast<std::size_t>(dim));
    for (auto& s : grading) {
        s = coin(rng) ? 1.0 : -1.0;
    }
    // Both eigenspaces must be nonempty, otherwise B would vanish.
    if (std::all_of(grading.begin(), grading.end(), [&](double s) { return s == grading[0]; })) {
        std::uniform_int_distribution<std::size_t> pick(0, grading.size() - 1);
        const std::size_t i = pick(rng);
        grading[i] = -grading[i];
    }
    const double c = (coin(rng) ? 1.0 : -1.0) * scale_dist(rng);

    ComplexMatrix a = ComplexMatrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        a(i, i) = c * grading[static_cast<std::size_t>(i)];
    }
    ComplexMatrix b = gaussian_matrix(dim, dim, rng);
    for (Index i = 0; i < dim; ++i) {
        for (Index j = 0; j < dim; ++j) {
            if (grading[static_cast<std::size_t>(i)] == grading[static_cast<std::size_t>(j)]) {
                b(i, j) = 0.0;
            }
        }
    }
    if (hermitian_b) {
        b = (0.5 * (b + b.adjoint())).eval();
    }
    b /= b.norm();
    return StructuredPair(std::move(a), std::move(b), PairRelation::Anticommuting);
}

} // namespace opexp
