// identities.hpp: closed forms for powers and exponentials of A + B when the
// pair obeys [A,B] = AB (equivalently BA = 0) or [A,B] = 2AB (BA = -AB).

#pragma once

#include <cstdint>

#include "opexp/linalg.hpp"

namespace opexp {

enum class PairRelation {
    NilCross,       // B A = 0
    Anticommuting,  // B A = -A B
};

const char* to_string(PairRelation r);

// An operator pair tagged with the relation it satisfies. The relation is
// checked on construction: |BA|_max (or |BA + AB|_max) must stay below tol.
class StructuredPair {
public:
    static constexpr double kRelationTol = 1e-12;

    StructuredPair(ComplexMatrix a, ComplexMatrix b, PairRelation relation,
                   double tol = kRelationTol);

    const ComplexMatrix& a() const noexcept { return a_; }
    const ComplexMatrix& b() const noexcept { return b_; }
    PairRelation relation() const noexcept { return relation_; }
    Index dim() const noexcept { return a_.rows(); }

    // |BA|_max for NilCross, |BA + AB|_max for Anticommuting.
    double relation_defect() const;

private:
    ComplexMatrix a_;
    ComplexMatrix b_;
    PairRelation relation_;
};

// (A + B)^k = B^k + sum_{m=1..k} A^m B^{k-m}. Requires a NilCross pair.
ComplexMatrix power_sum(const StructuredPair& pair, int k);

struct SplitPowers {
    ComplexMatrix even;  // (w A + g B)^{2n}
    ComplexMatrix odd;   // (w A + g B)^{2n+1}
};

// even = (w^2 A^2 + g^2 B^2)^n, odd = (w A + g B)(w^2 A^2 + g^2 B^2)^n.
// Requires an Anticommuting pair.
SplitPowers split_powers(const StructuredPair& pair, double omega, double g, int n);

// sin(t sqrt(lambda)) / sqrt(lambda) for lambda >= 0, with the limit t at 0.
double sin_sqrt_ratio(double t, double lambda);

struct ClosedFormOptions {
    double tol_herm = Tolerances{}.herm;
    double tol_pos = Tolerances{}.pos;
};

// exp(-i t (w A + g B)) = cos(t sqrt(M)) - i (w A + g B) sin(t sqrt(M))/sqrt(M),
// M = w^2 A^2 + g^2 B^2, evaluated spectrally. M must be Hermitian and positive
// semidefinite (tolerances relative to max(1, |M|_max)); otherwise
// UnsupportedInstance is thrown.
ComplexMatrix exp_anticommuting(const StructuredPair& pair, double omega, double g, double t,
                                const ClosedFormOptions& opts = {});

// A = P X, B = Y (I - P) with P a random rank-r orthogonal projector,
// r in [1, dim-1], X and Y complex Gaussian. Both are scaled to unit Frobenius norm.
StructuredPair random_nilcross_pair(Index dim, std::uint64_t seed);

// A = c Pi with Pi a random +-1 grading containing both signs, B supported on
// the grading-off-diagonal blocks (unit Frobenius norm). With hermitian_b the
// off-diagonal blocks are adjoints of each other, which makes the closed-form
// exponential applicable.
StructuredPair random_anticommuting_pair(Index dim, std::uint64_t seed, bool hermitian_b = false);

} // namespace opexp
