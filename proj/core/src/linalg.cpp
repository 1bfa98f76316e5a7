#include "opexp/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <thread>
#include <vector>

#include "opexp/errors.hpp"

namespace opexp {

double max_abs(const ComplexMatrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    require_same_dim(a, b, "max_abs_diff");
    return max_abs(a - b);
}

double hermiticity_defect(const ComplexMatrix& m)
{
    require_square(m, "hermiticity_defect");
    return max_abs(m - m.adjoint());
}

void require_square(const ComplexMatrix& m, const char* where)
{
    if (m.rows() != m.cols()) {
        throw DimensionMismatch(where, m.rows(), m.cols());
    }
    if (m.rows() < 1) {
        throw InvalidDimension(std::string(where) + ": empty matrix");
    }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* where)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(where, a.rows(), b.rows());
    }
}

EigenDecomposition eigh(const ComplexMatrix& h, double tol_herm)
{
    require_square(h, "eigh");
    const double scale = std::max(1.0, max_abs(h));
    const double defect = hermiticity_defect(h);
    if (!(defect <= tol_herm * scale)) {
        throw ContractViolation("eigh: input is not Hermitian (defect " + std::to_string(defect) +
                                ")");
    }
    // Symmetrize so the solver sees an exactly Hermitian matrix.
    const ComplexMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalGuard("eigh: eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix apply_spectral(const EigenDecomposition& eig, const std::function<cplx(double)>& f)
{
    const Index n = eig.values.size();
    ComplexVector diag(n);
    for (Index i = 0; i < n; ++i) {
        diag(i) = f(eig.values(i));
    }
    return eig.vectors * diag.asDiagonal() * eig.vectors.adjoint();
}

namespace {

// Pade numerator/denominator halves: exp(A) ~ (V - U)^{-1} (V + U).
void pade3(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v)
{
    constexpr std::array<double, 4> b{120.0, 60.0, 12.0, 1.0};
    const Index n = a.rows();
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    u = a * (b[3] * a2 + b[1] * id);
    v = b[2] * a2 + b[0] * id;
}

void pade5(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v)
{
    constexpr std::array<double, 6> b{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    const Index n = a.rows();
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade7(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v)
{
    constexpr std::array<double, 8> b{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                      25200.0,    1512.0,    56.0,      1.0};
    const Index n = a.rows();
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade9(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v)
{
    constexpr std::array<double, 10> b{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                       30270240.0,    2162160.0,    110880.0,     3960.0,
                                       90.0,          1.0};
    const Index n = a.rows();
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix a8 = a6 * a2;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade13(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v)
{
    constexpr std::array<double, 14> b{
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    const Index n = a.rows();
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    ComplexMatrix inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    inner += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
    u = a * inner;
    v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
    v += b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

// 1-norm bounds below which each Pade degree meets unit roundoff (Higham 2005).
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

double one_norm(const ComplexMatrix& m)
{
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

} // namespace

ComplexMatrix expm(const ComplexMatrix& m)
{
    require_square(m, "expm");
    if (!m.allFinite()) {
        throw ContractViolation("expm: input has non-finite entries");
    }
    const double norm = one_norm(m);
    ComplexMatrix u;
    ComplexMatrix v;
    int squarings = 0;
    if (norm <= kTheta3) {
        pade3(m, u, v);
    } else if (norm <= kTheta5) {
        pade5(m, u, v);
    } else if (norm <= kTheta7) {
        pade7(m, u, v);
    } else if (norm <= kTheta9) {
        pade9(m, u, v);
    } else {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
        const ComplexMatrix scaled = m / std::ldexp(1.0, squarings);
        pade13(scaled, u, v);
    }
    ComplexMatrix result = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) {
        result = (result * result).eval();
    }
    return result;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, int k)
{
    require_square(m, "matrix_power");
    if (k < 0) {
        throw OutOfRange("matrix_power: negative exponent");
    }
    ComplexMatrix result = ComplexMatrix::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) {
        result = (result * m).eval();
    }
    return result;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body)
{
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += workers) {
                        body(i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

} // namespace opexp
