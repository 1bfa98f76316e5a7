#include "opexp/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opexp/errors.hpp"
#include "opexp/special.hpp"

namespace opexp {

void LindbladConfig::validate() const
{
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw InvalidArgument("LindbladConfig: gamma must be finite and > 0");
    }
    if (dim < 2) {
        throw InvalidDimension("LindbladConfig: dim must be >= 2");
    }
    if (!(tol_series > 0.0 && tol_series < 1e-3)) {
        throw InvalidArgument("LindbladConfig: tol_series must lie in (0, 1e-3)");
    }
    if (max_terms < 1) {
        throw InvalidArgument("LindbladConfig: max_terms must be >= 1");
    }
}

void TimeSeries::validate() const
{
    if (times.size() != values.size()) {
        throw InvalidArgument("TimeSeries '" + label + "': times and values differ in length");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw InvalidArgument("TimeSeries '" + label + "': times not strictly ascending");
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw InvalidArgument("TimeSeries '" + label + "': non-finite value");
        }
    }
}

ComplexMatrix apply_J(const ComplexMatrix& rho, double gamma)
{
    require_square(rho, "apply_J");
    const Index n = rho.rows();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    // (V rho V^dagger)_{ij} = rho_{i+1, j+1}
    out.topLeftCorner(n - 1, n - 1) = (2.0 * gamma) * rho.bottomRightCorner(n - 1, n - 1);
    return out;
}

ComplexMatrix apply_J(const ComplexMatrix& rho, double gamma, const ComplexMatrix& lowering)
{
    require_square(rho, "apply_J");
    require_same_dim(rho, lowering, "apply_J");
    return (2.0 * gamma) * (lowering * rho * lowering.adjoint());
}

ComplexMatrix apply_L(const ComplexMatrix& rho, double gamma)
{
    require_square(rho, "apply_L");
    const Index n = rho.rows();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    out.col(0) += gamma * rho.col(0);
    out.row(0) += gamma * rho.row(0);
    return out;
}

ComplexMatrix apply_L_power(const ComplexMatrix& rho, double gamma, int m)
{
    require_square(rho, "apply_L_power");
    if (m < 1) {
        throw OutOfRange("apply_L_power: closed form holds for m >= 1");
    }
    const Index n = rho.rows();
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    out.row(0) += rho.row(0);
    out.col(0) += rho.col(0);
    out(0, 0) += (std::ldexp(1.0, m) - 2.0) * rho(0, 0);
    return std::pow(gamma, m) * out;
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, double gamma)
{
    require_square(rho, "lindblad_rhs");
    const Index n = rho.rows();
    ComplexMatrix out = (-2.0 * gamma) * rho;
    out.topLeftCorner(n - 1, n - 1) += (2.0 * gamma) * rho.bottomRightCorner(n - 1, n - 1);
    out.col(0) += gamma * rho.col(0);
    out.row(0) += gamma * rho.row(0);
    return out;
}

ComplexMatrix lindblad_rhs_standard(const ComplexMatrix& rho, double gamma,
                                    const ComplexMatrix& lowering)
{
    require_square(rho, "lindblad_rhs_standard");
    require_same_dim(rho, lowering, "lindblad_rhs_standard");
    const ComplexMatrix vdv = lowering.adjoint() * lowering;
    return (2.0 * gamma) * (lowering * rho * lowering.adjoint()) - gamma * (rho * vdv) -
           gamma * (vdv * rho);
}

std::vector<DensityMatrix> integrate_rk4(const DensityMatrix& rho0, const LindbladConfig& cfg,
                                         std::span<const double> t_grid, double dt)
{
    cfg.validate();
    if (rho0.dim() != cfg.dim) {
        throw DimensionMismatch("integrate_rk4", rho0.dim(), cfg.dim);
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw InvalidArgument("integrate_rk4: dt must be finite and > 0");
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] >= 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
            throw InvalidArgument("integrate_rk4: t_grid must be nonnegative and strictly ascending");
        }
    }

    const double gamma = cfg.gamma;
    ComplexMatrix rho = rho0.matrix();
    ComplexMatrix k1;
    ComplexMatrix k2;
    ComplexMatrix k3;
    ComplexMatrix k4;
    double t = 0.0;
    long long steps = 0;
    std::vector<DensityMatrix> out;
    out.reserve(t_grid.size());

    for (double target : t_grid) {
        const double span = target - t;
        if (span > 0.0) {
            const auto n = static_cast<long long>(std::ceil(span / dt - 1e-9));
            const double h = span / static_cast<double>(std::max(1LL, n));
            for (long long s = 0; s < std::max(1LL, n); ++s) {
                k1 = lindblad_rhs(rho, gamma);
                k2 = lindblad_rhs(rho + (0.5 * h) * k1, gamma);
                k3 = lindblad_rhs(rho + (0.5 * h) * k2, gamma);
                k4 = lindblad_rhs(rho + h * k3, gamma);
                rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            steps += std::max(1LL, n);
            t = target;
        }
        if (!rho.allFinite()) {
            throw IntegrationError("integrate_rk4: state became non-finite; reduce dt");
        }
        const double growth = 1e-13 * static_cast<double>(steps);
        Tolerances tol;
        tol.herm = std::min(1e-6, tol.herm + growth);
        tol.trace = std::min(1e-6, tol.trace + growth);
        tol.pos = std::min(1e-6, tol.pos + growth);
        try {
            out.emplace_back(rho, tol);
        } catch (const InvariantViolation& e) {
            std::ostringstream os;
            os << "integrate_rk4: invariant breach at t = " << target << " (" << e.what()
               << "); use a smaller dt or a larger dim";
            throw IntegrationError(os.str());
        }
    }
    return out;
}

ComplexMatrix evolve_exp_J(const ComplexMatrix& rho0, double t, const LindbladConfig& cfg)
{
    cfg.validate();
    require_square(rho0, "evolve_exp_J");
    if (rho0.rows() != cfg.dim) {
        throw DimensionMismatch("evolve_exp_J", rho0.rows(), cfg.dim);
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidArgument("evolve_exp_J: t must be finite and >= 0");
    }
    const Index n = rho0.rows();
    const double rate = 2.0 * cfg.gamma * t;
    ComplexMatrix sum = rho0;
    double scalar = 1.0;
    for (Index k = 1; k < n; ++k) {
        if (k > cfg.max_terms) {
            throw SeriesError("evolve_exp_J: no convergence within max_terms");
        }
        scalar *= rate / static_cast<double>(k);
        const auto block = rho0.bottomRightCorner(n - k, n - k);
        const double term_norm = scalar * block.cwiseAbs().maxCoeff();
        sum.topLeftCorner(n - k, n - k) += scalar * block;
        // Scalars decrease once k exceeds the rate and sub-blocks never grow,
        // so a small term past that point bounds every later one.
        if (static_cast<double>(k) >= rate &&
            (term_norm <= cfg.tol_series || term_norm <= cfg.tol_series * max_abs(sum))) {
            break;
        }
    }
    return sum;
}

CorrectionCoefficients correction_coefficients(double gamma_t, Index count,
                                               const LindbladConfig& cfg)
{
    if (!(gamma_t >= 0.0) || !std::isfinite(gamma_t)) {
        throw InvalidArgument("correction_coefficients: gamma*t must be finite and >= 0");
    }
    const double x = gamma_t;
    // p[k] = x^k/k!, q[k] = (2x)^k/k!, extended until the tail is negligible.
    std::vector<double> p{1.0};
    std::vector<double> q{1.0};
    double q_total = 1.0;
    const auto limit = static_cast<std::size_t>(count) + static_cast<std::size_t>(cfg.max_terms);
    for (std::size_t k = 1;; ++k) {
        if (k > limit) {
            throw SeriesError("correction_coefficients: no convergence within max_terms");
        }
        const double kd = static_cast<double>(k);
        p.push_back(p.back() * x / kd);
        q.push_back(q.back() * 2.0 * x / kd);
        q_total += q.back();
        const bool past_needed = k >= static_cast<std::size_t>(count) + 2;
        if (past_needed && kd > 2.0 * x && q.back() <= 1e-18 * q_total) {
            break;
        }
    }
    const std::size_t top = p.size();
    // Backward tails T[n] = sum_{k > n} p[k].
    std::vector<double> tail_p(top, 0.0);
    std::vector<double> tail_q(top, 0.0);
    for (std::size_t n = top - 1; n-- > 0;) {
        tail_p[n] = tail_p[n + 1] + p[n + 1];
        tail_q[n] = tail_q[n + 1] + q[n + 1];
    }
    CorrectionCoefficients c;
    c.sandwich.resize(static_cast<std::size_t>(count));
    c.one_sided.resize(static_cast<std::size_t>(count));
    for (std::size_t n = 0; n < static_cast<std::size_t>(count); ++n) {
        const int e = static_cast<int>(n);
        // sum_{k >= n+2} (2^k - 2^{n+1}) x^k / k!; the k = n+1 term vanishes.
        c.sandwich[n] = std::max(0.0, tail_q[n + 1] - std::ldexp(tail_p[n + 1], e + 1));
        c.one_sided[n] = std::ldexp(tail_p[n], e);
    }
    return c;
}

DensityMatrix evolve_analytic(const DensityMatrix& rho0, double t, const LindbladConfig& cfg)
{
    cfg.validate();
    if (rho0.dim() != cfg.dim) {
        throw DimensionMismatch("evolve_analytic", rho0.dim(), cfg.dim);
    }
    const ComplexMatrix& r0 = rho0.matrix();
    const Index n = r0.rows();
    ComplexMatrix out = evolve_exp_J(r0, t, cfg);
    const CorrectionCoefficients c = correction_coefficients(cfg.gamma * t, n, cfg);

    for (Index k = 0; k < n; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        // |0><0| V^k rho0 V^{dagger k} |0><0| = rho0_{kk} |0><0|
        out(0, 0) += c.sandwich[kk] * r0(k, k);
        if (c.one_sided[kk] == 0.0) {
            continue;
        }
        // |0><0| V^k rho0 V^{dagger k}: row 0 receives rho0_{k, j+k}
        out.row(0).head(n - k) += c.one_sided[kk] * r0.row(k).tail(n - k);
        // V^k rho0 V^{dagger k} |0><0|: column 0 receives rho0_{i+k, k}
        out.col(0).head(n - k) += c.one_sided[kk] * r0.col(k).tail(n - k);
    }
    out *= std::exp(-2.0 * cfg.gamma * t);
    return DensityMatrix(std::move(out));
}

namespace {

// Smallest n >= rate with rate^n/n! * (1 + rate^2) below tol; bounds every
// family of the coherent-state series.
Index coherent_series_length(double rate, const LindbladConfig& cfg)
{
    const double weight = 1.0 + rate * rate;
    double term = weight;
    for (Index n = 0;; ++n) {
        if (n > cfg.max_terms) {
            throw SeriesError("coherent_rho_analytic: no convergence within max_terms");
        }
        if (static_cast<double>(n) >= rate && term < cfg.tol_series) {
            return n;
        }
        term *= rate / static_cast<double>(n + 1);
    }
}

} // namespace

DensityMatrix coherent_rho_analytic(cplx alpha, double t, const LindbladConfig& cfg)
{
    cfg.validate();
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidArgument("coherent_rho_analytic: t must be finite and >= 0");
    }
    const Index dim = cfg.dim;
    const double tail = coherent_tail_mass(alpha, dim);
    if (tail > Tolerances{}.trunc) {
        throw TruncationError("coherent_rho_analytic: dimension too small", tail,
                              default_coherent_dim(alpha));
    }
    const double mod2 = std::norm(alpha);
    if (mod2 == 0.0) {
        return DensityMatrix(projector(0, dim));
    }
    const double log_mod = 0.5 * std::log(mod2);
    const double phase = std::arg(alpha);
    const double rate = 2.0 * cfg.gamma * t;
    const Index terms = coherent_series_length(rate, cfg);

    // lg[k] = lgamma(k + 1)
    std::vector<double> lg(static_cast<std::size_t>(dim + terms + 1));
    for (std::size_t k = 0; k < lg.size(); ++k) {
        lg[k] = std::lgamma(static_cast<double>(k) + 1.0);
    }
    ComplexVector phases(dim);
    for (Index j = 0; j < dim; ++j) {
        phases(j) = std::polar(1.0, phase * static_cast<double>(j));
    }

    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);

    // e^{-|a|^2} (2gt|a|^2)^n/n! sum_{j,j'} a^{j'} a*^{j} / sqrt((j+n)!(j'+n)!) |j'><j|
    ComplexVector u(dim);
    for (Index n = 0; n < terms; ++n) {
        if (rate == 0.0 && n > 0) {
            break;
        }
        const auto nn = static_cast<std::size_t>(n);
        const double nd = static_cast<double>(n);
        const double log_rate_term = (n == 0) ? 0.0 : nd * std::log(rate * mod2);
        const double half = 0.5 * (-mod2 + log_rate_term - lg[nn]);
        for (Index j = 0; j < dim; ++j) {
            const double log_mag =
                half + static_cast<double>(j) * log_mod - 0.5 * lg[nn + static_cast<std::size_t>(j)];
            u(j) = std::exp(log_mag) * phases(j);
        }
        out += u * u.adjoint();
    }

    const CorrectionCoefficients c = correction_coefficients(cfg.gamma * t, terms, cfg);
    for (Index n = 0; n < terms; ++n) {
        const auto nn = static_cast<std::size_t>(n);
        const double nd = static_cast<double>(n);
        // |0><0| e^{-|a|^2} sum_n sandwich[n] |a|^{2n}/n!
        if (c.sandwich[nn] > 0.0) {
            out(0, 0) += std::exp(std::log(c.sandwich[nn]) - mod2 + 2.0 * nd * log_mod - lg[nn]);
        }
        if (c.one_sided[nn] <= 0.0) {
            continue;
        }
        // e^{-|a|^2} one_sided[n] |a|^{2n}/sqrt(n!) sum_j a*^j/sqrt((j+n)!) |0><j|, plus adjoint
        const double base = std::log(c.one_sided[nn]) - mod2 + 2.0 * nd * log_mod - 0.5 * lg[nn];
        for (Index j = 0; j < dim; ++j) {
            const double log_mag = base + static_cast<double>(j) * log_mod -
                                   0.5 * lg[nn + static_cast<std::size_t>(j)];
            const cplx bra = std::exp(log_mag) * std::conj(phases(j));
            out(0, j) += bra;
            out(j, 0) += std::conj(bra);
        }
    }
    out *= std::exp(-rate);
    return DensityMatrix(std::move(out));
}

double mean_photon_trace(const DensityMatrix& rho0, double t, const LindbladConfig& cfg)
{
    const ComplexMatrix evolved = evolve_exp_J(rho0.matrix(), t, cfg);
    double sum = 0.0;
    for (Index i = 1; i < evolved.rows(); ++i) {
        sum += static_cast<double>(i) * evolved(i, i).real();
    }
    return std::exp(-2.0 * cfg.gamma * t) * sum;
}

double mean_photon_coherent_bessel(cplx alpha, double gamma, double t, int k_max)
{
    if (!(gamma > 0.0) || !(t >= 0.0) || !std::isfinite(t)) {
        throw InvalidArgument("mean_photon_coherent_bessel: need gamma > 0 and finite t >= 0");
    }
    const double mod2 = std::norm(alpha);
    if (mod2 == 0.0) {
        return 0.0;
    }
    if (t == 0.0) {
        return mod2;
    }
    const double rate = 2.0 * gamma * t;
    const double arg = std::sqrt(8.0 * gamma * t * mod2);
    const double log_ratio = 0.5 * std::log(mod2 / rate);
    const double log_prefactor = -rate - mod2;
    double sum = 0.0;
    double previous = 0.0;
    for (int k = 1; k <= k_max; ++k) {
        const double kd = static_cast<double>(k);
        const double term =
            std::exp(log_prefactor + std::log(kd) + kd * log_ratio + log_bessel_i(k, arg));
        sum += term;
        if (kd > mod2 && term <= previous && term <= 1e-14 * sum) {
            return sum;
        }
        previous = term;
    }
    throw SeriesError("mean_photon_coherent_bessel: no convergence within k_max = " +
                      std::to_string(k_max));
}

double mean_photon_thermal(double nbar0, double gamma, double t)
{
    if (!(nbar0 >= 0.0) || !(gamma > 0.0) || !(t >= 0.0)) {
        throw InvalidArgument("mean_photon_thermal: need nbar0 >= 0, gamma > 0, t >= 0");
    }
    return nbar0 * std::exp(-2.0 * gamma * t / (nbar0 + 1.0));
}

} // namespace opexp
