#include "opexp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "opexp/errors.hpp"
#include "opexp/identities.hpp"

namespace opexp {

PositionGrid::PositionGrid(double half_width, Index points)
    : half_width_(half_width), points_(points), spacing_(0.0)
{
    if (!(half_width > 0.0) || !std::isfinite(half_width)) {
        throw InvalidArgument("PositionGrid: half_width must be finite and > 0");
    }
    if (points < 3 || points % 2 == 0) {
        throw InvalidArgument("PositionGrid: points must be odd and >= 3, got " +
                              std::to_string(points));
    }
    spacing_ = 2.0 * half_width / static_cast<double>(points - 1);
}

double PositionGrid::x(Index j) const
{
    const auto numerator = static_cast<double>(2 * j - (points_ - 1));
    return half_width_ * numerator / static_cast<double>(points_ - 1);
}

std::vector<double> PositionGrid::nodes() const
{
    std::vector<double> xs(static_cast<std::size_t>(points_));
    for (Index j = 0; j < points_; ++j) {
        xs[static_cast<std::size_t>(j)] = x(j);
    }
    return xs;
}

bool PositionGrid::symmetric() const
{
    for (Index j = 0; j < points_; ++j) {
        if (x(mirror(j)) != -x(j)) {
            return false;
        }
    }
    return true;
}

void LatticeConfig::validate() const
{
    if (!std::isfinite(omega)) {
        throw InvalidArgument("LatticeConfig: omega must be finite");
    }
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw InvalidArgument("LatticeConfig: g must be finite and >= 0");
    }
    if (dim < 8) {
        throw InvalidDimension("LatticeConfig: dim must be >= 8");
    }
    if (!grid.symmetric()) {
        throw ContractViolation("LatticeConfig: position grid is not symmetric about 0");
    }
}

ComplexMatrix lattice_hamiltonian(const LatticeConfig& cfg)
{
    cfg.validate();
    return cfg.omega * parity_op(cfg.dim) + cfg.g * position_op(cfg.dim);
}

namespace {

void require_order(int n, const char* where)
{
    if (n < 0 || n > kHermiteGaussMaxOrder) {
        throw OutOfRange(std::string(where) + ": order " + std::to_string(n) + " outside [0, " +
                         std::to_string(kHermiteGaussMaxOrder) + "]");
    }
}

const double kPiQuarter = std::pow(std::numbers::pi, -0.25);

} // namespace

std::vector<double> hermite_gauss_all(int n_max, double x)
{
    require_order(n_max, "hermite_gauss_all");
    std::vector<double> phi(static_cast<std::size_t>(n_max) + 1);
    phi[0] = kPiQuarter * std::exp(-0.5 * x * x);
    if (n_max >= 1) {
        phi[1] = std::numbers::sqrt2 * x * phi[0];
    }
    for (int n = 1; n < n_max; ++n) {
        const double nd = static_cast<double>(n);
        phi[static_cast<std::size_t>(n) + 1] =
            std::sqrt(2.0 / (nd + 1.0)) * x * phi[static_cast<std::size_t>(n)] -
            std::sqrt(nd / (nd + 1.0)) * phi[static_cast<std::size_t>(n) - 1];
    }
    return phi;
}

double hermite_gauss(int n, double x)
{
    require_order(n, "hermite_gauss");
    return hermite_gauss_all(n, x).back();
}

RealMatrix hermite_gauss_table(int n_max, const PositionGrid& grid)
{
    require_order(n_max, "hermite_gauss_table");
    RealMatrix table(n_max + 1, grid.points());
    for (Index j = 0; j < grid.points(); ++j) {
        const std::vector<double> phi = hermite_gauss_all(n_max, grid.x(j));
        for (int n = 0; n <= n_max; ++n) {
            table(n, j) = phi[static_cast<std::size_t>(n)];
        }
    }
    return table;
}

namespace {

template <typename T>
T simpson_impl(std::span<const T> f, double h)
{
    const std::size_t n = f.size();
    if (n < 3 || n % 2 == 0) {
        throw InvalidArgument("simpson: need an odd number (>= 3) of samples");
    }
    T odd{};
    T even{};
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i % 2 == 1) {
            odd += f[i];
        } else {
            even += f[i];
        }
    }
    return (h / 3.0) * (f.front() + f.back() + 4.0 * odd + 2.0 * even);
}

} // namespace

double simpson(std::span<const double> f, double h)
{
    return simpson_impl<double>(f, h);
}

cplx simpson(std::span<const cplx> f, double h)
{
    return simpson_impl<cplx>(f, h);
}

WaveFunction::WaveFunction(PositionGrid grid, ComplexVector samples)
    : grid_(std::move(grid)), samples_(std::move(samples))
{
    if (samples_.size() != grid_.points()) {
        throw DimensionMismatch("WaveFunction", samples_.size(), grid_.points());
    }
}

RealVector WaveFunction::intensity() const
{
    return samples_.cwiseAbs2();
}

double WaveFunction::norm_squared() const
{
    const RealVector rho = intensity();
    return simpson(std::span<const double>(rho.data(), static_cast<std::size_t>(rho.size())),
                   grid_.spacing());
}

namespace {

Index coherent_modes(cplx alpha)
{
    const Index dim = default_coherent_dim(alpha);
    if (dim > kHermiteGaussMaxOrder + 1) {
        throw TruncationError("Coherent initial field needs more Hermite-Gauss modes than supported",
                              coherent_tail_mass(alpha, kHermiteGaussMaxOrder + 1), dim);
    }
    return dim;
}

void check_extent(const ComplexVector& samples)
{
    const double peak = samples.cwiseAbs().maxCoeff();
    const double edge = std::max(std::abs(samples(0)), std::abs(samples(samples.size() - 1)));
    if (edge > kExtentTolerance * peak) {
        std::ostringstream os;
        os << "initial_wavefunction: field not contained in the grid (edge/peak = " << edge / peak
           << "); increase half_width";
        throw ResolutionError(os.str());
    }
}

} // namespace

WaveFunction initial_wavefunction(const InitialKind& kind, const PositionGrid& grid)
{
    ComplexVector samples(grid.points());
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, initial::Gaussian>) {
                for (Index j = 0; j < grid.points(); ++j) {
                    const double x = grid.x(j);
                    samples(j) = kPiQuarter * std::exp(-0.5 * x * x);
                }
            } else if constexpr (std::is_same_v<K, initial::HermiteGauss>) {
                require_order(k.n, "initial_wavefunction");
                for (Index j = 0; j < grid.points(); ++j) {
                    samples(j) = hermite_gauss(k.n, grid.x(j));
                }
            } else if constexpr (std::is_same_v<K, initial::Superposition>) {
                require_order(k.j, "initial_wavefunction");
                require_order(k.k, "initial_wavefunction");
                if (k.j == k.k) {
                    throw InvalidArgument("initial_wavefunction: superposition orders must differ");
                }
                const int top = std::max(k.j, k.k);
                for (Index j = 0; j < grid.points(); ++j) {
                    const std::vector<double> phi = hermite_gauss_all(top, grid.x(j));
                    samples(j) = (phi[static_cast<std::size_t>(k.j)] +
                                  phi[static_cast<std::size_t>(k.k)]) /
                                 std::numbers::sqrt2;
                }
            } else {
                const Index modes = coherent_modes(k.alpha);
                const StateVector c = coherent_state(k.alpha, modes);
                for (Index j = 0; j < grid.points(); ++j) {
                    const std::vector<double> phi =
                        hermite_gauss_all(static_cast<int>(modes - 1), grid.x(j));
                    cplx sum = 0.0;
                    for (Index n = 0; n < modes; ++n) {
                        sum += c[n] * phi[static_cast<std::size_t>(n)];
                    }
                    samples(j) = sum;
                }
            }
        },
        kind);
    check_extent(samples);
    return WaveFunction(grid, std::move(samples));
}

StateVector initial_coefficients(const InitialKind& kind, Index dim)
{
    return std::visit(
        [&](const auto& k) -> StateVector {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, initial::Gaussian>) {
                return fock_state(0, dim);
            } else if constexpr (std::is_same_v<K, initial::HermiteGauss>) {
                return fock_state(k.n, dim);
            } else if constexpr (std::is_same_v<K, initial::Superposition>) {
                if (k.j == k.k) {
                    throw InvalidArgument("initial_coefficients: superposition orders must differ");
                }
                ComplexVector v = (fock_state(k.j, dim).amplitudes() +
                                   fock_state(k.k, dim).amplitudes()) /
                                  std::numbers::sqrt2;
                return StateVector(std::move(v));
            } else {
                return coherent_state(k.alpha, dim);
            }
        },
        kind);
}

WaveFunction psi_evolved(const WaveFunction& psi0, const LatticeConfig& cfg, double z)
{
    cfg.validate();
    const PositionGrid& grid = psi0.grid();
    if (!grid.symmetric()) {
        throw ContractViolation("psi_evolved: grid must be symmetric about 0");
    }
    const ComplexVector& in = psi0.samples();
    ComplexVector out(grid.points());
    const double w = cfg.omega;
    const double g = cfg.g;
    for (Index j = 0; j < grid.points(); ++j) {
        const double x = grid.x(j);
        const double freq_sq = w * w + g * g * x * x;
        const double c = std::cos(z * std::sqrt(freq_sq));
        const double s = sin_sqrt_ratio(z, freq_sq);
        out(j) = cplx(c, -g * x * s) * in(j) - kI * (w * s) * in(grid.mirror(j));
    }
    return WaveFunction(grid, std::move(out));
}

double max_spacing_for(int m_max)
{
    return 0.1 / std::sqrt(static_cast<double>(m_max) + 1.0);
}

std::vector<cplx> field_amplitudes(const WaveFunction& psi0, const LatticeConfig& cfg, double z,
                                   const RealMatrix& modes)
{
    const PositionGrid& grid = psi0.grid();
    if (modes.cols() != grid.points()) {
        throw DimensionMismatch("field_amplitudes", modes.cols(), grid.points());
    }
    const int m_max = static_cast<int>(modes.rows()) - 1;
    require_order(m_max, "field_amplitudes");
    if (grid.spacing() > max_spacing_for(m_max) * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "field_amplitudes: grid spacing " << grid.spacing() << " too coarse for m_max = "
           << m_max << " (need <= " << max_spacing_for(m_max) << ")";
        throw ResolutionError(os.str());
    }
    const WaveFunction psi = psi_evolved(psi0, cfg, z);
    std::vector<cplx> amplitudes(static_cast<std::size_t>(m_max) + 1);
    ComplexVector integrand(grid.points());
    for (int m = 0; m <= m_max; ++m) {
        integrand = modes.row(m).transpose().cast<cplx>().cwiseProduct(psi.samples());
        amplitudes[static_cast<std::size_t>(m)] =
            simpson(std::span<const cplx>(integrand.data(), static_cast<std::size_t>(integrand.size())),
                    grid.spacing());
    }
    return amplitudes;
}

std::vector<cplx> field_amplitudes(const WaveFunction& psi0, const LatticeConfig& cfg, double z,
                                   int m_max)
{
    require_order(m_max, "field_amplitudes");
    if (psi0.grid().spacing() > max_spacing_for(m_max) * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "field_amplitudes: grid spacing " << psi0.grid().spacing()
           << " too coarse for m_max = " << m_max << " (need <= " << max_spacing_for(m_max) << ")";
        throw ResolutionError(os.str());
    }
    return field_amplitudes(psi0, cfg, z, hermite_gauss_table(m_max, psi0.grid()));
}

StateVector propagate_fock(const StateVector& c0, const LatticeConfig& cfg, double z, FockPath path)
{
    cfg.validate();
    if (c0.dim() != cfg.dim) {
        throw DimensionMismatch("propagate_fock", c0.dim(), cfg.dim);
    }
    ComplexMatrix propagator;
    if (path == FockPath::MatrixExponential) {
        propagator = expm((-kI * z) * lattice_hamiltonian(cfg));
    } else {
        const StructuredPair pair(parity_op(cfg.dim), position_op(cfg.dim),
                                  PairRelation::Anticommuting);
        propagator = exp_anticommuting(pair, cfg.omega, cfg.g, z);
    }
    return StateVector(propagator * c0.amplitudes(), StateVector::Normalization::Unchecked);
}

RealMatrix intensity_map_position(const WaveFunction& psi0, const LatticeConfig& cfg,
                                  std::span<const double> z_grid, unsigned threads)
{
    cfg.validate();
    RealMatrix map(static_cast<Index>(z_grid.size()), psi0.grid().points());
    parallel_for(z_grid.size(), threads, [&](std::size_t i) {
        map.row(static_cast<Index>(i)) = psi_evolved(psi0, cfg, z_grid[i]).intensity().transpose();
    });
    return map;
}

RealMatrix intensity_map_waveguides(const WaveFunction& psi0, const LatticeConfig& cfg,
                                    std::span<const double> z_grid, int m_max, unsigned threads)
{
    cfg.validate();
    require_order(m_max, "intensity_map_waveguides");
    if (psi0.grid().spacing() > max_spacing_for(m_max) * (1.0 + 1e-12)) {
        throw ResolutionError("intensity_map_waveguides: grid spacing too coarse for m_max = " +
                              std::to_string(m_max));
    }
    const RealMatrix modes = hermite_gauss_table(m_max, psi0.grid());
    RealMatrix map(static_cast<Index>(z_grid.size()), m_max + 1);
    parallel_for(z_grid.size(), threads, [&](std::size_t i) {
        const std::vector<cplx> e = field_amplitudes(psi0, cfg, z_grid[i], modes);
        for (int m = 0; m <= m_max; ++m) {
            map(static_cast<Index>(i), m) = std::norm(e[static_cast<std::size_t>(m)]);
        }
    });
    return map;
}

RealMatrix intensity_map_fock(const StateVector& c0, const LatticeConfig& cfg,
                              std::span<const double> z_grid, int m_max, unsigned threads)
{
    cfg.validate();
    if (m_max < 0 || m_max >= cfg.dim) {
        throw OutOfRange("intensity_map_fock: m_max must lie in [0, dim)");
    }
    RealMatrix map(static_cast<Index>(z_grid.size()), m_max + 1);
    parallel_for(z_grid.size(), threads, [&](std::size_t i) {
        const StateVector c = propagate_fock(c0, cfg, z_grid[i]);
        map.row(static_cast<Index>(i)) = c.amplitudes().head(m_max + 1).cwiseAbs2().transpose();
    });
    return map;
}

} // namespace opexp
