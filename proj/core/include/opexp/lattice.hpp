// lattice.hpp: binary Glauber-Fock waveguide lattice H = w (-1)^n + g x.
//
// The field is propagated in two independent ways:
//  * position space: psi(x; z) = [cos(z W) - i g x sin(z W)/W] psi(x; 0)
//                               - i w sin(z W)/W psi(-x; 0),  W(x) = sqrt(w^2 + g^2 x^2),
//    followed by projection onto Hermite-Gauss modes for the waveguide amplitudes;
//  * Fock space: exp(-i z H) applied to the mode coefficients, either through
//    the scaling-and-squaring exponential or the anticommuting closed form.

#pragma once

#include <span>
#include <variant>
#include <vector>

#include "opexp/fock.hpp"

namespace opexp {

// Uniform grid x_j = L (2j - (P-1)) / (P-1), j = 0..P-1, with P odd. The
// construction makes x_{P-1-j} = -x_j bit-exactly and puts x = 0 on the grid.
class PositionGrid {
public:
    PositionGrid(double half_width, Index points);

    double half_width() const noexcept { return half_width_; }
    Index points() const noexcept { return points_; }
    double spacing() const noexcept { return spacing_; }
    double x(Index j) const;
    Index mirror(Index j) const noexcept { return points_ - 1 - j; }
    Index center() const noexcept { return (points_ - 1) / 2; }
    std::vector<double> nodes() const;
    bool symmetric() const;

private:
    double half_width_;
    Index points_;
    double spacing_;
};

struct LatticeConfig {
    double omega = 1.0;
    double g = 0.5;
    Index dim = 128;
    PositionGrid grid{12.0, 1201};

    // Throws InvalidArgument unless g >= 0, dim >= 8 and the grid is symmetric.
    void validate() const;
};

ComplexMatrix lattice_hamiltonian(const LatticeConfig& cfg);

inline constexpr int kHermiteGaussMaxOrder = 200;

// Normalized oscillator eigenfunction phi_n(x) via the stable three-term recurrence.
double hermite_gauss(int n, double x);
// phi_0..phi_{n_max} at one point.
std::vector<double> hermite_gauss_all(int n_max, double x);
// (n_max + 1) x points table of phi_n on the grid.
RealMatrix hermite_gauss_table(int n_max, const PositionGrid& grid);

// Composite Simpson rule on an odd number of equally spaced samples.
double simpson(std::span<const double> f, double h);
cplx simpson(std::span<const cplx> f, double h);

class WaveFunction {
public:
    WaveFunction(PositionGrid grid, ComplexVector samples);

    const PositionGrid& grid() const noexcept { return grid_; }
    const ComplexVector& samples() const noexcept { return samples_; }
    // Simpson estimate of the integral of |psi|^2
    double norm_squared() const;
    RealVector intensity() const;

private:
    PositionGrid grid_;
    ComplexVector samples_;
};

namespace initial {
struct Gaussian {};
struct HermiteGauss {
    int n = 0;
};
// (phi_j + phi_k) / sqrt(2)
struct Superposition {
    int j = 0;
    int k = 1;
};
// sum_n e^{-|a|^2/2} a^n / sqrt(n!) phi_n
struct Coherent {
    cplx alpha;
};
} // namespace initial

using InitialKind =
    std::variant<initial::Gaussian, initial::HermiteGauss, initial::Superposition, initial::Coherent>;

// Edge amplitudes above this fraction of the peak count as an extent violation.
inline constexpr double kExtentTolerance = 1e-8;

// Samples the initial field. Throws OutOfRange for invalid orders,
// TruncationError when a coherent expansion needs more than
// kHermiteGaussMaxOrder modes, and ResolutionError when the field is not
// contained in the grid.
WaveFunction initial_wavefunction(const InitialKind& kind, const PositionGrid& grid);

// Fock-basis coefficients of the same initial field (the Fock-space oracle input).
StateVector initial_coefficients(const InitialKind& kind, Index dim);

WaveFunction psi_evolved(const WaveFunction& psi0, const LatticeConfig& cfg, double z);

// Largest grid spacing accepted for projections onto phi_0..phi_{m_max}.
double max_spacing_for(int m_max);

// E_m(z) = integral phi_m(x) psi(x; z) dx for m = 0..m_max (Simpson).
std::vector<cplx> field_amplitudes(const WaveFunction& psi0, const LatticeConfig& cfg, double z,
                                   int m_max);
// Same, reusing a precomputed hermite_gauss_table(m_max, grid).
std::vector<cplx> field_amplitudes(const WaveFunction& psi0, const LatticeConfig& cfg, double z,
                                   const RealMatrix& modes);

enum class FockPath { MatrixExponential, ClosedForm };

StateVector propagate_fock(const StateVector& c0, const LatticeConfig& cfg, double z,
                           FockPath path = FockPath::MatrixExponential);

// Rows indexed by z. Position maps hold |psi(x_j; z)|^2 on the config grid;
// waveguide maps hold |E_m(z)|^2 for m = 0..m_max.
RealMatrix intensity_map_position(const WaveFunction& psi0, const LatticeConfig& cfg,
                                  std::span<const double> z_grid, unsigned threads = 1);
RealMatrix intensity_map_waveguides(const WaveFunction& psi0, const LatticeConfig& cfg,
                                    std::span<const double> z_grid, int m_max,
                                    unsigned threads = 1);
RealMatrix intensity_map_fock(const StateVector& c0, const LatticeConfig& cfg,
                              std::span<const double> z_grid, int m_max, unsigned threads = 1);

} // namespace opexp
