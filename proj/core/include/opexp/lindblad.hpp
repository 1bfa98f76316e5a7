// lindblad.hpp: Lindblad master equation with the Susskind-Glogower jump
// operator V:
//
//   d rho/dt = 2g V rho V^dagger - g rho V^dagger V - g V^dagger V rho
//            = (J + L - 2g) rho,
//   J rho = 2g V rho V^dagger,   L rho = g (rho |0><0| + |0><0| rho).
//
// Because J L = 0 the propagator expands as e^{-2gt} [e^{Jt} + corrections]
// with scalar coefficients; this module evaluates that series, a fixed-step
// RK4 integrator used as the numerical reference, and photon-number
// observables (including the Bessel-series mean photon number for coherent
// states and the exponential decay law for thermal states).

#pragma once

#include <span>
#include <string>
#include <vector>

#include "opexp/fock.hpp"

namespace opexp {

struct LindbladConfig {
    double gamma = 0.0;
    Index dim = 0;
    double tol_series = 1e-12;
    int max_terms = 512;

    // Throws InvalidArgument unless gamma > 0, dim >= 2, 0 < tol_series < 1e-3, max_terms >= 1.
    void validate() const;
};

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;
    std::string label;

    // Throws InvalidArgument unless lengths agree, times strictly ascend and values are finite.
    void validate() const;
};

// J rho = 2 gamma V rho V^dagger with the exact shift structure of V.
ComplexMatrix apply_J(const ComplexMatrix& rho, double gamma);
// Same map with an explicit lowering operator (used to inject faults).
ComplexMatrix apply_J(const ComplexMatrix& rho, double gamma, const ComplexMatrix& lowering);

// L rho = gamma (rho |0><0| + |0><0| rho)
ComplexMatrix apply_L(const ComplexMatrix& rho, double gamma);

// gamma^m [|0><0| rho + (2^m - 2) |0><0| rho |0><0| + rho |0><0|], m >= 1.
ComplexMatrix apply_L_power(const ComplexMatrix& rho, double gamma, int m);

// 2g V rho V^dagger + g rho |0><0| + g |0><0| rho - 2g rho
ComplexMatrix lindblad_rhs(const ComplexMatrix& rho, double gamma);
// 2g V rho V^dagger - g rho V^dagger V - g V^dagger V rho with an explicit V.
ComplexMatrix lindblad_rhs_standard(const ComplexMatrix& rho, double gamma,
                                    const ComplexMatrix& lowering);

// Classic fixed-step RK4. Between consecutive grid points the interval is cut
// into ceil(span/dt) equal steps, so every step is <= dt and each grid time is
// hit exactly. Returns one state per grid time (the first grid time may equal 0).
// Each output is checked against the density-matrix invariants with tolerances
// growing with the accumulated step count, capped at 1e-6; a breach throws
// IntegrationError.
std::vector<DensityMatrix> integrate_rk4(const DensityMatrix& rho0, const LindbladConfig& cfg,
                                         std::span<const double> t_grid, double dt);

// e^{Jt} rho0 = sum_k (2 gamma t)^k / k! V^k rho0 V^{dagger k}
ComplexMatrix evolve_exp_J(const ComplexMatrix& rho0, double t, const LindbladConfig& cfg);

// Scalar weights of the three vacuum-projector correction families:
//   sandwich[n]   = sum_{m>=1} x^{n+m}/(n+m)! 2^n (2^m - 2)
//   one_sided[n]    = sum_{m>=1} x^{n+m}/(n+m)! 2^n
// with x = gamma t, for n = 0..count-1.
struct CorrectionCoefficients {
    std::vector<double> sandwich;
    std::vector<double> one_sided;
};
CorrectionCoefficients correction_coefficients(double gamma_t, Index count,
                                               const LindbladConfig& cfg);

// rho(t) from the closed series e^{-2 gamma t}[e^{Jt} rho0 + corrections].
DensityMatrix evolve_analytic(const DensityMatrix& rho0, double t, const LindbladConfig& cfg);

// rho(t) for rho0 = |alpha><alpha| from the explicit coherent-state series.
// Entries are the infinite-space values restricted to indices < cfg.dim.
DensityMatrix coherent_rho_analytic(cplx alpha, double t, const LindbladConfig& cfg);

// e^{-2 gamma t} Tr[n e^{Jt} rho0]
double mean_photon_trace(const DensityMatrix& rho0, double t, const LindbladConfig& cfg);

// e^{-2gt} e^{-|a|^2} sum_{k>=1} k (|a|^2 / 2gt)^{k/2} I_k(sqrt(8 g t |a|^2))
double mean_photon_coherent_bessel(cplx alpha, double gamma, double t, int k_max = 4096);

// n0 exp(-2 gamma t / (n0 + 1))
double mean_photon_thermal(double nbar0, double gamma, double t);

} // namespace opexp
