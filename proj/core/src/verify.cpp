#include "opexp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "opexp/errors.hpp"
#include "opexp/fock.hpp"
#include "opexp/identities.hpp"
#include "opexp/lattice.hpp"
#include "opexp/lindblad.hpp"

namespace opexp {

bool SuiteReport::passed() const
{
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyResult& p) { return p.passed(); });
}

namespace {

// Accumulates the worst deviation for one property.
class Property {
public:
    Property(std::string name, double tolerance) : result_{std::move(name), 0.0, tolerance, 0} {}

    void record(double deviation)
    {
        // NaN must never pass.
        if (std::isnan(deviation)) {
            deviation = INFINITY;
        }
        result_.max_deviation = std::max(result_.max_deviation, deviation);
        ++result_.cases;
    }

    PropertyResult result() const { return result_; }

private:
    PropertyResult result_;
};

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream)
{
    // splitmix64 step so nearby seeds give unrelated streams
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

SuiteReport verify_identities(const VerifyOptions& opts)
{
    SuiteReport report{"identities", {}};

    Property power("nilcross_power_sum_vs_direct_power", 1e-11);
    Property nil_reform("nilcross_commutator_equals_AB", 1e-12);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const Index dim = 2 + static_cast<Index>(i % 7);
        const StructuredPair pair = random_nilcross_pair(dim, mix(opts.seed, i));
        const ComplexMatrix sum = pair.a() + pair.b();
        for (int k = 0; k <= 6; ++k) {
            power.record(max_abs_diff(power_sum(pair, k), matrix_power(sum, k)));
        }
        const ComplexMatrix ab = pair.a() * pair.b();
        nil_reform.record(max_abs(ab - pair.b() * pair.a() - ab));
    }
    report.properties.push_back(power.result());
    report.properties.push_back(nil_reform.result());

    Property split("anticommuting_split_powers_vs_direct_power", 1e-11);
    Property anti_reform("anticommuting_commutator_equals_2AB", 1e-12);
    std::mt19937_64 rng(mix(opts.seed, 1000));
    std::uniform_real_distribution<double> coef(-1.5, 1.5);
    for (std::uint64_t i = 0; i < 200; ++i) {
        const Index dim = 2 + static_cast<Index>(i % 7);
        const StructuredPair pair = random_anticommuting_pair(dim, mix(opts.seed, 2000 + i));
        const double omega = coef(rng);
        const double g = coef(rng);
        const ComplexMatrix linear = omega * pair.a() + g * pair.b();
        for (int n = 0; n <= 4; ++n) {
            const SplitPowers sp = split_powers(pair, omega, g, n);
            split.record(std::max(max_abs_diff(sp.even, matrix_power(linear, 2 * n)),
                                  max_abs_diff(sp.odd, matrix_power(linear, 2 * n + 1))));
        }
        const ComplexMatrix ab = pair.a() * pair.b();
        anti_reform.record(max_abs(ab - pair.b() * pair.a() - 2.0 * ab));
    }
    report.properties.push_back(split.result());
    report.properties.push_back(anti_reform.result());

    Property closed("exp_anticommuting_parity_position_vs_expm", 1e-9);
    for (Index dim : {8, 32, 64}) {
        const StructuredPair pair(parity_op(dim), position_op(dim), PairRelation::Anticommuting);
        for (double g : {0.45, 0.5}) {
            const ComplexMatrix h = pair.a() + g * pair.b();
            for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
                closed.record(
                    max_abs_diff(exp_anticommuting(pair, 1.0, g, t), expm((-kI * t) * h)));
            }
        }
    }
    report.properties.push_back(closed.result());

    Property closed_random("exp_anticommuting_random_hermitian_pairs_vs_expm", 1e-10);
    for (std::uint64_t i = 0; i < 50; ++i) {
        const Index dim = 2 + static_cast<Index>(i % 7);
        const StructuredPair pair =
            random_anticommuting_pair(dim, mix(opts.seed, 3000 + i), /*hermitian_b=*/true);
        const double omega = coef(rng);
        const double g = coef(rng);
        const double t = 0.5 + static_cast<double>(i % 5);
        closed_random.record(max_abs_diff(exp_anticommuting(pair, omega, g, t),
                                          expm((-kI * t) * (omega * pair.a() + g * pair.b()))));
    }
    report.properties.push_back(closed_random.result());
    return report;
}

SuiteReport verify_lindblad(const VerifyOptions& opts)
{
    SuiteReport report{"lindblad", {}};
    constexpr double gamma = 0.45;
    constexpr Index dim = 10;
    ComplexMatrix v = sg_lowering_op(dim);
    v.array() += opts.v_perturbation;

    Property nil("J_after_L_vanishes", 1e-13);
    Property lift("power_identity_lift_J_plus_L", 1e-11);
    Property lpow("L_power_closed_form", 1e-12);
    Property trace("rhs_trace_zero", 1e-12);
    Property herm("rhs_hermitian", 1e-13);
    Property rewrite("rewritten_rhs_matches_standard_form", 1e-12);
    for (std::uint64_t i = 0; i < 100; ++i) {
        const ComplexMatrix rho = random_density_matrix(dim, mix(opts.seed, 5000 + i)).matrix();
        nil.record(max_abs(apply_J(apply_L(rho, gamma), gamma, v)));

        const ComplexMatrix standard = lindblad_rhs_standard(rho, gamma, v);
        trace.record(std::abs(standard.trace()));
        herm.record(hermiticity_defect(standard));
        const ComplexMatrix rewritten = lindblad_rhs(rho, gamma);
        rewrite.record(max_abs(rewritten.topLeftCorner(dim - 1, dim - 1) -
                               standard.topLeftCorner(dim - 1, dim - 1)));

        if (i < 20) {
            for (int k = 0; k <= 5; ++k) {
                ComplexMatrix direct = rho;
                for (int s = 0; s < k; ++s) {
                    direct = apply_J(direct, gamma, v) + apply_L(direct, gamma);
                }
                // J^k rho + sum_{m=1..k} L^m J^{k-m} rho
                std::vector<ComplexMatrix> j_pows{rho};
                for (int s = 1; s <= k; ++s) {
                    j_pows.push_back(apply_J(j_pows.back(), gamma, v));
                }
                ComplexMatrix expanded = j_pows[static_cast<std::size_t>(k)];
                for (int m = 1; m <= k; ++m) {
                    ComplexMatrix term = j_pows[static_cast<std::size_t>(k - m)];
                    for (int s = 0; s < m; ++s) {
                        term = apply_L(term, gamma);
                    }
                    expanded += term;
                }
                lift.record(max_abs_diff(direct, expanded));
            }
            ComplexMatrix iterated = rho;
            for (int m = 1; m <= 6; ++m) {
                iterated = apply_L(iterated, gamma);
                lpow.record(max_abs_diff(iterated, apply_L_power(rho, gamma, m)));
            }
        }
    }

    Property vacuum("vacuum_stationary", 1e-14);
    vacuum.record(max_abs(lindblad_rhs_standard(projector(0, dim), gamma, v)));

    Property eigen("thermal_eigendensity", 1e-9);
    for (double nbar0 : {0.5, 1.0, 3.0}) {
        const Index tdim = default_thermal_dim(nbar0, 1e-12);
        ComplexMatrix vt = sg_lowering_op(tdim);
        vt.array() += opts.v_perturbation;
        const DensityMatrix rho_th = thermal_state(nbar0, tdim, 1e-12);
        const double ratio = nbar0 / (nbar0 + 1.0);
        ComplexMatrix sandwiched = rho_th.matrix();
        for (int k = 1; k <= 5; ++k) {
            sandwiched = vt * sandwiched * vt.adjoint();
            eigen.record(max_abs(sandwiched - std::pow(ratio, k) * rho_th.matrix()));
        }
    }

    Property agreement("analytic_vs_rk4", 1e-6);
    Property positivity("rk4_positivity", 1e-7);
    const std::vector<double> times{0.5, 1.0, 2.0, 5.0};
    std::vector<DensityMatrix> initial_states;
    initial_states.push_back(DensityMatrix::from_pure(fock_state(2, 16)));
    initial_states.push_back(DensityMatrix::from_pure(coherent_state(1.0, 32)));
    initial_states.push_back(thermal_state(2.0, 64));
    for (const DensityMatrix& rho0 : initial_states) {
        LindbladConfig cfg{gamma, rho0.dim()};
        const std::vector<DensityMatrix> numeric = integrate_rk4(rho0, cfg, times, 1e-3);
        for (std::size_t i = 0; i < times.size(); ++i) {
            const DensityMatrix exact = evolve_analytic(rho0, times[i], cfg);
            agreement.record(max_abs_diff(exact.matrix(), numeric[i].matrix()));
            positivity.record(std::max(0.0, -numeric[i].min_eigenvalue()));
        }
    }

    Property coherent("coherent_series_vs_general_series", 1e-9);
    {
        const cplx alpha = 2.0;
        LindbladConfig cfg{gamma, default_coherent_dim(alpha)};
        const DensityMatrix rho0 = DensityMatrix::from_pure(coherent_state(alpha, cfg.dim));
        for (double t : {0.5, 1.0, 2.0}) {
            coherent.record(max_abs_diff(coherent_rho_analytic(alpha, t, cfg).matrix(),
                                         evolve_analytic(rho0, t, cfg).matrix()));
        }
    }

    Property bessel("bessel_mean_photon_vs_trace", 1e-8);
    for (const auto& [alpha, g] : {std::pair{3.0, 0.45}, std::pair{4.0, 0.9}}) {
        LindbladConfig cfg{g, default_coherent_dim(alpha)};
        const DensityMatrix rho0 = DensityMatrix::from_pure(coherent_state(alpha, cfg.dim));
        for (double t : {0.5, 1.0, 2.0}) {
            bessel.record(std::abs(mean_photon_coherent_bessel(alpha, g, t) -
                                   mean_photon_trace(rho0, t, cfg)));
        }
    }

    for (const Property& p : {nil, lift, lpow, vacuum, trace, herm, rewrite, eigen, agreement,
                              positivity, coherent, bessel}) {
        report.properties.push_back(p.result());
    }
    return report;
}

SuiteReport verify_lattice(const VerifyOptions& opts)
{
    SuiteReport report{"lattice", {}};

    Property dual("closed_form_vs_expm_propagator", 1e-10);
    for (Index dim : {16, 64}) {
        for (double omega : {1.0, 0.3}) {
            for (double g : {0.45, 0.5}) {
                LatticeConfig cfg{omega, g, dim, PositionGrid(12.0, 1201)};
                const StructuredPair pair(parity_op(dim), position_op(dim),
                                          PairRelation::Anticommuting);
                const ComplexMatrix h = lattice_hamiltonian(cfg);
                for (double z : {0.5, 2.0, 10.0}) {
                    dual.record(max_abs_diff(exp_anticommuting(pair, omega, g, z),
                                             expm((-kI * z) * h)));
                }
            }
        }
    }
    report.properties.push_back(dual.result());

    Property ortho("hermite_gauss_orthonormality", 1e-8);
    {
        const PositionGrid grid(12.0, 1201);
        const RealMatrix table = hermite_gauss_table(20, grid);
        const RealMatrix gram = table * table.transpose();
        std::vector<double> row(static_cast<std::size_t>(grid.points()));
        for (int m = 0; m <= 20; ++m) {
            for (int n = 0; n <= m; ++n) {
                for (Index j = 0; j < grid.points(); ++j) {
                    row[static_cast<std::size_t>(j)] = table(m, j) * table(n, j);
                }
                const double integral = simpson(row, grid.spacing());
                ortho.record(std::abs(integral - (m == n ? 1.0 : 0.0)));
            }
        }
    }
    report.properties.push_back(ortho.result());

    Property consistency("position_space_vs_fock_space", 1e-6);
    Property completeness("waveguide_power_conserved", 1e-6);
    Property norm("position_norm_conserved", 1e-8);
    Property energy("energy_conserved", 1e-8);
    {
        const LatticeConfig cfg{1.0, 0.5, 128, PositionGrid(12.0, 2401)};
        const int m_max = 80;
        const RealMatrix modes = hermite_gauss_table(m_max, cfg.grid);
        const ComplexMatrix h = lattice_hamiltonian(cfg);
        const std::vector<InitialKind> kinds{initial::HermiteGauss{3},
                                             initial::Superposition{3, 6}};
        for (const InitialKind& kind : kinds) {
            const WaveFunction psi0 = initial_wavefunction(kind, cfg.grid);
            const StateVector c0 = initial_coefficients(kind, cfg.dim);
            const double e0 = expectation(h, c0).real();
            for (double z : {0.0, 2.5, 5.0, 7.5, 10.0}) {
                const std::vector<cplx> e = field_amplitudes(psi0, cfg, z, modes);
                const StateVector c = propagate_fock(c0, cfg, z);
                double diff = 0.0;
                double power = 0.0;
                for (int m = 0; m <= m_max; ++m) {
                    diff = std::max(diff, std::abs(e[static_cast<std::size_t>(m)] - c[m]));
                    power += std::norm(e[static_cast<std::size_t>(m)]);
                }
                consistency.record(diff);
                completeness.record(std::abs(power - 1.0));
                norm.record(std::abs(psi_evolved(psi0, cfg, z).norm_squared() - 1.0));
                energy.record(std::abs(expectation(h, c).real() - e0));
            }
        }
    }
    for (const Property& p : {consistency, completeness, norm, energy}) {
        report.properties.push_back(p.result());
    }

    // With psi0 even, flipping x is equivalent to flipping the sign of omega.
    Property mirror("mirror_symmetry_with_omega_reversed", 1e-12);
    {
        const PositionGrid grid(12.0, 1201);
        const WaveFunction psi0 = initial_wavefunction(initial::Gaussian{}, grid);
        const LatticeConfig plus{1.0, 0.45, 128, grid};
        const LatticeConfig minus{-1.0, 0.45, 128, grid};
        for (double z : {1.0, 3.0, 10.0}) {
            const RealVector a = psi_evolved(psi0, plus, z).intensity();
            const RealVector b = psi_evolved(psi0, minus, z).intensity();
            double dev = 0.0;
            for (Index j = 0; j < grid.points(); ++j) {
                dev = std::max(dev, std::abs(a(j) - b(grid.mirror(j))));
            }
            mirror.record(dev);
        }
    }
    report.properties.push_back(mirror.result());
    (void)opts;
    return report;
}

const std::vector<std::string>& verification_suites()
{
    static const std::vector<std::string> suites{"identities", "lindblad", "lattice", "all"};
    return suites;
}

std::vector<SuiteReport> run_verification(const std::string& suite, const VerifyOptions& opts)
{
    if (suite == "identities") {
        return {verify_identities(opts)};
    }
    if (suite == "lindblad") {
        return {verify_lindblad(opts)};
    }
    if (suite == "lattice") {
        return {verify_lattice(opts)};
    }
    if (suite == "all") {
        return {verify_identities(opts), verify_lindblad(opts), verify_lattice(opts)};
    }
    throw InvalidArgument("unknown verification suite '" + suite + "'");
}

} // namespace opexp
