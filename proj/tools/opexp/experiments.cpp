#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "opexp/fock.hpp"
#include "opexp/lattice.hpp"
#include "opexp/lindblad.hpp"

namespace opexp::cli {

const char* to_string(Format f)
{
    return f == Format::Json ? "json" : "csv";
}

namespace {

std::vector<double> uniform_grid(double upper, int steps)
{
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) {
        grid[static_cast<std::size_t>(i)] = upper * static_cast<double>(i) / static_cast<double>(steps);
    }
    return grid;
}

int as_int(const ExperimentSpec& spec, const std::string& key)
{
    return static_cast<int>(std::lround(spec.parameters.at(key)));
}

double param(const ExperimentSpec& spec, const std::string& key)
{
    return spec.parameters.at(key);
}

// Shared by both decay experiments: analytic column per t, RK4 column from one trajectory.
ExperimentResult decay_table(const ExperimentSpec& spec, const DensityMatrix& rho0,
                             const LindbladConfig& cfg,
                             const std::function<double(double)>& analytic)
{
    const std::vector<double> times = uniform_grid(param(spec, "t_max"), as_int(spec, "steps"));
    std::vector<double> exact(times.size());
    parallel_for(times.size(), spec.threads, [&](std::size_t i) { exact[i] = analytic(times[i]); });

    const std::vector<DensityMatrix> numeric = integrate_rk4(rho0, cfg, times, param(spec, "dt"));
    const ComplexMatrix n_op = number_op(cfg.dim);

    ExperimentResult result;
    result.table.columns = {"t", "nbar_analytic", "nbar_rk4"};
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double rk4 = expectation(n_op, numeric[i]).real();
        worst = std::max(worst, std::abs(exact[i] - rk4));
        result.table.rows.push_back({times[i], exact[i], rk4});
    }
    result.tolerance_report["max_abs_analytic_minus_rk4"] = worst;
    return result;
}

InitialKind lattice_initial(const ExperimentSpec& spec)
{
    const std::string& init = spec.options.at("init");
    if (init == "gaussian") {
        return initial::Gaussian{};
    }
    if (init == "hermite") {
        return initial::HermiteGauss{as_int(spec, "order")};
    }
    if (init == "superposition") {
        return initial::Superposition{as_int(spec, "j"), as_int(spec, "k")};
    }
    if (init == "coherent") {
        return initial::Coherent{cplx(param(spec, "alpha"), 0.0)};
    }
    throw UsageError("unknown init kind '" + init + "'");
}

LatticeConfig lattice_config(const ExperimentSpec& spec, Index dim)
{
    return LatticeConfig{param(spec, "omega"), param(spec, "g"), dim,
                         PositionGrid(param(spec, "half_width"),
                                      static_cast<Index>(as_int(spec, "points")))};
}

const std::vector<ParamSpec> kDecayCommon{
    {"gamma", 0.45, 1e-6, 1e3, false, "decay constant"},
    {"t_max", 5.0, 1e-9, 1e3, false, "final time"},
    {"steps", 100, 1, 1e5, true, "number of output intervals"},
    {"dim", 0, 0, 2048, true, "Fock truncation (0 = automatic from the tail rule)"},
    {"dt", 1e-3, 1e-6, 0.1, false, "RK4 step"},
};

const std::vector<ParamSpec> kLatticeCommon{
    {"omega", 1.0, -1e3, 1e3, false, "alternating on-site detuning"},
    {"g", 0.45, 1e-9, 1e3, false, "coupling scale"},
    {"z_max", 10.0, 1e-9, 1e4, false, "propagation distance"},
    {"z_steps", 100, 1, 1e5, true, "number of z intervals"},
    {"half_width", 12.0, 1.0, 1e3, false, "position grid half width"},
    {"points", 1201, 3, 1e6, true, "position grid points (odd)"},
    {"order", 1, 0, 200, true, "Hermite-Gauss order for init=hermite"},
};

std::vector<ParamSpec> concat(std::vector<ParamSpec> a, const std::vector<ParamSpec>& b)
{
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<ExperimentDef> build_registry()
{
    std::vector<ExperimentDef> defs;

    defs.push_back(ExperimentDef{
        "decay-coherent",
        "Mean photon number of a decaying coherent state: Bessel series vs RK4",
        concat({{"alpha", 3.0, 0.0, 12.0, false, "coherent amplitude (real)"}}, kDecayCommon),
        {},
        {{"fig1a", Preset{{{"alpha", 3.0}, {"gamma", 0.45}, {"t_max", 5.0}}, {}}},
         {"fig1b", Preset{{{"alpha", 4.0}, {"gamma", 0.9}, {"t_max", 10.0}}, {}}}},
        run_decay_coherent});

    defs.push_back(ExperimentDef{
        "decay-thermal",
        "Mean photon number of a decaying thermal state: exponential law vs RK4",
        concat({{"nbar0", 3.0, 0.0, 50.0, false, "initial mean photon number"}}, kDecayCommon),
        {},
        {{"fig2a", Preset{{{"nbar0", 3.0}, {"gamma", 0.45}, {"t_max", 10.0}}, {}}},
         {"fig2b", Preset{{{"nbar0", 2.0}, {"gamma", 0.6}, {"t_max", 10.0}}, {}}}},
        run_decay_thermal});

    defs.push_back(ExperimentDef{
        "lattice-continuum",
        "Intensity |psi(x; z)|^2 in position space",
        kLatticeCommon,
        {{"init", "gaussian", {"gaussian", "hermite"}, "initial field"}},
        {{"fig3a", Preset{{{"omega", 1.0}, {"g", 0.45}}, {{"init", "gaussian"}}}},
         {"fig3b", Preset{{{"omega", 1.0}, {"g", 0.45}, {"order", 1}}, {{"init", "hermite"}}}}},
        run_lattice_continuum});

    defs.push_back(ExperimentDef{
        "lattice-waveguides",
        "Waveguide intensities |E_m(z)|^2 with a Fock-space cross-check",
        concat(kLatticeCommon,
               {{"j", 3, 0, 200, true, "first order for init=superposition"},
                {"k", 6, 0, 200, true, "second order for init=superposition"},
                {"alpha", std::sqrt(40.0), 0.0, 9.0, false, "amplitude for init=coherent"},
                {"m_max", 80, 0, 200, true, "highest waveguide index"},
                {"dim", 0, 0, 1024, true, "Fock truncation of the cross-check (0 = automatic)"}}),
        {{"init", "hermite", {"hermite", "superposition", "coherent"}, "initial field"}},
        {{"fig4a", Preset{{{"omega", 1.0}, {"g", 0.5}, {"order", 3}, {"points", 2401}},
                          {{"init", "hermite"}}}},
         {"fig4b", Preset{{{"omega", 1.0}, {"g", 0.5}, {"j", 3}, {"k", 6}, {"points", 2401}},
                          {{"init", "superposition"}}}},
         {"fig4c", Preset{{{"omega", 1.0},
                           {"g", 0.5},
                           {"alpha", std::sqrt(40.0)},
                           {"m_max", 100},
                           {"half_width", 18.0},
                           {"points", 4001}},
                          {{"init", "coherent"}}}}},
        run_lattice_waveguides});

    // Waveguide maps use a stronger coupling and a finer grid by default.
    for (auto& p : defs.back().params) {
        if (p.name == "g") {
            p.default_value = 0.5;
        }
        if (p.name == "order") {
            p.default_value = 3;
        }
        if (p.name == "points") {
            p.default_value = 2401;
        }
    }
    return defs;
}

} // namespace

const std::vector<ExperimentDef>& registry()
{
    static const std::vector<ExperimentDef> defs = build_registry();
    return defs;
}

const ExperimentDef& find_experiment(const std::string& name)
{
    for (const auto& def : registry()) {
        if (def.name == name) {
            return def;
        }
    }
    throw UsageError("unknown experiment '" + name + "'");
}

ExperimentSpec base_spec(const ExperimentDef& def, const std::string& preset)
{
    ExperimentSpec spec;
    spec.name = def.name;
    spec.preset = preset;
    for (const auto& p : def.params) {
        spec.parameters[p.name] = p.default_value;
    }
    for (const auto& p : def.text_params) {
        spec.options[p.name] = p.default_value;
    }
    if (!preset.empty()) {
        const auto it = def.presets.find(preset);
        if (it == def.presets.end()) {
            throw UsageError("experiment '" + def.name + "' has no preset '" + preset + "'");
        }
        for (const auto& [k, v] : it->second.parameters) {
            spec.parameters[k] = v;
        }
        for (const auto& [k, v] : it->second.options) {
            spec.options[k] = v;
        }
    }
    return spec;
}

void validate(const ExperimentSpec& spec, const ExperimentDef& def)
{
    if (spec.name != def.name) {
        throw UsageError("spec name '" + spec.name + "' does not match experiment '" + def.name + "'");
    }
    for (const auto& [key, value] : spec.parameters) {
        const auto it = std::find_if(def.params.begin(), def.params.end(),
                                     [&](const ParamSpec& p) { return p.name == key; });
        if (it == def.params.end()) {
            throw UsageError(def.name + ": unknown parameter '" + key + "'");
        }
        if (!std::isfinite(value) || value < it->min || value > it->max) {
            std::ostringstream os;
            os << def.name << ": parameter '" << key << "' = " << value << " outside [" << it->min
               << ", " << it->max << "]";
            throw UsageError(os.str());
        }
        if (it->integer && value != std::round(value)) {
            throw UsageError(def.name + ": parameter '" + key + "' must be an integer");
        }
    }
    for (const auto& p : def.params) {
        if (!spec.parameters.contains(p.name)) {
            throw UsageError(def.name + ": missing parameter '" + p.name + "'");
        }
    }
    for (const auto& [key, value] : spec.options) {
        const auto it = std::find_if(def.text_params.begin(), def.text_params.end(),
                                     [&](const TextParamSpec& p) { return p.name == key; });
        if (it == def.text_params.end()) {
            throw UsageError(def.name + ": unknown parameter '" + key + "'");
        }
        if (std::find(it->choices.begin(), it->choices.end(), value) == it->choices.end()) {
            throw UsageError(def.name + ": parameter '" + key + "' has invalid value '" + value + "'");
        }
    }
    if (spec.parameters.contains("points") && as_int(spec, "points") % 2 == 0) {
        throw UsageError(def.name + ": 'points' must be odd");
    }
    if (spec.options.contains("init") && spec.options.at("init") == "superposition" &&
        as_int(spec, "j") == as_int(spec, "k")) {
        throw UsageError(def.name + ": superposition orders j and k must differ");
    }
}

ExperimentResult run_decay_coherent(const ExperimentSpec& spec)
{
    const double alpha = param(spec, "alpha");
    const double gamma = param(spec, "gamma");
    const int dim_param = as_int(spec, "dim");
    const Index dim = dim_param > 0 ? dim_param : default_coherent_dim(alpha);
    const LindbladConfig cfg{gamma, dim};
    const DensityMatrix rho0 = DensityMatrix::from_pure(coherent_state(alpha, dim));
    ExperimentResult result = decay_table(spec, rho0, cfg, [&](double t) {
        return mean_photon_coherent_bessel(alpha, gamma, t);
    });
    result.tolerance_report["fock_tail_mass"] = coherent_tail_mass(alpha, dim);
    return result;
}

ExperimentResult run_decay_thermal(const ExperimentSpec& spec)
{
    const double nbar0 = param(spec, "nbar0");
    const double gamma = param(spec, "gamma");
    const int dim_param = as_int(spec, "dim");
    const Index dim = dim_param > 0 ? dim_param : default_thermal_dim(nbar0);
    const LindbladConfig cfg{gamma, dim};
    const DensityMatrix rho0 = thermal_state(nbar0, dim);
    ExperimentResult result = decay_table(spec, rho0, cfg, [&](double t) {
        return mean_photon_thermal(nbar0, gamma, t);
    });
    result.tolerance_report["fock_tail_mass"] =
        std::pow(nbar0 / (nbar0 + 1.0), static_cast<double>(dim));
    return result;
}

ExperimentResult run_lattice_continuum(const ExperimentSpec& spec)
{
    const LatticeConfig cfg = lattice_config(spec, 128);
    cfg.validate();
    const InitialKind kind = lattice_initial(spec);
    const WaveFunction psi0 = initial_wavefunction(kind, cfg.grid);
    const std::vector<double> zs = uniform_grid(param(spec, "z_max"), as_int(spec, "z_steps"));
    const RealMatrix map = intensity_map_position(psi0, cfg, zs, spec.threads);

    ExperimentResult result;
    result.table.columns = {"z", "x", "intensity"};
    const std::vector<double> xs = cfg.grid.nodes();
    double norm_dev = 0.0;
    double center = 0.0;
    double argmax_dev = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const RealVector row = map.row(static_cast<Index>(i)).transpose();
        for (std::size_t j = 0; j < xs.size(); ++j) {
            result.table.rows.push_back({zs[i], xs[j], row(static_cast<Index>(j))});
        }
        norm_dev = std::max(
            norm_dev,
            std::abs(simpson(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())),
                             cfg.grid.spacing()) -
                     1.0));
        center = std::max(center, row(cfg.grid.center()));
        Index argmax = 0;
        row.maxCoeff(&argmax);
        argmax_dev = std::max(argmax_dev, std::abs(cfg.grid.x(argmax)));
    }
    result.tolerance_report["max_row_norm_deviation"] = norm_dev;
    result.tolerance_report["max_intensity_at_x0"] = center;
    result.tolerance_report["max_abs_argmax_x"] = argmax_dev;
    return result;
}

ExperimentResult run_lattice_waveguides(const ExperimentSpec& spec)
{
    const InitialKind kind = lattice_initial(spec);
    const int dim_param = as_int(spec, "dim");
    const Index dim =
        dim_param > 0 ? dim_param : (std::holds_alternative<initial::Coherent>(kind) ? 256 : 128);
    const LatticeConfig cfg = lattice_config(spec, dim);
    cfg.validate();
    const int m_max = as_int(spec, "m_max");
    if (m_max >= dim) {
        throw UsageError("lattice-waveguides: m_max must be below the Fock dimension");
    }
    const WaveFunction psi0 = initial_wavefunction(kind, cfg.grid);
    const std::vector<double> zs = uniform_grid(param(spec, "z_max"), as_int(spec, "z_steps"));
    const RealMatrix map = intensity_map_waveguides(psi0, cfg, zs, m_max, spec.threads);

    // Fock-space cross-check: one step propagator applied along the uniform z grid.
    const double dz = zs.size() > 1 ? zs[1] - zs[0] : 0.0;
    const ComplexMatrix step = expm((-kI * dz) * lattice_hamiltonian(cfg));
    ComplexVector c = initial_coefficients(kind, dim).amplitudes();
    const RealMatrix modes = hermite_gauss_table(m_max, cfg.grid);

    ExperimentResult result;
    result.table.columns = {"z", "m", "intensity"};
    double power_dev = 0.0;
    double fock_dev = 0.0;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        if (i > 0) {
            c = (step * c).eval();
        }
        const std::vector<cplx> e = field_amplitudes(psi0, cfg, zs[i], modes);
        double power = 0.0;
        for (int m = 0; m <= m_max; ++m) {
            const double intensity = map(static_cast<Index>(i), m);
            power += intensity;
            fock_dev = std::max(fock_dev, std::abs(e[static_cast<std::size_t>(m)] - c(m)));
            result.table.rows.push_back({zs[i], static_cast<double>(m), intensity});
        }
        power_dev = std::max(power_dev, std::abs(power - 1.0));
    }
    double mean_m = 0.0;
    for (int m = 0; m <= m_max; ++m) {
        mean_m += static_cast<double>(m) * map(0, m);
    }
    result.tolerance_report["max_power_deviation"] = power_dev;
    result.tolerance_report["max_abs_position_minus_fock"] = fock_dev;
    result.tolerance_report["mean_m_at_z0"] = mean_m;
    return result;
}

} // namespace opexp::cli
