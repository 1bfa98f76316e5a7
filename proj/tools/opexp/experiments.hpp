// experiments.hpp: registered experiments behind the opexp CLI.
//
// Each experiment declares a numeric parameter schema, optional text
// parameters and named presets. A resolved ExperimentSpec is validated
// against the schema before any computation starts.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace opexp::cli {

enum class Format { Csv, Json };

const char* to_string(Format f);

struct ExperimentSpec {
    std::string name;
    std::string preset;
    std::map<std::string, double> parameters;
    std::map<std::string, std::string> options;
    std::filesystem::path output_path;
    Format format = Format::Csv;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentResult {
    Table table;
    // Max deviations observed while producing the data, keyed by check name.
    std::map<std::string, double> tolerance_report;
};

struct ParamSpec {
    std::string name;
    double default_value;
    double min;
    double max;
    bool integer;
    std::string help;
};

struct TextParamSpec {
    std::string name;
    std::string default_value;
    std::vector<std::string> choices;
    std::string help;
};

struct Preset {
    std::map<std::string, double> parameters;
    std::map<std::string, std::string> options;
};

struct ExperimentDef {
    std::string name;
    std::string help;
    std::vector<ParamSpec> params;
    std::vector<TextParamSpec> text_params;
    std::map<std::string, Preset> presets;
    std::function<ExperimentResult(const ExperimentSpec&)> run;
};

// Thrown for schema violations; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const std::vector<ExperimentDef>& registry();
const ExperimentDef& find_experiment(const std::string& name);

// Fills every parameter from schema defaults and the named preset (if any).
ExperimentSpec base_spec(const ExperimentDef& def, const std::string& preset);

// Throws UsageError on unknown keys, out-of-range or non-integer values.
void validate(const ExperimentSpec& spec, const ExperimentDef& def);

ExperimentResult run_decay_coherent(const ExperimentSpec& spec);
ExperimentResult run_decay_thermal(const ExperimentSpec& spec);
ExperimentResult run_lattice_continuum(const ExperimentSpec& spec);
ExperimentResult run_lattice_waveguides(const ExperimentSpec& spec);

} // namespace opexp::cli
