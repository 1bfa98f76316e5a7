#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "experiments.hpp"
#include "opexp/errors.hpp"
#include "opexp/verify.hpp"
#include "opexp/version.hpp"
#include "output.hpp"

namespace opexp::cli {

namespace {

struct CommonFlags {
    std::string preset;
    std::string out;
    std::string format = "csv";
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::string config;
};

struct ExperimentCommand {
    const ExperimentDef* def = nullptr;
    CLI::App* app = nullptr;
    CommonFlags common;
    std::map<std::string, double> numeric;
    std::map<std::string, std::string> text;
    std::map<std::string, CLI::Option*> flags;
};

struct VerifyCommand {
    CLI::App* app = nullptr;
    std::string suite = "all";
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double v_fault = 0.0;
    std::string out;
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw UsageError("parameter '" + key + "': '" + text + "' is not a number");
    }
    return v;
}

// key=value lines; '#' starts a comment.
void apply_config(const std::string& path, const ExperimentDef& def, ExperimentSpec& spec)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path);
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        bool known = false;
        for (const auto& p : def.params) {
            if (p.name == key) {
                spec.parameters[key] = parse_number(key, value);
                known = true;
            }
        }
        for (const auto& p : def.text_params) {
            if (p.name == key) {
                spec.options[key] = value;
                known = true;
            }
        }
        if (!known) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": unknown parameter '" + key + "'");
        }
    }
}

void add_common(CLI::App* app, CommonFlags& c, const ExperimentDef& def)
{
    std::vector<std::string> presets;
    for (const auto& [name, _] : def.presets) {
        presets.push_back(name);
    }
    app->add_option("--preset", c.preset, "named parameter set")->check(CLI::IsMember(presets));
    app->add_option("--out", c.out, "output file (relative paths resolve under OPEXP_OUT_DIR)");
    app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--threads", c.threads, "worker threads for sweeps")->check(CLI::Range(1u, 256u));
    app->add_option("--seed", c.seed, "seed recorded in the manifest");
    app->add_option("--config", c.config, "key=value file merged under command-line flags");
}

int run_experiment(ExperimentCommand& cmd, std::ostream& out)
{
    const ExperimentDef& def = *cmd.def;
    ExperimentSpec spec = base_spec(def, cmd.common.preset);
    if (!cmd.common.config.empty()) {
        apply_config(cmd.common.config, def, spec);
    }
    for (const auto& [name, opt] : cmd.flags) {
        if (opt->count() == 0) {
            continue;
        }
        if (cmd.numeric.contains(name)) {
            spec.parameters[name] = cmd.numeric[name];
        } else {
            spec.options[name] = cmd.text[name];
        }
    }
    spec.format = cmd.common.format == "json" ? Format::Json : Format::Csv;
    spec.threads = cmd.common.threads;
    spec.seed = cmd.common.seed;
    const std::string stem = spec.preset.empty() ? def.name : def.name + "-" + spec.preset;
    spec.output_path = resolve_output_path(cmd.common.out, stem, spec.format);
    validate(spec, def);

    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult result = def.run(spec);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    RunManifest manifest{spec, kVersion, elapsed.count(), result.tolerance_report};
    const std::string data = spec.format == Format::Json ? render_json(result.table, manifest)
                                                         : render_csv(result.table);
    write_atomic(spec.output_path, data);
    write_atomic(sidecar_manifest_path(spec.output_path), manifest_full(manifest).dump(1) + "\n");

    out << "wrote " << spec.output_path.string() << " (" << result.table.rows.size() << " rows, "
        << format_double(elapsed.count()) << " s)\n";
    for (const auto& [k, v] : result.tolerance_report) {
        out << "  " << k << " = " << format_double(v) << "\n";
    }
    return kExitOk;
}

int run_verify(const VerifyCommand& cmd, std::ostream& out)
{
    VerifyOptions opts;
    opts.seed = cmd.seed;
    opts.threads = cmd.threads;
    opts.v_perturbation = cmd.v_fault;

    const auto start = std::chrono::steady_clock::now();
    const std::vector<SuiteReport> reports = run_verification(cmd.suite, opts);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    bool all_passed = true;
    nlohmann::ordered_json j;
    j["tool"] = "opexp";
    j["tool_version"] = kVersion;
    j["suite"] = cmd.suite;
    j["seed"] = cmd.seed;
    j["v_perturbation"] = cmd.v_fault;
    j["suites"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json s;
        s["suite"] = r.suite;
        s["passed"] = r.passed();
        s["properties"] = nlohmann::ordered_json::array();
        for (const auto& p : r.properties) {
            s["properties"].push_back({{"name", p.name},
                                       {"max_deviation", p.max_deviation},
                                       {"tolerance", p.tolerance},
                                       {"cases", p.cases},
                                       {"passed", p.passed()}});
        }
        all_passed = all_passed && r.passed();
        j["suites"].push_back(s);
    }
    j["passed"] = all_passed;
    const std::string text = j.dump(1) + "\n";

    if (cmd.out.empty()) {
        out << text;
    } else {
        const auto path = resolve_output_path(cmd.out, "verify", Format::Json);
        write_atomic(path, text);
        for (const auto& r : reports) {
            for (const auto& p : r.properties) {
                out << (p.passed() ? "PASS " : "FAIL ") << r.suite << "/" << p.name
                    << " max_deviation=" << format_double(p.max_deviation)
                    << " tolerance=" << format_double(p.tolerance) << "\n";
            }
        }
        out << "wrote " << path.string() << " (" << format_double(elapsed.count()) << " s)\n";
    }
    return all_passed ? kExitOk : kExitPropertyFailure;
}

void print_list(std::ostream& out)
{
    for (const auto& def : registry()) {
        out << def.name << ": " << def.help << "\n  presets:";
        for (const auto& [name, _] : def.presets) {
            out << " " << name;
        }
        out << "\n  parameters:";
        for (const auto& p : def.params) {
            out << " " << p.name << "=" << format_double(p.default_value);
        }
        for (const auto& p : def.text_params) {
            out << " " << p.name << "=" << p.default_value;
        }
        out << "\n";
    }
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Operator-exponential toolbox: decay and lattice experiments, verification suites",
                 "opexp"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::vector<std::unique_ptr<ExperimentCommand>> commands;
    for (const auto& def : registry()) {
        auto cmd = std::make_unique<ExperimentCommand>();
        cmd->def = &def;
        cmd->app = app.add_subcommand(def.name, def.help);
        add_common(cmd->app, cmd->common, def);
        for (const auto& p : def.params) {
            cmd->flags[p.name] = cmd->app->add_option("--" + p.name, cmd->numeric[p.name], p.help);
        }
        for (const auto& p : def.text_params) {
            cmd->flags[p.name] = cmd->app->add_option("--" + p.name, cmd->text[p.name], p.help)
                                     ->check(CLI::IsMember(p.choices));
        }
        commands.push_back(std::move(cmd));
    }

    VerifyCommand verify;
    verify.app = app.add_subcommand("verify", "Run the property suites and report max deviations");
    verify.app->add_option("--suite", verify.suite, "identities, lindblad, lattice or all")
        ->check(CLI::IsMember(verification_suites()));
    verify.app->add_option("--seed", verify.seed, "seed for the random instances");
    verify.app->add_option("--threads", verify.threads, "worker threads")->check(CLI::Range(1u, 256u));
    verify.app->add_option("--inject-v-fault", verify.v_fault,
                           "add this value to every entry of the jump operator");
    verify.app->add_option("--out", verify.out, "write the JSON report here instead of stdout");

    CLI::App* list = app.add_subcommand("list", "List experiments, presets and parameters");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
        if (list->parsed()) {
            print_list(out);
            return kExitOk;
        }
        if (verify.app->parsed()) {
            return run_verify(verify, out);
        }
        for (auto& cmd : commands) {
            if (cmd->app->parsed()) {
                return run_experiment(*cmd, out);
            }
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace opexp::cli
