// Command-line front end. Builds a JSON configuration from the flags and
// drives everything through the C interface.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavesynth.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(ws_status s) {
    switch (s) {
    case WS_OK: return kExitOk;
    case WS_ERR_CONFIG:
    case WS_ERR_DOMAIN: return kExitConfig;
    case WS_ERR_NUMERICAL: return kExitNumerical;
    default: return kExitIo;
    }
}

int report_failure(ws_status s) {
    std::string param = ws_last_error_parameter();
    std::cerr << "error: " << ws_status_name(s) << ": " << ws_last_error();
    if (!param.empty()) std::cerr << " [parameter: " << param << "]";
    std::cerr << '\n';
    return exit_code_for(s);
}

int config_failure(const std::string& parameter, const std::string& message) {
    std::cerr << "error: configuration error: " << message << " [parameter: " << parameter << "]\n";
    return kExitConfig;
}

/// Flag storage for one experiment subcommand. Only flags the user actually
/// passed end up in the JSON configuration; the library fills the rest.
struct ExperimentCommand {
    CLI::App* app = nullptr;
    std::string name;
    std::string out_dir = ".";
    std::string config_path;
    bool strict_repro = false;

    std::map<std::string, double> doubles;
    std::map<std::string, int> ints;
    std::map<std::string, std::vector<int>> int_lists;
    std::map<std::string, std::vector<double>> double_lists;
    std::map<std::string, std::vector<std::string>> string_lists;
    std::uint64_t seed = 0;
    bool bulk = false;

    std::map<std::string, CLI::Option*> options;

    void add_double(const std::string& flag, const std::string& key, const std::string& help) {
        options[key] = app->add_option(flag, doubles[key], help);
    }
    void add_int(const std::string& flag, const std::string& key, const std::string& help) {
        options[key] = app->add_option(flag, ints[key], help);
    }
    void add_int_list(const std::string& flag, const std::string& key, const std::string& help) {
        options[key] = app->add_option(flag, int_lists[key], help)->delimiter(',');
    }
    void add_double_list(const std::string& flag, const std::string& key, const std::string& help) {
        options[key] = app->add_option(flag, double_lists[key], help)->delimiter(',');
    }
    void add_string_list(const std::string& flag, const std::string& key, const std::string& help) {
        options[key] = app->add_option(flag, string_lists[key], help)->delimiter(',');
    }
    void add_seed() { options["seed"] = app->add_option("--seed", seed, "Seed for random draws (default 0)"); }
    void add_bulk() { options["bulk"] = app->add_flag("--bulk", bulk, "Also measure the maximum error on an interior grid"); }

    bool given(const std::string& key) const {
        auto it = options.find(key);
        return it != options.end() && it->second->count() > 0;
    }

    json to_json() const {
        json j = json::object();
        for (const auto& [k, v] : doubles) if (given(k)) j[k] = v;
        for (const auto& [k, v] : ints) if (given(k)) j[k] = v;
        for (const auto& [k, v] : int_lists) if (given(k)) j[k] = v;
        for (const auto& [k, v] : double_lists) if (given(k)) j[k] = v;
        for (const auto& [k, v] : string_lists) if (given(k)) j[k] = v;
        if (given("seed")) j["seed"] = seed;
        if (given("bulk")) j["bulk"] = bulk;
        return j;
    }
};

ExperimentCommand& add_experiment(CLI::App& root, std::vector<std::unique_ptr<ExperimentCommand>>& cmds,
                                  const std::string& name, const std::string& description) {
    cmds.push_back(std::make_unique<ExperimentCommand>());
    auto& c = *cmds.back();
    c.name = name;
    c.app = root.add_subcommand(name, description);
    c.app->add_option("--out-dir,-o", c.out_dir, "Directory for <subcommand>.csv and <subcommand>.config.json");
    c.app->add_option("--config", c.config_path, "Rerun from a JSON sidecar; explicit flags override it");
    c.app->add_flag("--strict-repro", c.strict_repro, "Require --seed for randomized runs");
    return c;
}

void add_solver_flags(ExperimentCommand& c) {
    c.add_double("--kappa", "kappa", "Wavenumber (default 16)");
    c.add_double("--eps", "eps", "SVD truncation threshold (default 1e-14)");
    c.add_double("--oversampling", "oversampling", "Boundary samples per wave, S = oversampling*M (default 2)");
    c.add_int("--S", "S", "Fixed number of boundary samples (overrides --oversampling)");
}

void add_strategy_flags(ExperimentCommand& c) {
    c.add_string_list("--strategy", "strategies", "deterministic, sobol or random; comma-separated for sweeps");
    c.add_seed();
}

std::optional<json> load_config_file(const std::string& path, int& exit_code) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: I/O error: cannot open " << path << '\n';
        exit_code = kExitIo;
        return std::nullopt;
    }
    try {
        json j = json::parse(f);
        if (!j.is_object()) {
            exit_code = config_failure("config", path + " must contain a JSON object");
            return std::nullopt;
        }
        return j;
    } catch (const json::parse_error& e) {
        exit_code = config_failure("config", path + ": " + e.what());
        return std::nullopt;
    }
}

int run_experiment(const ExperimentCommand& c) {
    json cfg = json::object();
    if (!c.config_path.empty()) {
        int code = 0;
        auto loaded = load_config_file(c.config_path, code);
        if (!loaded) return code;
        cfg = *loaded;
    }
    const json flags = c.to_json();
    for (const auto& [k, v] : flags.items()) {
        // A flag replaces whichever spelling the sidecar used for the same field.
        if (k == "M" && cfg.contains("Ms")) cfg.erase("Ms");
        if (k == "P" && cfg.contains("Ps")) cfg.erase("Ps");
        if (k == "kappa" && cfg.contains("kappas")) cfg.erase("kappas");
        cfg[k] = v;
    }
    const std::string text = cfg.dump();

    if (c.strict_repro && !cfg.contains("seed")) {
        int randomized = 0;
        if (ws_status s = ws_experiment_randomized(c.name.c_str(), text.c_str(), &randomized); s != WS_OK) {
            return report_failure(s);
        }
        if (randomized) {
            return config_failure("seed", "--strict-repro requires an explicit --seed for randomized runs");
        }
    }

    ws_table* table = nullptr;
    if (ws_status s = ws_experiment_run(c.name.c_str(), text.c_str(), &table); s != WS_OK) return report_failure(s);
    const ws_status s = ws_table_write(table, c.out_dir.c_str(), c.name.c_str());
    size_t rows = 0;
    ws_table_rows(table, &rows);
    ws_table_destroy(table);
    if (s != WS_OK) return report_failure(s);
    std::cout << "wrote " << c.out_dir << "/" << c.name << ".csv (" << rows << " rows) and " << c.out_dir << "/"
              << c.name << ".config.json\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App root{"Plane-wave approximation of Helmholtz solutions: sampling, solver and experiments"};
    root.require_subcommand(1);
    root.set_version_flag("--version", std::string(ws_version()));

    std::vector<std::unique_ptr<ExperimentCommand>> cmds;

    {
        auto& c = add_experiment(root, cmds, "density", "Tabulate the sampling density and its CDF");
        c.add_double("--kappa", "kappa", "Wavenumber (default 16)");
        c.add_int("--P", "P", "Truncation; N = 2P+1 modes (default 4*kappa)");
    }
    {
        auto& c = add_experiment(root, cmds, "sample", "Draw sampling nodes on the parameter cylinder");
        c.add_double("--kappa", "kappa", "Wavenumber (default 16)");
        c.add_int("--P", "P", "Truncation (default 4*kappa)");
        c.add_int("--M", "M", "Number of nodes (default 4N)");
        add_strategy_flags(c);
    }
    {
        auto& c = add_experiment(root, cmds, "tau-table", "Normalization constants and tau bounds");
        c.add_double("--kappa", "kappa", "Single wavenumber (shorthand for --kappas)");
        c.add_double_list("--kappas", "kappas", "Wavenumbers (default 4,16,64)");
        c.add_double("--p-factor", "p_factor", "Tabulate |p| <= p_factor*kappa (default 16)");
    }
    {
        auto& c = add_experiment(root, cmds, "ppw-instability", "Propagative plane waves on the disk, per mode");
        add_solver_flags(c);
        c.add_int("--M", "M", "Single approximation-set size");
        c.add_int_list("--Ms", "Ms", "Sizes (default 4,8,16,32 times kappa)");
        c.add_int("--p-min", "p_min", "Lowest mode (default 0)");
        c.add_int("--p-max", "p_max", "Highest mode (default 6*kappa)");
    }
    {
        auto& c = add_experiment(root, cmds, "epw-stability", "Evanescent plane waves on the disk, per mode");
        add_solver_flags(c);
        add_strategy_flags(c);
        c.add_int("--P", "P", "Truncation of the sampling density (default 4*kappa)");
        c.add_int("--M", "M", "Single approximation-set size");
        c.add_int_list("--Ms", "Ms", "Sizes (default 4,8,16,32 times kappa)");
        c.add_int("--p-min", "p_min", "Lowest mode (default -P)");
        c.add_int("--p-max", "p_max", "Highest mode (default P)");
    }
    {
        auto& c = add_experiment(root, cmds, "surrogate", "Random solution surrogates on the disk");
        add_solver_flags(c);
        add_strategy_flags(c);
        c.add_int("--P", "P", "Single truncation");
        c.add_int_list("--Ps", "Ps", "Truncations (default 1,2,3,4 times kappa)");
        c.add_double_list("--ratios", "ratios", "M/N ratios (default 1,1.5,2,3,4,5,6)");
        c.add_bulk();
    }
    {
        auto& c = add_experiment(root, cmds, "quasi-opt", "Smallest M reaching a residual target for all |p| <= P");
        add_solver_flags(c);
        add_strategy_flags(c);
        c.add_int("--P", "P", "Single truncation");
        c.add_int_list("--Ps", "Ps", "Truncations (default 1,2,3,4 times kappa)");
        c.add_double("--sigma", "sigma", "Residual target (default 1e-12)");
        c.add_double("--max-factor", "max_factor", "Search cap as a multiple of N (default 64)");
        c.add_double("--resolution", "resolution", "Bisection stop width as a fraction of N (default 0.05)");
    }
    {
        auto& c = add_experiment(root, cmds, "triangle", "Fundamental solutions on a triangle");
        add_solver_flags(c);
        add_strategy_flags(c);
        c.add_int("--M", "M", "Single approximation-set size");
        c.add_int_list("--Ms", "Ms", "Sizes (default 20,40,...,600)");
        c.add_string_list("--sources", "sources", "edge and/or vertex (default both)");
        c.add_string_list("--kinds", "kinds", "ppw and/or epw (default both)");
        c.add_bulk();
    }

    std::string plot_csv, plot_x, plot_y, plot_group, plot_title, plot_out;
    bool plot_logy = false;
    CLI::App* plot = root.add_subcommand("plot", "Render a CSV produced by another subcommand as an SVG chart");
    plot->add_option("csv", plot_csv, "Input CSV")->required();
    plot->add_option("--x", plot_x, "Column for the horizontal axis")->required();
    plot->add_option("--y", plot_y, "Comma-separated columns for the vertical axis")->required();
    plot->add_option("--group", plot_group, "Column that splits rows into series");
    plot->add_flag("--logy", plot_logy, "Logarithmic vertical axis");
    plot->add_option("--title", plot_title, "Chart title");
    plot->add_option("--out", plot_out, "Output SVG (default: input with .svg extension)");

    try {
        root.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return root.exit(e);
    } catch (const CLI::ParseError& e) {
        root.exit(e);
        return kExitConfig;
    }

    if (plot->parsed()) {
        if (plot_out.empty()) {
            plot_out = plot_csv;
            const auto dot = plot_out.rfind('.');
            if (dot != std::string::npos && plot_out.find('/', dot) == std::string::npos) plot_out.resize(dot);
            plot_out += ".svg";
        }
        const ws_status s = ws_plot_svg(plot_csv.c_str(), plot_x.c_str(), plot_y.c_str(), plot_group.c_str(),
                                        plot_logy ? 1 : 0, plot_title.c_str(), plot_out.c_str());
        if (s != WS_OK) return report_failure(s);
        std::cout << "wrote " << plot_out << '\n';
        return kExitOk;
    }
    for (const auto& c : cmds) {
        if (c->app->parsed()) return run_experiment(*c);
    }
    return kExitConfig;
}
