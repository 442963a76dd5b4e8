// simlab: Monte Carlo sweeps, closed-form rate tables and exact small-instance
// probabilities for the superposed-codebook side-information codecs, emitted
// as CSV. One subcommand per mode; parameters come from a JSON spec file
// and/or inline flags (inline wins). Re-running an identical spec with the
// same seed reproduces the output byte for byte at any --threads value.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wzsup/experiment.hpp"

namespace {

struct CliOptions {
    std::string spec_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t trials = 0;
    bool trials_set = false;
    int threads = 0;
    bool threads_set = false;
    std::map<std::string, std::string> grid_flags;  // raw comma-separated lists
    std::string g0, g1;
    int k0 = 0, k1 = 0;
};

std::vector<double> parse_value_list(const std::string& text, const std::string& key) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) throw std::invalid_argument("empty value in list for '" + key + "'");
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + tok + "' for '" + key + "'");
        }
        if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "' for '" + key + "'");
        values.push_back(v);
    }
    if (values.empty()) throw std::invalid_argument("empty value list for '" + key + "'");
    return values;
}

// A sweep missing a required parameter should fail here with one diagnostic,
// not produce a file of identical error rows; unknown keys (possible only via
// the JSON grid, since flags are fixed per subcommand) are typos worth rejecting.
void validate_grid_keys(const std::string& mode,
                        const std::map<std::string, std::vector<double>>& grid) {
    using KeySet = std::set<std::string>;
    static const std::map<std::string, std::pair<KeySet, KeySet>> keys = {
        {"rates", {{"p", "d"}, {"l", "q"}}},
        {"wz", {{"n", "p", "d", "r0", "r1"}, {"l", "q"}}},
        {"oracle", {{"n", "p", "d", "r0", "r1"}, {"l", "q"}}},
        {"wz-gaussian", {{"n", "d", "q", "r0", "r1"}, {"py", "pz", "p0", "slack"}}},
        {"dpc", {{"n", "p", "w", "r0", "r1"}, {"q"}}},
        {"tcq", {{"n", "p"}, {"d"}}},
    };
    const auto& [required, optional] = keys.at(mode);
    for (const std::string& key : required)
        if (grid.find(key) == grid.end())
            throw std::runtime_error(mode + " needs parameter '" + key + "'");
    for (const auto& [key, values] : grid)
        if (required.find(key) == required.end() && optional.find(key) == optional.end())
            throw std::runtime_error("unknown parameter '" + key + "' for " + mode);
}

wzsup::ExperimentSpec load_spec(const std::string& mode, const CliOptions& cli) {
    wzsup::ExperimentSpec spec;
    spec.mode = mode;

    if (!cli.spec_path.empty()) {
        std::ifstream in(cli.spec_path);
        if (!in) throw std::runtime_error("cannot open spec file '" + cli.spec_path + "'");
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& ex) {
            throw std::runtime_error("spec file '" + cli.spec_path + "': " + ex.what());
        }
        if (doc.contains("mode") && doc["mode"].get<std::string>() != mode)
            throw std::runtime_error("spec file mode '" + doc["mode"].get<std::string>() +
                                     "' does not match subcommand '" + mode + "'");
        if (doc.contains("grid")) {
            for (const auto& [key, value] : doc["grid"].items()) {
                std::vector<double>& axis = spec.grid[key];
                if (value.is_array())
                    for (const auto& v : value) axis.push_back(v.get<double>());
                else
                    axis.push_back(value.get<double>());
            }
        }
        if (doc.contains("trials")) spec.trials = doc["trials"].get<std::uint64_t>();
        if (doc.contains("seed")) spec.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("threads")) spec.threads = doc["threads"].get<int>();
        if (doc.contains("g0")) spec.g0 = doc["g0"].get<std::string>();
        if (doc.contains("k0")) spec.k0 = doc["k0"].get<int>();
        if (doc.contains("g1")) spec.g1 = doc["g1"].get<std::string>();
        if (doc.contains("k1")) spec.k1 = doc["k1"].get<int>();
    }

    for (const auto& [key, text] : cli.grid_flags) spec.grid[key] = parse_value_list(text, key);
    if (cli.seed_set) spec.seed = cli.seed;
    if (cli.trials_set) spec.trials = cli.trials;
    if (cli.threads_set) spec.threads = cli.threads;
    if (!cli.g0.empty()) spec.g0 = cli.g0;
    if (cli.k0 > 0) spec.k0 = cli.k0;
    if (!cli.g1.empty()) spec.g1 = cli.g1;
    if (cli.k1 > 0) spec.k1 = cli.k1;
    if (spec.threads < 1) spec.threads = 1;
    validate_grid_keys(mode, spec.grid);
    return spec;
}

void run_mode(const std::string& mode, const CliOptions& cli) {
    const wzsup::ExperimentSpec spec = load_spec(mode, cli);
    const auto started = std::chrono::steady_clock::now();
    const std::vector<wzsup::SummaryRow> rows = wzsup::run_experiment(spec);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    if (cli.out_path.empty()) {
        wzsup::write_csv(rows, std::cout);
    } else {
        std::ofstream out(cli.out_path, std::ios::binary);  // '\n' forever, everywhere
        if (!out) throw std::runtime_error("cannot open output file '" + cli.out_path + "'");
        wzsup::write_csv(rows, out);
    }
    std::cerr << "simlab " << mode << ": " << rows.size() << " grid point(s) in " << elapsed << " s\n";
}

void add_grid_flag(CLI::App* cmd, CliOptions& cli, const std::string& key, const std::string& help) {
    cmd->add_option_function<std::string>(
        "--" + key, [&cli, key](const std::string& text) { cli.grid_flags[key] = text; }, help);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superposition-coding simulator and rate calculator"};
    app.require_subcommand(1);
    CliOptions cli;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--spec", cli.spec_path, "JSON spec file");
        cmd->add_option("--out", cli.out_path, "output CSV path (default: stdout)");
        cmd->add_option("--seed", cli.seed, "master seed")->each([&](const std::string&) { cli.seed_set = true; });
        cmd->add_option("--trials", cli.trials, "Monte Carlo trials per grid point")->each([&](const std::string&) {
            cli.trials_set = true;
        });
        cmd->add_option("--threads", cli.threads, "worker threads")->each([&](const std::string&) {
            cli.threads_set = true;
        });
        return cmd;
    };

    CLI::App* rates = add_common(app.add_subcommand("rates", "rate-region boundary table"));
    add_grid_flag(rates, cli, "l", "bits per symbol (default 1)");
    add_grid_flag(rates, cli, "p", "correlation flip probability");
    add_grid_flag(rates, cli, "q", "C1 law flip probability; negative = uniform (default)");
    add_grid_flag(rates, cli, "d", "target distortion");

    const auto add_wz_flags = [&](CLI::App* cmd) {
        add_grid_flag(cmd, cli, "l", "bits per symbol (default 1)");
        add_grid_flag(cmd, cli, "n", "block length");
        add_grid_flag(cmd, cli, "p", "correlation flip probability");
        add_grid_flag(cmd, cli, "q", "C1 law flip probability; negative = uniform (default)");
        add_grid_flag(cmd, cli, "d", "target distortion");
        add_grid_flag(cmd, cli, "r0", "C0 rate, bits/symbol");
        add_grid_flag(cmd, cli, "r1", "C1 rate, bits/symbol");
    };
    CLI::App* wz = add_common(app.add_subcommand("wz", "discrete codec Monte Carlo"));
    add_wz_flags(wz);
    CLI::App* oracle = add_common(app.add_subcommand("oracle", "exact small-instance probabilities"));
    add_wz_flags(oracle);

    CLI::App* wzg = add_common(app.add_subcommand("wz-gaussian", "dithered Gaussian codec Monte Carlo"));
    add_grid_flag(wzg, cli, "n", "block length");
    add_grid_flag(wzg, cli, "py", "side-information power (default 1)");
    add_grid_flag(wzg, cli, "pz", "correlation noise power (default 1)");
    add_grid_flag(wzg, cli, "d", "target distortion");
    add_grid_flag(wzg, cli, "q", "C1 variance Q");
    add_grid_flag(wzg, cli, "p0", "C0 variance; 0 = P_Z + Q (default)");
    add_grid_flag(wzg, cli, "r0", "C0 rate, bits/symbol");
    add_grid_flag(wzg, cli, "r1", "C1 rate, bits/symbol");
    add_grid_flag(wzg, cli, "slack", "encoder-error slack factor (default 0.25)");

    CLI::App* dpc = add_common(app.add_subcommand("dpc", "binary dirty-paper Monte Carlo"));
    add_grid_flag(dpc, cli, "n", "block length");
    add_grid_flag(dpc, cli, "p", "channel crossover probability");
    add_grid_flag(dpc, cli, "w", "cost constraint W");
    add_grid_flag(dpc, cli, "q", "C1 bias; negative = (W-p)/(1-2p) (default)");
    add_grid_flag(dpc, cli, "r0", "C0 rate, bits/symbol");
    add_grid_flag(dpc, cli, "r1", "C1 rate, bits/symbol");

    CLI::App* tcq = add_common(app.add_subcommand("tcq", "trellis pipeline Monte Carlo"));
    add_grid_flag(tcq, cli, "n", "block length (must fit both trellises)");
    add_grid_flag(tcq, cli, "p", "correlation flip probability");
    add_grid_flag(tcq, cli, "d", "encoder-error distortion threshold (default 1 = never)");
    tcq->add_option("--g0", cli.g0, "C0 generators, octal CSV (e.g. 133,171)");
    tcq->add_option("--k0", cli.k0, "C0 constraint length");
    tcq->add_option("--g1", cli.g1, "C1 generators, octal CSV");
    tcq->add_option("--k1", cli.k1, "C1 constraint length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);  // full usage text; help is not a diagnostic
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        std::cerr << "simlab: " << ex.what() << '\n';
        return 1;
    }

    try {
        run_mode(app.get_subcommands().front()->get_name(), cli);
    } catch (const std::exception& ex) {
        std::cerr << "simlab: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
