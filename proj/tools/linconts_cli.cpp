// Experiment CLI: seeded multi-run simulations, bound reports, and
// synthetic instance generation.
//
// Exit codes: 0 success, 1 configuration error, 2 infeasible or degenerate
// instance, 3 I/O failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "linconts/experiment.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string instance_path;
    std::string synthetic_kind;
    int n = 50;
    double eta = -1.0;  // <0 means: use the instance/synthetic default
    long horizon = 50000;
    int runs = 16;
    std::uint64_t seed = 0;
    std::vector<std::string> algos;
    double klucb_c = 0.0;
    double gamma = 0.5;
    std::string out_dir = ".";
    int jobs = 1;
    int grid_points = 200;
};

void add_instance_flags(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path,
                    "Flat key=value config file; CLI flags win");
    cmd->add_option("--instance", opts.instance_path, "Arm CSV file (arm_id,mu,r)");
    cmd->add_option("--synthetic", opts.synthetic_kind, "Synthetic instance kind")
        ->check(CLI::IsMember({"coupon", "edx"}));
    cmd->add_option("--n", opts.n, "Number of synthetic arms");
    cmd->add_option("--eta", opts.eta, "Constraint threshold override");
    cmd->add_option("--seed", opts.seed, "Base seed");
}

// Apply config-file values for every flag the user did not pass on the
// command line. Keys are the long flag names without the leading dashes.
void merge_config_file(CLI::App* cmd, CommonOpts& opts) {
    if (opts.config_path.empty()) return;
    std::ifstream in(opts.config_path);
    if (!in) throw CLI::ValidationError("cannot open config file " + opts.config_path);

    auto given = [&](const std::string& flag) {
        const auto* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("config line " + std::to_string(lineno) +
                                       ": expected key=value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "instance" && !given("--instance")) opts.instance_path = value;
        else if (key == "synthetic" && !given("--synthetic")) opts.synthetic_kind = value;
        else if (key == "n" && !given("--n")) opts.n = std::stoi(value);
        else if (key == "eta" && !given("--eta")) opts.eta = std::stod(value);
        else if (key == "horizon" && !given("--horizon")) opts.horizon = std::stol(value);
        else if (key == "runs" && !given("--runs")) opts.runs = std::stoi(value);
        else if (key == "seed" && !given("--seed")) opts.seed = std::stoull(value);
        else if (key == "klucb-c" && !given("--klucb-c")) opts.klucb_c = std::stod(value);
        else if (key == "gamma" && !given("--gamma")) opts.gamma = std::stod(value);
        else if (key == "out" && !given("--out")) opts.out_dir = value;
        else if (key == "jobs" && !given("--jobs")) opts.jobs = std::stoi(value);
        else if (key == "grid-points" && !given("--grid-points"))
            opts.grid_points = std::stoi(value);
        else if (key == "algo" && !given("--algo")) {
            opts.algos.clear();
            std::stringstream ss(value);
            std::string a;
            while (std::getline(ss, a, ',')) opts.algos.push_back(trim(a));
        } else if (key != "instance" && key != "synthetic" && key != "n" &&
                   key != "eta" && key != "horizon" && key != "runs" && key != "seed" &&
                   key != "klucb-c" && key != "gamma" && key != "out" && key != "jobs" &&
                   key != "grid-points" && key != "algo") {
            throw CLI::ValidationError("config line " + std::to_string(lineno) +
                                       ": unknown key '" + key + "'");
        }
    }
}

linconts::ExperimentConfig to_config(const CommonOpts& opts) {
    linconts::ExperimentConfig config;
    if (!opts.instance_path.empty()) {
        config.instance_csv = opts.instance_path;
        if (opts.eta < 0.0)
            throw CLI::ValidationError("--eta is required with --instance");
    } else if (!opts.synthetic_kind.empty()) {
        config.synthetic = linconts::SyntheticSpec{opts.synthetic_kind, opts.n, opts.seed};
    } else {
        throw CLI::ValidationError("one of --instance or --synthetic is required");
    }
    if (opts.eta >= 0.0) config.eta = opts.eta;
    config.horizon = opts.horizon;
    config.runs = opts.runs;
    config.base_seed = opts.seed;
    config.klucb_c = opts.klucb_c;
    config.gamma = opts.gamma;
    config.output_dir = opts.out_dir;
    config.jobs = opts.jobs;
    config.grid_points = opts.grid_points;
    if (!opts.algos.empty()) {
        config.algorithms.clear();
        for (const auto& a : opts.algos)
            config.algorithms.push_back(a == "linconts" ? linconts::Policy::LinConTS
                                                        : linconts::Policy::LinConKLUCB);
    }
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained-bandit experiment runner (LinConTS / LinCon-KL-UCB)"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* run = app.add_subcommand("run", "Run seeded experiments and write metrics");
    add_instance_flags(run, opts);
    run->add_option("--horizon", opts.horizon, "Rounds per run");
    run->add_option("--runs", opts.runs, "Number of runs per algorithm");
    run->add_option("--algo", opts.algos, "Algorithms to run (repeatable)")
        ->check(CLI::IsMember({"linconts", "linconklucb"}));
    run->add_option("--klucb-c", opts.klucb_c, "KL-UCB c parameter");
    run->add_option("--gamma", opts.gamma, "Gamma for the bound report");
    run->add_option("--out", opts.out_dir, "Output directory");
    run->add_option("--jobs", opts.jobs, "Parallel runs");
    run->add_option("--grid-points", opts.grid_points, "Metric grid size");

    auto* bounds = app.add_subcommand("bounds", "Emit the bound report (no simulation)");
    add_instance_flags(bounds, opts);
    bounds->add_option("--horizon", opts.horizon, "T for the bound evaluation");
    bounds->add_option("--gamma", opts.gamma, "Gamma in (0, 1]");
    bounds->add_option("--out", opts.out_dir, "Output directory (writes summary.json)");

    auto* gen = app.add_subcommand("gen", "Write a synthetic instance to CSV");
    gen->add_option("--synthetic", opts.synthetic_kind, "Synthetic instance kind")
        ->required()
        ->check(CLI::IsMember({"coupon", "edx"}));
    gen->add_option("--n", opts.n, "Number of arms");
    gen->add_option("--seed", opts.seed, "Generator seed");
    gen->add_option("--out", opts.out_dir, "Output CSV path");

    try {
        app.parse(argc, argv);
        merge_config_file(run->parsed() ? run : bounds, opts);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (gen->parsed()) {
            linconts::Rng rng(opts.seed);
            linconts::BanditInstance instance =
                opts.synthetic_kind == "coupon" ? linconts::synth_coupon_like(opts.n, rng)
                                                : linconts::synth_edx_like(opts.n, rng);
            const std::string path =
                opts.out_dir == "." ? opts.synthetic_kind + "_instance.csv" : opts.out_dir;
            linconts::write_arms_csv(path, instance);
            std::cout << "wrote " << path << " (" << instance.num_arms() << " arms)\n";
            return 0;
        }

        const linconts::ExperimentConfig config = to_config(opts);
        if (bounds->parsed()) {
            const auto report = linconts::report_bounds(config);
            std::filesystem::create_directories(config.output_dir);
            const auto path = std::filesystem::path(config.output_dir) / "summary.json";
            std::ofstream out(path);
            if (!out) throw linconts::io_error("cannot write " + path.string());
            out << report.dump(2) << '\n';
            std::cout << report.dump(2) << '\n';
            return 0;
        }

        const auto result = linconts::run_experiment(config);
        std::cout << "instance: " << result.instance.name << " ("
                  << result.instance.num_arms() << " arms, eta = "
                  << result.instance.eta << ")\n";
        std::cout << result.files_written.size() << " files written to "
                  << config.output_dir << '\n';
        return 0;
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const linconts::infeasible_instance_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const linconts::degeneracy_error& e) {
        std::cerr << "error: degenerate instance: " << e.what() << '\n';
        return 2;
    } catch (const linconts::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const linconts::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
