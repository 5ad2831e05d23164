#include <filesystem>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "dnlslab/harness.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::vector<std::string> overrides;
    std::string out = "out";
};

int run_one(const std::string& experiment, const CommonArgs& args) {
    try {
        dnlslab::ExperimentConfig cfg =
            dnlslab::load_config(experiment, args.config, args.overrides);
        dnlslab::RunArtifact art = dnlslab::run_experiment(cfg);
        dnlslab::emit_report(art, args.out);
        return dnlslab::criteria_exit_code(art);
    } catch (const dnlslab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}

int run_sweep(const std::string& experiment, const std::vector<std::string>& configs,
              const std::vector<std::string>& overrides, const std::string& out,
              unsigned jobs) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    std::vector<int> codes(configs.size(), 3);
    std::mutex log_mutex;
    std::size_t next = 0;
    std::mutex next_mutex;
    auto worker = [&]() {
        for (;;) {
            std::size_t i;
            {
                std::lock_guard lock(next_mutex);
                if (next >= configs.size()) return;
                i = next++;
            }
            CommonArgs args;
            args.config = configs[i];
            args.overrides = overrides;
            args.out = (std::filesystem::path(out) /
                        std::filesystem::path(configs[i]).stem())
                           .string();
            int code = run_one(experiment, args);
            std::lock_guard lock(log_mutex);
            codes[i] = code;
            std::cout << configs[i] << ": exit " << code << "\n";
        }
    };
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < std::min<std::size_t>(jobs, configs.size()); ++j)
        pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    int worst = 0;
    for (int c : codes) worst = std::max(worst, c);
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"damped-NLS pseudospectral simulation and verification lab"};
    app.require_subcommand(1);

    const std::vector<std::string> experiments = {"simulate",      "scatter-rate",
                                                  "sdge-check",    "modspace-demo",
                                                  "mdfm-check",    "elemlem-check"};
    CommonArgs args;
    std::string chosen;
    for (const auto& name : experiments) {
        auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
        sub->add_option("--config", args.config, "JSON config file");
        sub->add_option("--set", args.overrides, "dotted-path override, key=value");
        sub->add_option("--out", args.out, "output directory");
        sub->callback([&chosen, name]() { chosen = name; });
    }

    std::string sweep_experiment;
    std::vector<std::string> sweep_configs;
    std::vector<std::string> sweep_overrides;
    std::string sweep_out = "out";
    unsigned sweep_jobs = 0;
    auto* sweep = app.add_subcommand("sweep", "run one experiment over many configs");
    sweep->add_option("--experiment", sweep_experiment, "experiment name")->required();
    sweep->add_option("--configs", sweep_configs, "JSON config files")->required();
    sweep->add_option("--set", sweep_overrides, "override applied to every config");
    sweep->add_option("--out", sweep_out, "parent output directory");
    sweep->add_option("--jobs", sweep_jobs, "worker count (0 = hardware)");
    sweep->callback([&chosen]() { chosen = "sweep"; });

    CLI11_PARSE(app, argc, argv);

    if (chosen == "sweep")
        return run_sweep(sweep_experiment, sweep_configs, sweep_overrides, sweep_out,
                         sweep_jobs);
    return run_one(chosen, args);
}
