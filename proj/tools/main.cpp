// fransim CLI: run experiments, generate history data, train the caching
// learner, validate configuration files.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "fransim/harness.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_path;
};

fransim::Experiment load(const CommonArgs& args) {
    fransim::Experiment e = args.config_path.empty()
                                ? fransim::Experiment{}
                                : fransim::load_experiment_file(args.config_path);
    if (args.seed_set) e.config.seed = args.seed;
    return e;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        std::exit(kExitIo);
    }
    return f;
}

int cmd_run(const CommonArgs& args, const std::vector<std::string>& schemes, int realizations,
            bool dump_graphs, const std::string& dump_path) {
    fransim::Experiment e = load(args);
    if (!schemes.empty()) e.options.schemes = schemes;
    if (realizations > 0) e.options.realizations = realizations;
    e.options.dump_graphs = dump_graphs;
    e.options.dump_path = dump_path.empty() ? "graphs.dot" : dump_path;

    const auto rows = fransim::run_experiment(e.config, e.options);
    if (args.out_path.empty()) {
        fransim::emit_csv(rows, std::cout);
    } else {
        auto f = open_out(args.out_path);
        fransim::emit_csv(rows, f);
        if (!f) return kExitIo;
    }
    return 0;
}

int cmd_history(const CommonArgs& args) {
    fransim::Experiment e = load(args);
    const auto& cfg = e.config;
    fransim::Rng topo_rng = fransim::Rng::derive(cfg.seed, 101);
    const fransim::Topology topo = fransim::Topology::generate(cfg, topo_rng);
    fransim::Rng hist_rng = fransim::Rng::derive(cfg.seed, 102, 0);
    const fransim::HistoryProfile hist =
        fransim::generate_history(topo, cfg, hist_rng, cfg.learn_iters);

    std::ostream* out = &std::cout;
    std::ofstream f;
    if (!args.out_path.empty()) {
        f = open_out(args.out_path);
        out = &f;
    }
    *out << "t,user,wants,fap_gains,d2d_gains\n";
    for (int t = 0; t < hist.size(); ++t) {
        for (int u = 0; u < cfg.num_users; ++u) {
            *out << (t + 1) << ',' << u << ',' << hist.sides[t].wants[u] << ',';
            for (int k = 0; k < cfg.num_faps; ++k)
                *out << (k ? "|" : "") << fransim::format_sig6(hist.channels[t].fap_gain[k][u]);
            *out << ',';
            for (int n = 0; n < cfg.num_ced2d; ++n)
                *out << (n ? "|" : "") << fransim::format_sig6(hist.channels[t].d2d_gain[n][u]);
            *out << '\n';
        }
    }
    return out->good() ? 0 : kExitIo;
}

int cmd_train(const CommonArgs& args, const std::string& cache_out) {
    fransim::Experiment e = load(args);
    const auto& cfg = e.config;
    fransim::Rng topo_rng = fransim::Rng::derive(cfg.seed, 101);
    const fransim::Topology topo = fransim::Topology::generate(cfg, topo_rng);
    fransim::Rng hist_rng = fransim::Rng::derive(cfg.seed, 102, 0);
    const fransim::HistoryProfile hist =
        fransim::generate_history(topo, cfg, hist_rng, cfg.learn_iters);
    fransim::Rng train_rng = fransim::Rng::derive(cfg.seed, 103, 0, 1);
    const fransim::TrainResult result = fransim::train(topo, hist, cfg, train_rng);

    if (args.out_path.empty()) {
        fransim::emit_trace_csv(result.traces, std::cout);
    } else {
        auto f = open_out(args.out_path);
        fransim::emit_trace_csv(result.traces, f);
        if (!f) return kExitIo;
    }
    if (!cache_out.empty()) {
        auto f = open_out(cache_out);
        f << "kind,index,file,cached\n";
        for (int k = 0; k < cfg.num_faps; ++k)
            for (fransim::FileId file = 1; file <= static_cast<fransim::FileId>(cfg.num_files);
                 ++file)
                f << "fap," << k << ',' << file << ',' << (result.cache.fap_has(k, file) ? 1 : 0)
                  << '\n';
        for (int n = 0; n < cfg.num_ced2d; ++n)
            for (fransim::FileId file = 1; file <= static_cast<fransim::FileId>(cfg.num_files);
                 ++file)
                f << "ced2d," << n << ',' << file << ','
                  << (result.cache.ced2d_has(n, file) ? 1 : 0) << '\n';
        if (!f) return kExitIo;
    }
    return 0;
}

int cmd_validate(const CommonArgs& args) {
    fransim::Experiment e = load(args);
    (void)e;
    std::cout << "config ok\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"F-RAN D2D coded-caching delivery simulator"};
    app.require_subcommand(1);

    CommonArgs common;
    std::vector<std::string> schemes;
    int realizations = 0;
    bool dump_graphs = false;
    std::string dump_path;
    std::string cache_out;

    auto add_common = [&](CLI::App* sub, bool with_out = true) {
        sub->add_option("--config", common.config_path, "key=value configuration file");
        sub->add_option("--seed", common.seed, "master seed (overrides config)")
            ->each([&](const std::string&) { common.seed_set = true; });
        if (with_out) sub->add_option("--out", common.out_path, "output CSV path");
    };

    CLI::App* run = app.add_subcommand("run", "run a Monte-Carlo experiment");
    add_common(run);
    run->add_option("--scheme", schemes, "scheme id (repeatable)");
    run->add_option("--realizations", realizations, "realizations per sweep point");
    run->add_flag("--dump-graphs", dump_graphs, "dump conflict graphs (DOT) for realization 0");
    run->add_option("--dump-path", dump_path, "path for the DOT dump");

    CLI::App* history = app.add_subcommand("history", "generate the history profile");
    add_common(history);

    CLI::App* train_cmd = app.add_subcommand("train", "train the caching learner");
    add_common(train_cmd);
    train_cmd->add_option("--cache-out", cache_out, "write the learned cache matrix CSV");

    CLI::App* validate = app.add_subcommand("validate", "check a configuration file");
    add_common(validate, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(common, schemes, realizations, dump_graphs, dump_path);
        if (history->parsed()) return cmd_history(common);
        if (train_cmd->parsed()) return cmd_train(common, cache_out);
        if (validate->parsed()) return cmd_validate(common);
    } catch (const fransim::ConfigError& e) {
        std::cerr << "config error (" << e.key << "): " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
