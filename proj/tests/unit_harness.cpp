#include <doctest.h>

#include <sstream>

#include "fransim/harness.hpp"

using namespace fransim;

namespace {
ScenarioConfig mini_config() {
    ScenarioConfig cfg;
    cfg.num_users = 8;
    cfg.num_faps = 2;
    cfg.num_ced2d = 2;
    cfg.num_files = 6;
    cfg.learn_iters = 50;
    cfg.rate_threshold = 0.0;
    cfg.seed = 17;
    return cfg;
}
}  // namespace

TEST_CASE("history generation") {
    const auto cfg = mini_config();
    Rng trng(1);
    const Topology topo = Topology::generate(cfg, trng);
    SUBCASE("produces the requested number of tuples") {
        Rng rng(2);
        const HistoryProfile h = generate_history(topo, cfg, rng, 1000);
        CHECK(h.size() == 1000);
        CHECK(h.channels.size() == h.sides.size());
    }
    SUBCASE("rejects an empty request") {
        Rng rng(2);
        CHECK_THROWS_AS(generate_history(topo, cfg, rng, 0), ConfigError);
    }
    SUBCASE("same seed, same profile") {
        Rng a(3), b(3);
        const HistoryProfile ha = generate_history(topo, cfg, a, 20);
        const HistoryProfile hb = generate_history(topo, cfg, b, 20);
        for (int t = 0; t < 20; ++t) {
            CHECK(ha.sides[t].wants == hb.sides[t].wants);
            CHECK(ha.channels[t].fap_gain == hb.channels[t].fap_gain);
        }
    }
}

TEST_CASE("experiment file parsing") {
    const Experiment e = parse_experiment_text(
        "users = 10\nschemes = clnc-cf, ra-idnc\nrealizations = 3\nsweep = U\n"
        "sweep_values = 10, 12\ncaching = fixed\n");
    CHECK(e.config.num_users == 10);
    CHECK(e.options.schemes == std::vector<std::string>{"clnc-cf", "ra-idnc"});
    CHECK(e.options.realizations == 3);
    CHECK(e.options.sweep_values == std::vector<double>{10.0, 12.0});
    SUBCASE("bad scheme is named") {
        try {
            parse_experiment_text("schemes = warp-drive\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& err) {
            CHECK(err.key == "schemes");
        }
    }
}

TEST_CASE("experiment runs are deterministic and schemes share environments") {
    auto cfg = mini_config();
    ExperimentOptions opts;
    opts.schemes = {"clnc-cf", "ra-idnc", "classical-idnc", "optimal-uncoded"};
    opts.realizations = 6;
    opts.threads = 2;

    const auto rows = run_experiment(cfg, opts);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK(r.realizations == 6);
        CHECK(r.std_sum_rate_bps >= 0.0);
        CHECK(r.mean_cached_files > 0.0);
    }
    SUBCASE("byte-identical CSV on a re-run, independent of threading") {
        ExperimentOptions single = opts;
        single.threads = 1;
        const std::string a = csv_string(rows);
        const std::string b = csv_string(run_experiment(cfg, single));
        CHECK(a == b);
    }
    SUBCASE("single realization reports zero deviation") {
        ExperimentOptions one = opts;
        one.realizations = 1;
        one.schemes = {"clnc-cf"};
        const auto row = run_experiment(cfg, one);
        CHECK(row[0].std_sum_rate_bps == 0.0);
    }
}

TEST_CASE("sweeps label rows with the swept variable") {
    auto cfg = mini_config();
    ExperimentOptions opts;
    opts.schemes = {"clnc-cf"};
    opts.realizations = 4;
    opts.sweep = "U";
    opts.sweep_values = {8, 10};
    const auto rows = run_experiment(cfg, opts);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].sweep_var == "U");
    CHECK(rows[0].sweep_value == 8.0);
    CHECK(rows[1].sweep_value == 10.0);

    SUBCASE("every sweep variable is applied") {
        for (const std::string var : {"F", "gamma", "mu", "C_fh"}) {
            ExperimentOptions o;
            o.schemes = {"classical-idnc"};
            o.realizations = 2;
            o.sweep = var;
            o.sweep_values = var == "F" ? std::vector<double>{4.0}
                             : var == "C_fh" ? std::vector<double>{20e6}
                                             : std::vector<double>{0.4};
            const auto r = run_experiment(cfg, o);
            REQUIRE(r.size() == 1);
            CHECK(r[0].sweep_var == var);
        }
    }
    SUBCASE("malformed numeric values name the key") {
        try {
            parse_experiment_text("realizations = soon\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& err) {
            CHECK(err.key == "realizations");
        }
    }
}

TEST_CASE("csv emission") {
    SUBCASE("no rows still yields the header") {
        std::ostringstream ss;
        emit_csv({}, ss);
        CHECK(ss.str() ==
              "scheme,sweep_var,sweep_value,realizations,mean_sum_rate_bps,std_sum_rate_bps,"
              "mean_served_users,mean_cached_files,mean_switch_passes,mean_power_iterations\n");
    }
    SUBCASE("six significant digits, plain decimal point") {
        MetricsRow r;
        r.scheme = "clnc-cf";
        r.sweep_var = "none";
        r.realizations = 2;
        r.mean_sum_rate_bps = 123456789.0;
        r.std_sum_rate_bps = 0.125;
        std::ostringstream ss;
        emit_csv({r}, ss);
        CHECK(ss.str().find("1.23457e+08") != std::string::npos);
        CHECK(ss.str().find("0.125") != std::string::npos);
        CHECK(format_sig6(2.5) == "2.5");
        CHECK(format_sig6(1234.5678) == "1234.57");
    }
    SUBCASE("fields with commas are quoted") {
        MetricsRow r;
        r.scheme = "a,b";
        std::ostringstream ss;
        emit_csv({r}, ss);
        CHECK(ss.str().find("\"a,b\"") != std::string::npos);
    }
    SUBCASE("round trip of the numeric columns") {
        MetricsRow r;
        r.scheme = "x";
        r.sweep_value = 30.0;
        r.realizations = 7;
        r.mean_sum_rate_bps = 2.5e8;
        const std::string csv = csv_string({r});
        const auto line = csv.substr(csv.find('\n') + 1);
        std::istringstream ss(line);
        std::string field;
        std::getline(ss, field, ',');
        CHECK(field == "x");
        std::getline(ss, field, ',');
        std::getline(ss, field, ',');
        CHECK(std::stod(field) == 30.0);
        std::getline(ss, field, ',');
        CHECK(std::stoi(field) == 7);
        std::getline(ss, field, ',');
        CHECK(std::stod(field) == 2.5e8);
    }
}

TEST_CASE("an rl scheme outperforms the rate-aware baseline end to end" * doctest::timeout(300)) {
    auto cfg = mini_config();
    cfg.num_users = 12;
    cfg.learn_iters = 400;
    cfg.sigma_scale = 2000.0;
    cfg.cache_cost = 0.6;
    cfg.cache_fraction = 1.0;
    ExperimentOptions opts;
    // both schemes run on the learned placement, as in the joint comparison
    opts.schemes = {"clnc-cf-rl", "ra-idnc"};
    opts.caching = "marl";
    opts.realizations = 30;
    const auto rows = run_experiment(cfg, opts);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].scheme == "clnc-cf-rl");
    CHECK(rows[0].mean_sum_rate_bps > rows[1].mean_sum_rate_bps);
    CHECK(rows[0].mean_cached_files == rows[1].mean_cached_files);
}
