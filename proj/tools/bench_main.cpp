// Benchmark driver: seeded random sub-matrix multiplication trials over the
// tiled Z-order layout, comparing the default and the cache-oblivious
// kernel on identical inputs and reporting per-trial counters as CSV.
//
// Exit status: 0 on success, 1 on a correctness mismatch or runtime
// failure, 2 on a usage error.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <mh/mh.hpp>

int main(int argc, char** argv) {
    CLI::App app{"random sub-matrix multiplication trials over the tiled Z-order layout"};

    std::uint64_t n = 512, t = 32, seed = 0;
    std::uint32_t q = 2, trials = 20;
    std::string algo = "both";
    std::string csv_path;
    std::string aggregate_path;

    app.add_option("--n", n, "matrix side length, must be t * 2^m")->capture_default_str();
    app.add_option("--t", t, "tile side length")->capture_default_str();
    app.add_option("--q", q, "field modulus (prime)")->capture_default_str();
    app.add_option("--seed", seed, "random seed")->capture_default_str();
    app.add_option("--trials", trials, "number of trials")->capture_default_str();
    app.add_option("--algo", algo, "kernel(s) to run")
        ->check(CLI::IsMember({"default", "oblivious", "both"}))
        ->capture_default_str();
    app.add_option("--csv", csv_path, "per-trial records output path")->required();
    app.add_option("--aggregate", aggregate_path,
                   "bucketed summary output path (requires --algo both)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    mh::Config cfg;
    cfg.n = n;
    cfg.t = t;
    cfg.q = q;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.algo = algo == "default" ? mh::Algo::Default
               : algo == "oblivious" ? mh::Algo::Oblivious
                                     : mh::Algo::Both;
    try {
        mh::check_config(cfg);
        if (!aggregate_path.empty() && cfg.algo != mh::Algo::Both)
            throw std::invalid_argument("--aggregate requires --algo both");
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        const auto records = mh::run_trials(cfg);
        mh::write_trials_csv(records, csv_path);
        if (!aggregate_path.empty())
            mh::write_aggregate_csv(mh::aggregate(records), aggregate_path);
        std::cout << "ok: " << records.size() << " trials, n=" << cfg.n << " t=" << cfg.t
                  << " q=" << cfg.q << " seed=" << cfg.seed << " algo=" << algo
                  << " csv=" << csv_path;
        if (!aggregate_path.empty()) std::cout << " aggregate=" << aggregate_path;
        std::cout << '\n';
        return 0;
    } catch (const mh::MismatchError& e) {
        std::cerr << "correctness failure: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
