#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "mh/multiply.hpp"

namespace mh {

// Experiment protocol: draw random matrices and random view triples, run
// the default and the cache-oblivious kernel on identical inputs, check the
// outputs against each other, and bucket the results by the relative change
// in base-case call counts. Everything except wall time is reproducible
// from the seed.

enum class Algo { Default, Oblivious, Both };

struct Config {
    std::uint64_t n = 512;
    std::uint64_t t = 32;
    std::uint32_t q = 2;
    std::uint64_t seed = 0;
    std::uint32_t trials = 20;
    Algo algo = Algo::Both;
};

inline void check_config(const Config& cfg) {
    Layout probe(cfg.n, cfg.t); // throws on bad shape
    Modulus mod(cfg.q);         // throws on bad modulus
    (void)probe;
    (void)mod;
    if (cfg.trials == 0) throw std::invalid_argument("config: trials must be >= 1");
}

/// Seeded generator with a portable uniform mapping; the draw sequence is
/// part of the reproducibility contract.
struct Rng {
    std::mt19937_64 eng;

    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::uint64_t next() { return eng(); }
    std::uint64_t below(std::uint64_t k) {
        return std::uint64_t((unsigned __int128)(next())*k >> 64);
    }
};

/// Three fresh random containers plus the view triple to multiply.
struct Instance {
    std::unique_ptr<Matrix> a, b, c;
    Sub sa, sb, sc;
    bool aligned_draw = false;

    Problem problem() const { return {sa, sb, sc}; }
};

/// One draw in eight is tile-aligned so the workload always exercises the
/// no-overhead case and the call-count buckets include a zero row.
inline constexpr std::uint64_t kAlignedDrawOneIn = 8;

/// Draw one instance. Order of draws: mode, dims (r, k, c), corners
/// (A, B, C), then the three cell fills in flat order. Uniform mode draws
/// dims in [1, n] and corners uniformly in bounds; aligned mode draws dims
/// 2^e * t and corners on tile boundaries.
inline Instance gen_problem(const Config& cfg, Rng& rng) {
    const Layout lay(cfg.n, cfg.t);
    const Modulus mod(cfg.q);

    const bool aligned = rng.below(kAlignedDrawOneIn) == 0;
    std::uint64_t r, k, c, ia, ja, ib, jb, ic, jc;
    if (aligned) {
        const std::uint64_t exps = lay.grid_log2 + 1;
        r = lay.t << rng.below(exps);
        k = lay.t << rng.below(exps);
        c = lay.t << rng.below(exps);
        auto corner = [&](std::uint64_t extent) {
            return lay.t * rng.below((lay.n - extent) / lay.t + 1);
        };
        ia = corner(r), ja = corner(c);
        ib = corner(r), jb = corner(k);
        ic = corner(k), jc = corner(c);
    } else {
        r = 1 + rng.below(lay.n);
        k = 1 + rng.below(lay.n);
        c = 1 + rng.below(lay.n);
        ia = rng.below(lay.n - r + 1), ja = rng.below(lay.n - c + 1);
        ib = rng.below(lay.n - r + 1), jb = rng.below(lay.n - k + 1);
        ic = rng.below(lay.n - k + 1), jc = rng.below(lay.n - c + 1);
    }

    Instance inst;
    inst.a = std::make_unique<Matrix>(lay, mod);
    inst.b = std::make_unique<Matrix>(lay, mod);
    inst.c = std::make_unique<Matrix>(lay, mod);
    for (Matrix* m : {inst.a.get(), inst.b.get(), inst.c.get()})
        for (Index z = 0; z < lay.total; ++z)
            (*m)[z] = Fp{std::uint32_t(rng.below(mod.q))};

    inst.sa = Sub{inst.a.get(), encode(lay, ia, ja), r, c};
    inst.sb = Sub{inst.b.get(), encode(lay, ib, jb), r, k};
    inst.sc = Sub{inst.c.get(), encode(lay, ic, jc), k, c};
    inst.aligned_draw = aligned;
    return inst;
}

struct Trial {
    std::uint64_t index = 0;
    Index sigma_a = 0, sigma_b = 0, sigma_c = 0;
    std::uint64_t rows = 0, cols = 0, inner = 0;
    Counters def_ctr, obl_ctr;
    std::uint64_t time_def_ns = 0, time_obl_ns = 0;
    bool has_def = false, has_obl = false;
};

/// Raised when the two kernels disagree on a trial; this is a correctness
/// regression, never a tolerable outcome.
struct MismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

/// Warm-up once, then report the median of three timed repetitions. The
/// output container is restored before every run since kernels accumulate.
template <typename Kernel>
std::uint64_t measure(Kernel kernel, const Problem& prob, Matrix& out,
                      const std::vector<Fp>& pristine, Counters& ctr,
                      std::vector<Fp>& result) {
    using clock = std::chrono::steady_clock;
    out.cells() = pristine;
    ctr = kernel(prob); // counters are deterministic, take them from the warm-up
    result = out.cells();
    std::uint64_t reps[3];
    for (auto& ns : reps) {
        out.cells() = pristine;
        const auto t0 = clock::now();
        kernel(prob);
        const auto t1 = clock::now();
        ns = std::uint64_t(std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
    }
    std::sort(std::begin(reps), std::end(reps));
    return reps[1];
}

} // namespace detail

/// Run cfg.trials seeded experiments. With Algo::Both the two kernels see
/// identical inputs and their outputs and work counts are cross-checked on
/// every trial.
inline std::vector<Trial> run_trials(const Config& cfg) {
    check_config(cfg);
    Rng rng(cfg.seed);
    std::vector<Trial> out;
    out.reserve(cfg.trials);
    for (std::uint32_t i = 0; i < cfg.trials; ++i) {
        Instance inst = gen_problem(cfg, rng);
        const Problem prob = inst.problem();
        const std::vector<Fp> pristine = inst.a->cells();

        Trial tr;
        tr.index = i;
        tr.sigma_a = inst.sa.origin;
        tr.sigma_b = inst.sb.origin;
        tr.sigma_c = inst.sc.origin;
        tr.rows = inst.sa.rows;
        tr.cols = inst.sa.cols;
        tr.inner = inst.sb.cols;

        std::vector<Fp> out_def, out_obl;
        if (cfg.algo != Algo::Oblivious) {
            tr.time_def_ns =
                detail::measure(mm_default, prob, *inst.a, pristine, tr.def_ctr, out_def);
            tr.has_def = true;
        }
        if (cfg.algo != Algo::Default) {
            tr.time_obl_ns =
                detail::measure(mm_oblivious, prob, *inst.a, pristine, tr.obl_ctr, out_obl);
            tr.has_obl = true;
        }
        if (tr.has_def && tr.has_obl) {
            if (out_def != out_obl)
                throw MismatchError("trial " + std::to_string(i) +
                                    ": kernel outputs disagree");
            if (tr.def_ctr.scalar_macs != tr.obl_ctr.scalar_macs)
                throw MismatchError("trial " + std::to_string(i) +
                                    ": kernel work counts disagree");
        }
        out.push_back(tr);
    }
    return out;
}

/// One output row: trials grouped by the percent change in base-case calls
/// (rounded to two decimals), with the share of experiments and the
/// average/min/max percent runtime improvement of the oblivious kernel.
struct Bucket {
    double call_increase_pct = 0;
    double share_pct = 0;
    double avg_improvement_pct = 0;
    double min_improvement_pct = 0;
    double max_improvement_pct = 0;
};

inline std::vector<Bucket> aggregate(const std::vector<Trial>& trials) {
    if (trials.empty()) throw std::invalid_argument("aggregate: no trials");
    std::map<long long, std::vector<double>> groups; // key: increase pct * 100, rounded
    for (const Trial& tr : trials) {
        if (!tr.has_def || !tr.has_obl)
            throw std::invalid_argument("aggregate: every trial needs both kernels");
        const double cd = double(tr.def_ctr.base_case_calls);
        const double inc =
            cd == 0 ? 0 : 100.0 * (double(tr.obl_ctr.base_case_calls) - cd) / cd;
        const double imp =
            tr.time_def_ns == 0
                ? 0
                : 100.0 * (double(tr.time_def_ns) - double(tr.time_obl_ns)) /
                      double(tr.time_def_ns);
        groups[std::llround(inc * 100.0)].push_back(imp);
    }
    std::vector<Bucket> rows;
    rows.reserve(groups.size());
    for (const auto& [key, imps] : groups) {
        Bucket b;
        b.call_increase_pct = double(key) / 100.0;
        b.share_pct = 100.0 * double(imps.size()) / double(trials.size());
        b.min_improvement_pct = *std::min_element(imps.begin(), imps.end());
        b.max_improvement_pct = *std::max_element(imps.begin(), imps.end());
        double sum = 0;
        for (double v : imps) sum += v;
        b.avg_improvement_pct = sum / double(imps.size());
        rows.push_back(b);
    }
    return rows;
}

inline constexpr const char* kTrialCsvHeader =
    "trial,sigmaA,rA,cA,sigmaB,rB,cB,sigmaC,rC,cC,"
    "calls_default,calls_obl,macs,time_default_ns,time_obl_ns";

inline constexpr const char* kAggregateCsvHeader =
    "pct_call_increase,pct_of_experiments,avg_improvement,min_improvement,max_improvement";

namespace detail {

inline std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace detail

inline void write_trials_csv(const std::vector<Trial>& trials, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << kTrialCsvHeader << '\n';
    for (const Trial& tr : trials) {
        os << tr.index << ',' << tr.sigma_a << ',' << tr.rows << ',' << tr.cols << ','
           << tr.sigma_b << ',' << tr.rows << ',' << tr.inner << ',' << tr.sigma_c << ','
           << tr.inner << ',' << tr.cols << ','
           << (tr.has_def ? tr.def_ctr.base_case_calls : 0) << ','
           << (tr.has_obl ? tr.obl_ctr.base_case_calls : 0) << ','
           << (tr.has_def ? tr.def_ctr.scalar_macs : tr.obl_ctr.scalar_macs) << ','
           << (tr.has_def ? tr.time_def_ns : 0) << ',' << (tr.has_obl ? tr.time_obl_ns : 0)
           << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

inline void write_aggregate_csv(const std::vector<Bucket>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << kAggregateCsvHeader << '\n';
    for (const Bucket& b : rows) {
        os << detail::fmt2(b.call_increase_pct) << ',' << detail::fmt2(b.share_pct) << ','
           << detail::fmt2(b.avg_improvement_pct) << ','
           << detail::fmt2(b.min_improvement_pct) << ','
           << detail::fmt2(b.max_improvement_pct) << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path);
}

} // namespace mh
