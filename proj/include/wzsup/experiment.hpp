#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "wzsup/dpc.hpp"
#include "wzsup/format.hpp"
#include "wzsup/infotheory.hpp"
#include "wzsup/oracle.hpp"
#include "wzsup/pipeline.hpp"
#include "wzsup/rng.hpp"
#include "wzsup/wz.hpp"

namespace wzsup {

/// A sweep description. The grid maps parameter names to value lists; the
/// cartesian product is walked with keys in sorted order, first key
/// outermost, and grid point g gets the derived seed derive_seed(seed, g).
/// Convolutional code parameters (tcq mode) are global, not grid axes.
struct ExperimentSpec {
    std::string mode;  // rates | wz | wz-gaussian | dpc | tcq | oracle
    std::map<std::string, std::vector<double>> grid;
    std::uint64_t trials = 1000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string g0 = "5,7";  // tcq: C0 generators (octal, comma-separated)
    int k0 = 3;              // tcq: C0 constraint length
    std::string g1 = "5,7";
    int k1 = 3;
};

/// One output row: ordered (column, text) cells. All rows of a run share the
/// same columns.
struct SummaryRow {
    std::vector<std::pair<std::string, std::string>> cells;

    void add(std::string name, std::string value) { cells.emplace_back(std::move(name), std::move(value)); }
    void add(std::string name, double value) { add(std::move(name), to_string_17(value)); }
    void add_count(std::string name, std::uint64_t value) { add(std::move(name), to_string_u64(value)); }
};

/// CSV with a header row; '.' decimal separator and 17 significant digits
/// come from the cell formatting, so identical rows give identical bytes.
inline void write_csv(const std::vector<SummaryRow>& rows, std::ostream& os) {
    if (rows.empty()) return;
    for (std::size_t c = 0; c < rows.front().cells.size(); ++c)
        os << (c ? "," : "") << rows.front().cells[c].first;
    os << '\n';
    for (const SummaryRow& row : rows) {
        if (row.cells.size() != rows.front().cells.size()) throw std::logic_error("write_csv: ragged rows");
        for (std::size_t c = 0; c < row.cells.size(); ++c) {
            if (row.cells[c].first != rows.front().cells[c].first) throw std::logic_error("write_csv: column mismatch");
            os << (c ? "," : "") << row.cells[c].second;
        }
        os << '\n';
    }
}

namespace detail {

/// Runs fn(k) for k in [0, count) on `threads` workers, each result written
/// to its own slot; identical output for any thread count. Chunked atomic
/// work stealing; the first exception is rethrown after all workers join.
template <typename Rec, typename Fn>
std::vector<Rec> run_indexed(std::uint64_t count, int threads, Fn&& fn) {
    std::vector<Rec> out(count);
    if (threads <= 1 || count <= 1) {
        for (std::uint64_t k = 0; k < count; ++k) out[k] = fn(k);
        return out;
    }
    constexpr std::uint64_t kChunk = 64;
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        try {
            for (;;) {
                const std::uint64_t base = next.fetch_add(kChunk);
                if (base >= count || failed.load()) return;
                const std::uint64_t stop = std::min(base + kChunk, count);
                for (std::uint64_t k = base; k < stop; ++k) out[k] = fn(k);
            }
        } catch (...) {
            std::scoped_lock lock(error_mutex);
            if (!error) error = std::current_exception();
            failed.store(true);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

inline double ci95(double rate, std::uint64_t trials) {
    return trials ? 1.96 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials)) : 0.0;
}

using ParamMap = std::map<std::string, double>;

inline double require_param(const ParamMap& pm, const std::string& key) {
    const auto it = pm.find(key);
    if (it == pm.end()) throw std::invalid_argument("missing parameter '" + key + "'");
    return it->second;
}

inline double param_or(const ParamMap& pm, const std::string& key, double fallback) {
    const auto it = pm.find(key);
    return it == pm.end() ? fallback : it->second;
}

inline int int_param(const std::string& key, double value) {
    const double r = std::round(value);
    if (std::abs(value - r) > 1e-9 || r < 1.0)
        throw std::invalid_argument("parameter '" + key + "' must be a positive integer");
    return static_cast<int>(r);
}

/// Flip parameter -> symbol law; negative means uniform.
inline SymbolDistribution law_from_flip(GroupAlphabet g, double flip) {
    return flip < 0.0 ? SymbolDistribution::uniform(g) : SymbolDistribution::symmetric(g, flip);
}

}  // namespace detail

// --- per-mode metric columns (shared by the fill paths and error rows) -----

inline const std::vector<std::string>& metric_columns(const std::string& mode) {
    static const std::map<std::string, std::vector<std::string>> cols = {
        {"rates", {"r0_min", "sum_min", "r0_max", "r1_corner", "nonempty"}},
        {"wz",
         {"trials", "enc_errors", "enc_error_rate", "enc_error_ci95", "dec_errors", "dec_error_rate",
          "dec_error_ci95", "mean_encode_distortion", "max_encode_distortion", "mean_end_distortion",
          "max_end_distortion"}},
        {"wz-gaussian",
         {"trials", "enc_errors", "enc_error_rate", "enc_error_ci95", "dec_errors", "dec_error_rate",
          "dec_error_ci95", "mean_encode_distortion", "max_encode_distortion", "mean_end_distortion",
          "max_end_distortion"}},
        {"dpc",
         {"trials", "enc_errors", "enc_error_rate", "enc_error_ci95", "msg_errors", "msg_error_rate",
          "msg_error_ci95", "pair_errors", "pair_error_rate", "pair_error_ci95", "mean_cost", "max_cost",
          "channel_identity_violations"}},
        {"tcq",
         {"trials", "r1", "enc_errors", "enc_error_rate", "c0_recoveries", "c0_recovery_rate",
          "mean_quant_distortion", "mean_end_distortion", "max_end_distortion", "mean_rate_gap_bits",
          "mean_distortion_gap_db"}},
        {"oracle", {"enc_error_prob", "dec_error_prob", "mean_end_distortion"}},
    };
    const auto it = cols.find(mode);
    if (it == cols.end()) throw std::invalid_argument("unknown mode '" + mode + "'");
    return it->second;
}

namespace detail {

inline void fill_rates(SummaryRow& row, const ParamMap& pm, const ExperimentSpec&, std::uint64_t) {
    const int l = int_param("l", param_or(pm, "l", 1.0));
    const GroupAlphabet g = GroupAlphabet::bits(l);
    const SymbolDistribution p = law_from_flip(g, require_param(pm, "p"));
    const SymbolDistribution q = law_from_flip(g, param_or(pm, "q", -1.0));
    const infotheory::WzRateRegion region = infotheory::wz_rate_region(l, p, q, require_param(pm, "d"));
    row.add("r0_min", region.r0_min);
    row.add("sum_min", region.sum_min);
    row.add("r0_max", region.r0_max);
    row.add("r1_corner", region.r1_corner);
    row.add_count("nonempty", region.nonempty ? 1 : 0);
}

inline WzInstance wz_instance_from(const ParamMap& pm, std::uint64_t gp_seed) {
    const int l = int_param("l", param_or(pm, "l", 1.0));
    const GroupAlphabet g = GroupAlphabet::bits(l);
    const int n = int_param("n", require_param(pm, "n"));
    return make_wz_instance(n, law_from_flip(g, require_param(pm, "p")), law_from_flip(g, param_or(pm, "q", -1.0)),
                            require_param(pm, "d"), require_param(pm, "r0"), require_param(pm, "r1"),
                            derive_seed(gp_seed, 1), derive_seed(gp_seed, 2));
}

inline void summarize_wz_trials(SummaryRow& row, const std::vector<WzTrialRecord>& recs) {
    const std::uint64_t trials = recs.size();
    std::uint64_t enc = 0, dec = 0;
    double sum_encd = 0.0, max_encd = 0.0, sum_endd = 0.0, max_endd = 0.0;
    for (const WzTrialRecord& r : recs) {
        enc += r.encoder_error;
        dec += r.decoder_error;
        sum_encd += r.encode_distortion;
        max_encd = std::max(max_encd, r.encode_distortion);
        sum_endd += r.end_distortion;
        max_endd = std::max(max_endd, r.end_distortion);
    }
    const double enc_rate = static_cast<double>(enc) / trials;
    const double dec_rate = static_cast<double>(dec) / trials;
    row.add_count("trials", trials);
    row.add_count("enc_errors", enc);
    row.add("enc_error_rate", enc_rate);
    row.add("enc_error_ci95", ci95(enc_rate, trials));
    row.add_count("dec_errors", dec);
    row.add("dec_error_rate", dec_rate);
    row.add("dec_error_ci95", ci95(dec_rate, trials));
    row.add("mean_encode_distortion", sum_encd / trials);
    row.add("max_encode_distortion", max_encd);
    row.add("mean_end_distortion", sum_endd / trials);
    row.add("max_end_distortion", max_endd);
}

inline void fill_wz(SummaryRow& row, const ParamMap& pm, const ExperimentSpec& spec, std::uint64_t gp_seed) {
    const WzInstance inst = wz_instance_from(pm, gp_seed);
    const std::uint64_t trial_base = derive_seed(gp_seed, 0);
    const auto recs = run_indexed<WzTrialRecord>(spec.trials, spec.threads, [&](std::uint64_t k) {
        return simulate_wz_trial(inst, derive_seed(trial_base, k));
    });
    summarize_wz_trials(row, recs);
}

inline void fill_wz_gaussian(SummaryRow& row, const ParamMap& pm, const ExperimentSpec& spec,
                             std::uint64_t gp_seed) {
    const int n = int_param("n", require_param(pm, "n"));
    const infotheory::GaussianWzParams params =
        infotheory::make_gaussian_wz_params(param_or(pm, "py", 1.0), param_or(pm, "pz", 1.0),
                                            require_param(pm, "d"), require_param(pm, "q"), param_or(pm, "p0", 0.0));
    const GaussianWzInstance inst =
        make_gaussian_wz_instance(n, params, require_param(pm, "r0"), require_param(pm, "r1"),
                                  derive_seed(gp_seed, 1), derive_seed(gp_seed, 2), derive_seed(gp_seed, 3),
                                  param_or(pm, "slack", 0.25));
    const std::uint64_t trial_base = derive_seed(gp_seed, 0);
    const auto recs = run_indexed<WzTrialRecord>(spec.trials, spec.threads, [&](std::uint64_t k) {
        return simulate_gaussian_wz_trial(inst, derive_seed(trial_base, k));
    });
    summarize_wz_trials(row, recs);
}

inline void fill_dpc(SummaryRow& row, const ParamMap& pm, const ExperimentSpec& spec, std::uint64_t gp_seed) {
    const int n = int_param("n", require_param(pm, "n"));
    const double p = require_param(pm, "p");
    const double w = require_param(pm, "w");
    double q = param_or(pm, "q", -1.0);
    if (q < 0.0) q = infotheory::dpc_binary_params(p, w).q_star;
    const DpcInstance inst = make_dpc_instance(n, p, w, q, require_param(pm, "r0"), require_param(pm, "r1"),
                                               derive_seed(gp_seed, 1), derive_seed(gp_seed, 2));
    const std::uint64_t trial_base = derive_seed(gp_seed, 0);
    const auto recs = run_indexed<DpcTrialRecord>(spec.trials, spec.threads, [&](std::uint64_t k) {
        return simulate_dpc_trial(inst, derive_seed(trial_base, k));
    });
    const std::uint64_t trials = recs.size();
    std::uint64_t enc = 0, msg = 0, pair = 0, identity_violations = 0;
    double sum_cost = 0.0, max_cost = 0.0;
    for (const DpcTrialRecord& r : recs) {
        enc += r.encoder_error;
        msg += r.message_error;
        pair += r.pair_error;
        identity_violations += !r.channel_identity;
        sum_cost += r.cost;
        max_cost = std::max(max_cost, r.cost);
    }
    const double enc_rate = static_cast<double>(enc) / trials;
    const double msg_rate = static_cast<double>(msg) / trials;
    const double pair_rate = static_cast<double>(pair) / trials;
    row.add_count("trials", trials);
    row.add_count("enc_errors", enc);
    row.add("enc_error_rate", enc_rate);
    row.add("enc_error_ci95", ci95(enc_rate, trials));
    row.add_count("msg_errors", msg);
    row.add("msg_error_rate", msg_rate);
    row.add("msg_error_ci95", ci95(msg_rate, trials));
    row.add_count("pair_errors", pair);
    row.add("pair_error_rate", pair_rate);
    row.add("pair_error_ci95", ci95(pair_rate, trials));
    row.add("mean_cost", sum_cost / trials);
    row.add("max_cost", max_cost);
    row.add_count("channel_identity_violations", identity_violations);
}

inline void fill_tcq(SummaryRow& row, const ParamMap& pm, const ExperimentSpec& spec, std::uint64_t gp_seed) {
    PipelineInstance inst;
    inst.n = int_param("n", require_param(pm, "n"));
    inst.p = require_param(pm, "p");
    inst.target_d = param_or(pm, "d", 1.0);
    inst.c0_code = make_conv_code_octal(spec.g0, spec.k0);
    inst.c1_code = make_conv_code_octal(spec.g1, spec.k1);
    const std::uint64_t trial_base = derive_seed(gp_seed, 0);
    const auto recs = run_indexed<PipelineRecord>(spec.trials, spec.threads, [&](std::uint64_t k) {
        return simulate_pipeline_trial(inst, derive_seed(trial_base, k));
    });
    const std::uint64_t trials = recs.size();
    std::uint64_t enc = 0, recovered = 0;
    double sum_q = 0.0, sum_e = 0.0, max_e = 0.0, sum_gap = 0.0, sum_db = 0.0;
    for (const PipelineRecord& r : recs) {
        enc += r.encoder_error;
        recovered += r.c0_recovered;
        sum_q += r.quant_distortion;
        sum_e += r.end_distortion;
        max_e = std::max(max_e, r.end_distortion);
        sum_gap += r.rate_gap_bits;
        sum_db += r.distortion_gap_db;
    }
    row.add_count("trials", trials);
    row.add("r1", recs.empty() ? 0.0 : recs.front().r1);
    row.add_count("enc_errors", enc);
    row.add("enc_error_rate", static_cast<double>(enc) / trials);
    row.add_count("c0_recoveries", recovered);
    row.add("c0_recovery_rate", static_cast<double>(recovered) / trials);
    row.add("mean_quant_distortion", sum_q / trials);
    row.add("mean_end_distortion", sum_e / trials);
    row.add("max_end_distortion", max_e);
    row.add("mean_rate_gap_bits", sum_gap / trials);
    row.add("mean_distortion_gap_db", sum_db / trials);
}

inline void fill_oracle(SummaryRow& row, const ParamMap& pm, const ExperimentSpec&, std::uint64_t gp_seed) {
    const ExactOracleResult exact = exact_small_oracle(wz_instance_from(pm, gp_seed));
    row.add("enc_error_prob", exact.encoder_error_prob);
    row.add("dec_error_prob", exact.decoder_error_prob);
    row.add("mean_end_distortion", exact.mean_end_distortion);
}

}  // namespace detail

/// Expands the grid in sorted-key, row-major order and runs the configured
/// mode at every point. Rows carry the grid parameters (alphabetical), then
/// the mode's metrics, then an `error` column: on a per-point failure
/// (typically a search-cap rejection) the metrics are left empty and the
/// message lands there instead of aborting the sweep.
inline std::vector<SummaryRow> run_experiment(const ExperimentSpec& spec) {
    if (spec.grid.empty()) throw std::invalid_argument("experiment grid is empty");
    if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
    for (const auto& [key, values] : spec.grid)
        if (values.empty()) throw std::invalid_argument("empty value list for parameter '" + key + "'");
    const std::vector<std::string>& metrics = metric_columns(spec.mode);

    std::vector<std::pair<std::string, std::vector<double>>> axes(spec.grid.begin(), spec.grid.end());
    std::size_t points = 1;
    for (const auto& axis : axes) points *= axis.second.size();

    std::vector<SummaryRow> rows;
    rows.reserve(points);
    std::vector<std::size_t> pos(axes.size(), 0);
    for (std::size_t gp = 0; gp < points; ++gp) {
        detail::ParamMap pm;
        SummaryRow row;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            pm[axes[a].first] = axes[a].second[pos[a]];
            row.add(axes[a].first, axes[a].second[pos[a]]);
        }

        const std::uint64_t gp_seed = derive_seed(spec.seed, gp);
        std::string error_text;
        try {
            if (spec.mode == "rates")
                detail::fill_rates(row, pm, spec, gp_seed);
            else if (spec.mode == "wz")
                detail::fill_wz(row, pm, spec, gp_seed);
            else if (spec.mode == "wz-gaussian")
                detail::fill_wz_gaussian(row, pm, spec, gp_seed);
            else if (spec.mode == "dpc")
                detail::fill_dpc(row, pm, spec, gp_seed);
            else if (spec.mode == "tcq")
                detail::fill_tcq(row, pm, spec, gp_seed);
            else
                detail::fill_oracle(row, pm, spec, gp_seed);
        } catch (const std::exception& ex) {
            // Reset to grid cells only, pad the metric columns.
            row.cells.resize(axes.size());
            for (const std::string& name : metrics) row.add(name, std::string());
            error_text = ex.what();
            for (char& ch : error_text)
                if (ch == ',' || ch == '\n') ch = ';';
        }
        row.add("error", std::move(error_text));
        rows.push_back(std::move(row));

        // Row-major odometer, last key fastest.
        for (std::size_t a = axes.size(); a-- > 0;) {
            if (++pos[a] < axes[a].second.size()) break;
            pos[a] = 0;
        }
    }
    return rows;
}

}  // namespace wzsup
