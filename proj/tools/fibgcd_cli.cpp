// Command-line front end for the fibgcd toolkit. One subcommand per
// operation, deterministic text/CSV/b-file output, and a transparently
// built or loaded rank cache.

#include "fibgcd/fibgcd.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <thread>

namespace {

using namespace fibgcd;

unsigned default_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

struct Workspace {
    PrimeTable table;
    RankCache cache;
};

// Load the cache file when it covers the table (a longer file is truncated
// to the table's primes), otherwise build and save a fresh one.
Workspace prepare(std::uint64_t limit, const std::string& cache_path, unsigned threads) {
    Workspace ws;
    ws.table = sieve_primes(std::max<std::uint64_t>(limit, 3));
    if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        std::ifstream in(cache_path);
        if (!in)
            throw std::runtime_error("cannot open cache file " + cache_path);
        RankCache loaded = load_rank_cache(in);
        if (loaded.records.size() >= ws.table.primes.size()) {
            loaded.records.resize(ws.table.primes.size());
            rebind_cache(loaded, ws.table); // throws on per-record mismatch
            ws.cache = std::move(loaded);
            return ws;
        }
    }
    ws.cache = build_rank_cache(ws.table, threads);
    if (!cache_path.empty()) {
        std::ofstream out(cache_path);
        if (!out)
            throw std::runtime_error("cannot write cache file " + cache_path);
        save_rank_cache(ws.cache, out);
    }
    return ws;
}

// Writes to --out when given, stdout otherwise.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_)
                throw std::runtime_error("cannot open output file " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

const char* yesno(bool b) { return b ? "yes" : "no"; }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fibgcd: rank of appearance and the set of values gcd(n, F_n)"};
    app.set_version_flag("--version", std::string("fibgcd ") + kVersion);
    app.require_subcommand(1);

    std::uint64_t max = 0;
    std::uint64_t d = 1;
    std::uint32_t k = 1;
    std::uint64_t n = 0;
    std::uint64_t checkpoint_step = 10'000;
    std::uint64_t min_x = 10'000;
    double loglog_x = 0.0;
    unsigned threads = default_threads();
    std::string format = "text";
    std::string out_path;
    std::string cache_path;
    std::string checkpoints_path;

    const auto add_common = [&](CLI::App* cmd, bool with_format = true) {
        cmd->add_option("--threads", threads, "worker threads")->capture_default_str();
        cmd->add_option("--cache", cache_path, "rank cache CSV to load or create");
        cmd->add_option("--out", out_path, "write output to this file instead of stdout");
        if (with_format)
            cmd->add_option("--format", format, "output format")
                ->check(CLI::IsMember({"text", "csv"}))
                ->capture_default_str();
    };

    auto* cmd_rank = app.add_subcommand("rank", "build the rank-of-appearance cache (CSV p,z,e)");
    cmd_rank->add_option("--max", max, "cover all primes up to this bound")->required();
    add_common(cmd_rank, false);

    auto* cmd_member = app.add_subcommand("member", "test one n for membership");
    cmd_member->add_option("n", n, "candidate value")->required();
    add_common(cmd_member);

    auto* cmd_enum = app.add_subcommand("enumerate", "list all members up to --max");
    cmd_enum->add_option("--max", max, "enumeration bound")->required();
    cmd_enum->add_option("--checkpoint-step", checkpoint_step, "sample counts at multiples")
        ->capture_default_str();
    cmd_enum->add_option("--checkpoints", checkpoints_path, "also write x,count CSV here");
    cmd_enum->add_option("--threads", threads, "worker threads")->capture_default_str();
    cmd_enum->add_option("--cache", cache_path, "rank cache CSV to load or create");
    cmd_enum->add_option("--out", out_path, "write output to this file instead of stdout");
    cmd_enum->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "csv", "bfile"}))
        ->capture_default_str();

    auto* cmd_density = app.add_subcommand("density", "count primes with d | z(p) up to --max");
    cmd_density->add_option("--d", d, "divisor of the rank")->required();
    cmd_density->add_option("--max", max, "prime bound")->required();
    add_common(cmd_density);

    auto* cmd_recip = app.add_subcommand("recip", "sum 1/p over primes with d | z(p)");
    cmd_recip->add_option("--d", d, "odd divisor of the rank")->required();
    cmd_recip->add_option("--max", max, "prime bound")->required();
    add_common(cmd_recip);

    auto* cmd_split = app.add_subcommand("split", "split members by prime factors with 5^k | z(p)");
    cmd_split->add_option("--k", k, "power of five")->required();
    cmd_split->add_option("--max", max, "member bound")->required();
    add_common(cmd_split);

    auto* cmd_fit = app.add_subcommand("fit", "fit the growth exponent of the member count");
    cmd_fit->add_option("--max", max, "enumeration bound")->required();
    cmd_fit->add_option("--min-x", min_x, "ignore checkpoints below this")->capture_default_str();
    cmd_fit->add_option("--checkpoint-step", checkpoint_step, "checkpoint spacing")
        ->capture_default_str();
    cmd_fit->add_option("--curve", checkpoints_path, "write normalized x,ratio CSV here");
    add_common(cmd_fit);

    auto* cmd_params = app.add_subcommand("params", "bound-balancing parameters for log log x");
    cmd_params->add_option("--loglog-x", loglog_x, "value of log log x (> e)")->required();
    cmd_params->add_option("--out", out_path, "write output to this file instead of stdout");
    cmd_params->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "csv"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (threads < 1)
            threads = 1;
        OutputTarget target(out_path);
        std::ostream& out = target.stream();

        if (*cmd_rank) {
            Workspace ws = prepare(max, cache_path, threads);
            save_rank_cache(ws.cache, out);
        } else if (*cmd_member) {
            Workspace ws = prepare(n, cache_path, threads);
            const MemberWitness w = is_member(n, ws.cache, ws.table);
            if (format == "csv") {
                out << "n,z,ell,g_of_ell,member\n"
                    << w.n << ',' << w.z_n << ',' << w.ell_n << ',' << w.g_of_ell << ','
                    << (w.member ? 1 : 0) << '\n';
            } else {
                out << w.n << ": " << (w.member ? "member" : "not a member") << " (z=" << w.z_n
                    << ", ell=" << w.ell_n << ", g(ell)=" << w.g_of_ell << ")\n";
            }
        } else if (*cmd_enum) {
            Workspace ws = prepare(max, cache_path, threads);
            const EnumerationResult result =
                enumerate_members(max, ws.cache, ws.table, threads, checkpoint_step);
            if (format == "bfile") {
                write_members(result, MemberFormat::bfile, out);
            } else if (format == "csv") {
                write_members(result, MemberFormat::csv, out);
            } else {
                for (std::uint64_t a : result.members)
                    out << a << '\n';
            }
            if (!checkpoints_path.empty()) {
                std::ofstream cps(checkpoints_path);
                if (!cps)
                    throw std::runtime_error("cannot open " + checkpoints_path);
                write_checkpoints(result, cps);
            }
        } else if (*cmd_density) {
            Workspace ws = prepare(max, cache_path, threads);
            const DensityReport rep = density_report(d, max, ws.cache, ws.table);
            if (format == "csv") {
                write_density_csv({rep}, out);
            } else {
                out << "d=" << rep.d << " x=" << rep.x << " count=" << rep.count
                    << " predicted=" << detail::fmt6(rep.predicted)
                    << " ratio=" << detail::fmt6(rep.ratio)
                    << " bt_ratio=" << detail::fmt6(rep.bt_ratio) << '\n';
            }
        } else if (*cmd_recip) {
            Workspace ws = prepare(max, cache_path, threads);
            const ReciprocalReport rep = reciprocal_sum(d, max, ws.cache, ws.table);
            if (format == "csv") {
                out << "d,x,sum,predicted,deviation\n"
                    << rep.d << ',' << rep.x << ',' << detail::fmt6(rep.sum) << ','
                    << detail::fmt6(rep.predicted) << ',' << detail::fmt6(rep.deviation) << '\n';
            } else {
                out << "d=" << rep.d << " x=" << rep.x << " sum=" << detail::fmt6(rep.sum)
                    << " predicted=" << detail::fmt6(rep.predicted)
                    << " deviation=" << detail::fmt6(rep.deviation) << '\n';
            }
        } else if (*cmd_split) {
            Workspace ws = prepare(max, cache_path, threads);
            const EnumerationResult members =
                enumerate_members(max, ws.cache, ws.table, threads, checkpoint_step);
            const MemberSplit split = split_members(k, max, members, ws.cache, ws.table);
            if (format == "csv") {
                out << "d,x,count_without,count_with,all_with_divisible\n"
                    << split.d << ',' << max << ',' << split.count_without << ','
                    << split.count_with << ',' << (split.with_all_divisible ? 1 : 0) << '\n';
            } else {
                out << "d=" << split.d << " x=" << max << " without=" << split.count_without
                    << " with=" << split.count_with
                    << " all_with_divisible=" << yesno(split.with_all_divisible) << '\n';
            }
        } else if (*cmd_fit) {
            Workspace ws = prepare(max, cache_path, threads);
            const EnumerationResult result =
                enumerate_members(max, ws.cache, ws.table, threads, checkpoint_step);
            const FitReport rep = fit_growth_exponent(result.checkpoints, min_x);
            if (format == "csv") {
                out << "c,intercept,rms_residual,points\n"
                    << detail::fmt6(rep.c) << ',' << detail::fmt6(rep.intercept) << ','
                    << detail::fmt6(rep.rms_residual) << ',' << rep.points << '\n';
            } else {
                out << "c=" << detail::fmt6(rep.c) << " intercept=" << detail::fmt6(rep.intercept)
                    << " rms_residual=" << detail::fmt6(rep.rms_residual)
                    << " points=" << rep.points << '\n';
            }
            if (!checkpoints_path.empty()) {
                std::ofstream curve(checkpoints_path);
                if (!curve)
                    throw std::runtime_error("cannot open " + checkpoints_path);
                write_fit_curve(result.checkpoints, rep.c, curve);
            }
        } else if (*cmd_params) {
            const BoundParams p = bound_params(loglog_x);
            if (format == "csv") {
                out << "loglog_x,k,d,delta_d,constraint_ok\n"
                    << detail::fmt6(p.loglog_x) << ',' << p.k << ',' << p.d << ','
                    << detail::fmt6(p.delta_d) << ',' << (p.constraint_ok ? 1 : 0) << '\n';
            } else {
                out << "loglog_x=" << detail::fmt6(p.loglog_x) << " k=" << p.k << " d=" << p.d
                    << " delta=" << detail::fmt6(p.delta_d)
                    << " constraint_ok=" << yesno(p.constraint_ok) << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
