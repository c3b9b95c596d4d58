#pragma once

// Batch front end. Every command renders its artifact to a string first so
// the same bytes go to stdout or to --out; --out also writes a sidecar
// <out>.manifest.json from which `replay` regenerates the artifact.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage or domain error,
// 3 numerical failure, 4 resource guard.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wormhole/ed/oracle.hpp"
#include "wormhole/errors.hpp"
#include "wormhole/finite_size.hpp"
#include "wormhole/model.hpp"
#include "wormhole/phase_scan.hpp"
#include "wormhole/sd_solver.hpp"
#include "wormhole/version.hpp"

namespace wormhole::cli {

enum ExitCode : int { ok = 0, io_failure = 1, usage = 2, numerical = 3, resource = 4 };

/// Shortest round-trip decimal form; stable across runs.
inline std::string num(double x)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

class CsvTable {
public:
    CsvTable(std::string schema, std::vector<std::string> header)
        : schema_(std::move(schema)), header_(std::move(header))
    {
    }

    void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
    void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
    std::size_t rows() const noexcept { return rows_.size(); }

    std::string str() const
    {
        std::ostringstream os;
        os << "# schema: " << schema_ << '\n';
        for (const auto& [k, v] : meta_)
            os << "# " << k << ": " << v << '\n';
        write_line(os, header_);
        for (const auto& r : rows_)
            write_line(os, r);
        return os.str();
    }

private:
    static void write_line(std::ostream& os, const std::vector<std::string>& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            os << (i ? "," : "") << cells[i];
        os << '\n';
    }

    std::string schema_;
    std::vector<std::string> header_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::vector<std::string>> rows_;
};

struct Artifact {
    std::string body;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    std::optional<std::uint64_t> seed;
};

namespace detail {

inline std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline scan::Source parse_source(const std::string& s)
{
    if (s == "analytic")
        return scan::Source::analytic;
    if (s == "numeric")
        return scan::Source::numeric;
    throw DomainError("unknown source '" + s + "'");
}

inline sd::Kick parse_kick(const std::string& s)
{
    if (s == "leading")
        return sd::Kick::leading_order;
    if (s == "exact")
        return sd::Kick::exact;
    throw DomainError("unknown kick '" + s + "'");
}

inline std::vector<double> linspace(double lo, double hi, int steps)
{
    if (steps < 1)
        throw DomainError("steps must be >= 1");
    if (!(lo <= hi))
        throw DomainError("range minimum exceeds maximum");
    if (steps == 1)
        return {lo};
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
    return out;
}

} // namespace detail

struct TraceArgs {
    double gamma = 0.1;
    double g = 0.01;
    std::optional<double> t_max;
    double dt = 1e-3;
    std::string source = "numeric";
    std::string kick = "leading";
};

inline Artifact cmd_trace(const TraceArgs& a)
{
    const auto p = ModelParams::make(a.gamma, a.g);
    const auto source = detail::parse_source(a.source);
    const auto kick = detail::parse_kick(a.kick);
    const TimeGrid grid = a.t_max ? TimeGrid::make(*a.t_max, a.dt) : scan::default_trace_grid(p, a.dt);
    const auto trace = scan::time_trace(p, grid, source, kick);

    CsvTable csv("wormhole.trace/1", {"t", "k", "negativity", "mutual_info_ln2"});
    csv.meta("gamma", num(a.gamma));
    csv.meta("g", num(a.g));
    csv.meta("t_max", num(grid.t_max()));
    csv.meta("dt", num(grid.dt()));
    csv.meta("source", a.source);
    csv.meta("kick", a.kick);
    for (const auto& pt : trace)
        csv.row({num(pt.t), num(pt.k), num(pt.negativity), num(pt.mutual_info_ln2)});

    Artifact out;
    out.body = csv.str();
    out.params = {{"gamma", a.gamma}, {"g", a.g},         {"t_max", grid.t_max()},
                  {"dt", grid.dt()},  {"source", a.source}, {"kick", a.kick}};
    return out;
}

struct SweepArgs {
    double gamma_min = 0.0;
    double gamma_max = 1.3;
    int steps = 27;
    double g = 1e-4;
    double dt = 1e-3;
    std::string source = "analytic";
    double ns_factor = metrics::kDefaultNoSignalFactor;
};

inline Artifact cmd_sweep(const SweepArgs& a)
{
    const auto gammas = detail::linspace(a.gamma_min, a.gamma_max, a.steps);
    scan::ScanOptions opts;
    opts.source = detail::parse_source(a.source);
    opts.dt = a.dt;
    opts.ns_factor = a.ns_factor;
    const auto rows = scan::sweep(gammas, a.g, opts);

    CsvTable csv("wormhole.sweep/1", {"gamma", "g", "k_max", "t_star", "neg_max", "mi_max_ln2", "regime"});
    csv.meta("g", num(a.g));
    csv.meta("dt", num(a.dt));
    csv.meta("source", a.source);
    csv.meta("ns_factor", num(a.ns_factor));
    for (const auto& r : rows)
        csv.row({num(r.gamma), num(r.g), num(r.k_max), num(r.t_star), num(r.neg_max), num(r.mi_max_ln2),
                 std::string(to_string(r.regime))});

    Artifact out;
    out.body = csv.str();
    out.params = {{"gamma_min", a.gamma_min}, {"gamma_max", a.gamma_max}, {"steps", a.steps},
                  {"g", a.g},                 {"dt", a.dt},               {"source", a.source},
                  {"ns_factor", a.ns_factor}};
    return out;
}

struct BoundaryArgs {
    bool gamma_star = false;
    std::optional<double> r;
    double r_min = -0.9;
    double r_max = 0.1;
    int steps = 11;
    int n_fermions = 100;
};

inline Artifact cmd_boundary(const BoundaryArgs& a)
{
    if (a.gamma_star) {
        const double root = finite_size::gamma_star();
        CsvTable csv("wormhole.gamma_star/1", {"gamma_star"});
        csv.row({num(root)});
        Artifact out;
        out.body = csv.str();
        out.params = {{"gamma_star", true}};
        return out;
    }
    const std::vector<double> rs = a.r ? std::vector<double>{*a.r} : detail::linspace(a.r_min, a.r_max, a.steps);
    const auto curve = finite_size::boundary_curve(rs, a.n_fermions);

    CsvTable csv("wormhole.boundary/1", {"r", "g_boundary"});
    csv.meta("N", std::to_string(a.n_fermions));
    for (double r : curve.no_root)
        csv.meta("note", "NoRoot at r=" + num(r));
    for (const auto& row : curve.rows)
        csv.row({num(row.r), num(row.g_boundary)});

    Artifact out;
    out.body = csv.str();
    if (a.r)
        out.params = {{"r", *a.r}, {"N", a.n_fermions}};
    else
        out.params = {{"r_min", a.r_min}, {"r_max", a.r_max}, {"steps", a.steps}, {"N", a.n_fermions}};
    return out;
}

struct OracleArgs {
    std::string mode = "kubo";
    ed::OracleConfig config;
    std::optional<double> t;
};

inline nlohmann::ordered_json config_json(const ed::OracleConfig& c)
{
    return {{"n_sys", c.n_sys},
            {"m_env", c.m_env},
            {"gamma", c.gamma},
            {"g", c.g},
            {"dt_trotter", c.dt_trotter},
            {"t_l", c.t_l},
            {"t_r", c.t_r},
            {"samples", c.n_samples},
            {"seed", c.seed},
            {"convergence_check", c.convergence_check}};
}

inline Artifact cmd_oracle(const OracleArgs& a)
{
    ed::OracleConfig c = a.config;
    if (a.t) {
        c.t_l = *a.t;
        c.t_r = *a.t;
    }
    ed::validate(c);
    ed::verify_conventions();

    nlohmann::ordered_json body;
    body["schema"] = "wormhole.oracle/1";
    body["mode"] = a.mode;
    body["config"] = config_json(c);
    if (a.mode == "kubo") {
        const auto k = ed::kubo_response(c);
        body["k"] = k.mean;
        body["k_stderr"] = k.std_error;
        body["k_samples"] = k.samples;
    } else if (a.mode == "protocol") {
        const auto res = ed::run_protocol(c);
        body["k"] = res.k.mean;
        body["k_stderr"] = res.k.std_error;
        auto block = [&](auto part) {
            nlohmann::ordered_json m = nlohmann::ordered_json::array();
            for (int i = 0; i < 4; ++i) {
                std::vector<double> row;
                for (int j = 0; j < 4; ++j)
                    row.push_back(part(res.rho(i, j)));
                m.push_back(row);
            }
            return m;
        };
        body["rho_re"] = block([](ed::cplx z) { return z.real(); });
        body["rho_im"] = block([](ed::cplx z) { return z.imag(); });
        const auto [lo, hi] = std::minmax_element(res.norms.begin(), res.norms.end());
        body["norm_min"] = *lo;
        body["norm_max"] = *hi;
    } else if (a.mode == "size") {
        const auto res = ed::size_representation_response(c);
        body["k_kubo"] = res.k_kubo.mean;
        body["k_size"] = res.k_size.mean;
        body["k_stderr"] = res.k_kubo.std_error;
        body["abs_diff"] = res.max_abs_diff;
    } else if (a.mode == "meansize") {
        const auto res = ed::mean_shifted_size(c, c.t_l);
        body["mean_size"] = res.mean;
        body["mean_size_stderr"] = res.std_error;
    } else {
        throw DomainError("unknown oracle mode '" + a.mode + "'");
    }

    Artifact out;
    out.body = body.dump(2) + "\n";
    out.params = config_json(c);
    out.params["mode"] = a.mode;
    out.seed = c.seed;
    return out;
}

struct ValidateArgs {
    double gamma = 0.1;
    double g = 0.01;
    double t_max = 15.0;
    double dt = 1e-3;
    std::string kick = "leading";
};

inline Artifact cmd_validate(const ValidateArgs& a)
{
    const auto p = ModelParams::make(a.gamma, a.g);
    const TimeGrid grid = TimeGrid::make(a.t_max, a.dt);
    const double err = sd::validate(p, grid, detail::parse_kick(a.kick));

    CsvTable csv("wormhole.validate/1", {"gamma", "g", "t_max", "dt", "kick", "max_abs_error"});
    csv.row({num(a.gamma), num(a.g), num(grid.t_max()), num(grid.dt()), a.kick, num(err)});
    Artifact out;
    out.body = csv.str();
    out.params = {{"gamma", a.gamma}, {"g", a.g}, {"t_max", a.t_max}, {"dt", a.dt}, {"kick", a.kick}};
    return out;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& data)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::ios_base::failure("cannot open " + path);
    f << data;
    if (!f)
        throw std::ios_base::failure("cannot write " + path);
}

inline std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::ios_base::failure("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

inline int map_exception(std::ostream& err)
{
    try {
        throw;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return resource;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return numerical;
    } catch (const nlohmann::json::exception& e) {
        err << "bad manifest: " << e.what() << '\n';
        return usage;
    } catch (const std::ios_base::failure& e) {
        err << "io error: " << e.what() << '\n';
        return io_failure;
    }
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args, out, err);
}

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Traversable-wormhole teleportation with environments: channel, phase and ED tools", "wormhole"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    std::string out_path;
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", out_path, "Output path (default: stdout)"); };

    TraceArgs trace;
    auto* trace_cmd = app.add_subcommand("trace", "Channel metrics along t_L = t_R = t");
    trace_cmd->add_option("--gamma", trace.gamma, "System-environment coupling ratio V/J");
    trace_cmd->add_option("--g", trace.g, "Teleportation coupling");
    trace_cmd->add_option("--t-max", trace.t_max, "Trace horizon (default max(3 t*, 20))");
    trace_cmd->add_option("--dt", trace.dt, "Time step");
    trace_cmd->add_option("--source", trace.source, "analytic | numeric")->check(CLI::IsMember({"analytic", "numeric"}));
    trace_cmd->add_option("--kick", trace.kick, "leading | exact")->check(CLI::IsMember({"leading", "exact"}));
    add_out(trace_cmd);

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Peak metrics and regime over a gamma range");
    sweep_cmd->add_option("--gamma-min", sweep.gamma_min);
    sweep_cmd->add_option("--gamma-max", sweep.gamma_max);
    sweep_cmd->add_option("--steps", sweep.steps, "Number of gamma values");
    sweep_cmd->add_option("--g", sweep.g);
    sweep_cmd->add_option("--dt", sweep.dt);
    sweep_cmd->add_option("--source", sweep.source)->check(CLI::IsMember({"analytic", "numeric"}));
    sweep_cmd->add_option("--ns-factor", sweep.ns_factor, "No-signal threshold in units of |g|");
    add_out(sweep_cmd);

    BoundaryArgs boundary;
    auto* boundary_cmd = app.add_subcommand("boundary", "Finite-N phase boundary or the gamma* root");
    boundary_cmd->add_flag("--gamma-star", boundary.gamma_star, "Print the gamma* root");
    boundary_cmd->add_option("--r", boundary.r, "Single r value");
    boundary_cmd->add_option("--r-min", boundary.r_min);
    boundary_cmd->add_option("--r-max", boundary.r_max);
    boundary_cmd->add_option("--steps", boundary.steps);
    boundary_cmd->add_option("--N", boundary.n_fermions, "System fermion count");
    add_out(boundary_cmd);

    OracleArgs oracle;
    bool no_check = false;
    auto* oracle_cmd = app.add_subcommand("oracle", "Exact diagonalization of the protocol");
    oracle_cmd->add_option("--mode", oracle.mode)->check(CLI::IsMember({"kubo", "protocol", "size", "meansize"}));
    oracle_cmd->add_option("--n-sys", oracle.config.n_sys);
    oracle_cmd->add_option("--m-env", oracle.config.m_env);
    oracle_cmd->add_option("--gamma", oracle.config.gamma);
    oracle_cmd->add_option("--g", oracle.config.g);
    oracle_cmd->add_option("--t", oracle.t, "Sets both t_L and t_R");
    oracle_cmd->add_option("--t-l", oracle.config.t_l);
    oracle_cmd->add_option("--t-r", oracle.config.t_r);
    oracle_cmd->add_option("--dt-trotter", oracle.config.dt_trotter);
    oracle_cmd->add_option("--samples", oracle.config.n_samples);
    oracle_cmd->add_option("--seed", oracle.config.seed);
    oracle_cmd->add_flag("--no-convergence-check", no_check, "Skip the dt-halving guard");
    add_out(oracle_cmd);

    ValidateArgs validate;
    auto* validate_cmd = app.add_subcommand("validate", "Max deviation of the SD solver from the closed form");
    validate_cmd->add_option("--gamma", validate.gamma);
    validate_cmd->add_option("--g", validate.g);
    validate_cmd->add_option("--t-max", validate.t_max);
    validate_cmd->add_option("--dt", validate.dt);
    validate_cmd->add_option("--kick", validate.kick)->check(CLI::IsMember({"leading", "exact"}));
    add_out(validate_cmd);

    std::string manifest_path;
    auto* replay_cmd = app.add_subcommand("replay", "Regenerate an artifact from its manifest");
    replay_cmd->add_option("--manifest", manifest_path)->required();
    add_out(replay_cmd);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (replay_cmd->parsed()) {
            const auto manifest = nlohmann::json::parse(detail::read_file(manifest_path));
            auto replay_args = manifest.at("args").get<std::vector<std::string>>();
            if (!out_path.empty()) {
                for (std::size_t i = 0; i + 1 < replay_args.size(); ++i)
                    if (replay_args[i] == "--out")
                        replay_args[i + 1] = out_path;
            }
            return run(replay_args, out, err);
        }

        Artifact artifact;
        std::string command;
        if (trace_cmd->parsed()) {
            command = "trace";
            artifact = cmd_trace(trace);
        } else if (sweep_cmd->parsed()) {
            command = "sweep";
            artifact = cmd_sweep(sweep);
        } else if (boundary_cmd->parsed()) {
            command = "boundary";
            artifact = cmd_boundary(boundary);
        } else if (oracle_cmd->parsed()) {
            command = "oracle";
            oracle.config.convergence_check = !no_check;
            artifact = cmd_oracle(oracle);
        } else {
            command = "validate";
            artifact = cmd_validate(validate);
        }

        if (out_path.empty()) {
            out << artifact.body;
            return ok;
        }
        detail::write_file(out_path, artifact.body);
        nlohmann::ordered_json manifest;
        manifest["command"] = command;
        manifest["args"] = args;
        manifest["params"] = artifact.params;
        manifest["seed"] = artifact.seed ? nlohmann::ordered_json(*artifact.seed) : nlohmann::ordered_json(nullptr);
        manifest["version"] = std::string(kVersion);
        manifest["timestamp"] = detail::utc_timestamp();
        manifest["outputs"] = {out_path};
        detail::write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
        return ok;
    } catch (...) {
        return detail::map_exception(err);
    }
}

} // namespace wormhole::cli
