#include "horo/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "horo/expansiveness.hpp"
#include "horo/flows.hpp"
#include "horo/fuchsian.hpp"
#include "horo/plot.hpp"
#include "horo/report_io.hpp"

namespace horo
{

namespace
{

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Writes to a file, or to `out` when the path is "-".
void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path == "-") {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open " + path + " for writing");
    }
    f << text;
    if (!f.flush()) {
        throw IoError("failed writing " + path);
    }
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) {
        parts.push_back(tok);
    }
    return parts;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

double parse_number(const std::string& s, const std::string& what)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(trim(s), &pos);
        if (pos == trim(s).size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("malformed number in " + what + ": '" + s + "'");
}

std::vector<double> parse_list(const std::string& s, const std::string& what)
{
    std::vector<double> v;
    for (const auto& p : split(s, ',')) {
        if (!trim(p).empty()) {
            v.push_back(parse_number(p, what));
        }
    }
    return v;
}

// "a,b,c,d" with ad - bc = 1.
GroupElement parse_element(const std::string& s)
{
    const auto v = parse_list(s, "group element");
    if (v.size() != 4) {
        throw ConfigError("group element needs four entries a,b,c,d: " + s);
    }
    const Mat2 m{v[0], v[1], v[2], v[3]};
    if (std::abs(m.det() - 1) > 1e-9) {
        throw DomainError("group element must have determinant 1: " + s);
    }
    return GroupElement::canonicalize(m);
}

// key = value lines; '#' starts a comment. "command.key" scopes a key to one
// subcommand. Keys already given on the command line are skipped (flags win).
std::vector<std::string> config_args(const std::string& path, const std::string& command,
                                     const std::set<std::string>& given)
{
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot read config file " + path);
    }
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (const auto dot = key.find('.'); dot != std::string::npos) {
            if (key.substr(0, dot) != command) {
                continue;
            }
            key = key.substr(dot + 1);
        }
        if (key == "config" || given.count(key)) {
            continue;
        }
        out.push_back("--" + key + "=" + value);
    }
    return out;
}

std::set<std::string> given_options(const std::vector<std::string>& args)
{
    std::set<std::string> names;
    for (const auto& a : args) {
        if (a.rfind("--", 0) == 0 && a.size() > 2) {
            names.insert(a.substr(2, a.find('=') - 2));
        }
    }
    return names;
}

struct BallFlags {
    int word_length = 11;
    double max_displacement = 8;
    std::size_t element_cap = 5'000'000;
    std::string ball_file;
};

void add_ball_flags(CLI::App* cmd, BallFlags& b, bool with_file)
{
    cmd->add_option("--word-length", b.word_length, "maximum reduced word length")
        ->capture_default_str();
    cmd->add_option("--max-displacement", b.max_displacement,
                    "displacement cap d(i, g i) (inf for none)")
        ->capture_default_str();
    cmd->add_option("--element-cap", b.element_cap, "abort beyond this many explored elements")
        ->capture_default_str();
    if (with_file) {
        cmd->add_option("--ball-file", b.ball_file, "read the ball from a cache-ball file");
    }
}

FuchsianBall load_ball(const BallFlags& b)
{
    if (!b.ball_file.empty()) {
        std::ifstream f(b.ball_file);
        if (!f) {
            throw IoError("cannot read ball file " + b.ball_file);
        }
        return read_ball(f);
    }
    if (b.word_length < 0) {
        throw DomainError("word length must be >= 0");
    }
    if (!(b.max_displacement > 0)) {
        throw DomainError("displacement cap must be > 0");
    }
    BallOptions opts;
    opts.max_word_len = b.word_length;
    opts.max_displacement = b.max_displacement;
    opts.element_cap = b.element_cap;
    return enumerate_ball(*shared_bolza_group(), opts);
}

void require_positive(double v, const std::string& name)
{
    if (!(v > 0) || !std::isfinite(v)) {
        throw DomainError(name + " must be finite and > 0");
    }
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"horolab: horocycle flows on the Bolza surface", "horolab"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand help for every command");

    std::string out_path = "-";
    std::string summary_path;
    std::string config_path;
    unsigned workers = 1;

    auto common = [&](CLI::App* cmd, const char* out_help) {
        cmd->add_option("--config", config_path, "key = value file; flags override it");
        cmd->add_option("--out", out_path, out_help)->capture_default_str();
        cmd->add_option("--workers", workers, "worker threads (output does not depend on it)")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
    };

    // constants
    BallFlags constants_ball;
    constants_ball.word_length = 3;
    constants_ball.max_displacement = std::numeric_limits<double>::infinity();
    auto* constants = app.add_subcommand("constants", "estimate eps_star and sigma0 from a ball");
    common(constants, "JSON report path");
    add_ball_flags(constants, constants_ball, true);

    // counterexample
    BallFlags cx_ball;
    double cx_a = 1.05;
    double cx_horizon = 1e6;
    int cx_samples = 10000;
    std::optional<double> cx_rate;
    auto* counterexample =
        app.add_subcommand("counterexample", "build and verify the diagonal counterexample");
    common(counterexample, "JSON report path");
    add_ball_flags(counterexample, cx_ball, true);
    counterexample->add_option("--a", cx_a, "diagonal entry a > 1")->capture_default_str();
    counterexample->add_option("--horizon", cx_horizon, "verify over t in [-T, T]")
        ->capture_default_str();
    counterexample->add_option("--samples", cx_samples, "log-spaced sample count")
        ->capture_default_str();
    counterexample->add_option("--rate", cx_rate,
                               "override s(t) = rate t (default a^2); for failure drills");

    // scan
    BallFlags scan_ball;
    std::string scan_pair = "diag";
    double scan_a = 1.05;
    double scan_tau = 0.05;
    double scan_delta = 0.1;
    double scan_horizon = 100;
    int scan_samples = 1000;
    std::string scan_base = "1,0,0,1";
    auto* scan = app.add_subcommand("scan", "sample d_X(theta_t x, theta_t y) over [0, T]");
    common(scan, "CSV path");
    add_ball_flags(scan, scan_ball, true);
    scan->add_option("--summary", summary_path, "JSON summary path");
    scan->add_option("--pair", scan_pair, "diag (y = x diag(a)) or cohorbital (y = x b_tau)")
        ->capture_default_str()
        ->check(CLI::IsMember({"diag", "cohorbital"}));
    scan->add_option("--a", scan_a, "diag pair entry")->capture_default_str();
    scan->add_option("--tau", scan_tau, "cohorbital pair offset")->capture_default_str();
    scan->add_option("--delta", scan_delta, "threshold for first_exceed")->capture_default_str();
    scan->add_option("--horizon", scan_horizon, "T")->capture_default_str();
    scan->add_option("--samples", scan_samples, "n uniform samples in [0, T]")
        ->capture_default_str();
    scan->add_option("--base", scan_base, "x = Gamma g for g = a,b,c,d")->capture_default_str();

    // sweep
    BallFlags sweep_ball;
    SeparationOptions sweep_opts;
    std::string sweep_family = "diag";
    std::string sweep_deltas = "0.1";
    std::string sweep_speed = "const:1";
    double sweep_step = 1e-3;
    auto* sweep = app.add_subcommand("sweep", "separation frequencies under a time change");
    common(sweep, "CSV path");
    add_ball_flags(sweep, sweep_ball, true);
    sweep->add_option("--summary", summary_path, "JSON summary path");
    sweep->add_option("--family", sweep_family, "diag or cohorbital")
        ->capture_default_str()
        ->check(CLI::IsMember({"diag", "cohorbital"}));
    sweep->add_option("--trials", sweep_opts.trials)->capture_default_str();
    sweep->add_option("--deltas", sweep_deltas, "comma-separated thresholds")
        ->capture_default_str();
    sweep->add_option("--horizon", sweep_opts.horizon)->capture_default_str();
    sweep->add_option("--samples", sweep_opts.samples)->capture_default_str();
    sweep->add_option("--a", sweep_opts.a, "diag family entry")->capture_default_str();
    sweep->add_option("--perturbation", sweep_opts.perturbation)->capture_default_str();
    sweep->add_option("--max-shift", sweep_opts.max_shift, "cohorbital |r| bound")
        ->capture_default_str();
    sweep->add_option("--speed", sweep_speed, "const:<c> or sin:<base>:<amp>:<freq>:<phase>[:x|logy]")
        ->capture_default_str();
    sweep->add_option("--step", sweep_step, "RK4 step")->capture_default_str();
    sweep->add_option("--seed", sweep_opts.seed)->capture_default_str();

    // plot
    PlotOptions plot_opts;
    std::vector<std::string> plot_starts;
    bool plot_no_octagon = false;
    auto* plot = app.add_subcommand("plot", "Poincare disk SVG of orbit traces g b_t i");
    common(plot, "SVG path");
    plot->add_option("--start", plot_starts, "trace start a,b,c,d (repeatable)");
    plot->add_option("--t-min", plot_opts.t_min)->capture_default_str();
    plot->add_option("--t-max", plot_opts.t_max)->capture_default_str();
    plot->add_option("--samples", plot_opts.samples, "points per trace")->capture_default_str();
    plot->add_flag("--fold", plot_opts.fold, "reduce samples into the fundamental domain");
    plot->add_flag("--no-octagon", plot_no_octagon, "omit the fundamental octagon");
    plot->add_option("--size", plot_opts.size, "pixels")->capture_default_str();

    // cache-ball
    BallFlags cache_ball;
    auto* cache = app.add_subcommand("cache-ball", "enumerate a ball and write the text cache");
    common(cache, "ball file path");
    add_ball_flags(cache, cache_ball, false);

    // Config entries go right after the subcommand so that later flags win.
    std::vector<std::string> args = raw_args;
    try {
        std::string cfg;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) {
                cfg = args[i + 1];
            } else if (args[i].rfind("--config=", 0) == 0) {
                cfg = args[i].substr(9);
            }
        }
        if (!cfg.empty() && !args.empty()) {
            const auto extra = config_args(cfg, args[0], given_options(args));
            args.insert(args.begin() + 1, extra.begin(), extra.end());
        }
    } catch (const std::exception& e) {
        err << "horolab: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (constants->parsed()) {
            const FuchsianBall ball = load_ball(constants_ball);
            const ConstantEstimates est = estimate_constants(ball);
            emit(out_path, constants_json(est, ball, shared_bolza_group()->name), out);
            return exit_ok;
        }
        if (counterexample->parsed()) {
            require_positive(cx_horizon, "horizon");
            if (cx_samples <= 0) {
                throw DomainError("samples must be > 0");
            }
            // Domain check on a before the (slow) ball enumeration.
            if (!(cx_a > 1)) {
                build_counterexample(cx_a, ConstantEstimates{});
            }
            const FuchsianBall ball = load_ball(cx_ball);
            CounterexampleReport report = build_counterexample(cx_a, estimate_constants(ball));
            if (cx_rate) {
                require_positive(*cx_rate, "rate");
                report.rate = *cx_rate;
            }
            std::optional<VerificationRecord> rec;
            if (report.verdict == Verdict::obstruction_proved) {
                rec = verify_counterexample(report, cx_horizon, cx_samples, ball, workers);
            }
            emit(out_path, counterexample_json(report, rec), out);
            if (!rec) {
                err << "horolab: inconclusive: trace " << format_double(report.trace_value)
                    << " >= 2 + eps_star_lb\n";
                return exit_inconclusive;
            }
            if (!rec->passed) {
                err << "horolab: verification failed: " << rec->failure;
                if (rec->failing_t) {
                    err << " at t = " << format_double(*rec->failing_t);
                }
                err << "\n";
                return exit_inconclusive;
            }
            return exit_ok;
        }
        if (scan->parsed()) {
            require_positive(scan_delta, "delta");
            require_positive(scan_horizon, "horizon");
            if (scan_samples < 0) {
                throw DomainError("samples must be >= 0");
            }
            auto group = shared_bolza_group();
            const GroupElement base = parse_element(scan_base);
            const QuotientPoint x = project(base, group);
            QuotientPoint y;
            std::string pair;
            if (scan_pair == "diag") {
                y = project(compose(base, diag_element(scan_a)), group);
                pair = "diag a=" + format_double(scan_a);
            } else {
                y = horocycle_flow(x, scan_tau);
                pair = "cohorbital tau=" + format_double(scan_tau);
            }
            const FuchsianBall ball = load_ball(scan_ball);
            const DivergenceScan result =
                divergence_scan(x, y, scan_delta, scan_horizon, scan_samples, ball, workers);
            std::ostringstream csv;
            write_scan_csv(csv, result);
            emit(out_path, csv.str(), out);
            if (!summary_path.empty()) {
                emit(summary_path, scan_json(result, pair), out);
            }
            return exit_ok;
        }
        if (sweep->parsed()) {
            sweep_opts.family = pair_family_from_string(sweep_family);
            sweep_opts.deltas = parse_list(sweep_deltas, "deltas");
            sweep_opts.workers = workers;
            const TimeChange tc(SpeedField::parse(sweep_speed), sweep_step);
            const FuchsianBall ball = load_ball(sweep_ball);
            const SeparationReport report = separation_estimate(tc, sweep_opts, ball);
            std::ostringstream csv;
            write_sweep_csv(csv, report);
            emit(out_path, csv.str(), out);
            if (!summary_path.empty()) {
                emit(summary_path, sweep_json(report, tc.speed.describe()), out);
            }
            return exit_ok;
        }
        if (plot->parsed()) {
            if (!plot_starts.empty()) {
                plot_opts.starts.clear();
                for (const auto& s : plot_starts) {
                    plot_opts.starts.push_back(parse_element(s));
                }
            }
            if (plot_opts.samples < 0 || plot_opts.size <= 0) {
                throw DomainError("plot needs samples >= 0 and size > 0");
            }
            plot_opts.octagon = !plot_no_octagon;
            emit(out_path, render_svg(plot_opts, *shared_bolza_group()), out);
            return exit_ok;
        }
        if (cache->parsed()) {
            const FuchsianBall ball = load_ball(cache_ball);
            std::ostringstream text;
            write_ball(text, ball);
            emit(out_path, text.str(), out);
            return exit_ok;
        }
    } catch (const ResourceError& e) {
        err << "horolab: resource cap: " << e.what() << "\n";
        return exit_resource;
    } catch (const std::exception& e) {
        err << "horolab: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

} // namespace horo
