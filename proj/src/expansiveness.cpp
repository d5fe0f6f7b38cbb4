#include "horo/expansiveness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "horo/parallel.hpp"

namespace horo
{

namespace
{

std::string fmt(const char* pattern, double v)
{
    char buf[128];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

double mat_distance(const Mat2& m, const GroupElement& g)
{
    return std::max({std::abs(m.a - g.a()), std::abs(m.b - g.b()), std::abs(m.c - g.c()),
                     std::abs(m.d - g.d())});
}

std::vector<double> uniform_times(double horizon, int n)
{
    std::vector<double> ts;
    if (n <= 0) {
        return ts;
    }
    if (n == 1) {
        return {0.0};
    }
    ts.reserve(n);
    for (int k = 0; k < n; ++k) {
        ts.push_back(k == n - 1 ? horizon : horizon * k / (n - 1));
    }
    return ts;
}

} // namespace

GroupElement conj_by_horocycles(const GroupElement& k, double s1, double s2)
{
    return compose(compose(horocycle_element(-s2), k), horocycle_element(s1));
}

Mat2 conj_closed_form(const GroupElement& k, double s1, double s2)
{
    const double top_left = k.a() - k.c() * s2;
    return {top_left, top_left * s1 - k.d() * s2 + k.b(), k.c(), k.c() * s1 + k.d()};
}

const char* to_string(Verdict v)
{
    return v == Verdict::obstruction_proved ? "obstruction_proved" : "inconclusive";
}

const char* to_string(EvidenceGrade g)
{
    switch (g) {
    case EvidenceGrade::proof:
        return "proof";
    case EvidenceGrade::certified_numeric:
        return "certified-numeric";
    case EvidenceGrade::evidence:
        return "evidence";
    }
    return "evidence";
}

CounterexampleReport build_counterexample(double a, const ConstantEstimates& estimates)
{
    if (!(a > 0) || !std::isfinite(a)) {
        throw DomainError("counterexample needs a finite a > 1");
    }
    if (a == 1) {
        throw DomainError("a = 1 gives h = e, so x = y: degenerate counterexample");
    }
    if (a < 1) {
        throw DomainError("counterexample needs a > 1");
    }
    CounterexampleReport r;
    r.a = a;
    r.h = diag_element(a);
    r.rate = a * a;
    r.closeness = dist_upper(r.h, GroupElement{});
    r.trace_value = trace(r.h);
    r.eps_star_lb = estimates.eps_star_lb;
    r.eps_star_certified = estimates.certified;
    r.word_length_used = estimates.word_length_used;
    r.complete_radius = estimates.complete_radius;
    r.verdict = r.trace_value < 2 + r.eps_star_lb ? Verdict::obstruction_proved
                                                   : Verdict::inconclusive;
    return r;
}

std::vector<double> log_spaced_symmetric(double horizon, int n, double t_min)
{
    std::vector<double> ts;
    if (n <= 0) {
        return ts;
    }
    t_min = std::min(t_min, horizon);
    const int half = n / 2;
    std::vector<double> pos;
    pos.reserve(half);
    const double l0 = std::log(t_min);
    const double l1 = std::log(horizon);
    for (int k = 0; k < half; ++k) {
        const double frac = half == 1 ? 1.0 : static_cast<double>(k) / (half - 1);
        pos.push_back(k == half - 1 ? horizon : std::exp(l0 + frac * (l1 - l0)));
    }
    ts.reserve(n);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
        ts.push_back(-*it);
    }
    if (n % 2 == 1) {
        ts.push_back(0.0);
    }
    ts.insert(ts.end(), pos.begin(), pos.end());
    return ts;
}

VerificationRecord verify_counterexample(const CounterexampleReport& report, double horizon,
                                         int n, const FuchsianBall& ball, unsigned workers)
{
    VerificationRecord rec;
    rec.horizon = horizon;
    rec.samples = n;
    if (report.verdict != Verdict::obstruction_proved) {
        rec.failure = "verdict is inconclusive; nothing to verify";
        return rec;
    }
    if (!(horizon > 0) || n <= 0) {
        throw DomainError("verification needs T > 0 and n > 0");
    }
    auto group = shared_bolza_group();
    const QuotientPoint x = project(GroupElement{}, group);
    const QuotientPoint y = project(report.h, group);
    const std::vector<double> ts = log_spaced_symmetric(horizon, n);

    struct Sample {
        double conj = 0, dist = 0, formula = 0, excess = 0;
    };
    std::vector<Sample> out(ts.size());
    parallel_for(ts.size(), workers, [&](std::size_t i) {
        const double t = ts[i];
        const double s = report.rate * t;
        const GroupElement conj = conj_by_horocycles(report.h, t, s);
        Sample& o = out[i];
        o.conj = entry_distance(conj, report.h);
        o.dist = std::abs(dist_upper(conj, GroupElement{}) - report.closeness);
        o.formula = mat_distance(conj_closed_form(report.h, t, s), conj);
        const QuotientDistance q =
            quotient_dist(horocycle_flow(x, s), horocycle_flow(y, t), ball);
        o.excess = q.bracket.hi - report.closeness;
    });

    const double tol = counterexample_residual_tol;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const Sample& o = out[i];
        rec.max_conjugation_residual = std::max(rec.max_conjugation_residual, o.conj);
        rec.max_distance_residual = std::max(rec.max_distance_residual, o.dist);
        rec.max_formula_residual = std::max(rec.max_formula_residual, o.formula);
        rec.max_hi_excess = i == 0 ? o.excess : std::max(rec.max_hi_excess, o.excess);
        if (!rec.failing_t && (o.conj > tol || o.dist > tol || o.excess > tol)) {
            rec.failing_t = ts[i];
            rec.failure = o.excess > tol ? "quotient distance exceeds closeness"
                                         : "conjugation residual exceeds tolerance";
        }
    }

    const auto witness = same_orbit_witness(x, y, ball, orbit_witness_tol);
    rec.witness_found = witness.has_value();

    const double closeness_exact = std::sqrt(2.0) * std::log(report.a);
    rec.checks.push_back(
        {"closeness_bound", std::abs(report.closeness - closeness_exact) <= 1e-12,
         EvidenceGrade::proof,
         "d_G(h, e) <= |log h|_F = sqrt(2) ln a via the curve exp(s log h); computed " +
             fmt("%.17g", report.closeness)});
    rec.checks.push_back(
        {"conjugation_identity",
         rec.max_conjugation_residual <= tol && rec.max_distance_residual <= tol,
         EvidenceGrade::certified_numeric,
         "b_{-a^2 t} h b_t = h is an exact identity; max entry residual " +
             fmt("%.3e", rec.max_conjugation_residual) + " over log-spaced t in [-T, T]"});
    rec.checks.push_back({"conjugation_entry_formula", rec.max_formula_residual <= tol,
                          EvidenceGrade::certified_numeric,
                          "group product agrees with the closed-form entries of b_{-s2} K b_{s1}; "
                          "max residual " +
                              fmt("%.3e", rec.max_formula_residual)});
    rec.checks.push_back({"quotient_closeness", rec.max_hi_excess <= tol,
                          EvidenceGrade::certified_numeric,
                          "hi of d_X(theta_{s(t)} x, theta_t y) never exceeds closeness; max excess " +
                              fmt("%.3e", rec.max_hi_excess)});
    rec.checks.push_back(
        {"trace_obstruction", report.trace_value < 2 + report.eps_star_lb,
         report.eps_star_certified ? EvidenceGrade::certified_numeric : EvidenceGrade::evidence,
         std::string("any gamma = h b_tau has trace a + 1/a = ") + fmt("%.10f", report.trace_value) +
             " < 2 + eps_star_lb = " + fmt("%.10f", 2 + report.eps_star_lb) +
             (report.eps_star_certified
                  ? "; eps_star_lb is the minimum over all of Gamma \\ {e} (ball complete "
                    "to 2R + systole)"
                  : "; eps_star_lb only covers the enumerated ball")});
    rec.checks.push_back({"identity_excluded", report.a != 1, EvidenceGrade::proof,
                          "gamma = e would force b_{-tau} = h, impossible since a != 1"});
    rec.checks.push_back({"no_orbit_witness_in_ball", !rec.witness_found, EvidenceGrade::evidence,
                          "no gamma in the ball makes g1^-1 gamma g2 unipotent; a semi-decision, "
                          "the trace obstruction is the proof"});
    rec.checks.push_back(
        {"strong_kinematic_expansiveness", true, EvidenceGrade::evidence,
         "positive statement over all time changes is not decidable numerically; its ingredients "
         "(alpha bound via speed limits, conjugation entry formula, k21 = 0 diagonal instances) "
         "are exercised by the acceptance suite, not proved here"});

    rec.passed = !rec.failing_t;
    for (const auto& c : rec.checks) {
        rec.passed = rec.passed && c.passed;
    }
    if (rec.passed) {
        rec.failure.clear();
    } else if (rec.failure.empty()) {
        for (const auto& c : rec.checks) {
            if (!c.passed) {
                rec.failure = "check failed: " + c.name;
                break;
            }
        }
    }
    return rec;
}

DivergenceScan divergence_scan(const QuotientPoint& x, const QuotientPoint& y, double delta,
                               double horizon, int n, const FuchsianBall& ball, unsigned workers)
{
    if (!(delta > 0) || !(horizon > 0)) {
        throw DomainError("divergence_scan needs delta > 0 and T > 0");
    }
    DivergenceScan scan;
    scan.delta = delta;
    scan.horizon = horizon;
    scan.n = std::max(n, 0);
    const std::vector<double> ts = uniform_times(horizon, n);
    scan.samples.resize(ts.size());
    parallel_for(ts.size(), workers, [&](std::size_t i) {
        const QuotientDistance q =
            quotient_dist(horocycle_flow(x, ts[i]), horocycle_flow(y, ts[i]), ball);
        scan.samples[i] = {ts[i], q.bracket, q.lo_certified};
    });
    for (const auto& s : scan.samples) {
        scan.sup_lo = std::max(scan.sup_lo, s.bracket.lo);
        scan.sup_hi = std::max(scan.sup_hi, s.bracket.hi);
        if (!scan.first_exceed && s.lo_certified && s.bracket.lo >= delta) {
            scan.first_exceed = s.t;
        }
    }
    return scan;
}

const char* to_string(PairFamily f) { return f == PairFamily::diag ? "diag" : "cohorbital"; }

PairFamily pair_family_from_string(const std::string& s)
{
    if (s == "diag") {
        return PairFamily::diag;
    }
    if (s == "cohorbital") {
        return PairFamily::cohorbital;
    }
    throw ConfigError("pair family must be diag or cohorbital, got " + s);
}

SeparationReport separation_estimate(const TimeChange& tc, const SeparationOptions& options,
                                     const FuchsianBall& ball)
{
    SeparationReport report;
    report.options = options;
    if (options.deltas.empty()) {
        return report;
    }
    if (options.trials < 0 || !(options.horizon > 0) || options.samples < 1) {
        throw DomainError("separation_estimate needs trials >= 0, T > 0, samples >= 1");
    }
    for (double d : options.deltas) {
        if (!(d > 0)) {
            throw DomainError("separation thresholds must be > 0");
        }
    }
    auto group = shared_bolza_group();
    const std::vector<double> ts = uniform_times(options.horizon, options.samples);
    const std::size_t nd = options.deltas.size();
    report.trials.resize(options.trials);

    parallel_for(report.trials.size(), options.workers, [&](std::size_t trial) {
        SplitMix64 rng(derive_seed(options.seed, trial));
        const QuotientPoint x = project(random_group_element(rng, 0.5), group);
        QuotientPoint y;
        TrialResult res;
        if (options.family == PairFamily::diag) {
            const LieVector nudge{options.perturbation * rng.uniform(-1, 1),
                                  options.perturbation * rng.uniform(-1, 1),
                                  options.perturbation * rng.uniform(-1, 1)};
            y = project(compose(compose(x.rep, diag_element(options.a)), exp_psl2(nudge)), group);
        } else {
            res.shift = rng.uniform(-options.max_shift, options.max_shift);
            y = psi(tc, res.shift, x);
        }
        res.first_exceed.assign(nd, std::nullopt);
        BetaStepper bx(tc, x);
        BetaStepper by(tc, y);
        std::size_t open = nd;
        for (double t : ts) {
            const QuotientDistance q = quotient_dist(horocycle_flow(x, bx.advance_to(t)),
                                                     horocycle_flow(y, by.advance_to(t)), ball);
            res.sup_lo = std::max(res.sup_lo, q.bracket.lo);
            res.sup_hi = std::max(res.sup_hi, q.bracket.hi);
            for (std::size_t j = 0; j < nd; ++j) {
                if (!res.first_exceed[j] && q.lo_certified && q.bracket.lo >= options.deltas[j]) {
                    res.first_exceed[j] = t;
                    --open;
                }
            }
            if (open == 0) {
                break;
            }
        }
        report.trials[trial] = std::move(res);
    });

    report.fraction_separated.assign(nd, 0.0);
    for (std::size_t j = 0; j < nd; ++j) {
        int count = 0;
        for (const auto& r : report.trials) {
            count += r.first_exceed[j].has_value() ? 1 : 0;
        }
        report.fraction_separated[j] =
            options.trials > 0 ? static_cast<double>(count) / options.trials : 0.0;
    }
    return report;
}

} // namespace horo
