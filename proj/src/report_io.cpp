#include "horo/report_io.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace horo
{

using Json = nlohmann::ordered_json;

namespace
{

// Non-finite values have no JSON literal; they are written as strings.
Json num(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

Json opt(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json matrix_json(const GroupElement& g) { return Json::array({g.a(), g.b(), g.c(), g.d()}); }

} // namespace

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string constants_json(const ConstantEstimates& e, const FuchsianBall& ball,
                           const std::string& group_name)
{
    const char* grade = to_string(e.certified ? EvidenceGrade::certified_numeric
                                              : EvidenceGrade::evidence);
    Json j;
    j["schema_version"] = report_schema_version;
    j["report"] = "constants";
    j["group"] = group_name;
    j["word_length"] = ball.word_length_limit;
    j["displacement_limit"] = num(ball.displacement_limit);
    j["element_count"] = ball.size();
    j["explored"] = ball.explored;
    j["complete_radius"] = num(e.complete_radius);
    j["eps_star_lb"] = {{"value", num(e.eps_star_lb)},
                        {"certified_global_minimum", e.certified},
                        {"evidence_grade", grade}};
    j["sigma0_lb"] = {{"value", num(e.sigma0_lb)},
                      {"definition", "2 acosh(1 + eps_star_lb / 2) / sqrt(2)"},
                      {"evidence_grade", grade}};
    return dump(j);
}

std::string counterexample_json(const CounterexampleReport& r,
                                const std::optional<VerificationRecord>& v)
{
    Json j;
    j["schema_version"] = report_schema_version;
    j["report"] = "counterexample";
    j["a"] = r.a;
    j["h"] = matrix_json(r.h);
    j["rate"] = r.rate;
    j["closeness"] = r.closeness;
    j["trace_value"] = r.trace_value;
    j["eps_star_lb"] = {{"value", r.eps_star_lb},
                        {"certified_global_minimum", r.eps_star_certified},
                        {"word_length_used", r.word_length_used},
                        {"complete_radius", num(r.complete_radius)},
                        {"evidence_grade", to_string(r.eps_star_certified
                                                         ? EvidenceGrade::certified_numeric
                                                         : EvidenceGrade::evidence)}};
    j["verdict"] = to_string(r.verdict);
    if (!v) {
        j["verification"] = nullptr;
        return dump(j);
    }
    Json checks = Json::array();
    for (const auto& c : v->checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"evidence_grade", to_string(c.grade)},
                          {"detail", c.detail}});
    }
    j["verification"] = {{"passed", v->passed},
                         {"horizon", v->horizon},
                         {"samples", v->samples},
                         {"max_conjugation_residual", v->max_conjugation_residual},
                         {"max_distance_residual", v->max_distance_residual},
                         {"max_formula_residual", v->max_formula_residual},
                         {"max_hi_excess", v->max_hi_excess},
                         {"residual_tolerance", counterexample_residual_tol},
                         {"orbit_witness_found", v->witness_found},
                         {"failing_t", opt(v->failing_t)},
                         {"failure", v->failure},
                         {"checks", checks}};
    return dump(j);
}

std::string scan_json(const DivergenceScan& s, const std::string& pair)
{
    std::size_t certified = 0;
    for (const auto& x : s.samples) {
        certified += x.lo_certified ? 1 : 0;
    }
    Json j;
    j["schema_version"] = report_schema_version;
    j["report"] = "scan";
    j["pair"] = pair;
    j["delta"] = s.delta;
    j["horizon"] = s.horizon;
    j["samples"] = s.n;
    j["lo_certified_samples"] = certified;
    j["sup_lo"] = s.sup_lo;
    j["sup_hi"] = s.sup_hi;
    j["first_exceed"] = opt(s.first_exceed);
    j["evidence_grade"] = to_string(EvidenceGrade::evidence);
    return dump(j);
}

std::string sweep_json(const SeparationReport& r, const std::string& speed)
{
    const auto& o = r.options;
    Json fractions = Json::array();
    for (std::size_t k = 0; k < o.deltas.size(); ++k) {
        fractions.push_back({{"delta", o.deltas[k]}, {"fraction_separated", r.fraction_separated[k]}});
    }
    Json j;
    j["schema_version"] = report_schema_version;
    j["report"] = "sweep";
    j["family"] = to_string(o.family);
    j["speed"] = speed;
    j["trials"] = o.trials;
    j["horizon"] = o.horizon;
    j["samples"] = o.samples;
    j["seed"] = o.seed;
    if (o.family == PairFamily::diag) {
        j["a"] = o.a;
        j["perturbation"] = o.perturbation;
    } else {
        j["max_shift"] = o.max_shift;
    }
    j["separation"] = fractions;
    j["evidence_grade"] = to_string(EvidenceGrade::evidence);
    j["note"] = "empirical separation frequencies; not a proof";
    return dump(j);
}

void write_scan_csv(std::ostream& out, const DivergenceScan& scan)
{
    out << "# horolab scan schema_version " << report_schema_version << "\n";
    out << "t,lo,hi,lo_certified\n";
    for (const auto& s : scan.samples) {
        out << format_double(s.t) << ',' << format_double(s.bracket.lo) << ','
            << format_double(s.bracket.hi) << ',' << (s.lo_certified ? 1 : 0) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SeparationReport& report)
{
    const auto& o = report.options;
    out << "# horolab sweep schema_version " << report_schema_version << " seed " << o.seed
        << "\n";
    out << "trial,shift,delta,first_exceed,sup_lo,sup_hi\n";
    for (std::size_t i = 0; i < report.trials.size(); ++i) {
        const auto& t = report.trials[i];
        for (std::size_t k = 0; k < o.deltas.size(); ++k) {
            out << i << ',' << format_double(t.shift) << ',' << format_double(o.deltas[k]) << ','
                << (t.first_exceed[k] ? format_double(*t.first_exceed[k]) : "") << ','
                << format_double(t.sup_lo) << ',' << format_double(t.sup_hi) << '\n';
        }
    }
}

} // namespace horo
