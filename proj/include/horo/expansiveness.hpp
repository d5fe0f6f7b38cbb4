#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "horo/flows.hpp"
#include "horo/fuchsian.hpp"
#include "horo/psl2.hpp"
#include "horo/random.hpp"

namespace horo
{

// b_{-s2} K b_{s1} by group multiplication.
GroupElement conj_by_horocycles(const GroupElement& k, double s1, double s2);
// The same product from its entry formula:
// (k11 - k21 s2, (k11 - k21 s2) s1 - k22 s2 + k12; k21, k21 s1 + k22).
Mat2 conj_closed_form(const GroupElement& k, double s1, double s2);

enum class Verdict { obstruction_proved, inconclusive };
const char* to_string(Verdict v);

// How much a recorded check establishes.
//   proof             closed-form fact, no sampling involved
//   certified-numeric exhaustive or exact-identity check in floating point
//   evidence          sampled or semi-decision; not a proof
enum class EvidenceGrade { proof, certified_numeric, evidence };
const char* to_string(EvidenceGrade g);

struct Check {
    std::string name;
    bool passed = false;
    EvidenceGrade grade = EvidenceGrade::evidence;
    std::string detail;
};

// Non-expansiveness witness: x = Γe, y = Γh with h = diag(a, 1/a) and the
// reparametrization s(t) = a^2 t.
struct CounterexampleReport {
    double a = 0;
    GroupElement h;
    double rate = 0; // s(t) = rate * t
    double closeness = 0;
    double trace_value = 0;
    double eps_star_lb = 0;
    bool eps_star_certified = false;
    int word_length_used = 0;
    double complete_radius = 0;
    Verdict verdict = Verdict::inconclusive;
};

// Throws DomainError for a <= 1 (a = 1 is the degenerate x = y case).
CounterexampleReport build_counterexample(double a, const ConstantEstimates& estimates);

struct VerificationRecord {
    bool passed = false;
    double horizon = 0;
    int samples = 0;
    double max_conjugation_residual = 0; // entrywise |b_{-s(t)} h b_t - h|
    double max_distance_residual = 0;    // |dist_upper(b_{-s(t)} h b_t, e) - closeness|
    double max_formula_residual = 0;     // product vs entry formula
    double max_hi_excess = -1;           // max over t of hi(d_X) - closeness
    bool witness_found = false;
    std::optional<double> failing_t;
    std::string failure;
    std::vector<Check> checks;
};

inline constexpr double counterexample_residual_tol = 1e-9;
inline constexpr double orbit_witness_tol = 1e-6;

// n log-spaced t in [-T, T]; |t| from t_min to T, mirrored, plus 0 when n is odd.
std::vector<double> log_spaced_symmetric(double horizon, int n, double t_min = 1e-3);

VerificationRecord verify_counterexample(const CounterexampleReport& report, double horizon,
                                         int n, const FuchsianBall& ball, unsigned workers = 1);

struct ScanSample {
    double t = 0;
    DistanceBracket bracket;
    bool lo_certified = false;
};

struct DivergenceScan {
    double delta = 0;
    double horizon = 0;
    int n = 0;
    std::vector<ScanSample> samples;
    double sup_lo = 0;
    double sup_hi = 0;
    std::optional<double> first_exceed; // first sampled t with lo >= delta
};

// n uniform samples of d_X(θ_t x, θ_t y) over [0, T].
DivergenceScan divergence_scan(const QuotientPoint& x, const QuotientPoint& y, double delta,
                               double horizon, int n, const FuchsianBall& ball,
                               unsigned workers = 1);

enum class PairFamily { diag, cohorbital };
const char* to_string(PairFamily f);
PairFamily pair_family_from_string(const std::string& s);

struct SeparationOptions {
    PairFamily family = PairFamily::diag;
    int trials = 10;
    std::vector<double> deltas;
    double horizon = 1e3;
    int samples = 10000;
    double a = 1.05;             // diag family: y = Γ g diag(a) exp(perturbation)
    double perturbation = 1e-3;
    double max_shift = 0.05;     // cohorbital family: y = ψ_r(x), |r| <= max_shift
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

struct TrialResult {
    double shift = 0; // r for cohorbital pairs
    double sup_lo = 0;
    double sup_hi = 0;
    std::vector<std::optional<double>> first_exceed; // one per delta
};

// Empirical positive-separation evidence under a time change. Never a proof.
struct SeparationReport {
    SeparationOptions options;
    std::vector<TrialResult> trials;
    std::vector<double> fraction_separated; // one per delta
};

SeparationReport separation_estimate(const TimeChange& tc, const SeparationOptions& options,
                                     const FuchsianBall& ball);

} // namespace horo
