#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "horo/expansiveness.hpp"
#include "horo/fuchsian.hpp"

namespace horo
{

inline constexpr int report_schema_version = 1;

// %.17g; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

// JSON reports, pretty-printed with a trailing newline. Wall time is never
// included so that repeated runs are byte-identical.
std::string constants_json(const ConstantEstimates& estimates, const FuchsianBall& ball,
                           const std::string& group_name);
std::string counterexample_json(const CounterexampleReport& report,
                                const std::optional<VerificationRecord>& verification);
std::string scan_json(const DivergenceScan& scan, const std::string& pair);
std::string sweep_json(const SeparationReport& report, const std::string& speed);

// Scan CSV: "# horolab scan schema_version 1" then "t,lo,hi,lo_certified".
void write_scan_csv(std::ostream& out, const DivergenceScan& scan);
// Sweep CSV: one row per (trial, delta); first_exceed is empty when the
// threshold was never reached before the horizon.
void write_sweep_csv(std::ostream& out, const SeparationReport& report);

} // namespace horo
