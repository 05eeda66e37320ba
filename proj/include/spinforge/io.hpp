#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spinforge/dynamics.hpp"
#include "spinforge/sensitivity.hpp"
#include "spinforge/types.hpp"

namespace spinforge {

inline constexpr int kScheduleSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

// Thrown for malformed files, schema mismatches and unknown fields.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shortest decimal that parses back to the same double.
std::string format_real(double value);

// Schedule JSON:
// {"n", "j1", "couplings", "intervals", "tails", "phases",
//  "branch": {"m": 0, "n": "N"}, "meta": {"tool_version", "schema_version"}}
// Unknown keys at any level are rejected.
std::string schedule_to_json(const SynthesisSchedule& schedule);
SynthesisSchedule schedule_from_json(std::string_view text);

void write_schedule(const std::filesystem::path& path, const SynthesisSchedule& schedule);
SynthesisSchedule read_schedule(const std::filesystem::path& path);

// Profile text: CSV (one value per line, or comma separated; '#' starts a
// comment) or JSON (a bare array, or {"probabilities": [...]}). JSON is
// detected by a leading '[' or '{'.
std::vector<double> parse_profile_text(std::string_view text);
std::vector<double> read_profile_values(const std::filesystem::path& path);

// Even length, nonnegative entries, sum within 1e-6 of 1; renormalized exactly.
SiteProbabilityProfile normalize_profile(std::vector<double> values);

// eps_scaled,fidelity rows, then "# threshold,<eps*>,<bounded|unbounded>".
void write_curve_csv(std::ostream& out, const FidelityCurve& curve, const Threshold& threshold);

// N,eps_star,N_times_eps_star
void write_scaling_csv(std::ostream& out, const SensitivityReport& report);

// time,P1,...,P2N
void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace);

// k,J,J_over_J1,t,tau
void write_schedule_csv(std::ostream& out, const SynthesisSchedule& schedule);

// site,target,generated,dense
void write_site_table_csv(std::ostream& out, const std::vector<double>& target, const std::vector<double>& generated,
                          const std::vector<double>& dense);

// Writes to a sibling temporary file and renames it into place, so readers
// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace spinforge
