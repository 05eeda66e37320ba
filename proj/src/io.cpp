#include "spinforge/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace spinforge {

namespace {

using nlohmann::json;

constexpr double kProfileFileTolerance = 1e-6;

void reject_unknown_keys(const json& object, const std::set<std::string>& allowed, const std::string& where) {
    if (!object.is_object()) {
        throw FormatError(where + " must be a JSON object");
    }
    for (const auto& item : object.items()) {
        if (!allowed.contains(item.key())) {
            throw FormatError("unknown field '" + item.key() + "' in " + where);
        }
    }
    for (const auto& key : allowed) {
        if (!object.contains(key)) {
            throw FormatError("missing field '" + key + "' in " + where);
        }
    }
}

std::vector<double> real_array(const json& value, const std::string& name) {
    if (!value.is_array()) {
        throw FormatError("'" + name + "' must be an array of numbers");
    }
    std::vector<double> out;
    out.reserve(value.size());
    for (const auto& v : value) {
        if (!v.is_number()) {
            throw FormatError("'" + name + "' must contain only numbers");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_real(std::string_view token) {
    const auto first = token.find_first_not_of(" \t\r");
    const auto last = token.find_last_not_of(" \t\r");
    if (first == std::string_view::npos) {
        throw FormatError("empty value in profile");
    }
    token = token.substr(first, last - first + 1);
    if (!token.empty() && token.front() == '+') {
        token.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw FormatError("cannot parse '" + std::string(token) + "' as a number");
    }
    return value;
}

}  // namespace

std::string format_real(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc()) {
        throw std::runtime_error("cannot format real");
    }
    return std::string(buf.data(), ptr);
}

std::string schedule_to_json(const SynthesisSchedule& schedule) {
    validate(schedule);
    json j;
    j["n"] = schedule.n;
    j["j1"] = schedule.j1;
    j["couplings"] = schedule.couplings;
    j["intervals"] = schedule.intervals;
    j["tails"] = schedule.tails;
    j["phases"] = schedule.phases;
    j["branch"] = {{"m", 0}, {"n", "N"}};
    j["meta"] = {{"tool_version", std::string(kToolVersion)}, {"schema_version", kScheduleSchemaVersion}};
    return j.dump(2) + "\n";
}

SynthesisSchedule schedule_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("schedule JSON parse error: ") + e.what());
    }
    reject_unknown_keys(j, {"n", "j1", "couplings", "intervals", "tails", "phases", "branch", "meta"}, "schedule");
    reject_unknown_keys(j["meta"], {"tool_version", "schema_version"}, "meta");
    reject_unknown_keys(j["branch"], {"m", "n"}, "branch");

    const json& meta = j["meta"];
    if (!meta["schema_version"].is_number_integer() || meta["schema_version"].get<int>() != kScheduleSchemaVersion) {
        throw FormatError("schedule schema version " + meta["schema_version"].dump() + " is not supported (expected " +
                          std::to_string(kScheduleSchemaVersion) + ")");
    }
    if (!meta["tool_version"].is_string()) {
        throw FormatError("meta.tool_version must be a string");
    }
    const json& branch = j["branch"];
    if (branch["m"] != 0 || branch["n"] != "N") {
        throw FormatError("only the (m = 0, n = N) branch is supported");
    }
    if (!j["n"].is_number_integer() || !j["j1"].is_number()) {
        throw FormatError("'n' must be an integer and 'j1' a number");
    }

    SynthesisSchedule s;
    s.n = j["n"].get<int>();
    s.j1 = j["j1"].get<double>();
    s.couplings = real_array(j["couplings"], "couplings");
    s.intervals = real_array(j["intervals"], "intervals");
    s.tails = real_array(j["tails"], "tails");
    s.phases = real_array(j["phases"], "phases");
    try {
        validate(s);
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid schedule: ") + e.what());
    }
    return s;
}

void write_schedule(const std::filesystem::path& path, const SynthesisSchedule& schedule) {
    write_file_atomic(path, schedule_to_json(schedule));
}

SynthesisSchedule read_schedule(const std::filesystem::path& path) {
    return schedule_from_json(read_text(path));
}

std::vector<double> parse_profile_text(std::string_view text) {
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start != std::string_view::npos && (text[start] == '[' || text[start] == '{')) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw FormatError(std::string("profile JSON parse error: ") + e.what());
        }
        if (j.is_object()) {
            reject_unknown_keys(j, {"probabilities"}, "profile");
            return real_array(j["probabilities"], "probabilities");
        }
        return real_array(j, "profile");
    }

    std::vector<double> values;
    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::string_view rest = line;
        for (;;) {
            const auto comma = rest.find(',');
            values.push_back(parse_real(rest.substr(0, comma)));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
    }
    if (values.empty()) {
        throw FormatError("profile contains no values");
    }
    return values;
}

std::vector<double> read_profile_values(const std::filesystem::path& path) {
    return parse_profile_text(read_text(path));
}

SiteProbabilityProfile normalize_profile(std::vector<double> values) {
    if (values.empty() || values.size() % 2 != 0) {
        throw FormatError("profile length must be a positive even number, got " + std::to_string(values.size()));
    }
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!(values[j] >= 0.0) || !std::isfinite(values[j])) {
            throw FormatError("profile entry " + std::to_string(j + 1) + " is negative or not finite");
        }
    }
    const double sum = std::accumulate(values.begin(), values.end(), 0.0);
    if (std::abs(sum - 1.0) > kProfileFileTolerance) {
        throw FormatError("profile sums to " + format_real(sum) + ", not 1 within 1e-6");
    }
    for (double& v : values) {
        v /= sum;
    }
    return SiteProbabilityProfile(std::move(values));
}

void write_curve_csv(std::ostream& out, const FidelityCurve& curve, const Threshold& threshold) {
    out << "eps_scaled,fidelity\n";
    for (const auto& p : curve.points) {
        out << format_real(p.eps_scaled) << ',' << format_real(p.fidelity) << '\n';
    }
    out << "# threshold," << format_real(threshold.eps_scaled) << ','
        << (threshold.unbounded ? "unbounded" : "bounded") << '\n';
}

void write_scaling_csv(std::ostream& out, const SensitivityReport& report) {
    out << "N,eps_star,N_times_eps_star\n";
    for (const auto& row : report.rows) {
        out << row.n << ',' << format_real(row.eps_star) << ',' << format_real(row.n_times_eps_star) << '\n';
    }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace) {
    out << "time";
    const std::size_t sites = trace.empty() ? 0 : trace.front().probabilities.size();
    for (std::size_t j = 1; j <= sites; ++j) {
        out << ",P" << j;
    }
    out << '\n';
    for (const auto& row : trace) {
        out << format_real(row.time);
        for (const double p : row.probabilities) {
            out << ',' << format_real(p);
        }
        out << '\n';
    }
}

void write_schedule_csv(std::ostream& out, const SynthesisSchedule& schedule) {
    out << "k,J,J_over_J1,t,tau\n";
    for (int k = 1; k <= schedule.n; ++k) {
        const auto i = static_cast<std::size_t>(k - 1);
        out << k << ',' << format_real(schedule.couplings[i]) << ','
            << format_real(schedule.couplings[i] / schedule.couplings[0]) << ',' << format_real(schedule.intervals[i])
            << ',' << format_real(schedule.tails[i]) << '\n';
    }
}

void write_site_table_csv(std::ostream& out, const std::vector<double>& target, const std::vector<double>& generated,
                          const std::vector<double>& dense) {
    if (target.size() != generated.size() || target.size() != dense.size()) {
        throw std::invalid_argument("site table columns differ in length");
    }
    out << "site,target,generated,dense\n";
    for (std::size_t j = 0; j < target.size(); ++j) {
        out << j + 1 << ',' << format_real(target[j]) << ',' << format_real(generated[j]) << ','
            << format_real(dense[j]) << '\n';
    }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw FormatError("cannot open " + tmp.string() + " for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw FormatError("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw FormatError("cannot move output into place at " + path.string());
    }
}

}  // namespace spinforge
