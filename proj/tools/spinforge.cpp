#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spinforge/dynamics.hpp"
#include "spinforge/io.hpp"
#include "spinforge/sensitivity.hpp"
#include "spinforge/state_library.hpp"
#include "spinforge/synthesis.hpp"

using namespace spinforge;

namespace {

constexpr int kCheckFailed = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StateSpec {
    std::string kind;
    int n = 0;
    std::optional<double> sigma;
    std::string profile;

    void attach(CLI::App& cmd, const std::string& flag, bool with_n) {
        cmd.add_option(flag, kind, "Target state")->check(CLI::IsMember({"w", "gaussian", "file"}));
        if (with_n) {
            cmd.add_option("--n", n, "Number of virtual chains N (2N sites)")->check(CLI::PositiveNumber);
        }
        cmd.add_option("--sigma", sigma, "Gaussian width in chain units")->check(CLI::PositiveNumber);
        cmd.add_option("--profile", profile, "Profile file (CSV or JSON)");
    }

    bool given() const { return !kind.empty(); }

    SiteProbabilityProfile build(int chains) const {
        if (kind == "w") {
            require_n(chains);
            return w_state_profile(chains);
        }
        if (kind == "gaussian") {
            require_n(chains);
            if (!sigma) {
                throw UsageError("--sigma is required for a gaussian state");
            }
            return gaussian_state_profile(chains, *sigma);
        }
        if (kind == "file") {
            if (profile.empty()) {
                throw UsageError("--profile is required for a file state");
            }
            auto p = custom_profile_from_file(profile);
            if (chains > 0 && p.size().chains() != chains) {
                throw UsageError("profile has " + std::to_string(p.size().sites()) + " sites, expected " +
                                 std::to_string(2 * chains));
            }
            return p;
        }
        throw UsageError("a state is required (w, gaussian or file)");
    }

    static void require_n(int chains) {
        if (chains < 1) {
            throw UsageError("--n is required");
        }
    }
};

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        write_file_atomic(path, content);
    }
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + format_real(v[i]);
    }
    return out;
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
    StateSpec state;
    double j1 = 1.0;
    std::string out;
    std::string emit;
    double tolerance = 1e-9;
};

int run_synth(const SynthArgs& a) {
    const auto target = a.state.build(a.state.n);
    const auto s = synthesize(target, a.j1);
    const auto bounds = coupling_bounds_check(s);
    const bool inverted = site_to_virtual_probabilities(target).any_inverted();

    std::cout << "N " << s.n << "\nj1 " << format_real(s.j1) << "\n";
    std::cout << "k,J,J_over_J1,t\n";
    for (int k = 0; k < s.n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        std::cout << k + 1 << "," << format_real(s.couplings[i]) << "," << format_real(bounds.ratios[i]) << ","
                  << format_real(s.intervals[i]) << "\n";
    }

    // Without inverted pairs the product bounds are guaranteed; with them only
    // the e bounds are.
    const bool bounds_ok = bounds.within_e && (bounds.within_product || inverted);
    std::cout << "bounds " << (bounds.within_e ? "within" : "outside") << " (e^-1/2, e); product bounds "
              << (bounds.within_product ? "hold" : (inverted ? "not guaranteed (inverted pairs)" : "VIOLATED"))
              << "\n";

    const auto predicted = apply_phase_layer(evolve_virtual_closed_form(s), s.phases);
    std::cout << "predicted " << join(predicted.probabilities()) << "\n";
    const double f = fidelity(predicted, magnitude_state(target));
    std::cout << "predicted_fidelity " << format_real(f) << "\n";

    if (!a.out.empty()) {
        write_schedule(a.out, s);
    }
    if (!a.emit.empty()) {
        std::ostringstream csv;
        write_schedule_csv(csv, s);
        emit(a.emit, csv.str());
    }
    if (!bounds_ok) {
        std::cerr << "error: coupling bounds check failed\n";
        return kCheckFailed;
    }
    if (f < 1.0 - a.tolerance) {
        std::cerr << "error: predicted fidelity below 1 - " << a.tolerance << "\n";
        return kCheckFailed;
    }
    return 0;
}

// --- verify --------------------------------------------------------------

struct VerifyArgs {
    std::string schedule;
    StateSpec target;
    std::string emit;
    std::string trace;
    int samples = 20;
    double tolerance = 1e-9;
};

int run_verify(const VerifyArgs& a) {
    const auto s = read_schedule(a.schedule);
    const auto closed = evolve_virtual_closed_form(s);
    const auto raw = propagate_full(s.coupling_profile(), s.intervals, Pulses::Enabled,
                                    SingleExcitationState::basis(s.size(), 1));
    const double deviation = max_amplitude_deviation(closed, raw);
    const auto dense = apply_phase_layer(raw, s.phases);
    const auto generated = apply_phase_layer(closed, s.phases);

    std::optional<SiteProbabilityProfile> target;
    if (a.target.given()) {
        target = a.target.build(s.n);
    }
    std::vector<double> target_p = target ? std::vector<double>(target->values().begin(), target->values().end())
                                          : generated.probabilities();
    const SingleExcitationState reference = target ? magnitude_state(*target) : generated;
    const double f = fidelity(dense, reference);

    std::cout << "N " << s.n << "\n";
    std::cout << "engine_deviation " << format_real(deviation) << "\n";
    std::cout << "fidelity " << format_real(f) << (target ? "" : " (against the closed form)") << "\n";

    std::ostringstream table;
    write_site_table_csv(table, target_p, generated.probabilities(), dense.probabilities());
    emit(a.emit, table.str());

    if (!a.trace.empty()) {
        std::ostringstream trace;
        write_trace_csv(trace, sample_evolution(s.coupling_profile(), s.intervals, a.samples,
                                                SingleExcitationState::basis(s.size(), 1)));
        emit(a.trace, trace.str());
    }

    int status = 0;
    if (deviation > a.tolerance) {
        std::cerr << "error: engines disagree by " << deviation << "\n";
        status = kCheckFailed;
    }
    if (f < 1.0 - a.tolerance) {
        std::cerr << "error: fidelity below 1 - " << a.tolerance << "\n";
        status = kCheckFailed;
    }
    return status;
}

// --- sweep ---------------------------------------------------------------

struct SweepArgs {
    StateSpec state;
    double j1 = 1.0;
    double eps_max = 0.03;
    int steps = 100;
    double f_star = 0.99;
    std::string out;
};

int run_sweep(const SweepArgs& a) {
    const auto profile = a.state.build(a.state.n);
    const TimingSensitivity sens(profile, a.j1);
    const auto grid = uniform_grid(a.eps_max, a.steps);
    const auto curve = sens.curve(grid, a.state.kind);
    const auto threshold = tolerance_threshold(curve, a.f_star, [&](double e) { return sens.fidelity_at(e); });
    std::ostringstream csv;
    write_curve_csv(csv, curve, threshold);
    emit(a.out, csv.str());
    return 0;
}

// --- scaling -------------------------------------------------------------

struct ScalingArgs {
    StateSpec state;
    std::vector<int> sizes;
    double j1 = 1.0;
    double f_star = 0.99;
    std::string out;
};

int run_scaling(const ScalingArgs& a) {
    if (a.state.kind == "file") {
        throw UsageError("scaling needs a state family; use w or gaussian");
    }
    const StateSpec spec = a.state;
    spec.build(a.sizes.front());  // surfaces missing flags before any sweep runs
    const auto report = scaling_analysis([&](int n) { return spec.build(n); }, a.sizes, a.j1, a.f_star);
    std::ostringstream csv;
    write_scaling_csv(csv, report);
    emit(a.out, csv.str());
    for (const auto& row : report.rows) {
        if (row.unbounded) {
            std::cerr << "warning: no crossing below " << a.f_star << " found for N = " << row.n << "\n";
        }
    }
    std::cerr << "spread " << format_real(report.spread()) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulse-and-coupling schedules that prepare single-excitation states on a spin network"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    SynthArgs synth;
    auto* cmd_synth = app.add_subcommand("synth", "Synthesize a schedule for a target profile");
    synth.state.attach(*cmd_synth, "--state", true);
    cmd_synth->get_option("--state")->required();
    cmd_synth->add_option("--j1", synth.j1, "Free coupling scale J1")->check(CLI::PositiveNumber);
    cmd_synth->add_option("--out", synth.out, "Schedule JSON path");
    cmd_synth->add_option("--emit", synth.emit, "Coupling/timing table CSV path ('-' for stdout)");
    cmd_synth->add_option("--tolerance", synth.tolerance, "Allowed fidelity shortfall");

    VerifyArgs verify;
    auto* cmd_verify = app.add_subcommand("verify", "Check a schedule with both evolution engines");
    cmd_verify->add_option("--schedule", verify.schedule, "Schedule JSON path")->required();
    verify.target.attach(*cmd_verify, "--target", false);
    cmd_verify->add_option("--emit", verify.emit, "Per-site probability table CSV path ('-' for stdout)");
    cmd_verify->add_option("--trace", verify.trace, "Probability trace CSV path");
    cmd_verify->add_option("--samples", verify.samples, "Trace samples per interval")->check(CLI::PositiveNumber);
    cmd_verify->add_option("--tolerance", verify.tolerance, "Allowed deviation and fidelity shortfall");

    SweepArgs sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "Fidelity against accumulated timing error");
    sweep.state.attach(*cmd_sweep, "--state", true);
    cmd_sweep->get_option("--state")->required();
    cmd_sweep->add_option("--j1", sweep.j1, "Free coupling scale J1")->check(CLI::PositiveNumber);
    cmd_sweep->add_option("--eps-max", sweep.eps_max, "Largest J1*epsilon on the grid")->check(CLI::PositiveNumber);
    cmd_sweep->add_option("--steps", sweep.steps, "Grid points including 0")->check(CLI::PositiveNumber);
    cmd_sweep->add_option("--fidelity", sweep.f_star, "Threshold fidelity F*")->check(CLI::Range(0.0, 1.0));
    cmd_sweep->add_option("--out", sweep.out, "Curve CSV path (stdout if omitted)");

    ScalingArgs scaling;
    auto* cmd_scaling = app.add_subcommand("scaling", "Threshold epsilon* across network sizes");
    scaling.state.attach(*cmd_scaling, "--state", false);
    cmd_scaling->get_option("--state")->default_val("w");
    cmd_scaling->add_option("--n", scaling.sizes, "Comma-separated chain counts")
        ->required()
        ->delimiter(',')
        ->check(CLI::PositiveNumber);
    cmd_scaling->add_option("--j1", scaling.j1, "Free coupling scale J1")->check(CLI::PositiveNumber);
    cmd_scaling->add_option("--fidelity", scaling.f_star, "Threshold fidelity F*")->check(CLI::Range(0.0, 1.0));
    cmd_scaling->add_option("--out", scaling.out, "Scaling CSV path (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_synth->parsed()) {
            return run_synth(synth);
        }
        if (cmd_verify->parsed()) {
            return run_verify(verify);
        }
        if (cmd_sweep->parsed()) {
            return run_sweep(sweep);
        }
        return run_scaling(scaling);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return kCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCheckFailed;
    }
}
