// qsl: command-line front end for the speed-limit bounds.
//
//   qsl point  --model jc|dephasing [parameters] [--csv]
//   qsl fig1   [--gamma0-range a:b:n] [--noise-range a:b:n] [--lambda] ...
//   qsl fig2a  [--s-range a:b:n] [--coherence-range a:b:n] [--eta] ...
//   qsl fig2b  [--s-range a:b:n] [--sz-range a:b:n] [--coherence] ...
//   qsl sweep  <config>
//
// Exit codes: 0 ok, 2 bad arguments, 3 config error, 4 output I/O error,
// 5 numerical non-convergence.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qsl/qsl.hpp"

namespace {

enum ExitCode { kOk = 0, kBadArgs = 2, kConfig = 3, kIo = 4, kNumeric = 5 };

class OutputError : public qsl::Error {
public:
    using qsl::Error::Error;
};

class ArgumentError : public qsl::Error {
public:
    using qsl::Error::Error;
};

/// stdout for "-", a truncated file otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path == "-") {
            out_ = &std::cout;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
        if (!*file_) throw OutputError("cannot open output file `" + path + "`");
        out_ = file_.get();
        path_ = path;
    }
    std::ostream& stream() { return *out_; }
    void close() {
        out_->flush();
        if (!*out_) throw OutputError("failed writing output `" + (path_.empty() ? "-" : path_) + "`");
        if (file_) file_->close();
    }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_ = nullptr;
    std::string path_;
};

struct CommonFlags {
    std::optional<double> tau;
    std::string mode = "strict";
    std::string out = "-";
    std::optional<double> tol;
    bool quiet = false;

    void attach(CLI::App* app) {
        app->add_option("--tau", tau, "Actual driving time");
        app->add_option("--mode", mode, "Weight handling: strict or capped")
            ->check(CLI::IsMember({"strict", "capped"}));
        app->add_option("--out", out, "Output path, `-` for standard output");
        app->add_option("--tol", tol, "Quadrature absolute tolerance");
        app->add_flag("--quiet", quiet, "No progress on standard error");
    }

    qsl::BoundMode bound_mode() const { return mode == "capped" ? qsl::BoundMode::capped : qsl::BoundMode::strict; }

    qsl::QuadratureSpec quadrature() const {
        qsl::QuadratureSpec q;
        if (tol) {
            if (!(*tol > 0.0)) throw ArgumentError("--tol must be > 0");
            q.abs_tol = *tol;
        }
        return q;
    }
};

/// Every model parameter accepted as a flag. Only the ones actually given are
/// forwarded, the rest take model defaults.
struct ParamFlags {
    std::map<std::string, std::optional<double>> values{
        {"lambda", {}}, {"gamma0", {}}, {"p", {}},           {"eta", {}},
        {"s", {}},      {"coherence", {}}, {"sz", {}},       {"temperature", {}}};

    void attach(CLI::App* app, const std::vector<std::string>& names) {
        for (const auto& n : names) app->add_option("--" + n, values.at(n), "Model parameter " + n);
    }

    std::map<std::string, double> given() const {
        std::map<std::string, double> out;
        for (const auto& [k, v] : values)
            if (v) out[k] = *v;
        return out;
    }
};

qsl::Axis parse_range(const std::string& flag, const std::string& text, const std::string& name) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    auto bad = [&] { return ArgumentError(flag + ": expected min:max:steps, got `" + text + "`"); };
    if (parts.size() != 3) throw bad();
    try {
        std::size_t used = 0;
        qsl::Axis a{name, std::stod(parts[0], &used), 0.0, 0};
        if (used != parts[0].size()) throw bad();
        a.max = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw bad();
        a.steps = std::stoi(parts[2], &used);
        if (used != parts[2].size()) throw bad();
        if (a.steps < 2 || !(a.min < a.max)) {
            throw ArgumentError(flag + ": need min < max and steps >= 2, got `" + text + "`");
        }
        return a;
    } catch (const std::logic_error&) {
        throw bad();
    }
}

qsl::SweepProgress progress_printer(const std::string& label, bool quiet) {
    if (quiet) return {};
    return [label, next = std::size_t{0}](std::size_t done, std::size_t total) mutable {
        const std::size_t pct = done * 100 / total;
        if (pct >= next || done == total) {
            std::fprintf(stderr, "[%s] %zu/%zu cells\n", label.c_str(), done, total);
            next = pct + 10;
        }
    };
}

int emit_sweep(const qsl::SweepSpec& spec, const std::string& label, bool quiet) {
    const auto cells = qsl::run_sweep(spec, progress_printer(label, quiet));
    Output out(spec.output_path);
    qsl::write_csv(out.stream(), cells, spec.mode);
    out.close();
    return kOk;
}

void print_result(std::ostream& os, qsl::Model model, const std::map<std::string, double>& params,
                  const qsl::QslResult& r, qsl::BoundMode mode) {
    os << "model:      " << qsl::to_string(model) << '\n';
    for (const auto& [k, v] : params) os << "  " << k << " = " << qsl::format_number(v) << '\n';
    os << "mode:       " << qsl::to_string(mode) << '\n';
    os << "tau:        " << qsl::format_number(r.tau_actual) << '\n';
    os << "tau_qsl:    " << qsl::format_number(r.tau_qsl) << '\n';
    os << "ratio:      " << qsl::format_number(r.ratio()) << '\n';
    os << "theta:      " << qsl::format_number(r.theta.radians()) << '\n';
    os << "lambda_op:  " << qsl::format_number(r.lambda_op) << '\n';
    os << "lambda_tr:  " << qsl::format_number(r.lambda_tr) << '\n';
    os << "lambda_hs:  " << qsl::format_number(r.lambda_hs) << '\n';
    os << "dominant:   " << qsl::to_string(r.dominant) << '\n';
    os << "degenerate: " << (r.degenerate ? "yes" : "no") << '\n';
    for (double t : r.divergence_times) os << "  pure-state crossing at t = " << qsl::format_number(t) << '\n';
}

const std::vector<std::string> kJcFlags{"lambda", "gamma0", "p"};
const std::vector<std::string> kDephasingFlags{"eta", "s", "coherence", "sz", "temperature"};

std::string flag_list(const std::vector<std::string>& names) {
    std::string s;
    for (const auto& n : names) s += (s.empty() ? "--" : ", --") + n;
    return s;
}

int run(int argc, char** argv) {
    CLI::App app{"Quantum speed limit bounds for open qubit dynamics"};
    app.require_subcommand(1);

    // point
    auto* point = app.add_subcommand("point", "Evaluate the bound at one parameter point");
    std::string model_name = "jc";
    bool point_csv = false;
    CommonFlags point_common;
    ParamFlags point_params;
    point->add_option("--model", model_name, "jc or dephasing")->check(CLI::IsMember({"jc", "dephasing"}));
    point->add_flag("--csv", point_csv, "Also write the CSV header and row (to --out)");
    point_common.attach(point);
    std::vector<std::string> all_flags = kJcFlags;
    all_flags.insert(all_flags.end(), kDephasingFlags.begin(), kDephasingFlags.end());
    point_params.attach(point, all_flags);

    // fig1
    auto* fig1 = app.add_subcommand("fig1", "JC ratio over coupling gamma0 and white noise 1-p");
    CommonFlags fig1_common;
    ParamFlags fig1_params;
    std::string gamma0_range = "0.1:12:60", noise_range = "0:1:21";
    fig1->add_option("--gamma0-range", gamma0_range, "gamma0 axis min:max:steps");
    fig1->add_option("--noise-range", noise_range, "white-noise (1-p) axis min:max:steps");
    fig1_common.attach(fig1);
    fig1_params.attach(fig1, {"lambda"});

    // fig2a / fig2b
    auto* fig2a = app.add_subcommand("fig2a", "Dephasing ratio over Ohmic s and coherence");
    CommonFlags fig2a_common;
    ParamFlags fig2a_params;
    std::string s_range_a = "0.1:4:40", coherence_range = "0:1:21";
    fig2a->add_option("--s-range", s_range_a, "s axis min:max:steps");
    fig2a->add_option("--coherence-range", coherence_range, "coherence axis min:max:steps");
    fig2a_common.attach(fig2a);
    fig2a_params.attach(fig2a, {"eta", "sz", "temperature"});

    auto* fig2b = app.add_subcommand("fig2b", "Dephasing ratio over Ohmic s and population <sz>");
    CommonFlags fig2b_common;
    ParamFlags fig2b_params;
    std::string s_range_b = "0.1:4:40", sz_range = "0:0.8:17";
    fig2b->add_option("--s-range", s_range_b, "s axis min:max:steps");
    fig2b->add_option("--sz-range", sz_range, "<sz> axis min:max:steps");
    fig2b_common.attach(fig2b);
    fig2b_params.attach(fig2b, {"eta", "coherence", "temperature"});

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run a two-axis sweep described by a config file");
    std::string config_path;
    std::optional<std::string> sweep_out;
    std::optional<double> sweep_tol;
    bool sweep_quiet = false;
    sweep->add_option("config", config_path, "Sweep config (key = value lines)")->required();
    sweep->add_option("--out", sweep_out, "Output path, overrides `out` in the config");
    sweep->add_option("--tol", sweep_tol, "Quadrature absolute tolerance, overrides `tol`");
    sweep->add_flag("--quiet", sweep_quiet, "No progress on standard error");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ExtrasError& e) {
        std::cerr << "error: " << e.what() << '\n'
                  << "valid parameters: jc: " << flag_list(kJcFlags)
                  << "; dephasing: " << flag_list(kDephasingFlags) << '\n';
        return kBadArgs;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArgs;
    }

    if (point->parsed()) {
        const qsl::Model model = model_name == "jc" ? qsl::Model::jc : qsl::Model::dephasing;
        const auto& valid = model == qsl::Model::jc ? kJcFlags : kDephasingFlags;
        auto params = point_params.given();
        for (const auto& [k, v] : params) {
            if (std::find(valid.begin(), valid.end(), k) == valid.end()) {
                throw ArgumentError("--" + k + " is not a parameter of model " + model_name +
                                    " (valid: " + flag_list(valid) + ")");
            }
        }
        if (point_common.tau) params["tau"] = *point_common.tau;
        const qsl::QslOptions opts{point_common.quadrature(), point_common.bound_mode()};
        const auto result = qsl::evaluate_cell(model, params, opts);
        auto shown = params;
        for (const auto& n : valid)
            if (!shown.contains(n)) shown[n] = qsl::model_defaults(model).at(n);
        print_result(std::cout, model, shown, result, opts.mode);
        if (point_csv) {
            if (point_common.out == "-") std::cout << '\n';
            Output out(point_common.out);
            if (opts.mode == qsl::BoundMode::capped) out.stream() << qsl::capped_mode_banner() << '\n';
            const double a1 = model == qsl::Model::jc ? shown.at("gamma0") : shown.at("s");
            const double a2 = model == qsl::Model::jc ? shown.at("p") : shown.at("coherence");
            out.stream() << qsl::kCsvHeader << '\n' << qsl::csv_row(a1, a2, result) << '\n';
            out.close();
        }
        return kOk;
    }

    auto preset = [](qsl::Model model, qsl::Axis a1, qsl::Axis a2, const CommonFlags& common,
                     const ParamFlags& params) {
        qsl::SweepSpec spec;
        spec.model = model;
        spec.axis1 = std::move(a1);
        spec.axis2 = std::move(a2);
        spec.fixed = params.given();
        spec.tau = common.tau.value_or(qsl::model_defaults(model).at("tau"));
        spec.mode = common.bound_mode();
        spec.output_path = common.out;
        spec.quadrature = common.quadrature();
        return spec;
    };

    if (fig1->parsed()) {
        auto spec = preset(qsl::Model::jc, parse_range("--gamma0-range", gamma0_range, "gamma0"),
                           parse_range("--noise-range", noise_range, "noise"), fig1_common, fig1_params);
        qsl::validate_sweep(spec);
        return emit_sweep(spec, "fig1", fig1_common.quiet);
    }
    if (fig2a->parsed()) {
        auto spec = preset(qsl::Model::dephasing, parse_range("--s-range", s_range_a, "s"),
                           parse_range("--coherence-range", coherence_range, "coherence"), fig2a_common,
                           fig2a_params);
        if (!spec.fixed.contains("sz")) spec.fixed["sz"] = 0.0;
        return emit_sweep(spec, "fig2a", fig2a_common.quiet);
    }
    if (fig2b->parsed()) {
        auto spec = preset(qsl::Model::dephasing, parse_range("--s-range", s_range_b, "s"),
                           parse_range("--sz-range", sz_range, "sz"), fig2b_common, fig2b_params);
        if (!spec.fixed.contains("coherence")) spec.fixed["coherence"] = 0.6;
        return emit_sweep(spec, "fig2b", fig2b_common.quiet);
    }

    std::ifstream in(config_path);
    if (!in) throw qsl::ConfigError("cannot read config file `" + config_path + "`");
    auto spec = qsl::parse_sweep_config(in);
    if (sweep_out) spec.output_path = *sweep_out;
    if (sweep_tol) {
        spec.quadrature.abs_tol = *sweep_tol;
        qsl::validate_sweep(spec);
    }
    return emit_sweep(spec, "sweep", sweep_quiet);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qsl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const OutputError& e) {
        std::cerr << "output error: " << e.what() << '\n';
        return kIo;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadArgs;
    } catch (const qsl::InvalidInput& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return kBadArgs;
    } catch (const qsl::InvalidState& e) {
        std::cerr << "invalid state: " << e.what() << '\n';
        return kBadArgs;
    } catch (const qsl::AccuracyError& e) {
        std::cerr << "numerical error: " << e.what() << " (best estimate " << qsl::format_number(e.estimate())
                  << ")\n";
        return kNumeric;
    } catch (const qsl::Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumeric;
    }
}
