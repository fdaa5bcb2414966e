#pragma once

// Two-axis parameter sweeps: `key = value` config parsing, per-cell bound
// evaluation and CSV emission with a fixed column schema.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "qsl/engine.hpp"
#include "qsl/errors.hpp"

namespace qsl {

enum class Model { jc, dephasing };

inline constexpr std::string_view to_string(Model m) noexcept {
    return m == Model::jc ? "jc" : "dephasing";
}

/// Config or sweep description problem. line() is 0 for validation errors
/// that do not belong to a single line.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    int steps = 2;

    /// Evenly spaced, both ends included, ascending.
    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(steps));
        for (int i = 0; i < steps; ++i) {
            v[static_cast<std::size_t>(i)] = i + 1 == steps ? max : min + (max - min) * i / (steps - 1);
        }
        return v;
    }
};

struct SweepSpec {
    Model model = Model::jc;
    Axis axis1;
    Axis axis2;
    std::map<std::string, double> fixed;
    double tau = 1.0;
    BoundMode mode = BoundMode::strict;
    std::string output_path = "-";
    QuadratureSpec quadrature{};
};

// ---------------------------------------------------------------------------
// Model parameters

/// Every parameter a model understands, with its default. JC cells start from
/// (1-p)/2 I + p|+><+|; `noise` is 1 - p, the axis used by the Fig. 1 preset.
inline const std::map<std::string, double>& model_defaults(Model m) {
    static const std::map<std::string, double> jc{
        {"lambda", 15.0}, {"gamma0", 1.0}, {"p", 1.0}, {"noise", 0.0}, {"tau", 1.0}};
    static const std::map<std::string, double> deph{{"eta", 1.0},   {"s", 1.0},
                                                    {"coherence", 0.6}, {"sz", 0.0},
                                                    {"temperature", 0.0}, {"omega_c", 1.0},
                                                    {"tau", 3.0}};
    return m == Model::jc ? jc : deph;
}

inline std::string parameter_names(Model m) {
    std::string out;
    for (const auto& [k, v] : model_defaults(m)) {
        if (!out.empty()) out += ", ";
        out += k;
    }
    return out;
}

inline bool is_model_parameter(Model m, const std::string& name) {
    return model_defaults(m).contains(name);
}

/// Bound for one cell. `values` holds explicitly set parameters; anything
/// missing takes the model default. Throws InvalidInput / InvalidState for
/// unphysical cells.
inline QslResult evaluate_cell(Model model, const std::map<std::string, double>& values,
                               const QslOptions& opts) {
    auto get = [&](const std::string& k) {
        auto it = values.find(k);
        return it != values.end() ? it->second : model_defaults(model).at(k);
    };
    if (model == Model::jc) {
        const double p = values.contains("noise") ? 1.0 - get("noise") : get("p");
        return qsl_jc_noisy_max_coherent(p, JcParams(get("lambda"), get("gamma0")), get("tau"), opts);
    }
    const DephasingParams params(get("eta"), get("s"), get("omega_c"), get("temperature"));
    return qsl_dephasing_closed(get("coherence"), get("sz"), params, get("tau"), opts);
}

// ---------------------------------------------------------------------------
// Config parsing

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return v;
}

}  // namespace detail

/// Raw `key = value` pairs with the line each came from.
struct ConfigEntries {
    std::map<std::string, std::pair<std::string, int>> values;
};

inline ConfigEntries parse_config_entries(std::istream& in) {
    ConfigEntries out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected `key = value`", lineno);
        const std::string key(detail::trim(view.substr(0, eq)));
        const std::string value(detail::trim(view.substr(eq + 1)));
        if (key.empty()) throw ConfigError("missing key before '='", lineno);
        if (value.empty()) throw ConfigError("missing value for `" + key + "`", lineno);
        if (out.values.contains(key)) {
            throw ConfigError("duplicate key `" + key + "` (first set on line " +
                                  std::to_string(out.values.at(key).second) + ")",
                              lineno);
        }
        out.values.emplace(key, std::make_pair(value, lineno));
    }
    return out;
}

/// Checks that a spec is runnable; errors name the offending field.
inline void validate_sweep(const SweepSpec& spec) {
    for (const Axis* ax : {&spec.axis1, &spec.axis2}) {
        const std::string field = ax == &spec.axis1 ? "axis1" : "axis2";
        if (ax->name.empty()) throw ConfigError(field + ".name is required");
        if (!is_model_parameter(spec.model, ax->name)) {
            throw ConfigError(field + ".name: `" + ax->name + "` is not a parameter of model " +
                              std::string(to_string(spec.model)) + " (valid: " +
                              parameter_names(spec.model) + ")");
        }
        if (ax->steps < 2) throw ConfigError(field + ".steps must be >= 2");
        if (!(ax->min < ax->max)) throw ConfigError(field + ".min must be < " + field + ".max");
        if (spec.fixed.contains(ax->name)) {
            throw ConfigError(field + ".name: `" + ax->name + "` is also given a fixed value");
        }
    }
    if (spec.axis1.name == spec.axis2.name) throw ConfigError("axis2.name must differ from axis1.name");
    for (const auto& [k, v] : spec.fixed) {
        if (!is_model_parameter(spec.model, k)) {
            throw ConfigError("`" + k + "` is not a parameter of model " + std::string(to_string(spec.model)) +
                              " (valid: " + parameter_names(spec.model) + ")");
        }
    }
    if (spec.model == Model::jc) {
        std::set<std::string> used{spec.axis1.name, spec.axis2.name};
        for (const auto& [k, v] : spec.fixed) used.insert(k);
        if (used.contains("p") && used.contains("noise")) {
            throw ConfigError("p: set either `p` or `noise` (= 1 - p), not both");
        }
    }
    if (!(spec.tau > 0.0)) throw ConfigError("tau must be > 0");
    try {
        spec.quadrature.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(std::string("tol: ") + e.what());
    }
}

inline SweepSpec parse_sweep_config(std::istream& in) {
    const auto entries = parse_config_entries(in);
    auto take = [&](const std::string& key) -> const std::pair<std::string, int>* {
        auto it = entries.values.find(key);
        return it == entries.values.end() ? nullptr : &it->second;
    };
    auto number = [&](const std::string& key, const std::pair<std::string, int>& v) {
        auto d = detail::parse_double(v.first);
        if (!d) throw ConfigError("`" + key + "`: not a number: `" + v.first + "`", v.second);
        return *d;
    };

    SweepSpec spec;
    const auto* model = take("model");
    if (!model) throw ConfigError("model is required (jc or dephasing)");
    if (model->first == "jc") {
        spec.model = Model::jc;
    } else if (model->first == "dephasing") {
        spec.model = Model::dephasing;
    } else {
        throw ConfigError("model: unknown model `" + model->first + "` (valid: jc, dephasing)", model->second);
    }
    spec.tau = model_defaults(spec.model).at("tau");

    std::set<std::string> consumed{"model"};
    for (auto [prefix, axis] : {std::pair{"axis1", &spec.axis1}, std::pair{"axis2", &spec.axis2}}) {
        const std::string p(prefix);
        if (const auto* v = take(p + ".name")) axis->name = v->first;
        if (const auto* v = take(p + ".min")) axis->min = number(p + ".min", *v);
        if (const auto* v = take(p + ".max")) axis->max = number(p + ".max", *v);
        if (const auto* v = take(p + ".steps")) {
            auto n = detail::parse_int(v->first);
            if (!n) throw ConfigError("`" + p + ".steps`: not an integer: `" + v->first + "`", v->second);
            axis->steps = *n;
        }
        for (const char* f : {".name", ".min", ".max", ".steps"}) consumed.insert(p + f);
        if (!take(p + ".min") || !take(p + ".max") || !take(p + ".steps")) {
            throw ConfigError(p + ".min, " + p + ".max and " + p + ".steps are required");
        }
    }
    if (const auto* v = take("tau")) spec.tau = number("tau", *v);
    if (const auto* v = take("mode")) {
        if (v->first == "strict") {
            spec.mode = BoundMode::strict;
        } else if (v->first == "capped") {
            spec.mode = BoundMode::capped;
        } else {
            throw ConfigError("mode: expected strict or capped, got `" + v->first + "`", v->second);
        }
    }
    if (const auto* v = take("out")) spec.output_path = v->first;
    if (const auto* v = take("tol")) spec.quadrature.abs_tol = number("tol", *v);
    consumed.insert({"tau", "mode", "out", "tol"});

    for (const auto& [key, v] : entries.values) {
        if (consumed.contains(key)) continue;
        if (!is_model_parameter(spec.model, key)) {
            throw ConfigError("unknown key `" + key + "` for model " + std::string(to_string(spec.model)) +
                                  " (parameters: " + parameter_names(spec.model) + ")",
                              v.second);
        }
        spec.fixed[key] = number(key, v);
    }
    validate_sweep(spec);
    return spec;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCsvHeader =
    "axis1,axis2,tau_qsl,ratio,theta,lambda_op,lambda_tr,lambda_hs,dominant,degenerate";

inline std::string format_number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string csv_row(double axis1, double axis2, const QslResult& r) {
    std::string s;
    s += format_number(axis1) + ',' + format_number(axis2) + ',';
    s += format_number(r.tau_qsl) + ',' + format_number(r.ratio()) + ',';
    s += format_number(r.theta.radians()) + ',';
    s += format_number(r.lambda_op) + ',' + format_number(r.lambda_tr) + ',' + format_number(r.lambda_hs) + ',';
    s += std::string(to_string(r.dominant)) + ',';
    s += r.degenerate ? '1' : '0';
    return s;
}

/// Row for a cell whose parameters describe no valid state.
inline std::string csv_invalid_row(double axis1, double axis2) {
    return format_number(axis1) + ',' + format_number(axis2) + ",,,,,,,,1";
}

inline std::string capped_mode_banner() {
    return "# mode=capped: weight ratio sqrt(D0/Dt) clamped at " + format_number(kCappedWeightRatio) +
           "; values are diagnostic, not bounds";
}

struct SweepCell {
    double axis1 = 0.0;
    double axis2 = 0.0;
    std::optional<QslResult> result;  // empty for invalid cells
};

using SweepProgress = std::function<void(std::size_t done, std::size_t total)>;

/// Evaluates every cell, axis1 outer and axis2 inner, both ascending.
inline std::vector<SweepCell> run_sweep(const SweepSpec& spec, const SweepProgress& progress = {}) {
    validate_sweep(spec);
    const auto xs = spec.axis1.values();
    const auto ys = spec.axis2.values();
    const QslOptions opts{spec.quadrature, spec.mode};
    std::vector<SweepCell> cells;
    cells.reserve(xs.size() * ys.size());
    for (double x : xs) {
        for (double y : ys) {
            auto values = spec.fixed;
            values["tau"] = spec.tau;
            values[spec.axis1.name] = x;
            values[spec.axis2.name] = y;
            SweepCell cell{x, y, std::nullopt};
            try {
                cell.result = evaluate_cell(spec.model, values, opts);
            } catch (const InvalidState&) {
            } catch (const InvalidInput&) {
            }
            cells.push_back(std::move(cell));
            if (progress) progress(cells.size(), xs.size() * ys.size());
        }
    }
    return cells;
}

inline void write_csv(std::ostream& out, const std::vector<SweepCell>& cells, BoundMode mode) {
    if (mode == BoundMode::capped) out << capped_mode_banner() << '\n';
    out << kCsvHeader << '\n';
    for (const auto& c : cells) {
        out << (c.result ? csv_row(c.axis1, c.axis2, *c.result) : csv_invalid_row(c.axis1, c.axis2)) << '\n';
    }
}

}  // namespace qsl
