#include "spfide/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spfide {

using nlohmann::json;

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
    std::string out = "invalid config:";
    for (const auto& issue : issues) {
        out += "\n  - ";
        out += issue;
    }
    return out;
}

class Loader {
public:
    explicit Loader(const json& root) : root_(root) {}

    Config run() {
        check_keys(root_, "", {"problem", "run"});
        if (!root_.contains("problem")) {
            issues_.push_back("missing required block: problem");
        } else if (!root_["problem"].is_object()) {
            issues_.push_back("problem must be an object");
        } else {
            load_problem(root_["problem"]);
        }
        if (root_.contains("run")) {
            if (!root_["run"].is_object()) issues_.push_back("run must be an object");
            else load_run(root_["run"]);
        }
        if (issues_.empty()) {
            config_.validation = validate(config_.problem);
            for (const auto& violation : config_.validation.violations)
                issues_.push_back("problem: " + violation);
        }
        if (!issues_.empty()) throw ConfigError(std::move(issues_));
        return std::move(config_);
    }

private:
    const json& root_;
    Config config_;
    std::vector<std::string> issues_;

    void check_keys(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
        for (const auto& item : obj.items()) {
            bool known = false;
            for (const char* key : allowed)
                if (item.key() == key) known = true;
            if (!known) issues_.push_back("unknown key: " + prefix + item.key());
        }
    }

    std::optional<double> require_number(const json& obj, const char* key,
                                         const std::string& prefix) {
        if (!obj.contains(key)) {
            issues_.push_back("missing required field: " + prefix + key);
            return std::nullopt;
        }
        if (!obj[key].is_number()) {
            issues_.push_back(prefix + key + " must be a number");
            return std::nullopt;
        }
        return obj[key].get<double>();
    }

    std::optional<Expr> parse_field(const json& obj, const char* key,
                                    const std::string& prefix, bool required) {
        if (!obj.contains(key)) {
            if (required) issues_.push_back("missing required field: " + prefix + key);
            return std::nullopt;
        }
        if (!obj[key].is_string()) {
            issues_.push_back(prefix + key + " must be an expression string");
            return std::nullopt;
        }
        try {
            return parse_expression(obj[key].get<std::string>());
        } catch (const Error& e) {
            issues_.push_back(prefix + key + ": " + e.what());
            return std::nullopt;
        }
    }

    // Boundary values may be numbers or expressions in eps.
    std::optional<double> boundary_value(const json& obj, const char* key,
                                         const std::string& prefix, double eps) {
        if (!obj.contains(key)) {
            issues_.push_back("missing required field: " + prefix + key);
            return std::nullopt;
        }
        const json& v = obj[key];
        if (v.is_number()) return v.get<double>();
        if (!v.is_string()) {
            issues_.push_back(prefix + key + " must be a number or an expression in eps");
            return std::nullopt;
        }
        try {
            const Expr e = parse_expression(v.get<std::string>());
            Bindings b;
            b.set(Var::eps, eps);
            return eval(e, b);
        } catch (const Error& e) {
            issues_.push_back(prefix + key + ": " + e.what());
            return std::nullopt;
        }
    }

    void load_problem(const json& p) {
        const std::string prefix = "problem.";
        check_keys(p, prefix, {"eps", "lambda", "l", "a", "b", "K", "f", "exact", "A", "B"});

        const auto eps = require_number(p, "eps", prefix);
        const auto coupling = require_number(p, "lambda", prefix);
        const auto length = require_number(p, "l", prefix);
        if (eps) config_.problem.eps = *eps;
        if (coupling) config_.problem.coupling = *coupling;
        if (length) config_.problem.length = *length;

        if (auto e = parse_field(p, "a", prefix, true)) config_.problem.convection = *e;
        if (auto e = parse_field(p, "b", prefix, true)) config_.problem.reaction = *e;
        if (auto e = parse_field(p, "K", prefix, true)) config_.problem.kernel = *e;
        config_.problem.forcing = parse_field(p, "f", prefix, false);
        config_.problem.exact = parse_field(p, "exact", prefix, false);
        if (!p.contains("f") && !p.contains("exact"))
            issues_.push_back("problem must provide f, exact, or both");

        const double eps_for_bounds = eps.value_or(1.0);
        if (auto v = boundary_value(p, "A", prefix, eps_for_bounds))
            config_.problem.left_value = *v;
        if (auto v = boundary_value(p, "B", prefix, eps_for_bounds))
            config_.problem.right_value = *v;
    }

    void load_run(const json& r) {
        const std::string prefix = "run.";
        check_keys(r, prefix,
                   {"N", "eps_list", "N_list", "scheme", "quad_points", "out", "out_dir"});

        if (r.contains("N")) {
            if (!r["N"].is_number_integer() || r["N"].get<long long>() < 2)
                issues_.push_back("run.N must be an integer >= 2");
            else config_.run.intervals = r["N"].get<int>();
        }
        if (r.contains("eps_list")) {
            if (!r["eps_list"].is_array() || r["eps_list"].empty()) {
                issues_.push_back("run.eps_list must be a non-empty array of numbers");
            } else {
                std::size_t index = 0;
                for (const auto& v : r["eps_list"]) {
                    if (!v.is_number()) {
                        issues_.push_back("run.eps_list entries must be numbers");
                        break;
                    }
                    const double eps = v.get<double>();
                    if (!(eps > 0.0) || eps > 1.0) {
                        std::ostringstream out;
                        out << "run.eps_list[" << index << "] must lie in (0,1]";
                        issues_.push_back(out.str());
                    }
                    config_.run.eps_values.push_back(eps);
                    ++index;
                }
            }
        }
        if (r.contains("N_list")) {
            if (!r["N_list"].is_array() || r["N_list"].empty()) {
                issues_.push_back("run.N_list must be a non-empty array of integers");
            } else {
                for (const auto& v : r["N_list"]) {
                    if (!v.is_number_integer()) {
                        issues_.push_back("run.N_list entries must be integers");
                        break;
                    }
                    config_.run.N_values.push_back(v.get<int>());
                }
            }
        }
        if (r.contains("scheme")) {
            const std::string kind = r["scheme"].is_string() ? r["scheme"].get<std::string>() : "";
            if (kind == "fitted") config_.run.kind = SchemeKind::fitted;
            else if (kind == "standard") config_.run.kind = SchemeKind::standard;
            else issues_.push_back("run.scheme must be \"fitted\" or \"standard\"");
        }
        if (r.contains("quad_points")) {
            if (!r["quad_points"].is_number_integer() ||
                r["quad_points"].get<long long>() < 1024)
                issues_.push_back("run.quad_points must be an integer >= 1024");
            else config_.run.quad_points = r["quad_points"].get<int>();
        }
        if (r.contains("out")) {
            if (!r["out"].is_string()) issues_.push_back("run.out must be a string path");
            else config_.run.out = r["out"].get<std::string>();
        }
        if (r.contains("out_dir")) {
            if (!r["out_dir"].is_string())
                issues_.push_back("run.out_dir must be a string path");
            else config_.run.out_dir = r["out_dir"].get<std::string>();
        }
    }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues_)
    : Error(join_issues(issues_)), issues(std::move(issues_)) {}

Config load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("JSON parse error in ") + path + ": " + e.what()});
    }
    if (!root.is_object()) throw ConfigError({"config root must be a JSON object"});
    return Loader(root).run();
}

}  // namespace spfide
