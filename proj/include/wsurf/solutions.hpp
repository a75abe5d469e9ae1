#pragma once

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "expr.hpp"
#include "field.hpp"
#include "sigma.hpp"

namespace wsurf {

enum class Model { cp1, cp2 };

// Serializable description of a solution.
struct SolutionSpec {
    std::string name;
    Model model = Model::cp1;
    std::map<std::string, std::string> fields;  // "w" or "w1", "w2"
    std::vector<cd> punctures;
    nlohmann::json params = nlohmann::json::object();
    std::string printed_A, printed_J;           // optional closed forms for A and J
};

struct Solution {
    SolutionSpec spec;
    std::optional<CP1Solution> cp1;
    std::optional<CP2Solution> cp2;

    bool is_cp1() const { return spec.model == Model::cp1; }

    // CP¹ solutions embedded by w₁ = w₂ = w/√2.
    CP2Solution as_cp2() const {
        if (cp2) return *cp2;
        const FieldConfig& w = cp1->w;
        FieldConfig e(w.expr * Expr(1 / std::sqrt(2.0)), w.punctures);
        e.cut_angle = w.cut_angle;
        return {e, e};
    }
    std::vector<cd> punctures() const { return cp1 ? punctures_of(*cp1) : punctures_of(*cp2); }
    double puncture_distance(cd z) const { return cp1 ? wsurf::puncture_distance(*cp1, z) : wsurf::puncture_distance(*cp2, z); }
};

inline Solution make_solution(const SolutionSpec& spec) {
    Solution s;
    s.spec = spec;
    auto field = [&](const char* key) {
        auto it = spec.fields.find(key);
        if (it == spec.fields.end()) throw SpecParse(std::string("missing field '") + key + "'");
        return FieldConfig::parse(it->second, spec.punctures);
    };
    if (spec.model == Model::cp1) {
        s.cp1 = CP1Solution{field("w")};
    } else {
        s.cp2 = CP2Solution{field("w1"), field("w2")};
    }
    return s;
}

// ---- JSON -----------------------------------------------------------------------

inline nlohmann::json to_json(const SolutionSpec& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["model"] = s.model == Model::cp1 ? "cp1" : "cp2";
    j["fields"] = s.fields;
    j["punctures"] = nlohmann::json::array();
    for (auto p : s.punctures) j["punctures"].push_back({p.real(), p.imag()});
    j["params"] = s.params;
    if (!s.printed_A.empty()) j["printed"]["A"] = s.printed_A;
    if (!s.printed_J.empty()) j["printed"]["J"] = s.printed_J;
    return j;
}

inline SolutionSpec spec_from_json(const nlohmann::json& j) {
    try {
        if (!j.is_object()) throw SpecParse("solution spec must be a JSON object");
        SolutionSpec s;
        s.name = j.value("name", std::string("custom"));
        const std::string model = j.at("model").get<std::string>();
        if (model == "cp1")
            s.model = Model::cp1;
        else if (model == "cp2")
            s.model = Model::cp2;
        else
            throw SpecParse("model must be \"cp1\" or \"cp2\"");
        const auto& f = j.at("fields");
        if (!f.is_object()) throw SpecParse("fields must be an object");
        for (auto it = f.begin(); it != f.end(); ++it) s.fields[it.key()] = it.value().get<std::string>();
        if (s.model == Model::cp1 && !s.fields.count("w")) throw SpecParse("cp1 spec needs field \"w\"");
        if (s.model == Model::cp2 && (!s.fields.count("w1") || !s.fields.count("w2")))
            throw SpecParse("cp2 spec needs fields \"w1\" and \"w2\"");
        if (j.contains("punctures")) {
            for (auto& p : j.at("punctures")) {
                if (!p.is_array() || p.size() != 2) throw SpecParse("punctures must be [x, y] pairs");
                s.punctures.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
        }
        if (j.contains("params")) s.params = j.at("params");
        if (j.contains("printed")) {
            s.printed_A = j["printed"].value("A", std::string());
            s.printed_J = j["printed"].value("J", std::string());
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw SpecParse(std::string("malformed solution spec: ") + e.what());
    }
}

// ---- builtins ----------------------------------------------------------------------

// β with 2β a nonzero integer; accepts "1", "1/2", "0.5", "-3/2".
inline int parse_twice_beta(const std::string& text) {
    double v;
    auto slash = text.find('/');
    try {
        size_t used = 0;
        if (slash != std::string::npos) {
            double num = std::stod(text.substr(0, slash), &used);
            if (used != slash) throw SpecParse("bad beta");
            std::string dstr = text.substr(slash + 1);
            double den = std::stod(dstr, &used);
            if (used != dstr.size() || den == 0) throw SpecParse("bad beta");
            v = num / den;
        } else {
            v = std::stod(text, &used);
            if (used != text.size()) throw SpecParse("bad beta");
        }
    } catch (const std::logic_error&) {
        throw SpecParse("meron parameter is not a number: " + text);
    }
    const double t = 2 * v;
    if (std::abs(t - std::round(t)) > 1e-12 || std::round(t) == 0)
        throw SpecParse("meron parameter must be a nonzero integer or half-integer");
    return static_cast<int>(std::round(t));
}

inline std::string fmt_beta(int twice) {
    return twice % 2 == 0 ? std::to_string(twice / 2) : "(" + std::to_string(twice) + "/2)";
}

inline SolutionSpec meron_spec(int twice_beta) {
    SolutionSpec s;
    const std::string b = fmt_beta(twice_beta);
    const std::string mb = twice_beta % 2 == 0 ? "(" + std::to_string(-twice_beta / 2) + ")"
                                                : "(" + std::to_string(-twice_beta) + "/2)";
    s.name = "meron(" + (twice_beta % 2 == 0 ? std::to_string(twice_beta / 2) : std::to_string(twice_beta) + "/2") + ")";
    s.model = Model::cp1;
    s.fields["w"] = "z^" + b + "*zb^" + mb;
    s.punctures = {cd(0, 0)};
    s.params["beta"] = twice_beta / 2.0;
    const double b2 = twice_beta * twice_beta / 4.0;
    s.printed_A = "2";
    s.printed_J = "-" + detail::fmt_real(b2) + "/(2*z^2)";
    return s;
}

inline SolutionSpec builtin_spec(const std::string& name_in) {
    std::string name = name_in;
    SolutionSpec s;
    s.name = name;
    if (name == "example1") {
        s.model = Model::cp2;
        s.fields = {{"w1", "z"}, {"w2", "1"}};
        s.printed_A = "2+z*zb";
        s.printed_J = "0";
    } else if (name == "example2") {
        s.model = Model::cp2;
        s.fields = {{"w1", "z^2"}, {"w2", "sqrt(2)*z"}};
        s.printed_A = "(1+z*zb)^2";
        s.printed_J = "0";
    } else if (name == "example3") {
        s.model = Model::cp2;
        s.fields = {{"w1", "(z+zb)/(1-z*zb)"}, {"w2", "(zb-z)/(1-z*zb)"}};
        s.printed_A = "((1+z*zb)/(1-z*zb))^2";
        s.printed_J = "0";
    } else if (name == "veronese_mixed" || name == "veronese") {
        s.name = "veronese_mixed";
        s.model = Model::cp2;
        s.fields = {{"w1", "-zb*(3+2*z*zb)/(3-(z*zb)^2)"}, {"w2", "sqrt(3)*z*(2+z*zb)/(3-(z*zb)^2)"}};
        s.printed_A = "(1+z*zb)*((z*zb)^3+6*(z*zb)^2+12*z*zb+9)/(3-(z*zb)^2)^2";
        s.printed_J = "0";
    } else if (name == "meron") {
        return meron_spec(2);
    } else {
        static const std::regex re(R"(meron\(\s*([^)]*?)\s*\))");
        std::smatch m;
        if (std::regex_match(name, m, re)) return meron_spec(parse_twice_beta(m[1].str()));
        throw UnknownName("unknown builtin solution: " + name_in);
    }
    return s;
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"example1", "example2", "example3", "veronese_mixed", "meron(1)",
                                                "meron(1/2)", "wronskian_mixed"};
    return names;
}

// ---- Wronskian construction --------------------------------------------------------

struct HolomorphicTriple {
    FieldConfig f1, f2, f3;
};

// g_i = Σ_{k≠i} f̄_k (f_k D f_i − f_i D f_k), w = (g1/g3, g2/g3). D = ∂ for a
// holomorphic triple, ∂̄ for the antiholomorphic variant.
inline CP2Solution wronskian_mixed(const HolomorphicTriple& t, Wrt D = Wrt::dz) {
    const Expr f[3] = {t.f1.expr, t.f2.expr, t.f3.expr};
    const Wrt other = D == Wrt::dz ? Wrt::dzb : Wrt::dz;
    static const cd samples[] = {{0.3, 0.1}, {-0.7, 0.4}, {1.1, -0.9}, {0.05, 2.0}, {-1.6, -0.2}, {2.3, 1.7}};
    for (auto& e : f)
        for (auto z : samples) {
            cd v;
            try {
                v = eval_value(derive(e, other), z);
            } catch (const Error&) {
                continue;
            }
            if (std::abs(v) > 1e-10)
                throw NotHolomorphic(D == Wrt::dz ? "triple entry is not holomorphic" : "triple entry is not antiholomorphic");
        }
    Expr df[3];
    for (int i = 0; i < 3; ++i) df[i] = derive(f[i], D);
    Expr g[3];
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            if (k != i) g[i] = g[i] + conj(f[k]) * (f[k] * df[i] - f[i] * df[k]);
    bool zero = true;
    for (auto z : samples) {
        try {
            if (std::abs(eval_value(g[2], z)) > 1e-14) zero = false;
        } catch (const Error&) {
            zero = false;
        }
    }
    if (zero || g[2].is_zero()) throw DegenerateTriple("g3 vanishes identically");
    std::vector<cd> punct = t.f1.punctures;
    for (auto* fc : {&t.f2, &t.f3}) punct.insert(punct.end(), fc->punctures.begin(), fc->punctures.end());
    FieldConfig w1(g[0] / g[2], punct), w2(g[1] / g[2], punct);
    w1.source = to_string(w1.expr);
    w2.source = to_string(w2.expr);
    return {w1, w2};
}

inline HolomorphicTriple standard_triple() {
    return {FieldConfig::parse("1"), FieldConfig::parse("z"), FieldConfig::parse("z^2")};
}

inline Solution wronskian_solution(const HolomorphicTriple& t = standard_triple(), Wrt D = Wrt::dz) {
    Solution s;
    s.cp2 = wronskian_mixed(t, D);
    s.spec.name = "wronskian_mixed";
    s.spec.model = Model::cp2;
    s.spec.fields = {{"w1", s.cp2->w1.source}, {"w2", s.cp2->w2.source}};
    s.spec.punctures = {cd(0, 0)};
    s.cp2->w1.punctures = s.spec.punctures;
    s.cp2->w2.punctures = s.spec.punctures;
    return s;
}

inline Solution builtin(const std::string& name) {
    if (name == "wronskian_mixed") return wronskian_solution();
    return make_solution(builtin_spec(name));
}

// Builtin name, or path to a JSON spec.
inline Solution load_solution(const std::string& name_or_path) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_regular_file(name_or_path, ec)) {
        std::ifstream in(name_or_path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw SpecParse(std::string("invalid JSON in solution spec: ") + e.what());
        }
        return make_solution(spec_from_json(j));
    }
    return builtin(name_or_path);
}

}  // namespace wsurf
