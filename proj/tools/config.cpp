#include <cstdlib>
#include <fstream>
#include <set>

#include "cli.hpp"

namespace toeplitz::cli {

Rational parse_field(const std::string& field, const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument&) {
        throw ConfigError(field, "expected an exact rational \"p\" or \"p/q\", got \"" + text + "\"");
    }
}

void RunConfig::validate() const {
    if (N < 1) throw ConfigError("N", "must be at least 1");
    if (M < 3) throw ConfigError("M", "must be at least 3");
    if (half_width != 0 && half_width < 2 * N + M + 2)
        throw ConfigError("half_width", "must be at least 2N + M + 2 = " + std::to_string(2 * N + M + 2));
    if (steps < 1) throw ConfigError("steps", "must be positive");
    for (const auto& [i, s] : u) {
        const std::string f = "u." + std::to_string(i);
        if (i == 0 || std::abs(i) > N) throw ConfigError(f, "index outside ±1..±N");
        if (self_dual && i < 0) throw ConfigError(f, "self-dual mode takes u_1..u_N only");
        parse_field(f, s);
    }
    auto nonzero = [&](int i) {
        auto it = u.find(i);
        if (it == u.end() || parse_field("u." + std::to_string(i), it->second) == 0)
            throw ConfigError("u." + std::to_string(i), "must be given and nonzero");
    };
    nonzero(N);
    if (!self_dual) nonzero(-N);
    if (parse_field("lambda", lambda) <= 0) throw ConfigError("lambda", "must be positive");
    for (const auto* m : {&alpha, &beta}) {
        const char* name = m == &alpha ? "alpha" : "beta";
        for (const auto& [k, s] : *m) {
            const std::string f = std::string(name) + "." + std::to_string(k);
            if (k < n - 2 * N || k > n - 1) throw ConfigError(f, "plateau sites run from n-2N to n-1");
            parse_field(f, s);
        }
    }
    if (self_dual && !beta.empty()) throw ConfigError("beta", "only used in general mode");
}

RecursionSpec RunConfig::spec() const {
    RecursionSpec s{N, self_dual, n, {}};
    for (const auto& [i, t] : u) s.u[i] = parse_field("u." + std::to_string(i), t);
    s.validate();
    return s;
}

nlohmann::json RunConfig::to_json() const {
    auto m = [](const std::map<int, std::string>& v) {
        auto o = nlohmann::json::object();
        for (const auto& [k, s] : v) o[std::to_string(k)] = s;
        return o;
    };
    return {{"mode", self_dual ? "self-dual" : "general"},
            {"N", N},
            {"n", n},
            {"u", m(u)},
            {"M", M},
            {"half_width", window()},
            {"seed", seed},
            {"steps", steps},
            {"lambda", lambda},
            {"alpha", m(alpha)},
            {"beta", m(beta)}};
}

namespace {

int get_int(const nlohmann::json& j, const std::string& f) {
    if (!j.is_number_integer()) throw ConfigError(f, "expected an integer");
    return j.get<int>();
}

std::string get_rational(const nlohmann::json& j, const std::string& f) {
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    if (!j.is_string()) throw ConfigError(f, "expected an exact rational string \"p/q\"");
    parse_field(f, j.get<std::string>());
    return j.get<std::string>();
}

std::map<int, std::string> get_sites(const nlohmann::json& j, const std::string& f) {
    if (!j.is_object()) throw ConfigError(f, "expected an object keyed by index");
    std::map<int, std::string> m;
    for (const auto& [k, v] : j.items()) {
        int i;
        try {
            std::size_t used = 0;
            i = std::stoi(k, &used);
            if (used != k.size()) throw std::invalid_argument(k);
        } catch (const std::exception&) {
            throw ConfigError(f + "." + k, "key must be an integer");
        }
        m[i] = get_rational(v, f + "." + k);
    }
    return m;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("$", "config must be a JSON object");
    RunConfig c;
    static const std::set<std::string> known = {"mode", "N",     "n",      "u",     "M",     "half_width",
                                                "seed", "out",   "steps",  "lambda", "alpha", "beta",
                                                "dump", "symbolic"};
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw ConfigError(k, "unknown field");
        if (k == "mode") {
            if (v != "self-dual" && v != "general") throw ConfigError(k, "expected \"self-dual\" or \"general\"");
            c.self_dual = v == "self-dual";
        } else if (k == "N") {
            c.N = get_int(v, k);
        } else if (k == "n") {
            c.n = get_int(v, k);
        } else if (k == "M") {
            c.M = get_int(v, k);
        } else if (k == "half_width") {
            c.half_width = get_int(v, k);
        } else if (k == "steps") {
            c.steps = get_int(v, k);
        } else if (k == "seed") {
            if (!v.is_number_unsigned()) throw ConfigError(k, "expected a nonnegative integer");
            c.seed = v.get<unsigned>();
        } else if (k == "out") {
            if (!v.is_string()) throw ConfigError(k, "expected a path");
            c.out = v.get<std::string>();
        } else if (k == "lambda") {
            c.lambda = get_rational(v, k);
        } else if (k == "dump" || k == "symbolic") {
            if (!v.is_boolean()) throw ConfigError(k, "expected true or false");
            (k == "dump" ? c.dump : c.symbolic) = v.get<bool>();
        } else {
            (k == "u" ? c.u : k == "alpha" ? c.alpha : c.beta) = get_sites(v, k);
        }
    }
    return c;
}

std::filesystem::path artifact_dir(const RunConfig& c) {
    if (!c.out.empty()) return c.out;
    if (const char* e = std::getenv("TOEPLITZ_ARTIFACT_DIR"); e && *e) return e;
    return "artifacts";
}

std::filesystem::path write_artifact(const RunConfig& c, const std::string& name, const std::string& text) {
    const auto dir = artifact_dir(c);
    std::filesystem::create_directories(dir);
    const auto p = dir / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
    return p;
}

}  // namespace toeplitz::cli
