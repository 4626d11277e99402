#include <fstream>
#include <sstream>
#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"

using namespace toeplitz;
using namespace toeplitz::cli;

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kInternal = 3 };

struct Flags {
    std::string config, mode, u_list, alpha_list, beta_list;
    std::optional<int> N, n, M, half_width, steps;
    std::optional<unsigned> seed;
    std::optional<std::string> u1, lambda, out;
    bool self_dual = false, general = false, dump = false, symbolic = false;
};

// "1:2/3,-1:5" -> {1: "2/3", -1: "5"}
std::map<int, std::string> parse_list(const std::string& field, const std::string& s) {
    std::map<int, std::string> m;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw ConfigError(field, "expected index:value pairs, got \"" + item + "\"");
        try {
            m[std::stoi(item.substr(0, colon))] = item.substr(colon + 1);
        } catch (const std::exception&) {
            throw ConfigError(field, "bad index in \"" + item + "\"");
        }
    }
    return m;
}

RunConfig assemble(const Flags& f) {
    RunConfig c;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw ConfigError("config", "cannot open " + f.config);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("config", e.what());
        }
        c = RunConfig::from_json(j);
    }
    if (!f.mode.empty()) {
        if (f.mode != "self-dual" && f.mode != "general") throw ConfigError("mode", "expected self-dual or general");
        c.self_dual = f.mode == "self-dual";
    }
    if (f.self_dual) c.self_dual = true;
    if (f.general) c.self_dual = false;
    if (f.N) c.N = *f.N;
    if (f.n) c.n = *f.n;
    if (f.M) c.M = *f.M;
    if (f.half_width) c.half_width = *f.half_width;
    if (f.steps) c.steps = *f.steps;
    if (f.seed) c.seed = *f.seed;
    if (f.lambda) c.lambda = *f.lambda;
    if (f.out) c.out = *f.out;
    if (!f.u_list.empty())
        for (const auto& [i, v] : parse_list("u", f.u_list)) c.u[i] = v;
    if (f.u1) c.u[1] = *f.u1;
    if (!f.alpha_list.empty()) c.alpha = parse_list("alpha", f.alpha_list);
    if (!f.beta_list.empty()) c.beta = parse_list("beta", f.beta_list);
    c.dump = c.dump || f.dump;
    c.symbolic = c.symbolic || f.symbolic;
    // u_1 = ... = u_N = 1 (and u_{-i} = 1) unless given
    if (c.u.empty())
        for (int i = 1; i <= c.N; ++i) {
            c.u[i] = "1";
            if (!c.self_dual) c.u[-i] = "1";
        }
    c.validate();
    return c;
}

void summarize(const Report& r) {
    std::size_t failed = 0;
    for (const auto& c : r.checks)
        if (!c.pass) {
            ++failed;
            std::cout << "FAIL [" << c.claim << "] " << c.name << (c.detail.empty() ? "" : ": " + c.detail.substr(0, 300))
                      << "\n";
        }
    std::cout << (failed ? "fail" : "pass") << ": " << r.checks.size() - failed << "/" << r.checks.size()
              << " checks passed\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singularity confinement of the Toeplitz lattice recursions"};
    app.require_subcommand(1);
    Flags f;
    using Cmd = Report (*)(const RunConfig&);
    const std::vector<std::tuple<const char*, const char*, Cmd>> commands = {
        {"gamma", "build the recursion polynomials Gamma_k", cmd_gamma},
        {"balance", "solve the Laurent balance and check its displays", cmd_balance},
        {"restrict", "restrict the balance parameters and check tangency", cmd_restrict},
        {"confine", "build and check the confined solution", cmd_confine},
        {"verify", "confined solution plus exact and numeric iteration", cmd_verify},
        {"appendix", "structure of the Lax powers and of Gamma_k", cmd_appendix},
        {"all", "run the claim-keyed acceptance suite", cmd_all},
    };
    Cmd chosen = nullptr;
    for (const auto& [name, help, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", f.config, "JSON config file; flags override it");
        sub->add_option("--mode", f.mode, "self-dual or general");
        sub->add_flag("--self-dual", f.self_dual, "same as --mode self-dual");
        sub->add_flag("--general", f.general, "same as --mode general");
        sub->add_option("--N", f.N, "recursion order");
        sub->add_option("--n", f.n, "pole site");
        sub->add_option("--u", f.u_list, "u coefficients as i:p/q,...");
        sub->add_option("--u1", f.u1, "shorthand for --u 1:value");
        sub->add_option("--M", f.M, "balance truncation");
        sub->add_option("--half-width", f.half_width, "window half-width (default 2N+M+2)");
        sub->add_option("--seed", f.seed, "seed for random rational specializations");
        sub->add_option("--steps", f.steps, "forward iteration steps (verify)");
        sub->add_option("--lambda", f.lambda, "lambda for the numeric trace (verify)");
        sub->add_option("--alpha", f.alpha_list, "plateau values as k:p/q,...");
        sub->add_option("--beta", f.beta_list, "dual plateau values as k:p/q,...");
        sub->add_option("--out", f.out, "artifact directory (default $TOEPLITZ_ARTIFACT_DIR or ./artifacts)");
        sub->add_flag("--dump", f.dump, "print the canonical text of each Gamma_k (gamma)");
        sub->add_flag("--symbolic", f.symbolic, "keep free parameters symbolic (restrict)");
        sub->callback([&chosen, fn = fn] { chosen = fn; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kConfig;
    }
    try {
        RunConfig c = assemble(f);
        Report r = chosen(c);
        summarize(r);
        return r.pass() ? kPass : kFail;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.internal() ? kInternal : kFail;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kConfig;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
