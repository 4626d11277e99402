#include <cstdio>
#include <set>
#include <iostream>

#include "cli.hpp"

using namespace toeplitz;
using namespace toeplitz::cli;

// One line per criterion; exit 1 if any fails.  Optional arguments select
// criteria by number.
int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : acceptance_criteria()) {
        if (!only.empty() && !only.count(c.id)) continue;
        CriterionResult r = run_criterion(c);
        char t[32];
        std::snprintf(t, sizeof t, "%.1fs", r.seconds);
        std::cout << "criterion " << (c.id < 10 ? " " : "") << c.id << ": " << (r.pass() ? "PASS" : "FAIL") << "  "
                  << c.title << " (" << r.report.checks.size() << " checks, " << t << ")" << std::endl;
        if (r.pass()) continue;
        ++failed;
        if (!r.error.empty()) std::cout << "    error: " << r.error << "\n";
        if (const Check* f = r.report.first_failure())
            std::cout << "    first failure [" << f->claim << "] " << f->name << ": " << f->detail.substr(0, 300) << "\n";
        if (r.report.checks.empty() && r.error.empty()) std::cout << "    no checks ran\n";
    }
    return failed ? 1 : 0;
}
