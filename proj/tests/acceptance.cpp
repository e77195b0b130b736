// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.
#include <cstdio>
#include <string>
#include <vector>

#include "conjlim/suites.hpp"

using namespace conjlim;

namespace {

struct Criterion {
    int id;
    const char* title;
    std::vector<std::string> suites;
    double limit_s;
};

} // namespace

int main(int argc, char** argv)
{
    const std::uint64_t seed = argc > 1 ? std::stoull(argv[1]) : 20240601ULL;
    const std::vector<Criterion> criteria = {
        {1, "kernel-preserving algebra dimension n^2-mn+m^2", {"dim-formula"}, 1.0},
        {2, "good-path two-sided Laurent identity", {"goodpath-residual"}, 10.0},
        {3, "bounded/divergent dichotomy along good paths", {"dichotomy"}, 30.0},
        {4, "3x3 Hadamard counterexample", {"example-3x3"}, 5.0},
        {5, "J-modified membership equals kernel invariance", {"j-collapse"}, 20.0},
        {6, "Hadamard nilpotent faithfulness", {"nilpotent-faithful"}, 10.0},
        {7, "Gershgorin containment and diagonal bound", {"gershgorin", "appendix-a"}, 5.0},
        {8, "exact vs numeric polynomial-path test", {"poly-vs-numeric"}, 30.0},
        {9, "only scalars survive at singular base points", {"scalar-classification"}, 60.0},
        {10, "good-path kernel rigidity", {"rigidity"}, 5.0},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        bool ok = true;
        double wall = 0.0;
        std::size_t cases = 0, bad = 0;
        std::string detail;
        for (const std::string& id : c.suites) {
            try {
                const SuiteReport r = run_suite(id, seed);
                wall += r.wall_time;
                cases += r.cases.size();
                bad += r.failures();
                ok = ok && r.passed();
                for (const SuiteCase& sc : r.cases)
                    if (!sc.pass && detail.size() < 200)
                        detail += " " + id + "/" + sc.name;
            } catch (const std::exception& e) {
                ok = false;
                detail += std::string(" ") + id + ": " + e.what();
            }
        }
        const bool in_time = wall < c.limit_s;
        if (!in_time)
            detail += " over time limit";
        const bool pass = ok && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s criterion %d: %s (%zu cases, %zu failed, %.3fs / %.0fs)%s\n", pass ? "PASS" : "FAIL",
                    c.id, c.title, cases, bad, wall, c.limit_s, detail.c_str());
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
