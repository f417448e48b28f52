// Acceptance run: one PASS/FAIL line per criterion; exit status 1 when any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "orlicz/orlicz.hpp"

using namespace orlicz;

namespace {

struct Criterion {
    int number;
    std::string name;
    std::vector<std::string> checks;
};

}  // namespace

int main()
{
    Battery battery;
    battery.run_all();

    const std::vector<Criterion> criteria{
        {1, "heat-exact oracle", {"heat_exact"}},
        {2, "refinement stability", {"refinement"}},
        {3, "complementarity", {"complementarity"}},
        {4, "ordering battery", {"ordering"}},
        {5, "maximum principle", {"max_principle"}},
        {6, "alternating construction", {"schwarz_monotone", "schwarz_vi_agreement", "schwarz_order_independence"}},
        {7, "Orlicz inequalities", {"inequalities"}},
        {8, "classification", {"classification"}},
        {9, "De Giorgi implication", {"degiorgi_implication", "boundedness_level"}},
    };

    bool all = true;
    for (const auto& c : criteria) {
        bool pass = true;
        std::string detail;
        for (const auto& id : c.checks) {
            const CheckResult* r = battery.find(id);
            const bool ok = r && r->passed;
            pass = pass && ok;
            detail += (detail.empty() ? "" : "; ") + id + (ok ? " ok" : " FAILED") + (r ? ": " + r->detail : "");
        }
        all = all && pass;
        std::printf("criterion %d %s: %s (%s)\n", c.number, c.name.c_str(), pass ? "PASS" : "FAIL", detail.c_str());
    }

    const auto t0 = std::chrono::steady_clock::now();
    const int status = std::system((std::string(ORLICZ_CLI) + " verify > /dev/null").c_str());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    const bool pass10 = code == 0 && secs < 180.0;
    all = all && pass10;
    std::printf("criterion 10 full verify run: %s (exit code %d, %.2f s)\n", pass10 ? "PASS" : "FAIL", code, secs);
    return all ? 0 : 1;
}
