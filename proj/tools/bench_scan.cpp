// Serial vs OpenMP timing of the grid-scan kernels (the Sigma^0 matching
// curve and the shooting ladder), with a value-identity check: parallel
// results must be bitwise equal to the serial reference.
#include <chrono>
#include <cstring>
#include <iostream>

#include "specscales/oracle.hpp"
#include "specscales/scenario.hpp"
#include "specscales/spectrum.hpp"

using namespace specscales;
namespace chrono = std::chrono;

namespace {

double seconds(chrono::steady_clock::time_point a, chrono::steady_clock::time_point b) {
    return chrono::duration_cast<chrono::microseconds>(b - a).count() * 1e-6;
}

}  // namespace

int main(int argc, char** argv) {
    int n = 96;
    if (argc > 1) n = std::max(8, std::atoi(argv[1]));
    const Scenario sc = scenario_preset(1, 0.1);
    const Thresholds th = make_thresholds(0.1, -0.45);
    const StepControl ctl;

    std::vector<double> grid(n);
    for (int i = 0; i < n; ++i) grid[i] = 37.5 * (i + 1.0) / n;

    std::cout << "sigma-scan benchmark, " << n << " mu nodes\n";
    const auto t0 = chrono::steady_clock::now();
    const MismatchCurve serial =
        scan_mismatch(sc.pots, th, grid, ctl, Exec::serial);
    const auto t1 = chrono::steady_clock::now();
    const MismatchCurve parallel =
        scan_mismatch(sc.pots, th, grid, ctl, Exec::parallel);
    const auto t2 = chrono::steady_clock::now();

    bool identical = true;
    for (int i = 0; i < n; ++i)
        identical = identical &&
                    std::memcmp(&serial.sigma0[i], &parallel.sigma0[i],
                                sizeof(double)) == 0;
    const double ts = seconds(t0, t1), tp = seconds(t1, t2);
    std::cout << "  serial   " << ts << " s\n"
              << "  parallel " << tp << " s  (speedup " << ts / tp << "x)\n"
              << "  values bitwise identical: " << (identical ? "yes" : "NO") << "\n";

    std::cout << "oracle ladder benchmark (full operator, R=400)\n";
    const auto t3 = chrono::steady_clock::now();
    const OracleCount oc = oracle_count(sc.pots, OperatorKind::full, 0.0, {400.0, 8000});
    const auto t4 = chrono::steady_clock::now();
    std::cout << "  count " << oc.count << " in " << seconds(t3, t4) << " s\n";
    return identical ? 0 : 1;
}
