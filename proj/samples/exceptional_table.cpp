// Prints L_q(1, psi) and the scan ratio L_q(1, psi) / ((1 - beta_hat) log q)
// for every modulus up to 30 that has a real non-principal character.

#include <cstdio>

#include "siftlab/siftlab.hpp"

int main() {
    std::printf("%4s %12s %10s %8s\n", "q", "L_q(1,psi)", "ratio", "zeros");
    for (uint64_t q = 3; q <= 30; ++q) {
        auto exc = siftlab::find_exceptional(q);
        if (!exc.psi) continue;
        auto scan = siftlab::siegel_zero_scan(q);
        std::printf("%4llu %12.8f %10.5f %8zu\n", static_cast<unsigned long long>(q),
                    exc.value, scan.ratio, scan.zeros.size());
    }
    return 0;
}
