#pragma once

#include <chrono>
#include <optional>

#include "charp/errors.hpp"

namespace charp {

// Explicit computation budgets. Exceeding any of them raises a
// distinguished errc::budget error; nothing is ever silently truncated.
struct Budgets {
    long pair_cap = 2000000;   // Buchberger S-pairs processed
    long support_cap = 400000; // terms in any intermediate polynomial
    int exp_cap = 16;          // denominator exponents in boundary solving
    int koszul_cap = 16;       // Koszul levels tried before giving up
    int guard = 3;             // guard band width for finite-length scans
    int orbit_cap = 8;         // Frobenius orbit length / relation order s
    int cofactor_deg_cap = 6;  // degree cap in cofactor searches
    std::optional<std::chrono::steady_clock::time_point> deadline;

    void check_deadline() const {
        if (deadline && std::chrono::steady_clock::now() > *deadline)
            fail_budget("soft time budget exceeded");
    }

    static Budgets with_deadline_ms(long ms) {
        Budgets b;
        if (ms > 0)
            b.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(ms);
        return b;
    }
};

} // namespace charp
