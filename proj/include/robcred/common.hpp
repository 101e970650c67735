#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace robcred {

// Raised when an iterative numerical procedure fails to reach its target
// accuracy within budget. Carries the best estimate found so far.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), error_bound(err) {}
    double best_estimate;
    double error_bound;
};

enum class RobustMethod { Trimmed, Winsorized };

inline const char* method_name(RobustMethod m) {
    return m == RobustMethod::Trimmed ? "T" : "W";
}

// Left/right trimming-or-winsorizing proportions, 0 <= p < 1-q <= 1.
struct WinsorSpec {
    double p = 0.0;
    double q = 0.0;

    WinsorSpec() = default;
    WinsorSpec(double p_, double q_) : p(p_), q(q_) {
        if (!(p >= 0.0) || !(q >= 0.0) || !(p < 1.0 - q) || !(1.0 - q <= 1.0))
            throw std::invalid_argument("WinsorSpec requires 0 <= p < 1-q <= 1");
    }
};

// --- deterministic seeding -------------------------------------------------
//
// All randomness flows through mt19937_64 (bit-exact across platforms) with
// seeds derived by splitmix64 hashing of structured indices, so any cell of
// a study can be regenerated independently of evaluation order.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0, std::uint64_t d = 0) {
    std::uint64_t h = splitmix64(a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    h = splitmix64(h ^ d);
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform on the open interval (0,1); never returns an exact endpoint
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace robcred
