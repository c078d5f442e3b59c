#pragma once

#include <cstdint>
#include <string>

#include "charp/errors.hpp"

namespace charp {

// Session-wide prime modulus. Set once before any computation; resetting
// starts a new session and invalidates objects built under the old one.
class FpContext {
public:
    static void set(std::uint32_t p) {
        if (!is_prime(p))
            fail_parse("non-prime modulus " + std::to_string(p));
        modulus_ = p;
    }

    static std::uint32_t modulus() {
        if (modulus_ == 0)
            fail_pre("field modulus not set");
        return modulus_;
    }

    static bool is_set() { return modulus_ != 0; }

    static bool is_prime(std::uint64_t n) {
        if (n < 2) return false;
        if (n % 2 == 0) return n == 2;
        for (std::uint64_t d = 3; d * d <= n; d += 2)
            if (n % d == 0) return false;
        return true;
    }

private:
    static inline std::uint32_t modulus_ = 0;
};

// Element of F_p, value in [0, p).
struct FpScalar {
    std::uint32_t v = 0;

    FpScalar() = default;
    explicit FpScalar(std::uint32_t raw) : v(raw) {}

    static FpScalar of(long long n) {
        long long p = FpContext::modulus();
        long long r = n % p;
        if (r < 0) r += p;
        return FpScalar(static_cast<std::uint32_t>(r));
    }

    static FpScalar zero() { return FpScalar(0); }
    static FpScalar one() { return FpScalar(1); }

    bool is_zero() const { return v == 0; }

    friend FpScalar operator+(FpScalar a, FpScalar b) {
        std::uint64_t p = FpContext::modulus();
        std::uint64_t s = std::uint64_t(a.v) + b.v;
        return FpScalar(static_cast<std::uint32_t>(s >= p ? s - p : s));
    }
    friend FpScalar operator-(FpScalar a, FpScalar b) {
        std::uint64_t p = FpContext::modulus();
        std::uint64_t s = std::uint64_t(a.v) + p - b.v;
        return FpScalar(static_cast<std::uint32_t>(s >= p ? s - p : s));
    }
    friend FpScalar operator*(FpScalar a, FpScalar b) {
        std::uint64_t p = FpContext::modulus();
        return FpScalar(static_cast<std::uint32_t>((std::uint64_t(a.v) * b.v) % p));
    }
    FpScalar operator-() const {
        return v == 0 ? *this : FpScalar(FpContext::modulus() - v);
    }
    FpScalar& operator+=(FpScalar o) { return *this = *this + o; }
    FpScalar& operator-=(FpScalar o) { return *this = *this - o; }
    FpScalar& operator*=(FpScalar o) { return *this = *this * o; }

    FpScalar pow(std::uint64_t e) const {
        FpScalar base = *this, acc = one();
        while (e) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    FpScalar inv() const {
        if (v == 0) fail_pre("division by zero in F_p");
        // extended Euclid on (v, p)
        long long a = v, b = FpContext::modulus();
        long long x0 = 1, x1 = 0;
        while (b) {
            long long q = a / b;
            long long t = a - q * b;
            a = b; b = t;
            t = x0 - q * x1;
            x0 = x1; x1 = t;
        }
        return of(x0);
    }

    friend bool operator==(FpScalar a, FpScalar b) { return a.v == b.v; }
    friend bool operator!=(FpScalar a, FpScalar b) { return a.v != b.v; }
};

} // namespace charp
