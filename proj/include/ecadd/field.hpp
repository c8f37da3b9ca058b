// Copyright 2026 The ecadd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ECADD_FIELD_HPP
#define ECADD_FIELD_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ecadd {

/// Raised when a value lies outside the domain of a register or operation
/// (e.g. a Montgomery residue >= p, an off-curve point).
class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

inline uint64_t mod_pow(uint64_t base, uint64_t exp, uint64_t mod) {
    unsigned __int128 result = 1 % mod;
    unsigned __int128 b = base % mod;
    while (exp) {
        if (exp & 1) {
            result = result * b % mod;
        }
        b = b * b % mod;
        exp >>= 1;
    }
    return static_cast<uint64_t>(result);
}

inline bool is_prime(uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

/// Prime field parameters with the Montgomery radix R = 2^n, where n is the
/// bit length of p. Desk scale: p < 2^32.
struct FieldParams {
    uint64_t p = 0;
    unsigned n = 0;
    uint64_t R = 0;        // 2^n
    uint64_t R_mod_p = 0;  // R mod p
    uint64_t R_inv = 0;    // R^-1 mod p
    uint64_t p_neg_inv = 0;  // -p^-1 mod R, for REDC

    FieldParams() = default;

    explicit FieldParams(uint64_t prime) : p(prime) {
        if (prime < 3 || prime % 2 == 0 || prime >= (uint64_t{1} << 32) || !is_prime(prime)) {
            throw DomainError("field modulus must be an odd prime below 2^32, got " + std::to_string(prime));
        }
        n = 0;
        while ((uint64_t{1} << n) <= p) {
            ++n;
        }
        R = uint64_t{1} << n;
        R_mod_p = R % p;
        R_inv = mod_pow(R_mod_p, p - 2, p);
        // Newton iteration for p^-1 mod 2^64, then truncate.
        uint64_t inv = p;
        for (int i = 0; i < 6; ++i) {
            inv *= 2 - p * inv;
        }
        p_neg_inv = (0 - inv) & (R - 1);
    }

    uint64_t mask() const {
        return R - 1;
    }

    bool operator==(const FieldParams &other) const {
        return p == other.p;
    }
};

inline void require_residue(uint64_t x, const FieldParams &f) {
    if (x >= f.p) {
        throw DomainError("value " + std::to_string(x) + " is not a residue mod " + std::to_string(f.p));
    }
}

inline uint64_t mod_add(uint64_t x, uint64_t y, const FieldParams &f) {
    uint64_t s = x + y;
    return s >= f.p ? s - f.p : s;
}

inline uint64_t mod_sub(uint64_t x, uint64_t y, const FieldParams &f) {
    return x >= y ? x - y : x + f.p - y;
}

inline uint64_t mod_neg(uint64_t x, const FieldParams &f) {
    return x == 0 ? 0 : f.p - x;
}

inline uint64_t mod_dbl(uint64_t x, const FieldParams &f) {
    return mod_add(x, x, f);
}

inline uint64_t mod_half(uint64_t x, const FieldParams &f) {
    return (x & 1) ? (x + f.p) >> 1 : x >> 1;
}

inline uint64_t mod_mul(uint64_t x, uint64_t y, const FieldParams &f) {
    return static_cast<uint64_t>(static_cast<unsigned __int128>(x) * y % f.p);
}

inline uint64_t to_montgomery(uint64_t x, const FieldParams &f) {
    require_residue(x, f);
    return mod_mul(x, f.R_mod_p, f);
}

inline uint64_t from_montgomery(uint64_t x_mont, const FieldParams &f) {
    require_residue(x_mont, f);
    return mod_mul(x_mont, f.R_inv, f);
}

/// REDC: returns a * b * 2^-n mod p for a, b in [0, p).
inline uint64_t mont_product(uint64_t a, uint64_t b, const FieldParams &f) {
    using u128 = unsigned __int128;
    u128 t = static_cast<u128>(a) * b;
    uint64_t m = (static_cast<uint64_t>(t) & f.mask()) * f.p_neg_inv & f.mask();
    u128 u = (t + static_cast<u128>(m) * f.p) >> f.n;
    uint64_t r = static_cast<uint64_t>(u);
    return r >= f.p ? r - f.p : r;
}

/// Output of the Kaliski almost-inverse: r = a^-1 * 2^k mod p.
struct AlmostInverse {
    uint64_t value = 0;
    unsigned iterations = 0;
};

/// Phase 1 of the Kaliski Montgomery inverse. Requires 0 < a < p.
inline AlmostInverse kaliski_almost_inverse(uint64_t a, const FieldParams &f) {
    uint64_t u = f.p;
    uint64_t v = a;
    uint64_t r = 0;
    uint64_t s = 1;
    unsigned k = 0;
    while (v > 0) {
        if ((u & 1) == 0) {
            u >>= 1;
            s <<= 1;
        } else if ((v & 1) == 0) {
            v >>= 1;
            r <<= 1;
        } else if (u > v) {
            u = (u - v) >> 1;
            r += s;
            s <<= 1;
        } else {
            v = (v - u) >> 1;
            s += r;
            r <<= 1;
        }
        ++k;
    }
    // r < 2p at this point.
    if (r >= f.p) {
        r -= f.p;
    }
    return {f.p - r, k};
}

struct MontInverseResult {
    uint64_t value = 0;
    unsigned iterations = 0;
};

/// Montgomery inverse: maps to_m(x) to to_m(x^-1); zero maps to zero.
/// Phase 2 doubles the almost-inverse 2n - k times to land back in
/// Montgomery form.
inline MontInverseResult mont_inverse_detailed(uint64_t x_mont, const FieldParams &f) {
    require_residue(x_mont, f);
    if (x_mont == 0) {
        return {0, 0};
    }
    AlmostInverse ai = kaliski_almost_inverse(x_mont, f);
    uint64_t r = ai.value;
    for (unsigned i = ai.iterations; i < 2 * f.n; ++i) {
        r = mod_dbl(r, f);
    }
    return {r, ai.iterations};
}

inline uint64_t mont_inverse(uint64_t x_mont, const FieldParams &f) {
    return mont_inverse_detailed(x_mont, f).value;
}

}  // namespace ecadd

#endif
