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

// Short Weierstrass curves y^2 = x^3 + c1 x + c2 over F_p with the affine
// group law used as the reference for the reversible adder.

#ifndef ECADD_CURVE_HPP
#define ECADD_CURVE_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "ecadd/field.hpp"

namespace ecadd {

/// Affine point in plain residues. (0, 0) encodes the identity O, which is
/// why curves with c2 = 0 (where (0, 0) lies on the curve) are rejected.
struct AffinePoint {
    uint64_t x = 0;
    uint64_t y = 0;

    bool is_identity() const {
        return x == 0 && y == 0;
    }
    auto operator<=>(const AffinePoint &) const = default;

    std::string str() const {
        return "(" + std::to_string(x) + ", " + std::to_string(y) + ")";
    }
};

inline constexpr AffinePoint kIdentity{0, 0};

struct CurveParams {
    FieldParams field;
    uint64_t c1 = 0;
    uint64_t c2 = 0;

    CurveParams(uint64_t p, uint64_t c1_, uint64_t c2_) : field(p), c1(c1_ % p), c2(c2_ % p) {
        validate();
    }

    /// As above, additionally checking that `n` is the bit length of p.
    CurveParams(uint64_t p, uint64_t c1_, uint64_t c2_, unsigned n) : CurveParams(p, c1_, c2_) {
        if (n != field.n) {
            throw DomainError("bitwidth " + std::to_string(n) + " does not satisfy 2^(n-1) < p < 2^n for p=" +
                              std::to_string(p));
        }
    }

    uint64_t p() const {
        return field.p;
    }
    unsigned n() const {
        return field.n;
    }

    bool on_curve(const AffinePoint &P) const {
        if (P.x >= field.p || P.y >= field.p) {
            return false;
        }
        if (P.is_identity()) {
            return true;
        }
        uint64_t lhs = mod_mul(P.y, P.y, field);
        uint64_t rhs = mod_add(mod_add(mod_mul(mod_mul(P.x, P.x, field), P.x, field), mod_mul(c1, P.x, field), field),
                               c2, field);
        return lhs == rhs;
    }

    std::string str() const {
        return "y^2 = x^3 + " + std::to_string(c1) + "x + " + std::to_string(c2) + " mod " + std::to_string(field.p);
    }

   private:
    void validate() const {
        const auto &f = field;
        uint64_t disc = mod_add(mod_mul(4, mod_mul(mod_mul(c1, c1, f), c1, f), f),
                                mod_mul(27 % f.p, mod_mul(c2, c2, f), f), f);
        if (f.p <= 3) {
            throw DomainError("characteristic must exceed 3");
        }
        if (disc == 0) {
            throw DomainError("singular curve: 4c1^3 + 27c2^2 = 0 mod p");
        }
        if (c2 == 0) {
            throw DomainError("c2 = 0 puts (0,0) on the curve, colliding with the identity encoding");
        }
    }
};

inline void require_on_curve(const AffinePoint &P, const CurveParams &curve) {
    if (!curve.on_curve(P)) {
        throw DomainError("point " + P.str() + " is not on " + curve.str());
    }
}

inline AffinePoint negate(const AffinePoint &P, const CurveParams &curve) {
    return P.is_identity() ? P : AffinePoint{P.x, mod_neg(P.y, curve.field)};
}

/// Modular inverse by Fermat; the reference path deliberately avoids the
/// Montgomery machinery under test.
inline uint64_t plain_inverse(uint64_t x, const FieldParams &f) {
    if (x == 0) {
        throw DomainError("zero has no inverse");
    }
    return mod_pow(x, f.p - 2, f.p);
}

/// Chord-and-tangent addition.
inline AffinePoint affine_add(const AffinePoint &P, const AffinePoint &Q, const CurveParams &curve) {
    require_on_curve(P, curve);
    require_on_curve(Q, curve);
    const auto &f = curve.field;
    if (P.is_identity()) {
        return Q;
    }
    if (Q.is_identity()) {
        return P;
    }
    uint64_t lambda;
    if (P.x == Q.x) {
        if (mod_add(P.y, Q.y, f) == 0) {
            return kIdentity;
        }
        uint64_t num = mod_add(mod_mul(3, mod_mul(P.x, P.x, f), f), curve.c1, f);
        lambda = mod_mul(num, plain_inverse(mod_dbl(P.y, f), f), f);
    } else {
        lambda = mod_mul(mod_sub(P.y, Q.y, f), plain_inverse(mod_sub(P.x, Q.x, f), f), f);
    }
    uint64_t xr = mod_sub(mod_sub(mod_mul(lambda, lambda, f), P.x, f), Q.x, f);
    uint64_t yr = mod_sub(mod_mul(lambda, mod_sub(P.x, xr, f), f), P.y, f);
    return {xr, yr};
}

inline AffinePoint affine_double(const AffinePoint &P, const CurveParams &curve) {
    return affine_add(P, P, curve);
}

/// Tangent slope at Q, (3a^2 + c1) / (2b); the nonzero sentinel 1 when b = 0.
inline uint64_t lambda_r(const AffinePoint &Q, const CurveParams &curve) {
    const auto &f = curve.field;
    if (Q.y == 0) {
        return 1;
    }
    uint64_t num = mod_add(mod_mul(3, mod_mul(Q.x, Q.x, f), f), curve.c1, f);
    return mod_mul(num, plain_inverse(mod_dbl(Q.y, f), f), f);
}

/// All points of the curve by membership scan, identity first, then by (x, y).
inline std::vector<AffinePoint> curve_points(const CurveParams &curve) {
    std::vector<AffinePoint> pts{kIdentity};
    const auto &f = curve.field;
    std::vector<std::vector<uint64_t>> roots(f.p);
    for (uint64_t y = 0; y < f.p; ++y) {
        roots[mod_mul(y, y, f)].push_back(y);
    }
    for (uint64_t x = 0; x < f.p; ++x) {
        uint64_t rhs = mod_add(mod_add(mod_mul(mod_mul(x, x, f), x, f), mod_mul(curve.c1, x, f), f), curve.c2, f);
        for (uint64_t y : roots[rhs]) {
            pts.push_back({x, y});
        }
    }
    return pts;
}

enum class EdgeClass {
    GENERIC,
    DOUBLE,
    INVERSE,
    P_IDENTITY,
    Q_IDENTITY,
    BOTH_IDENTITY,
    TWO_TORSION_DOUBLE,
    TANGENT_COINCIDENCE,
    Y_NEG_MISMATCH,
};

inline const std::vector<EdgeClass> &all_edge_classes() {
    static const std::vector<EdgeClass> all = {
        EdgeClass::GENERIC,       EdgeClass::DOUBLE,          EdgeClass::INVERSE,
        EdgeClass::P_IDENTITY,    EdgeClass::Q_IDENTITY,      EdgeClass::BOTH_IDENTITY,
        EdgeClass::TWO_TORSION_DOUBLE, EdgeClass::TANGENT_COINCIDENCE, EdgeClass::Y_NEG_MISMATCH,
    };
    return all;
}

inline std::string to_string(EdgeClass c) {
    switch (c) {
        case EdgeClass::GENERIC:
            return "GENERIC";
        case EdgeClass::DOUBLE:
            return "DOUBLE";
        case EdgeClass::INVERSE:
            return "INVERSE";
        case EdgeClass::P_IDENTITY:
            return "P_IDENTITY";
        case EdgeClass::Q_IDENTITY:
            return "Q_IDENTITY";
        case EdgeClass::BOTH_IDENTITY:
            return "BOTH_IDENTITY";
        case EdgeClass::TWO_TORSION_DOUBLE:
            return "TWO_TORSION_DOUBLE";
        case EdgeClass::TANGENT_COINCIDENCE:
            return "TANGENT_COINCIDENCE";
        case EdgeClass::Y_NEG_MISMATCH:
            return "Y_NEG_MISMATCH";
    }
    return "?";
}

/// Total classification of an input pair by the circuit's edge cases. P is
/// the quantum (register) point, Q the classical one.
inline EdgeClass classify(const AffinePoint &P, const AffinePoint &Q, const CurveParams &curve) {
    require_on_curve(P, curve);
    require_on_curve(Q, curve);
    if (P.is_identity() && Q.is_identity()) {
        return EdgeClass::BOTH_IDENTITY;
    }
    if (P.is_identity()) {
        return EdgeClass::P_IDENTITY;
    }
    if (Q.is_identity()) {
        return EdgeClass::Q_IDENTITY;
    }
    if (P.x == Q.x) {
        if (P.y == Q.y) {
            return P.y == 0 ? EdgeClass::TWO_TORSION_DOUBLE : EdgeClass::DOUBLE;
        }
        return EdgeClass::INVERSE;
    }
    if (P.y == mod_neg(Q.y, curve.field)) {
        return EdgeClass::Y_NEG_MISMATCH;
    }
    if (P == negate(affine_double(Q, curve), curve)) {
        return EdgeClass::TANGENT_COINCIDENCE;
    }
    return EdgeClass::GENERIC;
}

}  // namespace ecadd

#endif
