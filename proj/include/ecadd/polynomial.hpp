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

#ifndef ECADD_POLYNOMIAL_HPP
#define ECADD_POLYNOMIAL_HPP

#include <boost/rational.hpp>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

namespace ecadd {

using Rational = boost::rational<int64_t>;

inline std::string rational_to_string(const Rational &r) {
    if (r.denominator() == 1) {
        return std::to_string(r.numerator());
    }
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Parses "a" or "a/b".
inline Rational rational_from_string(const std::string &text) {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        return Rational(std::stoll(text));
    }
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

/// A register width of the form per_n * n + offset, where n is the symbolic
/// field bitsize. Widths are kept symbolic so costs can be reported as
/// polynomials in n while circuits are simulated at a concrete n.
struct LinearSize {
    int64_t per_n = 0;
    int64_t offset = 0;

    static constexpr LinearSize bits(int64_t k) {
        return {0, k};
    }
    static constexpr LinearSize words(int64_t k) {
        return {k, 0};
    }

    int64_t at(int64_t n) const {
        return per_n * n + offset;
    }

    LinearSize operator+(const LinearSize &o) const {
        return {per_n + o.per_n, offset + o.offset};
    }
    LinearSize operator-(const LinearSize &o) const {
        return {per_n - o.per_n, offset - o.offset};
    }
    bool operator==(const LinearSize &o) const = default;

    std::string str() const;
};

/// Exact polynomial in the symbolic bitsize n with rational coefficients.
/// Zero coefficients are never stored.
class CostPolynomial {
   public:
    CostPolynomial() = default;

    /// Builds c_0 + c_1 n + c_2 n^2 + ... from the listed coefficients.
    CostPolynomial(std::initializer_list<std::pair<const int, Rational>> terms) {
        for (const auto &[deg, c] : terms) {
            add_term(deg, c);
        }
    }

    static CostPolynomial constant(Rational c) {
        CostPolynomial p;
        p.add_term(0, c);
        return p;
    }

    static CostPolynomial linear(Rational per_n, Rational offset) {
        CostPolynomial p;
        p.add_term(1, per_n);
        p.add_term(0, offset);
        return p;
    }

    static CostPolynomial from(const LinearSize &s) {
        return linear(s.per_n, s.offset);
    }

    void add_term(int degree, Rational coefficient) {
        if (coefficient.numerator() == 0) {
            return;
        }
        auto it = terms_.find(degree);
        if (it == terms_.end()) {
            terms_.emplace(degree, coefficient);
            return;
        }
        it->second += coefficient;
        if (it->second.numerator() == 0) {
            terms_.erase(it);
        }
    }

    Rational coefficient(int degree) const {
        auto it = terms_.find(degree);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    const std::map<int, Rational> &terms() const {
        return terms_;
    }

    bool is_zero() const {
        return terms_.empty();
    }

    /// Degree of the highest nonzero term; -1 for the zero polynomial.
    int degree() const {
        return terms_.empty() ? -1 : terms_.rbegin()->first;
    }

    /// (degree, coefficient) of the highest term, or nullopt for zero.
    std::optional<std::pair<int, Rational>> leading_term() const {
        if (terms_.empty()) {
            return std::nullopt;
        }
        return *terms_.rbegin();
    }

    Rational eval(int64_t n) const {
        Rational total(0);
        for (const auto &[deg, c] : terms_) {
            Rational power(1);
            for (int i = 0; i < deg; ++i) {
                power *= n;
            }
            total += c * power;
        }
        return total;
    }

    CostPolynomial &operator+=(const CostPolynomial &o) {
        for (const auto &[deg, c] : o.terms_) {
            add_term(deg, c);
        }
        return *this;
    }
    CostPolynomial &operator-=(const CostPolynomial &o) {
        for (const auto &[deg, c] : o.terms_) {
            add_term(deg, -c);
        }
        return *this;
    }
    friend CostPolynomial operator+(CostPolynomial a, const CostPolynomial &b) {
        return a += b;
    }
    friend CostPolynomial operator-(CostPolynomial a, const CostPolynomial &b) {
        return a -= b;
    }
    friend CostPolynomial operator*(const CostPolynomial &a, const CostPolynomial &b) {
        CostPolynomial out;
        for (const auto &[da, ca] : a.terms_) {
            for (const auto &[db, cb] : b.terms_) {
                out.add_term(da + db, ca * cb);
            }
        }
        return out;
    }
    CostPolynomial scaled(Rational k) const {
        CostPolynomial out;
        for (const auto &[deg, c] : terms_) {
            out.add_term(deg, c * k);
        }
        return out;
    }

    bool operator==(const CostPolynomial &o) const {
        return terms_ == o.terms_;
    }

    /// Human form, e.g. "9/4*n^2 + 29/4*n - 1".
    std::string str() const {
        if (terms_.empty()) {
            return "0";
        }
        std::ostringstream out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            Rational c = it->second;
            int deg = it->first;
            if (first) {
                if (c < 0) {
                    out << "-";
                }
            } else {
                out << (c < 0 ? " - " : " + ");
            }
            Rational mag = c < 0 ? -c : c;
            if (deg == 0 || mag != Rational(1)) {
                out << rational_to_string(mag);
                if (deg > 0) {
                    out << "*";
                }
            }
            if (deg == 1) {
                out << "n";
            } else if (deg > 1) {
                out << "n^" << deg;
            }
            first = false;
        }
        return out.str();
    }

   private:
    std::map<int, Rational> terms_;
};

inline std::string LinearSize::str() const {
    return CostPolynomial::from(*this).str();
}

}  // namespace ecadd

#endif
