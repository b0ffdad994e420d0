/*
 * Copyright 2026 The mpspe Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MPSPE_EXT_RAT_HPP
#define MPSPE_EXT_RAT_HPP

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include "mpspe/error.hpp"

namespace mpspe {

using Rational = mpq_class;

/**
 * Parse "p", "p/q" or a decimal like "-1.25". The result is canonical.
 */
inline Rational
parse_rational(std::string_view text)
{
    std::string s(text);
    auto bad = [&]() { return InputError("malformed rational '" + s + "'"); };
    if (s.empty()) throw bad();

    size_t pos = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        pos = 1;
    }
    if (pos >= s.size()) throw bad();

    auto all_digits = [](std::string_view d) {
        if (d.empty()) return false;
        for (char ch : d) if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
        return true;
    };

    std::string_view body(s.data() + pos, s.size() - pos);
    Rational r;
    size_t slash = body.find('/');
    size_t dot = body.find('.');
    if (slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw bad();
        mpz_class n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) throw InputError("zero denominator in '" + s + "'");
        r = Rational(n, d);
    } else if (dot != std::string_view::npos) {
        auto ip = body.substr(0, dot);
        auto fp = body.substr(dot + 1);
        if (ip.empty() && fp.empty()) throw bad();
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) throw bad();
        mpz_class n(std::string(ip.empty() ? "0" : ip) + std::string(fp), 10);
        mpz_class d;
        mpz_ui_pow_ui(d.get_mpz_t(), 10, fp.size());
        r = Rational(n, d);
    } else {
        if (!all_digits(body)) throw bad();
        r = Rational(mpz_class(std::string(body), 10));
    }
    r.canonicalize();
    if (neg) r = -r;
    return r;
}

inline std::string
to_string(const Rational &r)
{
    return r.get_str();
}

/**
 * A rational number or one of the two infinities.
 */
class ExtRat
{
public:
    enum class Kind { NegInf, Finite, PosInf };

    ExtRat() : kind_(Kind::Finite), v_(0) {}
    ExtRat(const Rational &r) : kind_(Kind::Finite), v_(r) { v_.canonicalize(); }
    ExtRat(long v) : kind_(Kind::Finite), v_(v) {}
    ExtRat(int v) : kind_(Kind::Finite), v_(v) {}

    static ExtRat pos_inf() { ExtRat x; x.kind_ = Kind::PosInf; return x; }
    static ExtRat neg_inf() { ExtRat x; x.kind_ = Kind::NegInf; return x; }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }

    const Rational &
    value() const
    {
        if (!is_finite()) throw ArithmeticError("value() of an infinite ExtRat");
        return v_;
    }

    friend std::strong_ordering
    operator<=>(const ExtRat &a, const ExtRat &b)
    {
        if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
        if (!a.is_finite()) return std::strong_ordering::equal;
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend bool
    operator==(const ExtRat &a, const ExtRat &b)
    {
        return (a <=> b) == std::strong_ordering::equal;
    }

    friend ExtRat
    operator+(const ExtRat &a, const ExtRat &b)
    {
        if (a.is_finite() && b.is_finite()) return ExtRat(Rational(a.v_ + b.v_));
        if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
            throw ArithmeticError("+inf + -inf is undefined");
        return a.is_finite() ? b : a;
    }

    ExtRat
    operator-() const
    {
        if (is_pos_inf()) return neg_inf();
        if (is_neg_inf()) return pos_inf();
        return ExtRat(Rational(-v_));
    }

    friend ExtRat operator-(const ExtRat &a, const ExtRat &b) { return a + (-b); }

    /// Accepts everything parse_rational does plus "inf", "+inf" and "-inf".
    static ExtRat
    parse(std::string_view s)
    {
        if (s == "inf" || s == "+inf") return pos_inf();
        if (s == "-inf") return neg_inf();
        return ExtRat(parse_rational(s));
    }

    std::string
    str() const
    {
        if (is_pos_inf()) return "inf";
        if (is_neg_inf()) return "-inf";
        return v_.get_str();
    }

private:
    Kind kind_;
    Rational v_;
};

inline std::ostream &
operator<<(std::ostream &os, const ExtRat &x)
{
    return os << x.str();
}

inline const ExtRat &
max(const ExtRat &a, const ExtRat &b)
{
    return a < b ? b : a;
}

inline const ExtRat &
min(const ExtRat &a, const ExtRat &b)
{
    return b < a ? b : a;
}

} // namespace mpspe

#endif
