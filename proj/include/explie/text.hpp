#pragma once

// Text forms of Scalar and ExpPoly.
//
//   scalar  : integers, the symbol p, + - * / ^ and parentheses,
//             e.g. `(1/2) + (7/3)*p`
//   exppoly : the same, plus variables n1..nr; `a^nK` with a rational
//             constant a is the exponential term, e.g. `3*n1^2*2^n1 + (1+p)*n2`

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "explie/errors.hpp"
#include "explie/exppoly.hpp"
#include "explie/scalar.hpp"

namespace explie {

namespace detail {

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, std::size_t arity, std::vector<std::string> names = {})
        : text_(text), arity_(arity), names_(std::move(names))
    {
        if (!names_.empty() && names_.size() != arity_) throw ArityError("variable name list does not match arity");
    }

    ExpPoly parse()
    {
        ExpPoly f = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(what + " at position " + std::to_string(pos_) + " in `" + std::string(text_) + "`");
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek()
    {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool accept(char c)
    {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    ExpPoly expr()
    {
        ExpPoly acc(arity_);
        bool negate = false;
        if (accept('-')) negate = true;
        else accept('+');
        ExpPoly t = term();
        acc = negate ? -t : t;
        for (;;) {
            if (accept('+')) acc += term();
            else if (accept('-')) acc -= term();
            else return acc;
        }
    }

    ExpPoly term()
    {
        ExpPoly acc = unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * unary();
            } else if (accept('/')) {
                const ExpPoly d = unary();
                if (!d.is_constant() || d.is_zero()) fail("division by a non-constant or zero expression");
                acc = acc.scaled(d.constant_value().inverse());
            } else {
                return acc;
            }
        }
    }

    ExpPoly unary()
    {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    ExpPoly power()
    {
        ExpPoly base = primary();
        if (!accept('^')) return base;
        skip_ws();
        if (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
            const std::size_t var = variable_index();
            if (!base.is_constant() || base.is_zero()) fail("exponential base must be a nonzero constant");
            const Scalar b = base.constant_value();
            if (!b.is_rational()) fail("exponential base must be rational");
            return ExpPoly::exponential(arity_, var, b.to_rational());
        }
        bool neg = false;
        if (accept('-')) neg = true;
        if (accept('(')) {
            const bool inner_neg = accept('-');
            const long e = integer();
            if (!accept(')')) fail("expected `)`");
            return raise(base, inner_neg != neg ? -e : e);
        }
        const long e = integer();
        return raise(base, neg ? -e : e);
    }

    ExpPoly raise(const ExpPoly& base, long e)
    {
        if (e < 0) {
            if (!base.is_constant() || base.is_zero()) fail("negative power of a non-constant expression");
            return ExpPoly::constant(arity_, base.constant_value().pow(e));
        }
        ExpPoly r = ExpPoly::constant(arity_, Scalar(1));
        for (long i = 0; i < e; ++i) r = r * base;
        return r;
    }

    ExpPoly primary()
    {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            ExpPoly inner = expr();
            if (!accept(')')) fail("expected `)`");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return ExpPoly::constant(arity_, Scalar(mpq_class(mpz_class(std::string(text_.substr(start, pos_ - start))))));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t save = pos_;
            if (identifier() == "p") return ExpPoly::constant(arity_, Scalar::p());
            pos_ = save;
            return ExpPoly::variable(arity_, variable_index());
        }
        fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character `") + c + "`");
    }

    std::string identifier()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    std::size_t variable_index()
    {
        const std::string name = identifier();
        if (name.empty()) fail("expected a variable");
        if (!names_.empty()) {
            for (std::size_t i = 0; i < names_.size(); ++i)
                if (names_[i] == name) return i;
            throw ParseError("unknown variable `" + name + "`");
        }
        if (name.size() < 2 || name[0] != 'n' || !std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; }))
            fail("expected a variable n1..n" + std::to_string(arity_) + ", got `" + name + "`");
        const long idx = std::stol(name.substr(1));
        if (idx < 1 || static_cast<std::size_t>(idx) > arity_)
            throw ArityError("variable " + name + " outside arity " + std::to_string(arity_));
        return static_cast<std::size_t>(idx - 1);
    }

    long integer()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer exponent");
        return std::stol(std::string(text_.substr(start, pos_ - start)));
    }

    std::string_view text_;
    std::size_t arity_;
    std::vector<std::string> names_;
    std::size_t pos_ = 0;
};

inline bool needs_parens(const Scalar& c)
{
    if (!c.is_polynomial()) return true;
    const auto& co = c.numerator().coefficients();
    std::size_t nonzero = 0;
    for (const auto& x : co)
        if (sgn(x) != 0) ++nonzero;
    return nonzero > 1;
}

} // namespace detail

inline ExpPoly parse_exppoly(std::string_view text, std::size_t arity)
{
    return detail::ExpressionParser(text, arity).parse();
}

// Variables referred to by the given names instead of n1..nr.
inline ExpPoly parse_exppoly(std::string_view text, const std::vector<std::string>& names)
{
    return detail::ExpressionParser(text, names.size(), names).parse();
}

inline Scalar parse_scalar(std::string_view text)
{
    // Same grammar without variables; `/` divides by any nonzero Scalar.
    struct Parser {
        std::string_view t;
        std::size_t pos = 0;
        [[noreturn]] void fail(const std::string& w) const
        {
            throw ParseError(w + " at position " + std::to_string(pos) + " in `" + std::string(t) + "`");
        }
        char peek()
        {
            while (pos < t.size() && std::isspace(static_cast<unsigned char>(t[pos]))) ++pos;
            return pos < t.size() ? t[pos] : '\0';
        }
        bool accept(char c)
        {
            if (peek() != c) return false;
            ++pos;
            return true;
        }
        Scalar expr()
        {
            Scalar acc;
            if (accept('-')) acc = -term();
            else {
                accept('+');
                acc = term();
            }
            for (;;) {
                if (accept('+')) acc += term();
                else if (accept('-')) acc -= term();
                else return acc;
            }
        }
        Scalar term()
        {
            Scalar acc = unary();
            for (;;) {
                if (accept('*')) acc *= unary();
                else if (accept('/')) {
                    const Scalar d = unary();
                    if (d.is_zero()) fail("division by zero");
                    acc /= d;
                } else return acc;
            }
        }
        Scalar unary()
        {
            if (accept('-')) return -unary();
            if (accept('+')) return unary();
            Scalar b = primary();
            if (!accept('^')) return b;
            bool neg = accept('-');
            bool paren = accept('(');
            if (paren && accept('-')) neg = !neg;
            peek();
            const std::size_t start = pos;
            while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
            if (start == pos) fail("expected an integer exponent");
            const long e = std::stol(std::string(t.substr(start, pos - start)));
            if (paren && !accept(')')) fail("expected `)`");
            if (neg && b.is_zero()) fail("negative power of zero");
            return b.pow(neg ? -e : e);
        }
        Scalar primary()
        {
            const char c = peek();
            if (c == '(') {
                ++pos;
                Scalar s = expr();
                if (!accept(')')) fail("expected `)`");
                return s;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                const std::size_t start = pos;
                while (pos < t.size() && std::isdigit(static_cast<unsigned char>(t[pos]))) ++pos;
                return Scalar(mpq_class(mpz_class(std::string(t.substr(start, pos - start)))));
            }
            if (c == 'p') {
                ++pos;
                return Scalar::p();
            }
            fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character `") + c + "`");
        }
    };
    Parser parser{text};
    Scalar s = parser.expr();
    if (parser.peek() != '\0') parser.fail("unexpected trailing input");
    return s;
}

inline std::string ExpPoly::to_string() const
{
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [key, c] : terms_) {
        std::vector<std::string> factors;
        for (std::size_t j = 0; j < key.exps.size(); ++j) {
            if (key.exps[j] > 0) {
                std::string f = "n" + std::to_string(j + 1);
                if (key.exps[j] > 1) f += "^" + std::to_string(key.exps[j]);
                factors.push_back(f);
            }
        }
        for (std::size_t j = 0; j < key.bases.size(); ++j) {
            if (key.bases[j] == 1) continue;
            const mpq_class& b = key.bases[j];
            const std::string bs = (b.get_den() == 1 && sgn(b) > 0) ? b.get_str() : "(" + b.get_str() + ")";
            factors.push_back(bs + "^n" + std::to_string(j + 1));
        }
        bool negative = false;
        std::string coef;
        if (detail::needs_parens(c)) {
            coef = "(" + c.to_string() + ")";
        } else {
            // single-term polynomial in p
            const auto& co = c.numerator().coefficients();
            const mpq_class& lc = co.back();
            negative = sgn(lc) < 0;
            coef = Scalar(c.numerator().scaled(negative ? mpq_class(-1) : mpq_class(1))).to_string();
        }
        std::string body;
        if (factors.empty()) {
            body = coef;
        } else {
            if (coef != "1") body = coef + "*";
            for (std::size_t i = 0; i < factors.size(); ++i) body += (i ? "*" : "") + factors[i];
        }
        if (first) {
            out = negative ? "-" + body : body;
            first = false;
        } else {
            out += negative ? " - " : " + ";
            out += body;
        }
    }
    return out;
}

inline std::vector<int> parse_int_list(std::string_view text)
{
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::string item(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw ParseError("expected an integer list, got `" + std::string(text) + "`");
        }
        for (std::size_t i = used; i < item.size(); ++i)
            if (!std::isspace(static_cast<unsigned char>(item[i]))) throw ParseError("expected an integer list, got `" + std::string(text) + "`");
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

} // namespace explie
