#pragma once

// Text front-end for forms, holomorphic matrices and real symbols.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' integer)?
//   primary := integer | 'i' | variable | '(' expr ')'
//   matrix  := '[' row (',' row)* ']'      row := '[' expr (',' expr)* ']'
//
// Variables are z1..zn (holomorphic), zb1..zbn (conjugates) and x1..xk (real
// symbol variables). Division is only by nonzero constants, so p/q literals
// come out exact. Decimal literals are rejected.

#include "hermfactor/form.hpp"
#include "hermfactor/multiindex.hpp"
#include "hermfactor/rational.hpp"

#include <cctype>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hermfactor {

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : Error("parse error at position " + std::to_string(pos) + ": " + msg), pos_(pos)
    {
    }
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

/// Polynomial over named variable slots. Slot layout: z_k -> 3(k-1),
/// zb_k -> 3(k-1)+1, x_k -> 3(k-1)+2. Keys carry no trailing zeros.
class ExprPoly {
public:
    using Key = std::vector<unsigned>;
    using Terms = std::map<Key, GaussianRational>;

    static ExprPoly constant(const GaussianRational& c)
    {
        ExprPoly p;
        p.add({}, c);
        return p;
    }
    static ExprPoly variable(std::size_t slot)
    {
        Key k(slot + 1, 0);
        k[slot] = 1;
        ExprPoly p;
        p.add(std::move(k), 1);
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }
    GaussianRational constant_value() const
    {
        auto it = terms_.find(Key{});
        return it == terms_.end() ? GaussianRational{} : it->second;
    }

    void add(Key k, const GaussianRational& c)
    {
        while (!k.empty() && k.back() == 0) k.pop_back();
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(std::move(k), c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend ExprPoly operator+(ExprPoly a, const ExprPoly& b)
    {
        for (const auto& [k, c] : b.terms_) a.add(k, c);
        return a;
    }
    friend ExprPoly operator-(const ExprPoly& a) { return a * constant(-1); }
    friend ExprPoly operator-(const ExprPoly& a, const ExprPoly& b) { return a + (-b); }
    friend ExprPoly operator*(const ExprPoly& a, const ExprPoly& b)
    {
        ExprPoly out;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                Key k(std::max(ka.size(), kb.size()), 0);
                for (std::size_t s = 0; s < ka.size(); ++s) k[s] += ka[s];
                for (std::size_t s = 0; s < kb.size(); ++s) k[s] += kb[s];
                out.add(std::move(k), ca * cb);
            }
        return out;
    }

private:
    Terms terms_;
};

/// A parsed expression or bracketed matrix of expressions.
struct ParsedExpression {
    std::size_t rows = 1;
    std::size_t cols = 1;
    std::vector<ExprPoly> entries;  // row-major
    bool bracketed = false;

    /// Max k over all z_k, zb_k (kind 0/1) or x_k (kind 2); 0 if absent.
    std::size_t max_index(unsigned kind) const
    {
        std::size_t m = 0;
        for (const auto& e : entries)
            for (const auto& [k, c] : e.terms())
                for (std::size_t s = 0; s < k.size(); ++s)
                    if (k[s] && s % 3 == kind) m = std::max(m, s / 3 + 1);
        return m;
    }
    bool uses(unsigned kind) const { return max_index(kind) > 0; }
};

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    ParsedExpression parse_document()
    {
        ParsedExpression out;
        skip();
        if (peek() == '[') {
            out.bracketed = true;
            out.rows = 0;
            expect('[');
            std::size_t cols = 0;
            do {
                skip();
                const std::size_t row_start = pos_;
                expect('[');
                std::size_t c = 0;
                do {
                    out.entries.push_back(parse_expr());
                    ++c;
                    skip();
                } while (accept(','));
                expect(']');
                if (out.rows == 0) cols = c;
                else if (c != cols) throw ParseError("ragged matrix rows", row_start);
                ++out.rows;
                skip();
            } while (accept(','));
            expect(']');
            out.cols = cols;
        } else {
            out.entries.push_back(parse_expr());
        }
        skip();
        if (pos_ != s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
        return out;
    }

private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool accept(char c)
    {
        skip();
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        skip();
        if (peek() != c) {
            if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' before end of input", pos_);
            throw ParseError(std::string("expected '") + c + "', found '" + s_[pos_] + "'", pos_);
        }
        ++pos_;
    }

    ExprPoly parse_expr()
    {
        ExprPoly acc = parse_term();
        for (;;) {
            if (accept('+')) acc = acc + parse_term();
            else if (accept('-')) acc = acc - parse_term();
            else return acc;
        }
    }

    ExprPoly parse_term()
    {
        ExprPoly acc = parse_unary();
        for (;;) {
            if (accept('*')) {
                acc = acc * parse_unary();
            } else if (accept('/')) {
                skip();
                const std::size_t at = pos_;
                ExprPoly d = parse_unary();
                if (!d.is_constant()) throw ParseError("division by a non-constant expression", at);
                const GaussianRational dv = d.constant_value();
                if (dv.is_zero()) throw ParseError("division by zero", at);
                acc = acc * ExprPoly::constant(GaussianRational(1) / dv);
            } else {
                return acc;
            }
        }
    }

    ExprPoly parse_unary()
    {
        if (accept('-')) return -parse_unary();
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    ExprPoly parse_power()
    {
        ExprPoly base = parse_primary();
        if (!accept('^')) return base;
        skip();
        const std::size_t at = pos_;
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            throw ParseError("exponent must be a nonnegative integer", at);
        const Integer e = read_integer();
        if (e > 4096) throw ParseError("exponent too large", at);
        ExprPoly out = ExprPoly::constant(1);
        for (unsigned long k = 0; k < e.get_ui(); ++k) out = out * base;
        return out;
    }

    Integer read_integer()
    {
        const std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (peek() == '.' || peek() == 'e' || peek() == 'E')
            throw ParseError("non-rational literal (use p/q)", start);
        return Integer(std::string(s_.substr(start, pos_ - start)), 10);
    }

    ExprPoly parse_primary()
    {
        skip();
        const std::size_t at = pos_;
        const char c = peek();
        if (c == '\0') throw ParseError("unexpected end of input", at);
        if (c == '(') {
            ++pos_;
            ExprPoly e = parse_expr();
            expect(')');
            return e;
        }
        if (c == '.') throw ParseError("non-rational literal (use p/q)", at);
        if (std::isdigit(static_cast<unsigned char>(c))) return ExprPoly::constant(Rational(read_integer()));
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_;
            while (end < s_.size() && std::isalpha(static_cast<unsigned char>(s_[end]))) ++end;
            const std::string name(s_.substr(pos_, end - pos_));
            std::size_t dig = end;
            while (dig < s_.size() && std::isdigit(static_cast<unsigned char>(s_[dig]))) ++dig;
            const std::string digits(s_.substr(end, dig - end));
            if (name == "i" && digits.empty()) {
                pos_ = end;
                return ExprPoly::constant(GaussianRational::i_unit());
            }
            unsigned kind = 3;
            if (name == "z") kind = 0;
            else if (name == "zb") kind = 1;
            else if (name == "x") kind = 2;
            if (kind == 3 || digits.empty() || digits.size() > 6)
                throw ParseError("unknown variable '" + name + digits + "'", at);
            const unsigned long k = std::stoul(digits);
            if (k == 0) throw ParseError("variable indices start at 1", at);
            pos_ = dig;
            return ExprPoly::variable(3 * (k - 1) + kind);
        }
        throw ParseError(std::string("unexpected '") + c + "'", at);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

inline void split_complex_key(const ExprPoly::Key& k, std::size_t n, MultiIndex& alpha, MultiIndex& beta)
{
    alpha = MultiIndex(n);
    beta = MultiIndex(n);
    for (std::size_t s = 0; s < k.size(); ++s) {
        if (!k[s]) continue;
        if (s % 3 == 0) alpha[s / 3] = k[s];
        else if (s % 3 == 1) beta[s / 3] = k[s];
    }
}

}  // namespace detail

inline ParsedExpression parse_document(std::string_view text) { return detail::Parser(text).parse_document(); }

/// Parses a kernel F(z, wbar) in z/zb variables; a bracketed r x r matrix gives
/// an r x r form. n defaults to the largest variable index (at least 1).
inline BihermitianForm parse_form(std::string_view text, std::size_t n = 0)
{
    const ParsedExpression pe = parse_document(text);
    if (pe.uses(2)) throw ParseError("real variables x_k are not allowed in a kernel expression", 0);
    if (pe.rows != pe.cols) throw ParseError("matrix kernel must be square", 0);
    const std::size_t used = std::max(pe.max_index(0), pe.max_index(1));
    if (n == 0) n = std::max<std::size_t>(used, 1);
    if (used > n) throw ParseError("variable index exceeds n = " + std::to_string(n), 0);
    BihermitianForm f(n, pe.rows);
    MultiIndex alpha, beta;
    for (std::size_t e = 0; e < pe.entries.size(); ++e)
        for (const auto& [k, c] : pe.entries[e].terms()) {
            detail::split_complex_key(k, n, alpha, beta);
            f.add_term(e / pe.cols, e % pe.cols, alpha, beta, c);
        }
    return f;
}

/// Parses an s x r holomorphic matrix (z variables only). A bare expression
/// is 1 x 1.
inline HoloPolyMatrix parse_holo_matrix(std::string_view text, std::size_t n = 0)
{
    const ParsedExpression pe = parse_document(text);
    if (pe.uses(1) || pe.uses(2)) throw ParseError("holomorphic matrix may only use z variables", 0);
    const std::size_t used = pe.max_index(0);
    if (n == 0) n = std::max<std::size_t>(used, 1);
    if (used > n) throw ParseError("variable index exceeds n = " + std::to_string(n), 0);
    HoloPolyMatrix a(n, pe.rows, pe.cols);
    MultiIndex alpha, beta;
    for (std::size_t e = 0; e < pe.entries.size(); ++e)
        for (const auto& [k, c] : pe.entries[e].terms()) {
            detail::split_complex_key(k, n, alpha, beta);
            a(e / pe.cols, e % pe.cols).add_term(alpha, c);
        }
    return a;
}

/// Kernel if any conjugate variable (or no variable at all) appears,
/// holomorphic matrix otherwise.
inline std::variant<BihermitianForm, HoloPolyMatrix> parse_expression(std::string_view text, std::size_t n = 0)
{
    const ParsedExpression pe = parse_document(text);
    if (pe.uses(0) && !pe.uses(1)) return parse_holo_matrix(text, n);
    return parse_form(text, n);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline std::string monomial_text(const char* var, const MultiIndex& a)
{
    std::string s;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!a[k]) continue;
        if (!s.empty()) s += "*";
        s += var + std::to_string(k + 1);
        if (a[k] > 1) s += "^" + std::to_string(a[k]);
    }
    return s;
}

/// Appends "c*mono" to out with sign handling.
inline void append_term(std::string& out, const GaussianRational& c, const std::string& mono)
{
    GaussianRational v = c;
    bool negative = false;
    if ((v.is_real() && sgn(v.re) < 0) || (sgn(v.re) == 0 && sgn(v.im) < 0)) {
        negative = true;
        v = -v;
    }
    if (out.empty()) out += negative ? "-" : "";
    else out += negative ? " - " : " + ";
    if (mono.empty()) {
        out += to_string(v);
    } else if (v == GaussianRational(1)) {
        out += mono;
    } else {
        out += to_string(v) + "*" + mono;
    }
}

template <class Terms, class MonoFn>
std::string poly_text(const Terms& terms, MonoFn mono)
{
    std::string out;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) append_term(out, it->second, mono(it->first));
    return out.empty() ? "0" : out;
}

}  // namespace detail

inline std::string to_expression(const HoloPolynomial& p)
{
    return detail::poly_text(p.terms(), [](const MultiIndex& a) { return detail::monomial_text("z", a); });
}

inline std::string to_expression(const BihermitianForm& f)
{
    std::vector<std::map<std::pair<MultiIndex, MultiIndex>, GaussianRational>> cells(f.r() * f.r());
    for (const auto& [key, c] : f.terms()) cells[key.i * f.r() + key.j].emplace(std::pair{key.alpha, key.beta}, c);
    auto cell_text = [&](std::size_t e) {
        return detail::poly_text(cells[e], [](const std::pair<MultiIndex, MultiIndex>& ab) {
            std::string s = detail::monomial_text("z", ab.first);
            const std::string t = detail::monomial_text("zb", ab.second);
            if (!s.empty() && !t.empty()) s += "*";
            return s + t;
        });
    };
    if (f.r() == 1) return cell_text(0);
    std::string out = "[";
    for (std::size_t i = 0; i < f.r(); ++i) {
        out += i ? ", [" : "[";
        for (std::size_t j = 0; j < f.r(); ++j) out += (j ? ", " : "") + cell_text(i * f.r() + j);
        out += "]";
    }
    return out + "]";
}

inline std::string to_expression(const HoloPolyMatrix& a)
{
    std::string out = "[";
    for (std::size_t k = 0; k < a.rows(); ++k) {
        out += k ? ", [" : "[";
        for (std::size_t j = 0; j < a.cols(); ++j) out += (j ? ", " : "") + to_expression(a(k, j));
        out += "]";
    }
    return out + "]";
}

}  // namespace hermfactor
