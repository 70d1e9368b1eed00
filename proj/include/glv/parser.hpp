#pragma once

// Recursive-descent parser for the ASCII grammar:
//
//   formula:  bot | Ident | Ident(term,...) | ~F | F -> G | F + G | F * G
//             | F \/ G | F /\ G | n.F | F^n | exists x. F | forall x. F | (F)
//   sequent:  F1, F2 => G1, G2      (either side may be empty)
//   hyperseq: S1 | S2 | ...
//
// -> is right-associative and lowest precedence; quantifiers extend as far
// right as possible. Derived connectives are expanded to the bot/->/exists
// core immediately, so parsed values are always in core form.
//
// A bare identifier in term position denotes a variable when an enclosing
// quantifier binds it (or it uses the generated "x#k" scheme, which user
// input cannot contain); any other identifier denotes a constant.

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "glv/syntax.hpp"

namespace glv {

struct ParseError : std::runtime_error {
    size_t pos;
    ParseError(const std::string& msg, size_t p)
        : std::runtime_error(msg + " (at offset " + std::to_string(p) + ")"), pos(p) {}
};

namespace detail {

struct Lexer {
    enum Kind { Ident, Number, Sym, End };
    std::string text;
    size_t pos = 0;
    Kind kind = End;
    std::string tok;
    size_t tok_pos = 0;

    explicit Lexer(std::string t) : text(std::move(t)) { next(); }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, tok_pos); }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '#';
    }

    void next() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        tok_pos = pos;
        if (pos >= text.size()) {
            kind = End;
            tok.clear();
            return;
        }
        char c = text[pos];
        if (ident_start(c)) {
            size_t s = pos;
            while (pos < text.size() && ident_char(text[pos])) ++pos;
            kind = Ident;
            tok = text.substr(s, pos - s);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t s = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            kind = Number;
            tok = text.substr(s, pos - s);
            return;
        }
        kind = Sym;
        auto two = text.substr(pos, 2);
        if (two == "->" || two == "=>" || two == "\\/" || two == "/\\") {
            tok = two;
            pos += 2;
            return;
        }
        tok = std::string(1, c);
        ++pos;
    }

    bool at_sym(const std::string& s) const { return kind == Sym && tok == s; }
    bool at_kw(const std::string& s) const { return kind == Ident && tok == s; }
    bool accept_sym(const std::string& s) {
        if (!at_sym(s)) return false;
        next();
        return true;
    }
    void expect_sym(const std::string& s) {
        if (!accept_sym(s)) fail("expected '" + s + "'");
    }
};

struct Parser {
    Lexer lx;
    std::vector<std::string> bound;
    explicit Parser(std::string text) : lx(std::move(text)) {}

    // A bare identifier is a variable when a quantifier binds it here, or
    // when it carries the generated-variable prefix; otherwise a constant.
    bool is_var_name(const std::string& n) const {
        for (auto& b : bound)
            if (b == n) return true;
        return n.rfind("x#", 0) == 0;
    }

    Term parse_term() {
        if (lx.kind != Lexer::Ident) lx.fail("expected term");
        std::string name = lx.tok;
        lx.next();
        if (!lx.accept_sym("("))
            return is_var_name(name) ? Term::var(name) : Term::app(name);
        std::vector<Term> args;
        if (!lx.at_sym(")")) {
            args.push_back(parse_term());
            while (lx.accept_sym(",")) args.push_back(parse_term());
        }
        lx.expect_sym(")");
        return Term::app(name, std::move(args));
    }

    long parse_number() {
        if (lx.kind != Lexer::Number) lx.fail("expected numeral");
        long n = std::stol(lx.tok);
        lx.next();
        return n;
    }

    Formula parse_formula() { return parse_imp(); }

    Formula parse_imp() {
        if (lx.at_kw("exists") || lx.at_kw("forall")) {
            bool is_forall = lx.tok == "forall";
            lx.next();
            if (lx.kind != Lexer::Ident) lx.fail("expected bound variable");
            std::string v = lx.tok;
            lx.next();
            lx.expect_sym(".");
            bound.push_back(v);
            Formula body = parse_imp();
            bound.pop_back();
            return is_forall ? f_forall(v, std::move(body)) : f_exists(v, std::move(body));
        }
        Formula lhs = parse_oplus();
        if (lx.accept_sym("->")) return f_imp(std::move(lhs), parse_imp());
        return lhs;
    }

    Formula parse_oplus() {
        Formula f = parse_odot();
        while (lx.accept_sym("+")) f = f_oplus(std::move(f), parse_odot());
        return f;
    }

    Formula parse_odot() {
        Formula f = parse_or();
        while (lx.accept_sym("*")) f = f_odot(std::move(f), parse_or());
        return f;
    }

    Formula parse_or() {
        Formula f = parse_and();
        while (lx.accept_sym("\\/")) f = f_or(std::move(f), parse_and());
        return f;
    }

    Formula parse_and() {
        Formula f = parse_unary();
        while (lx.accept_sym("/\\")) f = f_and(std::move(f), parse_unary());
        return f;
    }

    Formula parse_unary() {
        if (lx.accept_sym("~")) return f_neg(parse_unary());
        if (lx.kind == Lexer::Number) {
            long n = parse_number();
            lx.expect_sym(".");
            return f_nmul(n, parse_unary());
        }
        return parse_postfix();
    }

    Formula parse_postfix() {
        Formula f = parse_primary();
        while (lx.accept_sym("^")) f = f_pow(f, parse_number());
        return f;
    }

    Formula parse_primary() {
        if (lx.accept_sym("(")) {
            Formula f = parse_imp();
            lx.expect_sym(")");
            return f;
        }
        if (lx.at_kw("exists") || lx.at_kw("forall")) return parse_imp();
        if (lx.at_kw("bot")) {
            lx.next();
            return f_bot();
        }
        if (lx.kind != Lexer::Ident) lx.fail("expected formula");
        std::string name = lx.tok;
        lx.next();
        std::vector<Term> args;
        if (lx.accept_sym("(")) {
            if (!lx.at_sym(")")) {
                args.push_back(parse_term());
                while (lx.accept_sym(",")) args.push_back(parse_term());
            }
            lx.expect_sym(")");
        }
        return f_atom(name, std::move(args));
    }

    FormulaMultiset parse_formula_list_until_arrow() {
        FormulaMultiset out;
        if (lx.at_sym("=>")) return out;
        out.push_back(parse_formula());
        while (lx.accept_sym(",")) out.push_back(parse_formula());
        return out;
    }

    Sequent parse_sequent() {
        FormulaMultiset ante = parse_formula_list_until_arrow();
        lx.expect_sym("=>");
        FormulaMultiset succ;
        if (lx.kind != Lexer::End && !lx.at_sym("|") && !lx.at_sym(")")) {
            succ.push_back(parse_formula());
            while (lx.accept_sym(",")) succ.push_back(parse_formula());
        }
        return Sequent(std::move(ante), std::move(succ));
    }

    Hypersequent parse_hypersequent() {
        std::vector<Sequent> cs;
        cs.push_back(parse_sequent());
        while (lx.accept_sym("|")) cs.push_back(parse_sequent());
        return Hypersequent(std::move(cs));
    }

    void expect_end() {
        if (lx.kind != Lexer::End) lx.fail("unexpected trailing input");
    }
};

inline void rename_bound_apart(Formula& f, std::set<std::string>& used) {
    switch (f.kind) {
        case FKind::Bot:
        case FKind::Atom:
            return;
        case FKind::Imp:
            rename_bound_apart(f.kids[0], used);
            rename_bound_apart(f.kids[1], used);
            return;
        case FKind::Exists: {
            if (used.count(f.name)) {
                std::string fresh = f.name;
                do {
                    fresh += '\'';
                } while (used.count(fresh));
                std::map<std::string, Term> ren{{f.name, Term::var(fresh)}};
                f.kids[0] = substitute(f.kids[0], ren);
                f.name = fresh;
            }
            used.insert(f.name);
            rename_bound_apart(f.kids[0], used);
            return;
        }
    }
}

}  // namespace detail

// Renames bound variables so they are pairwise distinct and distinct from
// every free variable.
inline Formula canonicalize(const Formula& f) {
    Formula r = f;
    std::set<std::string> used = free_vars(f);
    detail::rename_bound_apart(r, used);
    return r;
}

inline Formula parse_formula(const std::string& text, Signature* sig = nullptr) {
    detail::Parser p(text);
    Formula f = p.parse_formula();
    p.expect_end();
    f = canonicalize(f);
    if (sig) sig->scan(f);
    return f;
}

inline Sequent parse_sequent(const std::string& text, Signature* sig = nullptr) {
    detail::Parser p(text);
    Sequent s = p.parse_sequent();
    p.expect_end();
    FormulaMultiset a, c;
    for (auto& f : s.ante) a.push_back(canonicalize(f));
    for (auto& f : s.succ) c.push_back(canonicalize(f));
    Sequent out(std::move(a), std::move(c));
    if (sig) {
        Hypersequent h({out});
        sig->scan(h);
    }
    return out;
}

inline Hypersequent parse_hypersequent(const std::string& text, Signature* sig = nullptr) {
    detail::Parser p(text);
    Hypersequent h = p.parse_hypersequent();
    p.expect_end();
    std::vector<Sequent> cs;
    for (auto& s : h.comps) {
        FormulaMultiset a, c;
        for (auto& f : s.ante) a.push_back(canonicalize(f));
        for (auto& f : s.succ) c.push_back(canonicalize(f));
        cs.emplace_back(std::move(a), std::move(c));
    }
    Hypersequent out(std::move(cs));
    if (sig) sig->scan(out);
    return out;
}

}  // namespace glv
