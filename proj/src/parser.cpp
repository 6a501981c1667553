#include "coalp/parser.hpp"

#include <cctype>
#include <functional>
#include <sstream>
#include <tuple>
#include <utility>
#include <vector>

namespace coalp {

namespace {

struct Token {
    enum class Kind { atom_name, var_name, lparen, rparen, comma, dot, turnstile, query, end, error };
    Kind kind;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.column = col_;
        if (pos_ >= text_.size()) {
            t.kind = Token::Kind::end;
            return t;
        }
        char c = text_[pos_];
        if (c == '(') { advance(); t.kind = Token::Kind::lparen; return t; }
        if (c == ')') { advance(); t.kind = Token::Kind::rparen; return t; }
        if (c == ',') { advance(); t.kind = Token::Kind::comma; return t; }
        if (c == '.') { advance(); t.kind = Token::Kind::dot; return t; }
        if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
            advance(); advance();
            t.kind = Token::Kind::turnstile;
            return t;
        }
        if (c == '?' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
            advance(); advance();
            t.kind = Token::Kind::query;
            return t;
        }
        if (c == '\'') {
            advance();
            std::string s;
            while (pos_ < text_.size() && text_[pos_] != '\'') {
                s += text_[pos_];
                advance();
            }
            if (pos_ >= text_.size()) {
                t.kind = Token::Kind::error;
                t.text = "unterminated quoted atom";
                return t;
            }
            advance();  // closing quote
            t.kind = Token::Kind::atom_name;
            t.text = std::move(s);
            return t;
        }
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::string s;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                s += text_[pos_];
                advance();
            }
            t.kind = (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_')
                         ? Token::Kind::var_name
                         : Token::Kind::atom_name;
            t.text = std::move(s);
            return t;
        }
        t.kind = Token::Kind::error;
        t.text = std::string("unexpected character '") + c + "'";
        advance();
        return t;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '%') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// A printed variable "L_1" round-trips to Var{"L", 1}: split at the last
// underscore when it is followed by digits only.
Var make_var(const std::string& token) {
    auto us = token.rfind('_');
    if (us != std::string::npos && us > 0 && us + 1 < token.size()) {
        bool digits = true;
        for (std::size_t i = us + 1; i < token.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(token[i]))) { digits = false; break; }
        if (digits) return Var{token.substr(0, us), static_cast<unsigned>(std::stoul(token.substr(us + 1)))};
    }
    return Var{token, 0};
}

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { shift(); }

    std::vector<ParseDiagnostic> diags;

    std::optional<Program> program() {
        Program p;
        while (cur_.kind != Token::Kind::end) {
            clause_pos_.emplace_back(cur_.line, cur_.column);
            auto c = clause();
            if (!c) return std::nullopt;
            p.clauses.push_back(std::move(*c));
        }
        if (!check_arities(p)) return std::nullopt;
        return p;
    }

    std::optional<Goal> goal() {
        if (cur_.kind == Token::Kind::query) shift();
        Goal g;
        if (cur_.kind == Token::Kind::dot || cur_.kind == Token::Kind::end) {
            error("empty goal");
            return std::nullopt;
        }
        auto a = atom();
        if (!a) return std::nullopt;
        g.atoms.push_back(std::move(*a));
        while (cur_.kind == Token::Kind::comma) {
            shift();
            auto b = atom();
            if (!b) return std::nullopt;
            g.atoms.push_back(std::move(*b));
        }
        if (!expect(Token::Kind::dot, "'.'")) return std::nullopt;
        if (cur_.kind != Token::Kind::end) {
            error("trailing input after goal");
            return std::nullopt;
        }
        return g;
    }

private:
    std::optional<Clause> clause() {
        Clause c;
        auto h = atom();
        if (!h) return std::nullopt;
        c.head = std::move(*h);
        if (cur_.kind == Token::Kind::turnstile) {
            shift();
            auto b = atom();
            if (!b) return std::nullopt;
            c.body.push_back(std::move(*b));
            while (cur_.kind == Token::Kind::comma) {
                shift();
                auto b2 = atom();
                if (!b2) return std::nullopt;
                c.body.push_back(std::move(*b2));
            }
        }
        if (!expect(Token::Kind::dot, "'.'")) return std::nullopt;
        return c;
    }

    std::optional<Atom> atom() {
        if (cur_.kind != Token::Kind::atom_name) {
            error("expected predicate name");
            return std::nullopt;
        }
        Atom a;
        a.predicate = cur_.text;
        shift();
        if (cur_.kind == Token::Kind::lparen) {
            shift();
            auto t = term();
            if (!t) return std::nullopt;
            a.args.push_back(std::move(*t));
            while (cur_.kind == Token::Kind::comma) {
                shift();
                auto t2 = term();
                if (!t2) return std::nullopt;
                a.args.push_back(std::move(*t2));
            }
            if (!expect(Token::Kind::rparen, "')'")) return std::nullopt;
        }
        return a;
    }

    std::optional<TermPtr> term() {
        if (cur_.kind == Token::Kind::var_name) {
            auto v = make_var(cur_.text);
            shift();
            return Term::variable(std::move(v));
        }
        if (cur_.kind != Token::Kind::atom_name) {
            error("expected term");
            return std::nullopt;
        }
        std::string f = cur_.text;
        shift();
        std::vector<TermPtr> args;
        if (cur_.kind == Token::Kind::lparen) {
            shift();
            auto t = term();
            if (!t) return std::nullopt;
            args.push_back(std::move(*t));
            while (cur_.kind == Token::Kind::comma) {
                shift();
                auto t2 = term();
                if (!t2) return std::nullopt;
                args.push_back(std::move(*t2));
            }
            if (!expect(Token::Kind::rparen, "')'")) return std::nullopt;
        }
        return Term::compound(std::move(f), std::move(args));
    }

    bool check_arities(Program& p) {
        bool ok = true;
        // Diagnostics point at the start of the clause containing the
        // conflicting occurrence.
        int line = 1, col = 1;
        auto note_pred = [&](const Atom& a) {
            auto [it, inserted] = p.predicate_arity.emplace(a.predicate, a.args.size());
            if (!inserted && it->second != a.args.size()) {
                std::ostringstream os;
                os << "predicate '" << a.predicate << "' used with arity " << a.args.size()
                   << " but previously with arity " << it->second;
                diags.push_back({line, col, os.str(), ParseDiagnostic::Severity::error});
                ok = false;
            }
        };
        std::function<void(const TermPtr&)> note_term = [&](const TermPtr& t) {
            if (t->is_variable()) return;
            auto [it, inserted] = p.function_arity.emplace(t->functor(), t->arity());
            if (!inserted && it->second != t->arity()) {
                std::ostringstream os;
                os << "functor '" << t->functor() << "' used with arity " << t->arity()
                   << " but previously with arity " << it->second;
                diags.push_back({line, col, os.str(), ParseDiagnostic::Severity::error});
                ok = false;
            }
            for (const auto& a : t->args()) note_term(a);
        };
        for (std::size_t i = 0; i < p.clauses.size(); ++i) {
            const Clause& c = p.clauses[i];
            if (i < clause_pos_.size()) std::tie(line, col) = clause_pos_[i];
            note_pred(c.head);
            for (const auto& t : c.head.args) note_term(t);
            for (const auto& b : c.body) {
                note_pred(b);
                for (const auto& t : b.args) note_term(t);
            }
        }
        return ok;
    }

    void shift() {
        cur_ = lex_.next();
        if (cur_.kind == Token::Kind::error) error(cur_.text);
    }

    bool expect(Token::Kind k, const char* what) {
        if (cur_.kind != k) {
            error(std::string("expected ") + what);
            return false;
        }
        shift();
        return true;
    }

    void error(const std::string& msg) {
        diags.push_back({cur_.line, cur_.column, msg, ParseDiagnostic::Severity::error});
    }

    std::vector<std::pair<int, int>> clause_pos_;

    Lexer lex_;
    Token cur_{Token::Kind::end, "", 1, 1};
};

}  // namespace

ParseResult<Program> parse_program(const std::string& text) {
    Parser p(text);
    ParseResult<Program> out;
    auto prog = p.program();
    out.diagnostics = std::move(p.diags);
    if (prog && out.diagnostics.empty()) out.value = std::move(*prog);
    return out;
}

ParseResult<Goal> parse_goal(const std::string& text) {
    Parser p(text);
    ParseResult<Goal> out;
    auto g = p.goal();
    out.diagnostics = std::move(p.diags);
    if (g && out.diagnostics.empty()) out.value = std::move(*g);
    return out;
}

std::string to_string(const Program& p) {
    std::string s;
    for (const auto& c : p.clauses) {
        s += to_string(c);
        s += "\n";
    }
    return s;
}

}  // namespace coalp
