#include "inet/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace inet {

namespace {

enum class Tok {
    End,
    Symbol,     // uppercase-initial identifier
    Name,       // lowercase-initial identifier
    Int,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Tilde,
    Pipe,
    Interact,   // ><
    Arrow,      // =>
    AnnLeft,    // (*L)
    AnnRight,   // (*R)
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    Ne,
    Minus,
    KwNet,
    KwInterface,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t value = 0;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skip_trivia();
        Token t;
        t.pos = pos_;
        if (at_end()) return t;

        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(t);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_ident(t);

        advance();
        switch (c) {
            case '(':
                if (!at_end() && peek() == '*') return lex_annotation(t);
                t.kind = Tok::LParen;
                return t;
            case ')': t.kind = Tok::RParen; return t;
            case '{': t.kind = Tok::LBrace; return t;
            case '}': t.kind = Tok::RBrace; return t;
            case ',': t.kind = Tok::Comma; return t;
            case ';': t.kind = Tok::Semi; return t;
            case '~': t.kind = Tok::Tilde; return t;
            case '|': t.kind = Tok::Pipe; return t;
            case '-': t.kind = Tok::Minus; return t;
            case '>':
                if (!at_end() && peek() == '<') { advance(); t.kind = Tok::Interact; return t; }
                if (!at_end() && peek() == '=') { advance(); t.kind = Tok::Ge; return t; }
                t.kind = Tok::Gt;
                return t;
            case '<':
                if (!at_end() && peek() == '=') { advance(); t.kind = Tok::Le; return t; }
                t.kind = Tok::Lt;
                return t;
            case '=':
                if (!at_end() && peek() == '>') { advance(); t.kind = Tok::Arrow; return t; }
                if (!at_end() && peek() == '=') { advance(); t.kind = Tok::EqEq; return t; }
                throw ParseError("stray '=' (equations are written with '~')", t.pos);
            case '!':
                if (!at_end() && peek() == '=') { advance(); t.kind = Tok::Ne; return t; }
                throw ParseError("stray '!'", t.pos);
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", t.pos);
        }
    }

private:
    bool at_end() const { return index_ >= src_.size(); }
    char peek() const { return src_[index_]; }

    void advance() {
        char c = src_[index_++];
        if (c == '\n') {
            ++pos_.line;
            pos_.column = 1;
        } else {
            ++pos_.column;
        }
    }

    void skip_trivia() {
        while (!at_end()) {
            char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    Token lex_number(Token t) {
        std::string digits;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            digits += peek();
            advance();
        }
        t.kind = Tok::Int;
        t.value = std::strtoll(digits.c_str(), nullptr, 10);
        t.text = digits;
        return t;
    }

    Token lex_ident(Token t) {
        std::string id;
        while (!at_end() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
            id += peek();
            advance();
        }
        if (id == "net") {
            t.kind = Tok::KwNet;
        } else if (id == "interface") {
            t.kind = Tok::KwInterface;
        } else if (std::isupper(static_cast<unsigned char>(id[0]))) {
            t.kind = Tok::Symbol;
        } else {
            t.kind = Tok::Name;
        }
        t.text = std::move(id);
        return t;
    }

    // Already consumed '('; peeking at '*'.
    Token lex_annotation(Token t) {
        advance();  // '*'
        if (at_end() || (peek() != 'L' && peek() != 'R')) {
            throw ParseError("expected 'L' or 'R' after '(*'", t.pos);
        }
        t.kind = peek() == 'L' ? Tok::AnnLeft : Tok::AnnRight;
        advance();
        if (at_end() || peek() != ')') throw ParseError("expected ')' to close annotation", t.pos);
        advance();
        return t;
    }

    std::string_view src_;
    std::size_t index_ = 0;
    SourcePos pos_{1, 1};
};

const char* describe(Tok k) {
    switch (k) {
        case Tok::End: return "end of input";
        case Tok::Symbol: return "symbol";
        case Tok::Name: return "name";
        case Tok::Int: return "integer";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::Tilde: return "'~'";
        case Tok::Pipe: return "'|'";
        case Tok::Interact: return "'><'";
        case Tok::Arrow: return "'=>'";
        case Tok::AnnLeft: return "'(*L)'";
        case Tok::AnnRight: return "'(*R)'";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
        case Tok::EqEq: return "'=='";
        case Tok::Ne: return "'!='";
        case Tok::Minus: return "'-'";
        case Tok::KwNet: return "'net'";
        case Tok::KwInterface: return "'interface'";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view src) : lexer_(src) { shift(); }

    Program parse() {
        Program program;
        while (cur_.kind != Tok::End) {
            if (cur_.kind == Tok::Symbol) {
                program.rules.push_back(parse_rule(program.symbols));
            } else if (cur_.kind == Tok::KwNet) {
                if (program.net) throw ParseError("multiple net declarations", cur_.pos);
                program.net = parse_net(program.symbols);
            } else {
                throw ParseError(std::string("expected a rule or a net declaration, found ") +
                                     describe(cur_.kind),
                                 cur_.pos);
            }
        }
        return program;
    }

private:
    void shift() { cur_ = lexer_.next(); }

    Token expect(Tok kind, const char* what) {
        if (cur_.kind != kind) {
            throw ParseError(std::string("expected ") + what + ", found " + describe(cur_.kind),
                             cur_.pos);
        }
        Token t = cur_;
        shift();
        return t;
    }

    bool accept(Tok kind) {
        if (cur_.kind != kind) return false;
        shift();
        return true;
    }

    Rule parse_rule(SymbolTable& symbols) {
        Rule rule;
        rule.pos = cur_.pos;
        rule.left = parse_pattern(symbols);
        expect(Tok::Interact, "'><'");
        rule.right = parse_pattern(symbols);
        if (accept(Tok::Pipe)) rule.guard = parse_guard();
        expect(Tok::Arrow, "'=>'");
        while (cur_.kind != Tok::Semi) {
            if (!rule.rhs.empty()) expect(Tok::Comma, "','");
            rule.rhs.push_back(parse_equation(symbols));
        }
        expect(Tok::Semi, "';'");
        return rule;
    }

    RulePattern parse_pattern(SymbolTable& symbols) {
        RulePattern pat;
        pat.pos = cur_.pos;
        Token sym = expect(Tok::Symbol, "symbol");
        if (accept(Tok::LBrace)) {
            Token var = cur_;
            if (cur_.kind != Tok::Name) {
                throw ParseError("attribute pattern must be a variable", cur_.pos);
            }
            shift();
            pat.attr_var = var.text;
            expect(Tok::RBrace, "'}'");
        }
        if (accept(Tok::LParen)) {
            while (cur_.kind != Tok::RParen) {
                if (!pat.params.empty()) expect(Tok::Comma, "','");
                Token name = expect(Tok::Name, "name");
                for (const std::string& p : pat.params) {
                    if (p == name.text) {
                        throw ParseError("repeated parameter name " + name.text, name.pos);
                    }
                }
                pat.params.push_back(name.text);
            }
            shift();
        }
        pat.sym = symbols.intern(sym.text, static_cast<int>(pat.params.size()),
                                 pat.attr_var ? 1 : 0, sym.pos);
        return pat;
    }

    Guard parse_guard() {
        Guard g;
        g.lhs = parse_attr_expr();
        switch (cur_.kind) {
            case Tok::Lt: g.op = CmpOp::Lt; break;
            case Tok::Le: g.op = CmpOp::Le; break;
            case Tok::Gt: g.op = CmpOp::Gt; break;
            case Tok::Ge: g.op = CmpOp::Ge; break;
            case Tok::EqEq: g.op = CmpOp::Eq; break;
            case Tok::Ne: g.op = CmpOp::Ne; break;
            default:
                throw ParseError(std::string("expected a comparison operator, found ") +
                                     describe(cur_.kind),
                                 cur_.pos);
        }
        shift();
        g.rhs = parse_attr_expr();
        return g;
    }

    AttrExpr parse_attr_expr() {
        if (accept(Tok::Minus)) {
            Token n = expect(Tok::Int, "integer");
            return AttrExpr::literal(-n.value);
        }
        if (cur_.kind == Tok::Int) {
            Token n = cur_;
            shift();
            return AttrExpr::literal(n.value);
        }
        Token var = expect(Tok::Name, "attribute variable or integer");
        return AttrExpr::variable(var.text);
    }

    Equation parse_equation(SymbolTable& symbols) {
        Equation eq;
        eq.left = parse_term(symbols);
        expect(Tok::Tilde, "'~'");
        eq.right = parse_term(symbols);
        return eq;
    }

    TermPtr parse_term(SymbolTable& symbols) {
        if (cur_.kind == Tok::Name) {
            Token n = cur_;
            shift();
            return Term::make_name(n.text);
        }
        if (cur_.kind == Tok::AnnLeft || cur_.kind == Tok::AnnRight) {
            ReuseSide side = cur_.kind == Tok::AnnLeft ? ReuseSide::Left : ReuseSide::Right;
            shift();
            std::optional<SymbolId> cast;
            std::optional<AttrExpr> attr;
            std::vector<TermPtr> args;
            std::optional<Token> cast_tok;
            if (cur_.kind == Tok::Symbol) {
                cast_tok = cur_;
                shift();
            }
            if (accept(Tok::LBrace)) {
                attr = parse_attr_expr();
                expect(Tok::RBrace, "'}'");
            }
            args = parse_args(symbols);
            if (cast_tok) {
                cast = symbols.intern(cast_tok->text, static_cast<int>(args.size()),
                                      attr ? 1 : 0, cast_tok->pos);
            }
            return Term::make_annotated(side, cast, std::move(attr), std::move(args));
        }
        Token sym = expect(Tok::Symbol, "term");
        std::optional<AttrExpr> attr;
        if (accept(Tok::LBrace)) {
            attr = parse_attr_expr();
            expect(Tok::RBrace, "'}'");
        }
        std::vector<TermPtr> args = parse_args(symbols);
        SymbolId id = symbols.intern(sym.text, static_cast<int>(args.size()),
                                     attr ? 1 : 0, sym.pos);
        return Term::make_agent(id, std::move(attr), std::move(args));
    }

    std::vector<TermPtr> parse_args(SymbolTable& symbols) {
        std::vector<TermPtr> args;
        if (!accept(Tok::LParen)) return args;
        while (cur_.kind != Tok::RParen) {
            if (!args.empty()) expect(Tok::Comma, "','");
            args.push_back(parse_term(symbols));
        }
        shift();
        return args;
    }

    Net parse_net(SymbolTable& symbols) {
        Net net;
        net.pos = cur_.pos;
        expect(Tok::KwNet, "'net'");
        while (cur_.kind != Tok::Semi) {
            if (!net.equations.empty()) expect(Tok::Comma, "','");
            net.equations.push_back(parse_equation(symbols));
        }
        expect(Tok::Semi, "';'");
        expect(Tok::KwInterface, "'interface'");
        while (cur_.kind != Tok::Semi) {
            if (!net.interface.empty()) expect(Tok::Comma, "','");
            Token name = expect(Tok::Name, "interface name");
            net.interface.push_back(name.text);
        }
        expect(Tok::Semi, "';'");
        return net;
    }

    Lexer lexer_;
    Token cur_;
};

}  // namespace

Program parse_program(std::string_view text) {
    Parser parser(text);
    return parser.parse();
}

}  // namespace inet
