#include "compmdp/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "compmdp/error.hpp"

namespace compmdp {

namespace {

enum class Tok { Name, Int, Real, String, Punct, SumOp, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t col = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.line = line_;
            t.col = col_;
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = Tok::Name;
                while (pos_ < src_.size() && name_char(src_[pos_])) t.text += advance();
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && pos_ + 1 < src_.size() &&
                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                lex_number(t);
            } else if (c == '"') {
                t.kind = Tok::String;
                advance();
                while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n')
                    t.text += advance();
                if (pos_ >= src_.size() || src_[pos_] != '"')
                    throw SyntaxError(t.line, t.col, "closing quote");
                advance();
            } else if (src_.substr(pos_, 3) == "(+)") {
                t.kind = Tok::SumOp;
                t.text = "(+)";
                advance();
                advance();
                advance();
            } else if (c == '-' && pos_ + 1 < src_.size() &&
                       std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                t.text += advance();
                lex_number(t);
            } else if (src_.substr(pos_, 2) == "->") {
                t.kind = Tok::Punct;
                t.text = "->";
                advance();
                advance();
            } else if (std::string_view("{}()[],:;=").find(c) != std::string_view::npos) {
                t.kind = Tok::Punct;
                t.text = std::string(1, advance());
            } else {
                throw SyntaxError(t.line, t.col, "a token (found '" + std::string(1, c) + "')");
            }
            out.push_back(std::move(t));
        }
    }

private:
    static bool name_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '/' || c == '.' ||
               c == '\'';
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void lex_number(Token& t) {
        t.kind = Tok::Int;
        auto digits = [&] {
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                t.text += advance();
        };
        digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            t.kind = Tok::Real;
            t.text += advance();
            digits();
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t k = pos_ + 1;
            if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
            if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
                t.kind = Tok::Real;
                while (pos_ < k) t.text += advance();
                digits();
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

class Parser {
public:
    Parser(std::string_view text) : toks_(Lexer(text).run()) {}

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Tok::End; }
    bool is(std::string_view text) const {
        const Token& t = peek();
        return (t.kind == Tok::Name || t.kind == Tok::Punct || t.kind == Tok::SumOp) && t.text == text;
    }
    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(peek().line, peek().col, expected);
    }
    const Token& next() { return toks_[std::min(i_++, toks_.size() - 1)]; }
    void expect(std::string_view text) {
        if (!is(text)) fail("'" + std::string(text) + "'");
        next();
    }
    std::string name(const std::string& what = "a name") {
        if (peek().kind != Tok::Name) fail(what);
        return next().text;
    }
    std::size_t integer() {
        if (peek().kind != Tok::Int) fail("an integer");
        return std::stoull(next().text);
    }
    double real() {
        if (peek().kind != Tok::Int && peek().kind != Tok::Real) fail("a number");
        return std::stod(next().text);
    }
    std::string string_lit() {
        if (peek().kind != Tok::String) fail("a quoted string");
        return next().text;
    }

    OpenMDP component();

    void diagram(Diagram& d, const ComponentLoader& loader);

private:
    ExprPtr expr(bool in_let);
    ExprPtr seq_expr(bool in_let);
    ExprPtr atom();

    template <class F>
    ExprPtr located(const Token& at, F&& build) {
        try {
            return build();
        } catch (const ArityMismatch& e) {
            throw ArityMismatch(std::to_string(at.line) + ":" + std::to_string(at.col) + ": " +
                                e.what());
        }
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
    Diagram* env_ = nullptr;
    const ComponentLoader* loader_ = nullptr;
};

const std::set<std::string> kReservedPositionNames = {"exit"};

OpenMDP Parser::component() {
    bool bidirectional = false;
    if (is("omdp"))
        bidirectional = true;
    else if (!is("mdp"))
        fail("'mdp' or 'omdp'");
    next();
    OpenMDP c;
    c.name = name("a component name");
    expect("{");

    expect("arity");
    if (is("(")) {
        if (!bidirectional) fail("a rightward arity 'm -> n' for an mdp");
        auto pair = [&] {
            expect("(");
            Arity a;
            a.right = integer();
            expect(",");
            a.left = integer();
            expect(")");
            return a;
        };
        c.dom = pair();
        expect("->");
        c.cod = pair();
    } else {
        c.dom = {integer(), 0};
        expect("->");
        c.cod = {integer(), 0};
    }
    const std::size_t m = c.dom.right + c.cod.left, n = c.cod.right + c.dom.left;

    expect("actions");
    expect("[");
    std::vector<std::string> declared{name("an action name")};
    while (is(",")) {
        next();
        declared.push_back(name("an action name"));
    }
    expect("]");
    std::vector<std::string> sorted = declared;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("duplicate action in component " + c.name);

    RoMDP body(m, n, sorted);
    expect("positions");
    expect("{");
    std::map<std::string, std::size_t> pos;
    while (!is("}")) {
        const Token& at = peek();
        std::string q = name("a position name or '}'");
        if (kReservedPositionNames.count(q)) throw SyntaxError(at.line, at.col, "a position name");
        if (pos.count(q)) throw SyntaxError(at.line, at.col, "a fresh position name");
        expect("reward");
        double r = real();
        pos[q] = body.add_position(q, r);
    }
    expect("}");

    auto target = [&]() -> Target {
        if (is("exit")) {
            next();
            return Target::exit(integer());
        }
        const Token& at = peek();
        std::string q = name("a position name or 'exit'");
        auto it = pos.find(q);
        if (it == pos.end()) throw SyntaxError(at.line, at.col, "a declared position name");
        return Target::position(it->second);
    };

    expect("entry");
    while (peek().kind == Tok::Int) {
        const Token& at = peek();
        std::size_t i = integer();
        if (i < 1 || i > m) throw SyntaxError(at.line, at.col, "an entrance in 1.." + std::to_string(m));
        expect("->");
        Target t = target();
        if (!body.entry[i - 1].is_none()) throw SyntaxError(at.line, at.col, "a fresh entrance");
        body.entry[i - 1] = t;
    }

    std::set<std::pair<std::size_t, std::size_t>> given;
    while (is("trans")) {
        next();
        const Token& at = peek();
        auto qit = pos.find(name("a position name"));
        if (qit == pos.end()) throw SyntaxError(at.line, at.col, "a declared position name");
        const std::size_t q = qit->second;
        const Token& act_tok = peek();
        auto ac = body.action_index(name("an action name"));
        if (!ac) throw SyntaxError(act_tok.line, act_tok.col, "a declared action");
        if (!given.insert({q, *ac}).second)
            throw SyntaxError(at.line, at.col, "a position/action pair without an earlier row");
        expect("{");
        while (!is("}")) {
            Target t = target();
            expect(":");
            body.add_edge(q, *ac, t, real());
            if (!is(",")) break;
            next();
        }
        expect("}");
    }
    expect("}");
    if (!at_end()) fail("end of input");

    body.canonicalize();
    c.body = std::move(body);
    ValidationReport rep = validate(c);
    if (!rep.ok()) throw ValidationError("component " + c.name + " is invalid:\n" + rep.summary());
    return c;
}

ExprPtr Parser::expr(bool in_let) {
    ExprPtr e = seq_expr(in_let);
    while (peek().kind == Tok::SumOp) {
        const Token at = next();
        ExprPtr rhs = seq_expr(in_let);
        e = located(at, [&] { return make_sum(e, rhs); });
    }
    return e;
}

ExprPtr Parser::seq_expr(bool in_let) {
    ExprPtr e = atom();
    while (!in_let && is(";") && peek(1).kind != Tok::End) {
        const Token at = next();
        ExprPtr rhs = atom();
        e = located(at, [&] { return make_seq(e, rhs); });
    }
    return e;
}

ExprPtr Parser::atom() {
    const Token at = peek();
    if (is("(")) {
        next();
        ExprPtr e = expr(false);
        expect(")");
        return e;
    }
    if (is("tr")) {
        next();
        expect("[");
        std::size_t l = integer();
        expect("]");
        expect("(");
        ExprPtr inner = expr(false);
        expect(")");
        return located(at, [&] { return make_trace(l, inner); });
    }
    if (is("freeze")) {
        next();
        expect("(");
        ExprPtr inner = expr(false);
        expect(")");
        return make_freeze(inner);
    }
    if (is("id")) {
        next();
        expect("[");
        std::size_t a = integer();
        expect("]");
        return make_wire({WireSpec::Kind::Identity, a, 0});
    }
    if (is("swap") || is("unit") || is("counit")) {
        WireSpec::Kind k = is("swap")   ? WireSpec::Kind::Swap
                           : is("unit") ? WireSpec::Kind::Unit
                                        : WireSpec::Kind::Counit;
        next();
        expect("[");
        std::size_t a = integer();
        expect(",");
        std::size_t b = integer();
        expect("]");
        return make_wire({k, a, b});
    }
    if (is("load")) {
        next();
        std::string path = string_lit();
        return make_prim(path, (*loader_)(path));
    }
    if (peek().kind == Tok::Name) {
        std::string n = next().text;
        if (!env_->has(n)) throw UnboundName(n);
        return make_var(*env_, n);
    }
    fail("an expression");
}

void Parser::diagram(Diagram& d, const ComponentLoader& loader) {
    env_ = &d;
    loader_ = &loader;
    while (is("let")) {
        next();
        const Token& at = peek();
        std::string n = name("a binding name");
        if (d.has(n)) throw SyntaxError(at.line, at.col, "a name not bound before");
        expect("=");
        ExprPtr e = expr(true);
        expect(";");
        d.bind(n, e);
    }
    if (is("solve")) next();
    d.main = expr(false);
    if (is("entrance")) {
        next();
        d.entrance = integer();
        expect("exit");
        d.exit = integer();
    }
    if (is(";")) next();
    if (!at_end()) fail("end of input");
}

}  // namespace

OpenMDP parse_component(std::string_view text) {
    Parser p(text);
    return p.component();
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

ComponentLoader file_loader(const std::filesystem::path& base) {
    auto cache = std::make_shared<std::map<std::string, std::shared_ptr<const OpenMDP>>>();
    return [base, cache](const std::string& path) {
        auto it = cache->find(path);
        if (it != cache->end()) return it->second;
        std::filesystem::path full = std::filesystem::path(path).is_absolute() ? std::filesystem::path(path) : base / path;
        auto c = std::make_shared<const OpenMDP>(parse_component(read_file(full)));
        cache->emplace(path, c);
        return std::shared_ptr<const OpenMDP>(c);
    };
}

Diagram parse_diagram(std::string_view text, const ComponentLoader& loader) {
    Diagram d;
    Parser p(text);
    p.diagram(d, loader);
    return d;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

bool looks_like_component(std::string_view text) {
    try {
        Lexer lx(text);
        auto toks = lx.run();
        return !toks.empty() && toks[0].kind == Tok::Name &&
               (toks[0].text == "mdp" || toks[0].text == "omdp");
    } catch (const SyntaxError&) {
        return false;
    }
}

std::string print_component(const OpenMDP& c) {
    const RoMDP& b = c.body;
    std::ostringstream os;
    const bool ro = c.rightward();
    os << (ro ? "mdp " : "omdp ") << (c.name.empty() ? "M" : c.name) << " {\n";
    if (ro)
        os << "  arity " << c.dom.right << " -> " << c.cod.right << "\n";
    else
        os << "  arity (" << c.dom.right << ", " << c.dom.left << ") -> (" << c.cod.right << ", "
           << c.cod.left << ")\n";
    os << "  actions [";
    for (std::size_t a = 0; a < b.actions.size(); ++a) os << (a ? ", " : "") << b.actions[a];
    os << "]\n  positions {\n";
    for (std::size_t q = 0; q < b.num_positions(); ++q)
        os << "    " << b.positions[q] << " reward " << format_real(b.rewards[q]) << "\n";
    os << "  }\n";
    auto target = [&](Target t) {
        return t.is_exit() ? "exit " + std::to_string(t.index) : b.positions[t.index];
    };
    os << "  entry";
    for (std::size_t i = 0; i < b.entrances; ++i) os << " " << (i + 1) << " -> " << target(b.entry[i]);
    os << "\n";
    for (std::size_t q = 0; q < b.num_positions(); ++q)
        for (std::size_t a = 0; a < b.num_actions(); ++a) {
            const Row& r = b.row(q, a);
            if (r.empty()) continue;
            os << "  trans " << b.positions[q] << " " << b.actions[a] << " { ";
            for (std::size_t k = 0; k < r.size(); ++k)
                os << (k ? ", " : "") << target(r[k].to) << ": " << format_real(r[k].prob);
            os << " }\n";
        }
    os << "}\n";
    return os.str();
}

namespace {

enum Prec { kSum = 1, kSeq = 2, kAtom = 3 };

Prec prec(const ExprPtr& e) {
    if (e->kind == Expr::Kind::Sum) return kSum;
    if (e->kind == Expr::Kind::Seq) return kSeq;
    return kAtom;
}

std::string print_at(const ExprPtr& e, int min_prec) {
    std::string s;
    switch (e->kind) {
    case Expr::Kind::Sum: s = print_at(e->left, kSum) + " (+) " + print_at(e->right, kSeq); break;
    case Expr::Kind::Seq: s = print_at(e->left, kSeq) + " ; " + print_at(e->right, kAtom); break;
    case Expr::Kind::Trace:
        s = "tr[" + std::to_string(e->loops) + "](" + print_at(e->left, kSum) + ")";
        break;
    case Expr::Kind::Freeze: s = "freeze(" + print_at(e->left, kSum) + ")"; break;
    case Expr::Kind::Var: s = e->name; break;
    case Expr::Kind::Prim: s = "load \"" + e->name + "\""; break;
    case Expr::Kind::Wire:
        switch (e->wire.kind) {
        case WireSpec::Kind::Identity: s = "id[" + std::to_string(e->wire.a) + "]"; break;
        case WireSpec::Kind::Swap:
            s = "swap[" + std::to_string(e->wire.a) + "," + std::to_string(e->wire.b) + "]";
            break;
        case WireSpec::Kind::Unit:
            s = "unit[" + std::to_string(e->wire.a) + "," + std::to_string(e->wire.b) + "]";
            break;
        case WireSpec::Kind::Counit:
            s = "counit[" + std::to_string(e->wire.a) + "," + std::to_string(e->wire.b) + "]";
            break;
        }
        break;
    }
    return prec(e) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

std::string print_expr(const ExprPtr& e) { return print_at(e, kSum); }

std::string print_diagram(const Diagram& d) {
    std::ostringstream os;
    for (const auto& [n, e] : d.bindings()) {
        std::string body = print_at(e, kSum);
        // A top-level ';' would end the binding.
        if (e->kind == Expr::Kind::Seq || (e->kind == Expr::Kind::Sum && body.find(" ; ") != std::string::npos))
            body = "(" + body + ")";
        os << "let " << n << " = " << body << ";\n";
    }
    if (d.main) {
        os << "solve " << print_expr(d.main);
        if (d.entrance && d.exit) os << " entrance " << *d.entrance << " exit " << *d.exit;
        os << "\n";
    }
    return os.str();
}

}  // namespace compmdp
