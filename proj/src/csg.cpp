#include "chaincsg/csg.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <string>

#include "chaincsg/errors.hpp"
#include "chaincsg/primitives.hpp"

namespace chaincsg {

namespace {

struct Token {
    enum class Kind { LParen, RParen, Equals, Atom, End };
    Kind kind = Kind::End;
    std::string text;
    std::size_t at = 0;  // byte offset
};

class Tokenizer {
  public:
    explicit Tokenizer(const std::string& text) : src_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        for (;;) {
            while (i_ < src_.size() &&
                   (std::isspace(unsigned(src_[i_])) || src_[i_] == ','))
                ++i_;
            if (i_ < src_.size() && src_[i_] == '#') {
                while (i_ < src_.size() && src_[i_] != '\n') ++i_;
                continue;
            }
            break;
        }
        tok_.at = i_;
        if (i_ >= src_.size()) {
            tok_ = {Token::Kind::End, "", i_};
            return;
        }
        char c = src_[i_];
        if (c == '(' || c == ')' || c == '=') {
            tok_.kind = c == '(' ? Token::Kind::LParen
                        : c == ')' ? Token::Kind::RParen
                                   : Token::Kind::Equals;
            tok_.text = std::string(1, c);
            ++i_;
            return;
        }
        std::size_t b = i_;
        while (i_ < src_.size() && !std::isspace(unsigned(src_[i_])) && src_[i_] != ',' &&
               src_[i_] != '(' && src_[i_] != ')' && src_[i_] != '=' && src_[i_] != '#')
            ++i_;
        tok_ = {Token::Kind::Atom, src_.substr(b, i_ - b), b};
    }

    const std::string& src_;
    std::size_t i_ = 0;
    Token tok_;
};

[[noreturn]] void fail_at(const std::string& msg, std::size_t at) {
    throw ValidationError(msg + " at byte " + std::to_string(at));
}

bool is_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(unsigned(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(unsigned(c)) && c != '_') return false;
    return true;
}

CsgExpr parse_expr(Tokenizer& tz) {
    Token t = tz.take();
    if (t.kind == Token::Kind::Atom) {
        if (!is_name(t.text)) fail_at("expected a solid name, got '" + t.text + "'", t.at);
        CsgExpr e;
        e.kind = CsgExpr::Kind::Leaf;
        e.name = t.text;
        return e;
    }
    if (t.kind != Token::Kind::LParen) fail_at("expected a name or '('", t.at);

    Token op = tz.take();
    if (op.kind != Token::Kind::Atom || op.text.size() != 1 ||
        std::string("+*-!").find(op.text[0]) == std::string::npos)
        fail_at("unknown operator '" + op.text + "'", op.at);

    CsgExpr e;
    while (tz.peek().kind != Token::Kind::RParen) {
        if (tz.peek().kind == Token::Kind::End) fail_at("unbalanced parenthesis", t.at);
        e.args.push_back(parse_expr(tz));
    }
    tz.take();  // ')'

    char c = op.text[0];
    if (c == '!') {
        if (e.args.size() != 1) fail_at("complement takes exactly one argument", op.at);
        e.kind = CsgExpr::Kind::Complement;
    } else if (c == '-') {
        if (e.args.empty()) fail_at("difference needs arguments", op.at);
        e.kind = e.args.size() == 1 ? CsgExpr::Kind::Complement : CsgExpr::Kind::Diff;
    } else {
        if (e.args.size() < 2)
            fail_at(std::string(c == '+' ? "union" : "intersection") +
                        " needs at least two arguments",
                    op.at);
        e.kind = c == '+' ? CsgExpr::Kind::Union : CsgExpr::Kind::Intersect;
    }
    return e;
}

// plain decimal, or [sign][coef]pi[/den]
double parse_number(const Token& t) {
    const std::string& s = t.text;
    const char* b = s.c_str();
    char* end = nullptr;
    double plain = std::strtod(b, &end);
    if (end == b + s.size() && !s.empty()) return plain;

    std::size_t i = 0;
    double sign = 1;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) sign = s[i++] == '-' ? -1 : 1;
    double coef = 1;
    if (i < s.size() && (std::isdigit(unsigned(s[i])) || s[i] == '.')) {
        const char* cb = s.c_str() + i;
        char* cend = nullptr;
        coef = std::strtod(cb, &cend);
        if (cend == cb) fail_at("malformed number '" + s + "'", t.at);
        i += std::size_t(cend - cb);
    }
    if (s.compare(i, 2, "pi") != 0) fail_at("malformed number '" + s + "'", t.at);
    i += 2;
    double den = 1;
    if (i < s.size()) {
        if (s[i] != '/') fail_at("malformed number '" + s + "'", t.at);
        const char* db = s.c_str() + i + 1;
        char* dend = nullptr;
        den = std::strtod(db, &dend);
        if (dend != s.c_str() + s.size()) fail_at("malformed number '" + s + "'", t.at);
        if (den == 0) fail_at("division by zero in '" + s + "'", t.at);
    }
    return sign * coef * std::numbers::pi / den;
}

double take_number(Tokenizer& tz, const std::string& form) {
    Token t = tz.take();
    if (t.kind != Token::Kind::Atom) fail_at("'" + form + "' expects a number", t.at);
    return parse_number(t);
}

int take_count(Tokenizer& tz, const std::string& form, int lo) {
    Token t = tz.peek();
    double v = take_number(tz, form);
    if (v != std::floor(v) || v < lo)
        fail_at("'" + form + "' expects an integer >= " + std::to_string(lo), t.at);
    return int(v);
}

bool more_args(Tokenizer& tz) { return tz.peek().kind == Token::Kind::Atom; }

using Bindings = std::map<std::string, AssemblyNode>;

AssemblyNode parse_node(Tokenizer& tz, const Bindings& bound);

AssemblyNode parse_form(Tokenizer& tz, const Bindings& bound, std::size_t open_at) {
    Token head = tz.take();
    if (head.kind != Token::Kind::Atom) fail_at("expected a form name after '('", head.at);
    const std::string& f = head.text;

    AssemblyNode n;
    if (f == "cube" || f == "cuboid") {
        int m = 1, p = 1, q = 1;
        if (f == "cuboid") {
            if (more_args(tz)) m = take_count(tz, f, 1);
            if (more_args(tz)) p = take_count(tz, f, 1);
            if (more_args(tz)) q = take_count(tz, f, 1);
        }
        n.kind = AssemblyNode::Kind::Model;
        n.model = cuboid_grid(m, p, q);
    } else if (f == "cylinder") {
        int slices = take_count(tz, f, 3);
        double r = more_args(tz) ? take_number(tz, f) : 1.0;
        double h = more_args(tz) ? take_number(tz, f) : 2.0;
        int k = more_args(tz) ? take_count(tz, f, 1) : 1;
        if (r <= 0 || h <= 0) fail_at("'cylinder' expects positive radius and height", head.at);
        n.kind = AssemblyNode::Kind::Model;
        n.model = cylinder_surface(slices, r, h, k);
    } else if (f == "sphere") {
        int slices = more_args(tz) ? take_count(tz, f, 3) : 16;
        int stacks = more_args(tz) ? take_count(tz, f, 2) : 8;
        double r = more_args(tz) ? take_number(tz, f) : 1.0;
        if (r <= 0) fail_at("'sphere' expects a positive radius", head.at);
        n.kind = AssemblyNode::Kind::Model;
        n.model = sphere_surface(slices, stacks, r);
    } else if (f == "t" || f == "r" || f == "s") {
        double x = take_number(tz, f);
        double y = take_number(tz, f);
        double z = take_number(tz, f);
        n.kind = AssemblyNode::Kind::Affine;
        n.map = f == "t"   ? AffineMap::translation(x, y, z)
                : f == "r" ? AffineMap::rotation(x, y, z)
                           : AffineMap::scaling(x, y, z);
    } else if (f == "struct") {
        n.kind = AssemblyNode::Kind::Group;
        while (tz.peek().kind != Token::Kind::RParen) {
            if (tz.peek().kind == Token::Kind::End) fail_at("unbalanced parenthesis", open_at);
            n.children.push_back(parse_node(tz, bound));
        }
    } else {
        fail_at("unknown form '" + f + "'", head.at);
    }

    Token close = tz.take();
    if (close.kind != Token::Kind::RParen)
        fail_at("expected ')' to close '" + f + "'", close.at);
    return n;
}

AssemblyNode parse_node(Tokenizer& tz, const Bindings& bound) {
    Token t = tz.take();
    if (t.kind == Token::Kind::LParen) return parse_form(tz, bound, t.at);
    if (t.kind == Token::Kind::Atom && is_name(t.text)) {
        auto it = bound.find(t.text);
        if (it == bound.end()) fail_at("unknown name '" + t.text + "'", t.at);
        AssemblyNode copy = it->second;
        copy.name = t.text;
        return copy;
    }
    fail_at("expected a node or bound name", t.at);
}

struct Placer {
    PlacedModels out;
    int auto_id = 0;

    void visit(const AssemblyNode& n, const AffineMap& ctm, const std::string& scope) {
        const std::string& here = n.name.empty() ? scope : n.name;
        switch (n.kind) {
            case AssemblyNode::Kind::Affine:
                return;  // composes in the parent's loop
            case AssemblyNode::Kind::Model: {
                if (ctm.singular())
                    throw ValidationError("a singular affine map places model '" +
                                          (here.empty() ? "X" + std::to_string(auto_id + 1)
                                                        : here) +
                                          "'");
                out.models.push_back(transformed(n.model, ctm));
                out.names.push_back(here.empty() ? "X" + std::to_string(++auto_id) : here);
                return;
            }
            case AssemblyNode::Kind::Group: {
                AffineMap current = ctm;
                for (const AssemblyNode& c : n.children) {
                    if (c.kind == AssemblyNode::Kind::Affine)
                        current = current * c.map;
                    else
                        visit(c, current, here);
                }
                return;
            }
        }
    }
};

}  // namespace

CsgExpr parse_csg(const std::string& text) {
    Tokenizer tz(text);
    CsgExpr e = parse_expr(tz);
    if (tz.peek().kind != Token::Kind::End) fail_at("trailing input", tz.peek().at);
    return e;
}

std::string format_csg(const CsgExpr& e) {
    switch (e.kind) {
        case CsgExpr::Kind::Leaf:
            return e.name;
        case CsgExpr::Kind::Complement:
            return "(! " + format_csg(e.args[0]) + ")";
        default: {
            std::string out(1, e.kind == CsgExpr::Kind::Union      ? '+'
                               : e.kind == CsgExpr::Kind::Intersect ? '*'
                                                                    : '-');
            out.insert(out.begin(), '(');
            for (const CsgExpr& a : e.args) out += " " + format_csg(a);
            return out + ")";
        }
    }
}

Assembly parse_assembly(const std::string& text) {
    Tokenizer tz(text);
    Assembly a;
    Bindings bound;
    while (tz.peek().kind != Token::Kind::End) {
        const Token& t = tz.peek();
        if (t.kind == Token::Kind::Atom && t.text == "let") {
            Token kw = tz.take();
            Token name = tz.take();
            if (name.kind != Token::Kind::Atom || !is_name(name.text))
                fail_at("'let' expects a name", name.at);
            if (name.text == "let" || name.text == "eval")
                fail_at("'" + name.text + "' is reserved", name.at);
            Token eq = tz.take();
            if (eq.kind != Token::Kind::Equals) fail_at("'let' expects '='", eq.at);
            AssemblyNode n = parse_node(tz, bound);
            n.name = name.text;
            if (!bound.insert({name.text, n}).second)
                fail_at("name '" + name.text + "' is already bound", kw.at);
        } else if (t.kind == Token::Kind::Atom && t.text == "eval") {
            Token kw = tz.take();
            if (a.has_expr) fail_at("'eval' given twice", kw.at);
            a.expr = parse_expr(tz);
            a.has_expr = true;
        } else {
            a.root.children.push_back(parse_node(tz, bound));
        }
    }
    return a;
}

PlacedModels evaluate_assembly(const Assembly& a) {
    Placer p;
    AssemblyNode root = a.root;
    root.name.clear();
    p.visit(root, AffineMap::identity(), "");
    return p.out;
}

}  // namespace chaincsg
