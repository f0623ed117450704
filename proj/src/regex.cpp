#include "spanners/regex.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace spanners {

bool Formula::operator==(const Formula& o) const {
    return kind == o.kind && sym == o.sym && var == o.var && kids == o.kids;
}

Formula f_empty() { return Formula{Formula::Empty, 0, "", {}}; }
Formula f_eps() { return Formula{Formula::Eps, 0, "", {}}; }
Formula f_sym(char c) { return Formula{Formula::Sym, c, "", {}}; }
Formula f_wild() { return Formula{Formula::Wild, 0, "", {}}; }
Formula f_union(Formula l, Formula r) {
    return Formula{Formula::Union, 0, "", {std::move(l), std::move(r)}};
}
Formula f_concat(Formula l, Formula r) {
    return Formula{Formula::Concat, 0, "", {std::move(l), std::move(r)}};
}
Formula f_star(Formula e) { return Formula{Formula::Star, 0, "", {std::move(e)}}; }
Formula f_plus(Formula e) { return Formula{Formula::Plus, 0, "", {std::move(e)}}; }
Formula f_opt(Formula e) { return Formula{Formula::Opt, 0, "", {std::move(e)}}; }
Formula f_capture(const std::string& var, Formula e) {
    return Formula{Formula::Capture, 0, var, {std::move(e)}};
}

namespace {

struct Parser {
    const std::string& text;
    const std::string& sigma;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        std::ostringstream os;
        os << "formula error at offset " << pos << ": " << msg;
        throw domain_error(os.str());
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) pos++;
    }

    char peek() { return pos < text.size() ? text[pos] : 0; }

    bool starts_atom() {
        skip_ws();
        char c = peek();
        if (c == 0 || c == ')' || c == '}' || c == '+' || c == '|' || c == '*' || c == '?')
            return false;
        return true;
    }

    Formula parse_expr() {
        Formula f = parse_term();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c != '+' && c != '|') break;
            pos++;
            f = f_union(std::move(f), parse_term());
        }
        return f;
    }

    Formula parse_term() {
        skip_ws();
        if (!starts_atom()) fail("expected an expression");
        Formula f = parse_factor();
        while (starts_atom()) f = f_concat(std::move(f), parse_factor());
        return f;
    }

    Formula parse_factor() {
        Formula f = parse_atom();
        for (;;) {
            skip_ws();
            char c = peek();
            if (c == '*') {
                pos++;
                f = f_star(std::move(f));
            } else if (c == '?') {
                pos++;
                f = f_opt(std::move(f));
            } else if (c == '+' && pos + 1 < text.size() && text[pos + 1] == '+') {
                // one-or-more; a single + stays a union separator
                pos += 2;
                f = f_plus(std::move(f));
            } else {
                break;
            }
        }
        return f;
    }

    Formula symbol(char c) {
        if (sigma.find(c) == std::string::npos)
            fail(std::string("symbol not in alphabet: ") + c);
        pos++;
        return f_sym(c);
    }

    Formula parse_atom() {
        skip_ws();
        char c = peek();
        if (c == 0) fail("unexpected end of formula");
        if (c == '(') {
            pos++;
            Formula f = parse_expr();
            skip_ws();
            if (peek() != ')') fail("missing )");
            pos++;
            return f;
        }
        if (c == '<') {
            if (text.compare(pos, 3, "<e>") == 0) {
                pos += 3;
                return f_eps();
            }
            if (text.compare(pos, 3, "<0>") == 0) {
                pos += 3;
                return f_empty();
            }
            fail("expected <e> or <0>");
        }
        if (c == '.') {
            pos++;
            return f_wild();
        }
        if (c == '\\') {
            pos++;
            if (pos >= text.size()) fail("dangling escape");
            return symbol(text[pos]);
        }
        if (std::isalpha((unsigned char)c)) {
            // the longest identifier directly followed by { is a capture
            // variable; otherwise the single letter is a plain symbol
            size_t j = pos;
            while (j < text.size() &&
                   (std::isalnum((unsigned char)text[j]) || text[j] == '_'))
                j++;
            if (j < text.size() && text[j] == '{') {
                std::string var = text.substr(pos, j - pos);
                pos = j + 1;
                Formula body = parse_expr();
                skip_ws();
                if (peek() != '}') fail("missing } after capture body");
                pos++;
                return f_capture(var, std::move(body));
            }
            return symbol(c);
        }
        if (sigma.find(c) != std::string::npos) return symbol(c);
        fail(std::string("unexpected character: ") + c);
    }
};

// precedence: union 1, concat 2, postfix 3, atom 4
int prec(const Formula& f) {
    switch (f.kind) {
        case Formula::Union: return 1;
        case Formula::Concat: return 2;
        case Formula::Star:
        case Formula::Plus:
        case Formula::Opt: return 3;
        default: return 4;
    }
}

void print_rec(const Formula& f, int min_prec, std::string& out) {
    bool parens = prec(f) < min_prec;
    if (parens) out.push_back('(');
    switch (f.kind) {
        case Formula::Empty: out += "<0>"; break;
        case Formula::Eps: out += "<e>"; break;
        case Formula::Sym: out.push_back(f.sym); break;
        case Formula::Wild: out.push_back('.'); break;
        case Formula::Union:
            print_rec(f.kids[0], 1, out);
            out += " + ";
            print_rec(f.kids[1], 2, out);
            break;
        case Formula::Concat:
            print_rec(f.kids[0], 2, out);
            out.push_back(' ');
            print_rec(f.kids[1], 3, out);
            break;
        case Formula::Star:
            print_rec(f.kids[0], 3, out);
            out.push_back('*');
            break;
        case Formula::Plus:
            print_rec(f.kids[0], 3, out);
            out += "++";
            break;
        case Formula::Opt:
            print_rec(f.kids[0], 3, out);
            out.push_back('?');
            break;
        case Formula::Capture:
            out += f.var;
            out.push_back('{');
            print_rec(f.kids[0], 1, out);
            out.push_back('}');
            break;
    }
    if (parens) out.push_back(')');
}

void collect_vars(const Formula& f, std::set<std::string>& out) {
    if (f.kind == Formula::Capture) out.insert(f.var);
    for (const auto& k : f.kids) collect_vars(k, out);
}

}  // namespace

Formula parse_formula(const std::string& text, const std::string& sigma) {
    std::string sig = sigma;
    std::sort(sig.begin(), sig.end());
    Parser p{text, sig};
    p.skip_ws();
    if (p.pos >= text.size()) p.fail("empty formula");
    Formula f = p.parse_expr();
    p.skip_ws();
    if (p.pos < text.size()) p.fail("trailing input");
    return f;
}

std::string print_formula(const Formula& f) {
    std::string out;
    print_rec(f, 1, out);
    return out;
}

std::vector<std::string> formula_vars(const Formula& f) {
    std::set<std::string> s;
    collect_vars(f, s);
    return std::vector<std::string>(s.begin(), s.end());
}

namespace {

struct Builder {
    Vsa a;
    int fresh() { return a.n_states++; }
    void edge(int from, const Label& l, int to) { a.transitions.push_back({from, l, to}); }

    // single entry, single exit fragment per node
    std::pair<int, int> build(const Formula& f) {
        int s = fresh(), t = fresh();
        switch (f.kind) {
            case Formula::Empty:
                break;
            case Formula::Eps:
                edge(s, eps_label(), t);
                break;
            case Formula::Sym:
                edge(s, sym_label(f.sym), t);
                break;
            case Formula::Wild:
                for (char c : a.sigma) edge(s, sym_label(c), t);
                break;
            case Formula::Union: {
                auto l = build(f.kids[0]);
                auto r = build(f.kids[1]);
                edge(s, eps_label(), l.first);
                edge(s, eps_label(), r.first);
                edge(l.second, eps_label(), t);
                edge(r.second, eps_label(), t);
                break;
            }
            case Formula::Concat: {
                auto l = build(f.kids[0]);
                auto r = build(f.kids[1]);
                edge(s, eps_label(), l.first);
                edge(l.second, eps_label(), r.first);
                edge(r.second, eps_label(), t);
                break;
            }
            case Formula::Star: {
                auto k = build(f.kids[0]);
                edge(s, eps_label(), k.first);
                edge(k.second, eps_label(), t);
                edge(s, eps_label(), t);
                edge(k.second, eps_label(), k.first);
                break;
            }
            case Formula::Plus: {
                auto k = build(f.kids[0]);
                edge(s, eps_label(), k.first);
                edge(k.second, eps_label(), t);
                edge(k.second, eps_label(), k.first);
                break;
            }
            case Formula::Opt: {
                auto k = build(f.kids[0]);
                edge(s, eps_label(), k.first);
                edge(k.second, eps_label(), t);
                edge(s, eps_label(), t);
                break;
            }
            case Formula::Capture: {
                auto k = build(f.kids[0]);
                edge(s, open_label(f.var), k.first);
                edge(k.second, close_label(f.var), t);
                break;
            }
        }
        return {s, t};
    }
};

}  // namespace

Vsa compile_to_vsa(const Formula& f, const std::string& sigma) {
    Builder b;
    b.a.sigma = sigma;
    std::sort(b.a.sigma.begin(), b.a.sigma.end());
    b.a.vars = formula_vars(f);
    auto [s, t] = b.build(f);
    b.a.initial = s;
    b.a.finals = {t};
    validate(b.a);
    return b.a;
}

bool check_functional_formula(const Formula& f, const std::string& sigma) {
    return functionality_check(compile_to_vsa(f, sigma));
}

FormulaFile load_formula_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw domain_error(path + ": empty file");
    const std::string tag = "alphabet:";
    if (line.compare(0, tag.size(), tag) != 0)
        throw domain_error(path + ": first line must be 'alphabet: <symbols>'");
    FormulaFile f;
    for (size_t i = tag.size(); i < line.size(); i++)
        if (!std::isspace((unsigned char)line[i])) f.sigma.push_back(line[i]);
    std::sort(f.sigma.begin(), f.sigma.end());
    std::string body, rest;
    while (std::getline(in, rest)) body += rest + " ";
    f.formula = parse_formula(body, f.sigma);
    return f;
}

Vsa vsa_of(const std::string& text, const std::string& sigma) {
    return compile_to_vsa(parse_formula(text, sigma), sigma);
}

}  // namespace spanners
