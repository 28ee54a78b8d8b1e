#include "painleve/expression.hpp"

#include <cctype>
#include <cmath>
#include <optional>
#include <sstream>

namespace painleve {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Number, Imag, VarW, VarZ, Rad, Plus, Minus, Star, Slash, Caret,
                 LParen, RParen, Comma, End };

struct Token {
    Tok kind;
    double number = 0.0;
    std::size_t pos = 0;
    std::string text;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }
    const Token& peek() const { return current_; }
    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_;

    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        current_ = Token{};
        current_.pos = pos_;
        if (pos_ >= text_.size()) {
            current_.kind = Tok::End;
            current_.text = "end of input";
            return;
        }
        const char c = text_[pos_];
        switch (c) {
        case '+': current_.kind = Tok::Plus; break;
        case '-': current_.kind = Tok::Minus; break;
        case '*': current_.kind = Tok::Star; break;
        case '/': current_.kind = Tok::Slash; break;
        case '^': current_.kind = Tok::Caret; break;
        case '(': current_.kind = Tok::LParen; break;
        case ')': current_.kind = Tok::RParen; break;
        case ',': current_.kind = Tok::Comma; break;
        default:
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                lex_number();
                return;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                lex_ident();
                return;
            }
            throw ParseError("syntax error at " + std::to_string(pos_) + ": unexpected character '" +
                                 std::string(1, c) + "'",
                             pos_);
        }
        current_.text = std::string(1, c);
        ++pos_;
    }

    void lex_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark; // not an exponent after all
            }
        }
        const std::string digits(text_.substr(start, pos_ - start));
        if (digits == ".")
            throw ParseError("syntax error at " + std::to_string(start) + ": malformed number", start);
        current_.kind = Tok::Number;
        current_.number = std::stod(digits);
        current_.text = digits;
        // An immediately following 'i' (not part of an identifier) marks an
        // imaginary literal like 2i or 0.5i.
        if (pos_ < text_.size() && text_[pos_] == 'i' &&
            (pos_ + 1 >= text_.size() ||
             (!std::isalnum(static_cast<unsigned char>(text_[pos_ + 1])) && text_[pos_ + 1] != '_'))) {
            ++pos_;
            current_.kind = Tok::Imag;
            current_.text += "i";
        }
    }

    void lex_ident() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        current_.text = name;
        if (name == "w")
            current_.kind = Tok::VarW;
        else if (name == "z")
            current_.kind = Tok::VarZ;
        else if (name == "i") {
            current_.kind = Tok::Imag;
            current_.number = 1.0;
        } else if (name == "rad")
            current_.kind = Tok::Rad;
        else
            throw ParseError("syntax error at " + std::to_string(start) + ": unknown identifier '" +
                                 name + "' (expected w, z, i or rad)",
                             start, "w, z, i or rad");
    }
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) {}

    int parse_root() {
        const int e = parse_expr();
        if (lex_.peek().kind != Tok::End)
            fail("expected end of input or an operator", lex_.peek());
        return e;
    }

    std::vector<Node> nodes;
    std::vector<std::size_t> positions;

private:
    Lexer lex_;

    [[noreturn]] void fail(const std::string& expected, const Token& found) {
        throw ParseError("syntax error at " + std::to_string(found.pos) + ": expected " + expected +
                             ", found '" + found.text + "'",
                         found.pos, expected);
    }

    int add(Node n, std::size_t pos) {
        nodes.push_back(n);
        positions.push_back(pos);
        return static_cast<int>(nodes.size()) - 1;
    }

    int make_const(cplx v, std::size_t pos) {
        Node n;
        n.kind = NodeKind::Constant;
        n.value = v;
        return add(n, pos);
    }

    int make_binary(NodeKind kind, int l, int r, std::size_t pos) {
        Node n;
        n.kind = kind;
        n.left = l;
        n.right = r;
        return add(n, pos);
    }

    int parse_expr() {
        int left = parse_term();
        while (lex_.peek().kind == Tok::Plus || lex_.peek().kind == Tok::Minus) {
            const Token op = lex_.take();
            const int right = parse_term();
            left = make_binary(op.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub, left, right,
                               op.pos);
        }
        return left;
    }

    int parse_term() {
        int left = parse_unary();
        while (lex_.peek().kind == Tok::Star || lex_.peek().kind == Tok::Slash) {
            const Token op = lex_.take();
            const int right = parse_unary();
            left = make_binary(op.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div, left, right,
                               op.pos);
        }
        return left;
    }

    int parse_unary() {
        if (lex_.peek().kind == Tok::Minus) {
            const Token op = lex_.take();
            const int inner = parse_unary();
            return make_binary(NodeKind::Mul, make_const(cplx{-1.0, 0.0}, op.pos), inner, op.pos);
        }
        if (lex_.peek().kind == Tok::Plus) {
            lex_.take();
            return parse_unary();
        }
        return parse_power();
    }

    int parse_power() {
        int base = parse_atom();
        if (lex_.peek().kind != Tok::Caret) return base;
        const Token caret = lex_.take();
        const long exponent = parse_integer("an integer exponent");
        if (exponent == 0) return make_const(cplx{1.0, 0.0}, caret.pos);
        int node;
        if (std::labs(exponent) == 1) {
            node = base;
        } else {
            Node n;
            n.kind = NodeKind::Pow;
            n.left = base;
            n.exponent = static_cast<int>(std::labs(exponent));
            node = add(n, caret.pos);
        }
        if (exponent < 0)
            node = make_binary(NodeKind::Div, make_const(cplx{1.0, 0.0}, caret.pos), node, caret.pos);
        return node;
    }

    long parse_integer(const std::string& what) {
        bool parens = false;
        if (lex_.peek().kind == Tok::LParen) {
            lex_.take();
            parens = true;
        }
        double sign = 1.0;
        if (lex_.peek().kind == Tok::Minus) {
            lex_.take();
            sign = -1.0;
        } else if (lex_.peek().kind == Tok::Plus) {
            lex_.take();
        }
        const Token t = lex_.peek();
        if (t.kind != Tok::Number) fail(what, t);
        lex_.take();
        const double v = t.number;
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw ParseError("syntax error at " + std::to_string(t.pos) + ": " + what +
                                 " must be an integer",
                             t.pos, what);
        if (parens) {
            if (lex_.peek().kind != Tok::RParen) fail("')'", lex_.peek());
            lex_.take();
        }
        return static_cast<long>(sign * v);
    }

    int parse_atom() {
        const Token t = lex_.peek();
        switch (t.kind) {
        case Tok::Number:
            lex_.take();
            return make_const(cplx{t.number, 0.0}, t.pos);
        case Tok::Imag:
            lex_.take();
            return make_const(cplx{0.0, t.text == "i" ? 1.0 : t.number}, t.pos);
        case Tok::VarW: {
            lex_.take();
            Node n;
            n.kind = NodeKind::VarW;
            return add(n, t.pos);
        }
        case Tok::VarZ: {
            lex_.take();
            Node n;
            n.kind = NodeKind::VarZ;
            return add(n, t.pos);
        }
        case Tok::LParen: {
            lex_.take();
            const int e = parse_expr();
            if (lex_.peek().kind != Tok::RParen) fail("')'", lex_.peek());
            lex_.take();
            return e;
        }
        case Tok::Rad: {
            lex_.take();
            if (lex_.peek().kind != Tok::LParen) fail("'(' after rad", lex_.peek());
            lex_.take();
            const std::size_t kpos = lex_.peek().pos;
            const long k = parse_integer("the rad index");
            if (k < 2) throw ParseError("rad index must be >= 2", kpos, "integer >= 2");
            if (lex_.peek().kind != Tok::Comma) fail("','", lex_.peek());
            lex_.take();
            const int sub = parse_expr();
            if (lex_.peek().kind != Tok::RParen) fail("')'", lex_.peek());
            lex_.take();
            Node n;
            n.kind = NodeKind::Rad;
            n.left = sub;
            n.exponent = static_cast<int>(k);
            return add(n, t.pos);
        }
        default:
            fail("a number, variable, rad(...) or '('", t);
        }
    }
};

// ---------------------------------------------------------------------------
// Structural analysis

std::optional<BivariatePoly> reduce_to_poly(const std::vector<Node>& nodes, int idx) {
    const Node& n = nodes[static_cast<std::size_t>(idx)];
    switch (n.kind) {
    case NodeKind::Constant: return BivariatePoly::constant(n.value);
    case NodeKind::VarW: return BivariatePoly::var_u();
    case NodeKind::VarZ: return BivariatePoly::var_v();
    case NodeKind::Add: {
        auto l = reduce_to_poly(nodes, n.left), r = reduce_to_poly(nodes, n.right);
        if (!l || !r) return std::nullopt;
        return *l + *r;
    }
    case NodeKind::Sub: {
        auto l = reduce_to_poly(nodes, n.left), r = reduce_to_poly(nodes, n.right);
        if (!l || !r) return std::nullopt;
        return *l - *r;
    }
    case NodeKind::Mul: {
        auto l = reduce_to_poly(nodes, n.left), r = reduce_to_poly(nodes, n.right);
        if (!l || !r) return std::nullopt;
        return *l * *r;
    }
    case NodeKind::Div: {
        auto l = reduce_to_poly(nodes, n.left), r = reduce_to_poly(nodes, n.right);
        if (!l || !r || !r->is_constant() || r->is_zero()) return std::nullopt;
        return l->scaled(1.0 / r->coeff(0, 0));
    }
    case NodeKind::Pow: {
        auto b = reduce_to_poly(nodes, n.left);
        if (!b) return std::nullopt;
        return b->pow(n.exponent);
    }
    case NodeKind::Rad: return std::nullopt;
    }
    return std::nullopt;
}

/// Innermost syntactic power base: the zero-set generator of a radicand
/// written as (base)^m.
int power_base(const std::vector<Node>& nodes, int idx) {
    while (nodes[static_cast<std::size_t>(idx)].kind == NodeKind::Pow)
        idx = nodes[static_cast<std::size_t>(idx)].left;
    return idx;
}

void collect_denominator_factors(const std::vector<Node>& nodes,
                                 const std::vector<std::size_t>& positions, int idx,
                                 std::vector<BivariatePoly>& out) {
    const Node& n = nodes[static_cast<std::size_t>(idx)];
    switch (n.kind) {
    case NodeKind::Mul:
        collect_denominator_factors(nodes, positions, n.left, out);
        collect_denominator_factors(nodes, positions, n.right, out);
        return;
    case NodeKind::Pow:
        collect_denominator_factors(nodes, positions, n.left, out);
        return;
    case NodeKind::Rad:
        // Pole locus is the radicand's zero set, registered with the radical.
        return;
    case NodeKind::Div:
        // Inner divisions register their own denominators; only the
        // numerator's zeros are poles of the enclosing quotient.
        collect_denominator_factors(nodes, positions, n.left, out);
        return;
    default: {
        auto p = reduce_to_poly(nodes, idx);
        if (!p)
            throw ParseError("non-polynomial denominator (denominators must be products of "
                             "polynomials and radicals)",
                             positions[static_cast<std::size_t>(idx)]);
        if (p->is_zero())
            throw ParseError("denominator is identically zero",
                             positions[static_cast<std::size_t>(idx)]);
        out.push_back(*p);
        return;
    }
    }
}

void push_component(std::vector<BivariatePoly>& list, const BivariatePoly& p) {
    if (p.is_zero() || p.is_constant()) return;
    const BivariatePoly n = p.normalized();
    for (const auto& q : list)
        if (q.proportional_to(n)) return;
    list.push_back(n);
}

} // namespace

ExpressionAST parse_expression(std::string_view text) {
    Parser parser(text);
    const int root = parser.parse_root();

    ExpressionAST ast;
    ast.nodes_ = std::move(parser.nodes);
    ast.root_ = root;
    ast.source_ = std::string(text);

    for (int i = 0; i < static_cast<int>(ast.nodes_.size()); ++i) {
        Node& n = ast.nodes_[static_cast<std::size_t>(i)];
        if (n.kind == NodeKind::Rad) {
            auto q = reduce_to_poly(ast.nodes_, n.left);
            if (!q)
                throw ParseError("non-polynomial radicand in rad(...)",
                                 parser.positions[static_cast<std::size_t>(i)]);
            if (q->is_zero())
                throw ParseError("radicand is identically zero",
                                 parser.positions[static_cast<std::size_t>(i)]);
            auto base = reduce_to_poly(ast.nodes_, power_base(ast.nodes_, n.left));
            Radical rad;
            rad.node = i;
            rad.k = n.exponent;
            rad.radicand = *q;
            rad.component = *base;
            n.rad_index = static_cast<int>(ast.radicals_.size());
            ast.radicals_.push_back(std::move(rad));
        }
    }
    std::vector<BivariatePoly> denominator_factors;
    for (int i = 0; i < static_cast<int>(ast.nodes_.size()); ++i) {
        const Node& n = ast.nodes_[static_cast<std::size_t>(i)];
        if (n.kind == NodeKind::Div)
            collect_denominator_factors(ast.nodes_, parser.positions, n.right,
                                        denominator_factors);
    }
    for (const auto& rad : ast.radicals_) push_component(ast.singular_, rad.component);
    for (const auto& f : denominator_factors) push_component(ast.singular_, f);
    return ast;
}

// ---------------------------------------------------------------------------
// Branch state

namespace {

cplx principal_kth_root(cplx q, int k) { return std::pow(q, 1.0 / static_cast<double>(k)); }

} // namespace

BranchState init_branches(const ExpressionAST& ast, cplx w, cplx z, const EvalOptions& opts) {
    BranchState state;
    state.sheets.reserve(ast.radicals().size());
    for (const auto& rad : ast.radicals()) {
        const cplx q = rad.radicand.eval(w, z);
        if (std::abs(q) < opts.continuity_floor)
            throw BranchPointError("init_branches: radicand " + rad.radicand.to_string() +
                                   " vanishes at the base point (branch point)");
        state.sheets.push_back(principal_kth_root(q, rad.k));
    }
    return state;
}

BranchState init_branches_explicit(const ExpressionAST& ast, cplx w, cplx z,
                                   std::span<const cplx> sheets, const EvalOptions& opts) {
    if (sheets.size() != ast.radicals().size())
        throw SheetError("init_branches_explicit: expected " +
                         std::to_string(ast.radicals().size()) + " sheet values, got " +
                         std::to_string(sheets.size()));
    BranchState state;
    state.sheets.assign(sheets.begin(), sheets.end());
    for (std::size_t i = 0; i < sheets.size(); ++i) {
        const auto& rad = ast.radicals()[i];
        const cplx q = rad.radicand.eval(w, z);
        cplx p = 1.0;
        for (int j = 0; j < rad.k; ++j) p *= sheets[i];
        if (std::abs(p - q) > opts.seed_rel_tol * (1.0 + std::abs(q)))
            throw SheetError("init_branches_explicit: sheet value " + std::to_string(i) +
                             " is not a " + std::to_string(rad.k) + "-th root of the radicand");
    }
    return state;
}

void update_branches(const ExpressionAST& ast, BranchState& state, cplx prev_w, cplx prev_z,
                     cplx w, cplx z, const EvalOptions& opts) {
    if (state.sheets.size() != ast.radicals().size())
        throw SheetError("update_branches: branch state size mismatch");
    for (std::size_t i = 0; i < ast.radicals().size(); ++i) {
        const auto& rad = ast.radicals()[i];
        const cplx q_old = rad.radicand.eval(prev_w, prev_z);
        const cplx q_new = rad.radicand.eval(w, z);
        if (std::abs(q_old) < opts.continuity_floor || std::abs(q_new) < opts.continuity_floor)
            throw SheetError("update_branches: radicand " + rad.radicand.to_string() +
                             " below the continuity floor (ambiguous sheet)");
        // The k-th root of q_new nearest in ratio-argument to the old sheet.
        state.sheets[i] *= principal_kth_root(q_new / q_old, rad.k);
    }
}

void update_branches_path(const ExpressionAST& ast, BranchState& state,
                          const std::function<std::pair<cplx, cplx>(double)>& path,
                          const EvalOptions& opts) {
    struct Seg {
        double t0, t1;
        std::pair<cplx, cplx> p0, p1;
        int depth;
    };
    if (ast.radicals().empty()) return;
    std::vector<Seg> stack;
    stack.push_back({0.0, 1.0, path(0.0), path(1.0), 0});
    while (!stack.empty()) {
        const Seg seg = stack.back();
        stack.pop_back();
        // Probe the midpoint: endpoint ratios alone cannot see a radicand
        // winding all the way around zero within one segment.
        const double tm = 0.5 * (seg.t0 + seg.t1);
        const auto pm = path(tm);
        bool fine = true;
        for (const auto& rad : ast.radicals()) {
            const cplx q0 = rad.radicand.eval(seg.p0.first, seg.p0.second);
            const cplx qm = rad.radicand.eval(pm.first, pm.second);
            const cplx q1 = rad.radicand.eval(seg.p1.first, seg.p1.second);
            if (std::abs(q0) < opts.continuity_floor || std::abs(qm) < opts.continuity_floor ||
                std::abs(q1) < opts.continuity_floor)
                throw SheetError("update_branches_path: radicand " + rad.radicand.to_string() +
                                 " below the continuity floor along the path");
            if (std::abs(qm / q0 - 1.0) > 0.5 || std::abs(q1 / qm - 1.0) > 0.5) {
                fine = false;
                break;
            }
        }
        if (fine) {
            update_branches(ast, state, seg.p0.first, seg.p0.second, pm.first, pm.second, opts);
            update_branches(ast, state, pm.first, pm.second, seg.p1.first, seg.p1.second, opts);
            continue;
        }
        if (seg.depth >= 48)
            throw SheetError("update_branches_path: segment refinement exhausted (path too close "
                             "to a branch point)");
        // LIFO: push the far half first so the near half is processed first.
        stack.push_back({tm, seg.t1, pm, seg.p1, seg.depth + 1});
        stack.push_back({seg.t0, tm, seg.p0, pm, seg.depth + 1});
    }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

cplx eval_node(const ExpressionAST& ast, int idx, cplx w, cplx z, const BranchState& state,
               const EvalOptions& opts) {
    const Node& n = ast.nodes()[static_cast<std::size_t>(idx)];
    switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::VarW: return w;
    case NodeKind::VarZ: return z;
    case NodeKind::Add:
        return eval_node(ast, n.left, w, z, state, opts) + eval_node(ast, n.right, w, z, state, opts);
    case NodeKind::Sub:
        return eval_node(ast, n.left, w, z, state, opts) - eval_node(ast, n.right, w, z, state, opts);
    case NodeKind::Mul:
        return eval_node(ast, n.left, w, z, state, opts) * eval_node(ast, n.right, w, z, state, opts);
    case NodeKind::Div: {
        const cplx num = eval_node(ast, n.left, w, z, state, opts);
        const cplx den = eval_node(ast, n.right, w, z, state, opts);
        if (std::abs(den) < opts.pole_tol) {
            std::ostringstream os;
            os << "pole of F: denominator below tolerance at (w=" << w.real() << "+" << w.imag()
               << "i, z=" << z.real() << "+" << z.imag() << "i)";
            throw PoleError(os.str());
        }
        return num / den;
    }
    case NodeKind::Pow: {
        cplx base = eval_node(ast, n.left, w, z, state, opts);
        cplx acc{1.0, 0.0};
        int e = n.exponent;
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }
    case NodeKind::Rad: return state.sheets[static_cast<std::size_t>(n.rad_index)];
    }
    throw Error("eval_node: corrupt AST");
}

TaylorSeries eval_series_node(const ExpressionAST& ast, int idx, const TaylorSeries& w_series,
                              cplx z0, const BranchState& state, int order,
                              const EvalOptions& opts) {
    const Node& n = ast.nodes()[static_cast<std::size_t>(idx)];
    switch (n.kind) {
    case NodeKind::Constant: return TaylorSeries::constant(z0, n.value, order);
    case NodeKind::VarW: return w_series.truncated(order);
    case NodeKind::VarZ: {
        std::vector<cplx> c(static_cast<std::size_t>(order) + 1, cplx{});
        c[0] = z0;
        if (order >= 1) c[1] = 1.0;
        return TaylorSeries(z0, std::move(c));
    }
    case NodeKind::Add:
        return series_add(eval_series_node(ast, n.left, w_series, z0, state, order, opts),
                          eval_series_node(ast, n.right, w_series, z0, state, order, opts));
    case NodeKind::Sub:
        return series_sub(eval_series_node(ast, n.left, w_series, z0, state, order, opts),
                          eval_series_node(ast, n.right, w_series, z0, state, order, opts));
    case NodeKind::Mul:
        return series_mul(eval_series_node(ast, n.left, w_series, z0, state, order, opts),
                          eval_series_node(ast, n.right, w_series, z0, state, order, opts));
    case NodeKind::Div: {
        const TaylorSeries num = eval_series_node(ast, n.left, w_series, z0, state, order, opts);
        const TaylorSeries den = eval_series_node(ast, n.right, w_series, z0, state, order, opts);
        if (std::abs(den.coeffs()[0]) < opts.pole_tol)
            throw PoleError("eval_series: pole at the expansion center (vanishing denominator "
                            "constant term)");
        return series_mul(num, series_invert(den, order, opts.pole_tol));
    }
    case NodeKind::Pow:
        return series_pow(eval_series_node(ast, n.left, w_series, z0, state, order, opts),
                          n.exponent);
    case NodeKind::Rad: {
        const auto& rad = ast.radicals()[static_cast<std::size_t>(n.rad_index)];
        const TaylorSeries q = rad.radicand.eval_series(w_series, z0, order);
        if (std::abs(q.coeffs()[0]) < opts.continuity_floor)
            throw BranchPointError("eval_series: radicand vanishes at the expansion center");
        return series_kth_root(q, rad.k, state.sheets[static_cast<std::size_t>(n.rad_index)],
                               opts.seed_rel_tol);
    }
    }
    throw Error("eval_series_node: corrupt AST");
}

} // namespace

cplx eval_at(const ExpressionAST& ast, cplx w, cplx z, const BranchState& state,
             const EvalOptions& opts) {
    if (state.sheets.size() != ast.radicals().size())
        throw SheetError("eval_at: branch state size mismatch");
    return eval_node(ast, ast.root(), w, z, state, opts);
}

std::pair<cplx, BranchState> eval_with_branches(const ExpressionAST& ast, cplx w, cplx z,
                                                const BranchState& state, cplx prev_w, cplx prev_z,
                                                const EvalOptions& opts) {
    BranchState updated = state;
    update_branches(ast, updated, prev_w, prev_z, w, z, opts);
    const cplx value = eval_at(ast, w, z, updated, opts);
    return {value, std::move(updated)};
}

TaylorSeries eval_series(const ExpressionAST& ast, const TaylorSeries& w_series, cplx z0,
                         const BranchState& state, int order, const EvalOptions& opts) {
    if (w_series.center() != z0)
        throw Error("eval_series: w_series must be centered at z0");
    if (state.sheets.size() != ast.radicals().size())
        throw SheetError("eval_series: branch state size mismatch");
    TaylorSeries out = eval_series_node(ast, ast.root(), w_series, z0, state, order, opts);
    out.set_validity_radius(w_series.validity_radius());
    return out;
}

bool branch_state_consistent(const ExpressionAST& ast, const BranchState& state, cplx w, cplx z,
                             double rel_tol) {
    if (state.sheets.size() != ast.radicals().size()) return false;
    for (std::size_t i = 0; i < state.sheets.size(); ++i) {
        const auto& rad = ast.radicals()[i];
        const cplx q = rad.radicand.eval(w, z);
        cplx p{1.0, 0.0};
        for (int j = 0; j < rad.k; ++j) p *= state.sheets[i];
        if (std::abs(p - q) > rel_tol * (1.0 + std::abs(q))) return false;
    }
    return true;
}

} // namespace painleve
