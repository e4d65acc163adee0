#include "levytc/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace ltc {

struct Expr::Node {
    enum class Kind { constant, variable, add, sub, mul, div, neg, min, max, abs, pow, sqrt };
    Kind kind;
    double value = 0.0;   // constant
    std::size_t index = 0;  // variable
    std::shared_ptr<const Node> lhs, rhs;

    double eval(const std::vector<double>& vars) const {
        switch (kind) {
            case Kind::constant: return value;
            case Kind::variable: return vars[index];
            case Kind::add: return lhs->eval(vars) + rhs->eval(vars);
            case Kind::sub: return lhs->eval(vars) - rhs->eval(vars);
            case Kind::mul: return lhs->eval(vars) * rhs->eval(vars);
            case Kind::div: return lhs->eval(vars) / rhs->eval(vars);
            case Kind::neg: return -lhs->eval(vars);
            case Kind::min: return std::min(lhs->eval(vars), rhs->eval(vars));
            case Kind::max: return std::max(lhs->eval(vars), rhs->eval(vars));
            case Kind::abs: return std::abs(lhs->eval(vars));
            case Kind::pow: return std::pow(lhs->eval(vars), rhs->eval(vars));
            case Kind::sqrt: return std::sqrt(lhs->eval(vars));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

class Parser {
public:
    Parser(const std::string& text, const std::vector<std::string>& vars)
        : text_(text), vars_(vars) {}

    NodePtr run() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    const std::string& text_;
    const std::vector<std::string>& vars_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression error at position " + std::to_string(pos_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr make(Expr::Node::Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
        auto n = std::make_shared<Expr::Node>();
        n->kind = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr expression() {
        NodePtr e = term();
        while (true) {
            if (consume('+')) e = make(Expr::Node::Kind::add, e, term());
            else if (consume('-')) e = make(Expr::Node::Kind::sub, e, term());
            else return e;
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        while (true) {
            if (consume('*')) e = make(Expr::Node::Kind::mul, e, factor());
            else if (consume('/')) e = make(Expr::Node::Kind::div, e, factor());
            else return e;
        }
    }

    NodePtr factor() {
        skip_ws();
        if (consume('-')) return make(Expr::Node::Kind::neg, factor());
        if (consume('(')) {
            NodePtr e = expression();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (pos_ >= text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        std::size_t end = pos_;
        while (end < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                text_[end] == 'e' || text_[end] == 'E' ||
                ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
                 (text_[end - 1] == 'e' || text_[end - 1] == 'E'))))
            ++end;
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(text_.substr(pos_, end - pos_), &used);
        } catch (...) {
            fail("malformed number");
        }
        pos_ += used;
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Node::Kind::constant;
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        std::size_t end = pos_;
        while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) ||
                                      text_[end] == '_'))
            ++end;
        std::string name = text_.substr(pos_, end - pos_);
        pos_ = end;

        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == name) {
                auto n = std::make_shared<Expr::Node>();
                n->kind = Expr::Node::Kind::variable;
                n->index = i;
                return n;
            }

        auto unary = [&](Expr::Node::Kind k) {
            if (!consume('(')) fail("expected '(' after " + name);
            NodePtr a = expression();
            if (!consume(')')) fail("expected ')' closing " + name);
            return make(k, a);
        };
        auto binary = [&](Expr::Node::Kind k) {
            if (!consume('(')) fail("expected '(' after " + name);
            NodePtr a = expression();
            if (!consume(',')) fail(name + " takes two arguments");
            NodePtr b = expression();
            if (!consume(')')) fail("expected ')' closing " + name);
            return make(k, a, b);
        };
        if (name == "abs") return unary(Expr::Node::Kind::abs);
        if (name == "sqrt") return unary(Expr::Node::Kind::sqrt);
        if (name == "min") return binary(Expr::Node::Kind::min);
        if (name == "max") return binary(Expr::Node::Kind::max);
        if (name == "pow") return binary(Expr::Node::Kind::pow);
        fail("unknown identifier '" + name + "'");
    }
};

}  // namespace

Expr Expr::parse(const std::string& text, const std::vector<std::string>& variables) {
    Expr e;
    e.text_ = text;
    e.root_ = Parser(text, variables).run();
    return e;
}

double Expr::eval(const std::vector<double>& variable_values) const {
    return root_->eval(variable_values);
}

GFunction parse_g(const std::string& text, int dim, const GParseOptions& options) {
    std::vector<std::string> vars;
    if (dim == 1) {
        vars = {"x"};
    } else {
        for (int i = 1; i <= dim; ++i) vars.push_back("x" + std::to_string(i));
    }
    Expr expr = Expr::parse(text, vars);

    GFunction g;
    g.growth_exponent = options.growth_exponent;
    g.f = [expr, dim](const Vec& x) {
        std::vector<double> vals(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) vals[static_cast<std::size_t>(i)] = x[i];
        return expr.eval(vals);
    };

    // probe grid: validate nonnegativity, estimate the bound, seed zeros
    if (dim != 1)
        throw ValidationError("parse_g: probe validation implemented for d=1");
    const int n = options.probe_points;
    std::vector<double> xs(n), vs(n);
    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
        xs[i] = options.probe_lo + (options.probe_hi - options.probe_lo) * i / (n - 1);
        vs[i] = g.f(Vec(xs[i]));
        if (!std::isfinite(vs[i]))
            throw ValidationError("parse_g: expression not finite at x=" + std::to_string(xs[i]));
        if (vs[i] < -1e-12)
            throw ValidationError("parse_g: expression negative at x=" + std::to_string(xs[i]));
        bound = std::max(bound, vs[i]);
    }
    g.bound = bound;

    // zeros: local minima below tolerance, refined by ternary search
    const double tol = std::max(1e-9, 1e-9 * bound);
    for (int i = 0; i < n; ++i) {
        bool local_min = (i == 0 || vs[i] <= vs[i - 1]) && (i == n - 1 || vs[i] <= vs[i + 1]);
        if (!local_min || vs[i] > 1e-6 * std::max(bound, 1.0)) continue;
        double lo = xs[std::max(i - 1, 0)], hi = xs[std::min(i + 1, n - 1)];
        for (int it = 0; it < 80; ++it) {
            double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            if (g.f(Vec(m1)) < g.f(Vec(m2))) hi = m2;
            else lo = m1;
        }
        double zx = 0.5 * (lo + hi);
        if (g.f(Vec(zx)) > tol) continue;
        if (std::abs(zx) < 1e-9) zx = 0.0;
        bool dup = false;
        for (const Vec& z : g.declared_zeros)
            if (std::abs(z[0] - zx) < 1e-6) dup = true;
        if (!dup) g.declared_zeros.emplace_back(zx);
    }
    return g;
}

}  // namespace ltc
