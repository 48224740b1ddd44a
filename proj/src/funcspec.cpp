#include "thompson/funcspec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace thompson {

namespace {

ExprPtr make_const(double v) {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::constant;
    e->value = v;
    return e;
}

ExprPtr make_var() {
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::variable;
    return e;
}

ExprPtr make_unary(Expr::Kind k, ExprPtr arg) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(arg);
    return e;
}

ExprPtr make_binary(Expr::Kind k, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

/// Shortest decimal string that parses back to exactly v.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// --- recursive descent parser ---------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr run() {
        ExprPtr e = sum();
        skip_ws();
        if (pos_ != text_.size()) {
            fail("unexpected trailing input");
        }
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " at offset " + std::to_string(pos_), pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    ExprPtr sum() {
        ExprPtr e = product();
        for (;;) {
            if (accept('+')) {
                e = make_binary(Expr::Kind::add, std::move(e), product());
            } else if (accept('-')) {
                e = make_binary(Expr::Kind::sub, std::move(e), product());
            } else {
                return e;
            }
        }
    }

    ExprPtr product() {
        ExprPtr e = unary();
        for (;;) {
            if (accept('*')) {
                e = make_binary(Expr::Kind::mul, std::move(e), unary());
            } else if (accept('/')) {
                e = make_binary(Expr::Kind::div, std::move(e), unary());
            } else {
                return e;
            }
        }
    }

    ExprPtr unary() {
        if (accept('-')) {
            return make_unary(Expr::Kind::neg, unary());
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = atom();
        if (accept('^')) {
            return make_binary(Expr::Kind::pow, std::move(base), exponent());
        }
        return base;
    }

    // Exponents are numeric literals (optionally negated), right-associative:
    // x^2^3 reads as x^(2^3) and collapses to a single constant.
    ExprPtr exponent() {
        skip_ws();
        bool negate = false;
        while (accept('-')) {
            negate = !negate;
        }
        skip_ws();
        if (pos_ >= text_.size() || !(std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                                      text_[pos_] == '.')) {
            fail("exponent must be a numeric literal");
        }
        double v = number();
        if (accept('^')) {
            const ExprPtr inner = exponent();
            v = std::pow(v, inner->value);
        }
        return make_const(negate ? -v : v);
    }

    double number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            ++pos_;
        }
        // scientific notation: 1e-3, 2.5E+4
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t probe = pos_ + 1;
            if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) {
                ++probe;
            }
            if (probe < text_.size() && std::isdigit(static_cast<unsigned char>(text_[probe]))) {
                pos_ = probe;
                while (pos_ < text_.size() &&
                       std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                    ++pos_;
                }
            }
        }
        if (pos_ == start) {
            fail("expected a number");
        }
        try {
            return std::stod(std::string(text_.substr(start, pos_ - start)));
        } catch (const std::exception&) {
            pos_ = start;
            fail("malformed numeric literal");
        }
    }

    ExprPtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) {
            fail("unexpected end of input");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = sum();
            if (!accept(')')) {
                fail("expected ')'");
            }
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return make_const(number());
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string_view name = text_.substr(start, pos_ - start);
            if (name == "x") {
                return make_var();
            }
            if (name == "pi") {
                return make_const(std::numbers::pi);
            }
            if (name == "e") {
                return make_const(std::numbers::e);
            }
            static const std::pair<std::string_view, Expr::Kind> functions[] = {
                {"sin", Expr::Kind::sin},   {"cos", Expr::Kind::cos}, {"exp", Expr::Kind::exp},
                {"log", Expr::Kind::log},   {"sqrt", Expr::Kind::sqrt},
                {"tanh", Expr::Kind::tanh},
            };
            for (const auto& [fname, kind] : functions) {
                if (name == fname) {
                    if (!accept('(')) {
                        fail("expected '(' after function name");
                    }
                    ExprPtr arg = sum();
                    if (!accept(')')) {
                        fail("expected ')'");
                    }
                    return make_unary(kind, std::move(arg));
                }
            }
            pos_ = start;
            throw ParseError("unknown identifier '" + std::string(name) + "' at offset " +
                                 std::to_string(start),
                             start);
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

// --- printing ---------------------------------------------------------------

int precedence(Expr::Kind k) {
    switch (k) {
    case Expr::Kind::add:
    case Expr::Kind::sub:
        return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div:
        return 2;
    case Expr::Kind::neg:
        return 3;
    case Expr::Kind::pow:
        return 4;
    default:
        return 5;
    }
}

void print(std::ostream& os, const Expr& e, int parent_prec);

void print_child(std::ostream& os, const Expr& child, int prec) {
    const bool parens = precedence(child.kind) < prec;
    if (parens) {
        os << '(';
    }
    print(os, child, prec);
    if (parens) {
        os << ')';
    }
}

void print(std::ostream& os, const Expr& e, int) {
    switch (e.kind) {
    case Expr::Kind::variable:
        os << 'x';
        return;
    case Expr::Kind::constant: {
        const std::string s = format_double(e.value);
        if (e.value < 0) {
            os << '(' << s << ')';
        } else {
            os << s;
        }
        return;
    }
    case Expr::Kind::neg:
        os << '-';
        print_child(os, *e.lhs, precedence(Expr::Kind::neg) + 1);
        return;
    case Expr::Kind::sin:
    case Expr::Kind::cos:
    case Expr::Kind::exp:
    case Expr::Kind::log:
    case Expr::Kind::sqrt:
    case Expr::Kind::tanh: {
        const char* name = e.kind == Expr::Kind::sin    ? "sin"
                           : e.kind == Expr::Kind::cos  ? "cos"
                           : e.kind == Expr::Kind::exp  ? "exp"
                           : e.kind == Expr::Kind::log  ? "log"
                           : e.kind == Expr::Kind::sqrt ? "sqrt"
                                                        : "tanh";
        os << name << '(';
        print(os, *e.lhs, 0);
        os << ')';
        return;
    }
    case Expr::Kind::add:
        print_child(os, *e.lhs, 1);
        os << " + ";
        print_child(os, *e.rhs, 2);
        return;
    case Expr::Kind::sub:
        print_child(os, *e.lhs, 1);
        os << " - ";
        print_child(os, *e.rhs, 2);
        return;
    case Expr::Kind::mul:
        print_child(os, *e.lhs, 2);
        os << "*";
        print_child(os, *e.rhs, 3);
        return;
    case Expr::Kind::div:
        print_child(os, *e.lhs, 2);
        os << "/";
        print_child(os, *e.rhs, 3);
        return;
    case Expr::Kind::pow:
        print_child(os, *e.lhs, 5);
        // The exponent is a plain literal; parens here would not reparse.
        os << "^" << format_double(e.rhs->value);
        return;
    }
}

// --- dual arithmetic ---------------------------------------------------------

Dual check_finite(Dual d) {
    if (!std::isfinite(d.value) || !std::isfinite(d.deriv)) {
        throw DomainError("expression left its domain (non-finite intermediate)");
    }
    return d;
}

} // namespace

ExprPtr parse_expression(std::string_view text) {
    return Parser(text).run();
}

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e, 0);
    return os.str();
}

Dual eval_dual(const Expr& e, double x) {
    switch (e.kind) {
    case Expr::Kind::variable:
        return {x, 1.0};
    case Expr::Kind::constant:
        return {e.value, 0.0};
    case Expr::Kind::neg: {
        const Dual a = eval_dual(*e.lhs, x);
        return {-a.value, -a.deriv};
    }
    case Expr::Kind::sin: {
        const Dual a = eval_dual(*e.lhs, x);
        return check_finite({std::sin(a.value), std::cos(a.value) * a.deriv});
    }
    case Expr::Kind::cos: {
        const Dual a = eval_dual(*e.lhs, x);
        return check_finite({std::cos(a.value), -std::sin(a.value) * a.deriv});
    }
    case Expr::Kind::exp: {
        const Dual a = eval_dual(*e.lhs, x);
        const double v = std::exp(a.value);
        return check_finite({v, v * a.deriv});
    }
    case Expr::Kind::log: {
        const Dual a = eval_dual(*e.lhs, x);
        if (a.value <= 0.0) {
            throw DomainError("log of a non-positive value");
        }
        return check_finite({std::log(a.value), a.deriv / a.value});
    }
    case Expr::Kind::sqrt: {
        const Dual a = eval_dual(*e.lhs, x);
        if (a.value < 0.0) {
            throw DomainError("sqrt of a negative value");
        }
        const double v = std::sqrt(a.value);
        return check_finite({v, a.deriv == 0.0 ? 0.0 : 0.5 * a.deriv / v});
    }
    case Expr::Kind::tanh: {
        const Dual a = eval_dual(*e.lhs, x);
        const double v = std::tanh(a.value);
        return check_finite({v, (1.0 - v * v) * a.deriv});
    }
    case Expr::Kind::add: {
        const Dual a = eval_dual(*e.lhs, x);
        const Dual b = eval_dual(*e.rhs, x);
        return check_finite({a.value + b.value, a.deriv + b.deriv});
    }
    case Expr::Kind::sub: {
        const Dual a = eval_dual(*e.lhs, x);
        const Dual b = eval_dual(*e.rhs, x);
        return check_finite({a.value - b.value, a.deriv - b.deriv});
    }
    case Expr::Kind::mul: {
        const Dual a = eval_dual(*e.lhs, x);
        const Dual b = eval_dual(*e.rhs, x);
        return check_finite(
            {a.value * b.value, a.deriv * b.value + a.value * b.deriv});
    }
    case Expr::Kind::div: {
        const Dual a = eval_dual(*e.lhs, x);
        const Dual b = eval_dual(*e.rhs, x);
        if (b.value == 0.0) {
            throw DomainError("division by zero");
        }
        return check_finite({a.value / b.value,
                             (a.deriv * b.value - a.value * b.deriv) / (b.value * b.value)});
    }
    case Expr::Kind::pow: {
        const Dual a = eval_dual(*e.lhs, x);
        const double p = e.rhs->value;
        const double v = std::pow(a.value, p);
        double dv = 0.0;
        if (a.deriv != 0.0) {
            dv = p * std::pow(a.value, p - 1.0) * a.deriv;
        }
        return check_finite({v, dv});
    }
    }
    throw DomainError("malformed expression tree");
}

// --- DiffeoSpec ----------------------------------------------------------------

DiffeoSpec::DiffeoSpec(ExprPtr expr, Space space, std::string label)
    : expr_(std::move(expr)), space_(space), label_(std::move(label)) {}

DiffeoSpec DiffeoSpec::from_expression(std::string_view text, Space space) {
    return DiffeoSpec(parse_expression(text), space, std::string(text));
}

DiffeoSpec DiffeoSpec::family(std::string_view spec) {
    const std::size_t colon = spec.find(':');
    const std::string_view name = spec.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string_view::npos) {
        std::string rest(spec.substr(colon + 1));
        std::istringstream is(rest);
        std::string item;
        while (std::getline(is, item, ',')) {
            try {
                params.push_back(std::stod(item));
            } catch (const std::exception&) {
                throw ParseError("malformed family parameter '" + item + "'");
            }
        }
    }
    return family(name, params);
}

DiffeoSpec DiffeoSpec::family(std::string_view name, const std::vector<double>& params) {
    auto arity = [&](std::size_t lo, std::size_t hi) {
        if (params.size() < lo || params.size() > hi) {
            throw DomainError("family '" + std::string(name) + "' takes " +
                              std::to_string(lo) +
                              (hi != lo ? ".." + std::to_string(hi) : "") + " parameter(s)");
        }
    };
    std::string label(name);
    if (!params.empty()) {
        label += ':';
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (i) {
                label += ',';
            }
            label += format_double(params[i]);
        }
    }

    if (name == "identity") {
        arity(0, 0);
        return DiffeoSpec(make_var(), Space::interval, std::move(label));
    }
    if (name == "bump") {
        arity(1, 1);
        const double a = params[0];
        if (!(std::abs(a) < 1.0)) {
            throw DomainError("bump parameter must satisfy |a| < 1");
        }
        // x + a*x*(1-x)
        ExprPtr e = make_binary(
            Expr::Kind::add, make_var(),
            make_binary(Expr::Kind::mul,
                        make_binary(Expr::Kind::mul, make_const(a), make_var()),
                        make_binary(Expr::Kind::sub, make_const(1.0), make_var())));
        return DiffeoSpec(std::move(e), Space::interval, std::move(label));
    }
    if (name == "expwarp") {
        arity(1, 1);
        const double a = params[0];
        if (a == 0.0) {
            throw DomainError("expwarp parameter must be nonzero");
        }
        // (exp(a*x) - 1) / (exp(a) - 1)
        ExprPtr num = make_binary(
            Expr::Kind::sub,
            make_unary(Expr::Kind::exp, make_binary(Expr::Kind::mul, make_const(a), make_var())),
            make_const(1.0));
        ExprPtr den = make_binary(Expr::Kind::sub,
                                  make_unary(Expr::Kind::exp, make_const(a)), make_const(1.0));
        return DiffeoSpec(make_binary(Expr::Kind::div, std::move(num), std::move(den)),
                          Space::interval, std::move(label));
    }
    if (name == "rot") {
        arity(1, 1);
        return DiffeoSpec(make_binary(Expr::Kind::add, make_var(), make_const(params[0])),
                          Space::circle_lift, std::move(label));
    }
    if (name == "sine") {
        arity(1, 2);
        const double a = params[0];
        if (!(std::abs(a) < 1.0)) {
            throw DomainError("sine parameter must satisfy |a| < 1");
        }
        const double two_pi = 2.0 * std::numbers::pi;
        // x + (a/(2*pi)) * sin(2*pi*x) [+ c]
        ExprPtr e = make_binary(
            Expr::Kind::add, make_var(),
            make_binary(Expr::Kind::mul, make_const(a / two_pi),
                        make_unary(Expr::Kind::sin,
                                   make_binary(Expr::Kind::mul, make_const(two_pi), make_var()))));
        if (params.size() == 2) {
            e = make_binary(Expr::Kind::add, std::move(e), make_const(params[1]));
        }
        return DiffeoSpec(std::move(e), Space::circle_lift, std::move(label));
    }
    throw DomainError("unknown family '" + std::string(name) + "'");
}

double DiffeoSpec::eval(double x) const {
    return thompson::eval_dual(*expr_, x).value;
}

double DiffeoSpec::derivative(double x) const {
    return thompson::eval_dual(*expr_, x).deriv;
}

Dual DiffeoSpec::eval_dual(double x) const {
    return thompson::eval_dual(*expr_, x);
}

DiffeoSpec DiffeoSpec::with_space(Space s) const {
    DiffeoSpec copy = *this;
    copy.space_ = s;
    return copy;
}

DiffeoSpec DiffeoSpec::with_derivative_bound(double S) const {
    if (!(S >= 1.0)) {
        throw DomainError("derivative bound must be >= 1");
    }
    DiffeoSpec copy = *this;
    copy.derivative_bound_ = S;
    return copy;
}

// --- validators -----------------------------------------------------------------

namespace {

void check_derivative_positive(const DiffeoSpec& f, int grid_size, double tol,
                               FuncValidation& out) {
    for (int i = 0; i <= grid_size; ++i) {
        const double x = static_cast<double>(i) / grid_size;
        try {
            const Dual d = f.eval_dual(x);
            if (!(d.deriv > tol)) {
                out.violations.push_back(
                    {"derivative " + std::to_string(d.deriv) + " not positive", x});
                return;
            }
        } catch (const DomainError& err) {
            out.violations.push_back({std::string("evaluation failed: ") + err.what(), x});
            return;
        }
    }
}

} // namespace

FuncValidation validate_interval_diffeo(const DiffeoSpec& f, int grid_size, double tol) {
    FuncValidation out;
    if (grid_size < 1) {
        throw DomainError("grid_size must be positive");
    }
    try {
        const double f0 = f.eval(0.0);
        if (!(std::abs(f0) <= tol)) {
            out.violations.push_back({"f(0) = " + std::to_string(f0) + ", expected 0", 0.0});
        }
        const double f1 = f.eval(1.0);
        if (!(std::abs(f1 - 1.0) <= tol)) {
            out.violations.push_back({"f(1) = " + std::to_string(f1) + ", expected 1", 1.0});
        }
    } catch (const DomainError& err) {
        out.violations.push_back({std::string("evaluation failed: ") + err.what(), 0.0});
        return out;
    }
    check_derivative_positive(f, grid_size, tol, out);
    return out;
}

FuncValidation validate_circle_lift(const DiffeoSpec& f, int grid_size, double tol) {
    FuncValidation out;
    if (grid_size < 1) {
        throw DomainError("grid_size must be positive");
    }
    for (int i = 0; i <= grid_size; ++i) {
        const double x = static_cast<double>(i) / grid_size;
        try {
            const double gap = f.eval(x + 1.0) - f.eval(x) - 1.0;
            if (!(std::abs(gap) <= tol)) {
                out.violations.push_back(
                    {"lift identity violated: f(x+1)-f(x)-1 = " + std::to_string(gap), x});
                break;
            }
        } catch (const DomainError& err) {
            out.violations.push_back({std::string("evaluation failed: ") + err.what(), x});
            return out;
        }
    }
    check_derivative_positive(f, grid_size, tol, out);
    return out;
}

} // namespace thompson
