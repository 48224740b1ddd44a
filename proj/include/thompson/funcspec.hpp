#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/plmap.hpp"

namespace thompson {

/// Immutable expression AST node. Built by the parser or the family
/// constructors; shared freely (nodes are never mutated).
struct Expr {
    enum class Kind {
        variable, // x
        constant,
        neg,
        sin,
        cos,
        exp,
        log,
        sqrt,
        tanh,
        add,
        sub,
        mul,
        div,
        pow, // rhs is always a constant node
    };

    Kind kind;
    double value = 0.0; // constants only
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Parses "x + 0.3*x*(1-x)" style expressions: +, -, *, /, ^ with the
/// usual precedence, parentheses, function calls sin(...) cos(...)
/// exp(...) log(...) sqrt(...) tanh(...), constants pi and e. The ^
/// operator is right-associative and its exponent must be a (possibly
/// negated) numeric literal. Throws ParseError with a byte offset.
ExprPtr parse_expression(std::string_view text);

/// Canonical text form; parse(print(parse(t))) == parse(t) and printing a
/// parsed tree is a fixed point of print-then-parse.
std::string to_string(const Expr& e);

/// Value and first derivative at x, by forward-mode dual-number
/// evaluation. Throws DomainError when the expression leaves its domain
/// (log of a non-positive value, division by zero, non-finite result).
struct Dual {
    double value;
    double deriv;
};

Dual eval_dual(const Expr& e, double x);

/// A concrete input diffeomorphism: an expression (parsed or from a
/// built-in family), the space it acts on, and an optional explicit bound
/// on its derivative.
class DiffeoSpec {
public:
    static DiffeoSpec from_expression(std::string_view text, Space space);

    /// Built-in families, "name:p1,p2" syntax:
    ///   identity            x                      (interval)
    ///   bump:a              x + a*x*(1-x), |a|<1   (interval)
    ///   expwarp:a           (e^(a*x)-1)/(e^a-1)    (interval, a != 0)
    ///   rot:c               x + c                  (circle lift)
    ///   sine:a[,c]          x + a*sin(2*pi*x)/(2*pi) + c, |a|<1 (circle lift)
    static DiffeoSpec family(std::string_view spec);
    static DiffeoSpec family(std::string_view name, const std::vector<double>& params);

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;
    double derivative(double x) const;
    Dual eval_dual(double x) const;

    Space space() const { return space_; }
    const std::string& label() const { return label_; }
    const ExprPtr& expr() const { return expr_; }

    /// Explicit derivative bound, when the caller supplied one.
    std::optional<double> derivative_bound() const { return derivative_bound_; }

    DiffeoSpec with_space(Space s) const;
    DiffeoSpec with_derivative_bound(double S) const;

private:
    DiffeoSpec(ExprPtr expr, Space space, std::string label);

    ExprPtr expr_;
    Space space_;
    std::string label_;
    std::optional<double> derivative_bound_;
};

/// One failed diffeomorphism precondition, with the sample where it was
/// observed.
struct FuncViolation {
    std::string what;
    double x = 0.0;
};

struct FuncValidation {
    std::vector<FuncViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Orientation-preserving C^1 interval diffeomorphism checks: |f(0)| and
/// |f(1)-1| within tol, f' > tol at grid_size+1 uniform samples.
FuncValidation validate_interval_diffeo(const DiffeoSpec& f, int grid_size, double tol = 1e-9);

/// Circle lift checks: f(x+1) - f(x) - 1 within tol at uniform samples,
/// f' > tol.
FuncValidation validate_circle_lift(const DiffeoSpec& f, int grid_size, double tol = 1e-9);

} // namespace thompson
