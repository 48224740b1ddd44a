#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "thompson/errors.hpp"
#include "thompson/funcspec.hpp"

using thompson::DiffeoSpec;
using thompson::DomainError;
using thompson::Dual;
using thompson::ParseError;
using thompson::Space;

namespace {

double eval_at(const std::string& text, double x) {
    return thompson::eval_dual(*thompson::parse_expression(text), x).value;
}

} // namespace

TEST_CASE("parse and evaluate") {
    CHECK(eval_at("x + 0.3*x*(1-x)", 0.5) == doctest::Approx(0.575).epsilon(1e-15));
    CHECK(eval_at("x", 0.7) == 0.7);
    CHECK(eval_at("2*x^2", 3.0) == 18.0);
    CHECK(eval_at("-x^2", 2.0) == -4.0);
    CHECK(eval_at("2^-2", 0.0) == 0.25);
    CHECK(eval_at("x^2^3", 2.0) == 256.0); // right-associative
    CHECK(eval_at("1 - 2 - 3", 0.0) == -4.0);
    CHECK(eval_at("6/3/2", 0.0) == 1.0);
    CHECK(eval_at("sin(pi*x)", 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_at("e", 0.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(eval_at("1.5e2", 0.0) == 150.0);
    CHECK(eval_at("tanh(0)", 0.0) == 0.0);
    CHECK(eval_at("sqrt(x)", 4.0) == 2.0);
}

TEST_CASE("parse errors carry offsets") {
    try {
        thompson::parse_expression("x +");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 3);
    }
    CHECK_THROWS_AS(thompson::parse_expression("y + 1"), ParseError);
    CHECK_THROWS_AS(thompson::parse_expression("x^x"), ParseError);
    CHECK_THROWS_AS(thompson::parse_expression(""), ParseError);
    CHECK_THROWS_AS(thompson::parse_expression("sin(x"), ParseError);
    CHECK_THROWS_AS(thompson::parse_expression("1 + (2"), ParseError);
    CHECK_THROWS_AS(thompson::parse_expression("x x"), ParseError);
}

TEST_CASE("dual numbers differentiate") {
    const Dual s = thompson::eval_dual(*thompson::parse_expression("sin(x)"), 0.0);
    CHECK(s.value == 0.0);
    CHECK(s.deriv == 1.0);

    const Dual p = thompson::eval_dual(*thompson::parse_expression("x^2"), 3.0);
    CHECK(p.value == 9.0);
    CHECK(p.deriv == 6.0);

    const Dual b = DiffeoSpec::family("bump:0.3").eval_dual(0.0);
    CHECK(b.value == doctest::Approx(0.0));
    CHECK(b.deriv == doctest::Approx(1.3).epsilon(1e-15));

    CHECK_THROWS_AS(thompson::eval_dual(*thompson::parse_expression("log(x)"), 0.0), DomainError);
    CHECK_THROWS_AS(thompson::eval_dual(*thompson::parse_expression("1/x"), 0.0), DomainError);
    CHECK_THROWS_AS(thompson::eval_dual(*thompson::parse_expression("sqrt(x)"), -1.0), DomainError);
}

TEST_CASE("families") {
    const DiffeoSpec id = DiffeoSpec::family("identity");
    CHECK(id.space() == Space::interval);
    CHECK(id.label() == "identity");
    CHECK(id(0.37) == 0.37);

    const DiffeoSpec b0 = DiffeoSpec::family("bump:0");
    for (double x : {0.0, 0.25, 0.8, 1.0}) {
        CHECK(b0(x) == doctest::Approx(x).epsilon(1e-15));
    }

    const DiffeoSpec ew = DiffeoSpec::family("expwarp:1");
    CHECK(ew.space() == Space::interval);
    CHECK(ew(0.0) == doctest::Approx(0.0));
    CHECK(ew(1.0) == doctest::Approx(1.0).epsilon(1e-15));

    const DiffeoSpec rot = DiffeoSpec::family("rot:0.3");
    CHECK(rot.space() == Space::circle_lift);
    CHECK(rot(0.5) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(rot.label() == "rot:0.3");

    const DiffeoSpec sn = DiffeoSpec::family("sine:0.2");
    CHECK(sn.space() == Space::circle_lift);
    CHECK(sn.derivative(0.0) == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(sn(0.0) == doctest::Approx(0.0));

    // Optional rotation offset: sine:a,c is rot:c composed with sine:a.
    const DiffeoSpec snc = DiffeoSpec::family("sine:0.2,0.3");
    CHECK(snc.label() == "sine:0.2,0.3");
    for (double x : {0.0, 0.3, 0.71}) {
        CHECK(snc(x) == doctest::Approx(sn(x) + 0.3).epsilon(1e-12));
    }

    CHECK_THROWS_AS(DiffeoSpec::family("bump:1.5"), DomainError);
    CHECK_THROWS_AS(DiffeoSpec::family("bump:-1"), DomainError);
    CHECK_THROWS_AS(DiffeoSpec::family("expwarp:0"), DomainError);
    CHECK_THROWS_AS(DiffeoSpec::family("nosuch:1"), DomainError);
    CHECK_THROWS_AS(DiffeoSpec::family("bump"), DomainError);
    CHECK_THROWS_AS(DiffeoSpec::family("identity:1"), DomainError);
    CHECK_THROWS_AS(DiffeoSpec::family("bump:abc"), ParseError);
}

TEST_CASE("spec plumbing") {
    const DiffeoSpec f = DiffeoSpec::from_expression("x + 0.25*x*(1-x)", Space::interval);
    CHECK(f.space() == Space::interval);
    CHECK_FALSE(f.derivative_bound().has_value());

    const DiffeoSpec g = f.with_derivative_bound(2.0);
    CHECK(g.derivative_bound() == 2.0);
    CHECK_THROWS_AS(f.with_derivative_bound(0.5), DomainError);

    const DiffeoSpec h = f.with_space(Space::circle_lift);
    CHECK(h.space() == Space::circle_lift);
}

TEST_CASE("diffeomorphism validation") {
    CHECK(thompson::validate_interval_diffeo(DiffeoSpec::family("identity"), 256).ok());
    CHECK(thompson::validate_interval_diffeo(DiffeoSpec::family("bump:0.3"), 256).ok());
    CHECK(thompson::validate_interval_diffeo(DiffeoSpec::family("bump:-0.3"), 256).ok());
    CHECK(thompson::validate_interval_diffeo(DiffeoSpec::family("expwarp:-2"), 256).ok());

    // x^2 fixes the endpoints but has derivative 0 at x = 0.
    const auto sq = thompson::validate_interval_diffeo(
        DiffeoSpec::from_expression("x^2", Space::interval), 256);
    REQUIRE_FALSE(sq.ok());
    CHECK(sq.violations.front().x == 0.0);

    // Wrong endpoints.
    const auto off = thompson::validate_interval_diffeo(
        DiffeoSpec::from_expression("x + 0.3", Space::interval), 256);
    CHECK_FALSE(off.ok());

    CHECK(thompson::validate_circle_lift(DiffeoSpec::family("rot:0.3"), 256).ok());
    CHECK(thompson::validate_circle_lift(DiffeoSpec::family("sine:0.2"), 256).ok());
    CHECK(thompson::validate_circle_lift(DiffeoSpec::family("sine:0.2,0.3"), 256).ok());

    // Not a lift of a circle map: f(x+1) - f(x) is not identically 1.
    const auto bad = thompson::validate_circle_lift(
        DiffeoSpec::from_expression("x + sin(x)", Space::circle_lift), 256);
    CHECK_FALSE(bad.ok());
}

TEST_CASE("printing round-trips") {
    const std::vector<std::string> exprs = {
        "x + 0.3*x*(1-x)",
        "(exp(1*x) - 1)/(exp(1) - 1)",
        "x + 0.2*sin(2*pi*x)/(2*pi) + 0.3",
        "-x^2 + 2^-2",
        "sin(cos(exp(x/4)))",
        "sqrt(x + 2)*tanh(x) - 1.5e-3",
        "1 - 2 - 3 + x/5/7",
    };
    for (const std::string& t : exprs) {
        const auto e1 = thompson::parse_expression(t);
        const std::string s1 = thompson::to_string(*e1);
        const auto e2 = thompson::parse_expression(s1);
        const std::string s2 = thompson::to_string(*e2);
        CHECK(s1 == s2);
        for (double x : {0.1, 0.5, 0.9}) {
            CHECK(thompson::eval_dual(*e1, x).value ==
                  doctest::Approx(thompson::eval_dual(*e2, x).value).epsilon(1e-15));
        }
    }
}

TEST_CASE("dual derivatives match central differences") {
    const std::vector<std::string> fams = {"identity",  "bump:0.3",  "bump:-0.3",
                                           "bump:0.9",  "expwarp:1", "expwarp:-2",
                                           "rot:0.3",   "sine:0.2",  "sine:0.2,0.3"};
    const double h = 0x1p-20;
    for (const std::string& name : fams) {
        const DiffeoSpec f = DiffeoSpec::family(name);
        double worst = 0.0;
        for (int i = 0; i <= 256; ++i) {
            const double x = static_cast<double>(i) / 256.0;
            const Dual d = f.eval_dual(x);
            const double central = (f(x + h) - f(x - h)) / (2.0 * h);
            const double rel = std::abs(d.deriv - central) / std::max(1.0, std::abs(d.deriv));
            worst = std::max(worst, rel);
        }
        CAPTURE(name);
        CHECK(worst <= 1e-6);
    }
}
