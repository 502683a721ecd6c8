#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "thermistor/expr.hpp"

using namespace thermistor;

namespace {

struct Case {
    const char* text;
    double t;
    double u;
    double expected;
};

std::size_t parse_error_offset(const std::string& text) {
    try {
        (void)parse_expr(text);
    } catch (const ParseError& e) {
        return e.offset();
    }
    ADD_FAILURE() << "no ParseError for '" << text << "'";
    return std::string::npos;
}

std::string random_expr(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
    std::uniform_real_distribution<double> num(0.0, 10.0);
    static const char* fns[] = {"sin", "cos", "exp", "sqrt", "abs"};
    static const char* ops[] = {" + ", " - ", " * ", " / ", "^"};
    switch (pick(rng)) {
        case 0: return std::to_string(num(rng));
        case 1: return "t";
        case 2: return "u";
        case 3: return "-" + random_expr(rng, depth - 1);
        case 4: return "(" + random_expr(rng, depth - 1) + ")";
        case 5: return std::string(fns[rng() % 5]) + "(" + random_expr(rng, depth - 1) + ")";
        default: return random_expr(rng, depth - 1) + ops[rng() % 5] + random_expr(rng, depth - 1);
    }
}

}  // namespace

TEST(ExprPrecedence, Corpus) {
    const std::vector<Case> corpus = {
        {"1+2*3", 0, 0, 7.0},
        {"(1+2)*3", 0, 0, 9.0},
        {"2^3^2", 0, 0, 512.0},
        {"(2^3)^2", 0, 0, 64.0},
        {"2+sin(u)*exp(-t)", 0, 0, 2.0},
        {"-2^2", 0, 0, -4.0},
        {"(-2)^2", 0, 0, 4.0},
        {"2^-1", 0, 0, 0.5},
        {"2^-1^2", 0, 0, 0.5},
        {"8/4/2", 0, 0, 1.0},
        {"8-4-2", 0, 0, 2.0},
        {"2*3^2", 0, 0, 18.0},
        {"--3", 0, 0, 3.0},
        {"1 - -1", 0, 0, 2.0},
        {"t*u + t/u", 2, 4, 8.5},
        {"u^2 - t", 3, 2, 1.0},
        {"sqrt(t) + abs(u)", 9, -2, 5.0},
        {"exp(0) + cos(0)", 0, 0, 2.0},
        {"1.5e1 + .5", 0, 0, 15.5},
        {"2E-1*10", 0, 0, 2.0},
        {"  ( ( t ) )  ", 7, 0, 7.0},
        {"-t^2", 3, 0, -9.0},
        {"6/2*3", 0, 0, 9.0},
        {"1+2*3^2/9-1", 0, 0, 2.0},
    };
    for (const auto& c : corpus) {
        EXPECT_DOUBLE_EQ(eval_expr(parse_expr(c.text), c.t, c.u), c.expected) << c.text;
    }
}

TEST(ExprEval, Examples) {
    EXPECT_DOUBLE_EQ(eval_expr(parse_expr("2 + sin(u)"), 0.0, 0.0), 2.0);
    EXPECT_NEAR(eval_expr(parse_expr("2 + sin(u)"), 1.0, M_PI / 2), 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(eval_expr(parse_expr("exp(-t)*u"), 0.0, 5.0), 5.0);
    const Expr e = parse_expr("t + u");
    EXPECT_EQ(e(1.0, 2.0), 3.0);
    EXPECT_TRUE(e.uses_t());
    EXPECT_TRUE(e.uses_u());
    EXPECT_FALSE(parse_expr("3").uses_t());
    EXPECT_FALSE(parse_expr("sin(t)").uses_u());
    EXPECT_EQ(parse_expr("t+u").source(), "t+u");
}

TEST(ExprEval, ErrorsCarrySpans) {
    try {
        (void)eval_expr(parse_expr("1 + 1/(u-1)"), 0.0, 1.0);
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_EQ(e.begin(), 4u);
        EXPECT_EQ(e.end(), 10u);
        EXPECT_NE(std::string(e.what()).find("division by zero"), std::string::npos);
    }
    try {
        (void)eval_expr(parse_expr("2 + sqrt(u)"), 0.0, -1.0);
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_EQ(e.begin(), 4u);
        EXPECT_EQ(e.end(), 11u);
    }
    try {
        (void)eval_expr(parse_expr("exp(u)"), 0.0, 1000.0);
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_EQ(e.begin(), 0u);
        EXPECT_EQ(e.end(), 6u);
    }
    EXPECT_THROW((void)eval_expr(parse_expr("(-1)^0.5"), 0.0, 0.0), EvalError);
    EXPECT_THROW((void)eval_expr(parse_expr("1e300*1e300"), 0.0, 0.0), EvalError);
}

TEST(ExprParse, ErrorOffsets) {
    EXPECT_EQ(parse_error_offset("2t"), 1u);
    EXPECT_EQ(parse_error_offset("(1+2"), 4u);
    EXPECT_EQ(parse_error_offset("1+2)"), 3u);
    EXPECT_EQ(parse_error_offset("1 + foo(t)"), 4u);
    EXPECT_EQ(parse_error_offset("x"), 0u);
    EXPECT_EQ(parse_error_offset(""), 0u);
    EXPECT_EQ(parse_error_offset("   "), 3u);
    EXPECT_EQ(parse_error_offset("1 +"), 3u);
    EXPECT_EQ(parse_error_offset("1 $ 2"), 2u);
    EXPECT_EQ(parse_error_offset("sin t"), 4u);
    EXPECT_EQ(parse_error_offset("sin(t"), 5u);
    EXPECT_EQ(parse_error_offset("2e"), 2u);
    EXPECT_EQ(parse_error_offset("1.2.3"), 3u);
    EXPECT_EQ(parse_error_offset("."), 0u);
    EXPECT_EQ(parse_error_offset("1e999"), 0u);
    EXPECT_EQ(parse_error_offset("()"), 1u);
    EXPECT_EQ(parse_error_offset("2 * * 3"), 4u);
    EXPECT_EQ(parse_error_offset("u u"), 2u);
}

TEST(ExprParse, MessageNamesExpectationAndFinding) {
    try {
        (void)parse_expr("1 + foo(t)");
        FAIL();
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("byte 4"), std::string::npos) << msg;
        EXPECT_NE(msg.find("foo"), std::string::npos) << msg;
        EXPECT_NE(msg.find("expected"), std::string::npos) << msg;
    }
}

TEST(ExprParse, DeepNestingIsRejectedNotCrashed) {
    const std::string deep = std::string(100000, '(') + "1" + std::string(100000, ')');
    EXPECT_THROW((void)parse_expr(deep), ParseError);
    const std::string minus = std::string(100000, '-') + "1";
    EXPECT_THROW((void)parse_expr(minus), ParseError);
    const std::string ok = std::string(50, '(') + "1" + std::string(50, ')');
    EXPECT_EQ(eval_expr(parse_expr(ok), 0, 0), 1.0);
}

TEST(ExprParse, FuzzOnlyThrowsParseError) {
    const std::string alphabet = "0123456789.eE+-*/^() tusincoxpqrab$#\t";
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> len(0, 40), ch(0, alphabet.size() - 1);
    std::size_t accepted = 0;
    for (int k = 0; k < 20000; ++k) {
        std::string text;
        for (std::size_t n = len(rng); n > 0; --n) text += alphabet[ch(rng)];
        try {
            (void)parse_expr(text);
            ++accepted;
        } catch (const ParseError& e) {
            EXPECT_LE(e.offset(), text.size()) << text;
        } catch (...) {
            ADD_FAILURE() << "unexpected exception type for '" << text << "'";
        }
    }
    // raw bytes, including non-ASCII
    std::uniform_int_distribution<int> byte(0, 255);
    for (int k = 0; k < 5000; ++k) {
        std::string text;
        for (std::size_t n = len(rng); n > 0; --n) text += static_cast<char>(byte(rng));
        try {
            (void)parse_expr(text);
        } catch (const ParseError&) {
        } catch (...) {
            ADD_FAILURE() << "unexpected exception type";
        }
    }
    EXPECT_GT(accepted, 0u);
}

TEST(ExprPrint, RoundTripsThroughParser) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 2000; ++k) {
        const Expr e = parse_expr(random_expr(rng, 5));
        const Expr again = parse_expr(e.to_string());
        EXPECT_TRUE(structurally_equal(e, again)) << e.source() << " -> " << e.to_string();
        EXPECT_EQ(again.to_string(), e.to_string());
        for (double t : {0.5, 1.7}) {
            for (double u : {-0.3, 2.0}) {
                auto attempt = [&](const Expr& ex) -> std::optional<double> {
                    try {
                        return ex(t, u);
                    } catch (const EvalError&) {
                        return std::nullopt;
                    }
                };
                EXPECT_EQ(attempt(e), attempt(again)) << e.source();
            }
        }
    }
}

TEST(ExprPrint, FullyParenthesized) {
    EXPECT_EQ(parse_expr("1+2*3").to_string(), "(1 + (2 * 3))");
    EXPECT_EQ(parse_expr("2^3^2").to_string(), "(2 ^ (3 ^ 2))");
    EXPECT_EQ(parse_expr("-sin(t)").to_string(), "(-sin(t))");
    EXPECT_TRUE(structurally_equal(parse_expr("1+2"), parse_expr(" ( 1 ) + 2 ")));
    EXPECT_FALSE(structurally_equal(parse_expr("1+2"), parse_expr("2+1")));
}

TEST(ExprThreads, CopiesShareTreeSafely) {
    const Expr e = parse_expr("2 + sin(u) * t");
    const Expr copy = e;
    EXPECT_EQ(&copy.source(), &e.source());
    EXPECT_EQ(copy(1.0, 0.5), e(1.0, 0.5));
}
