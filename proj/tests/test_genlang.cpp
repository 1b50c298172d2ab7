#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "netevo/genlang.hpp"

using namespace netevo;

namespace {

ArcContext ctx_with(std::int64_t i, std::int64_t j)
{
    ArcContext c;
    c.i = i;
    c.j = j;
    return c;
}

ArcContext random_context(Rng& rng, bool directed)
{
    ArcContext c;
    c.directed = directed;
    c.i = static_cast<std::int64_t>(uniform_index(rng, 1000)) + 1;
    do {
        c.j = static_cast<std::int64_t>(uniform_index(rng, 1000)) + 1;
    } while (c.j == c.i);
    c.indeg_i = static_cast<std::int64_t>(uniform_index(rng, 200));
    c.indeg_j = static_cast<std::int64_t>(uniform_index(rng, 200));
    c.outdeg_i = static_cast<std::int64_t>(uniform_index(rng, 200));
    c.outdeg_j = static_cast<std::int64_t>(uniform_index(rng, 200));
    c.d_u = static_cast<double>(uniform_index(rng, 11)) + 1;
    c.d_d = static_cast<double>(uniform_index(rng, 11)) + 1;
    c.d_r = static_cast<double>(uniform_index(rng, 11)) + 1;
    return c;
}

} // namespace

TEST_CASE("evaluate: canonical generators")
{
    ArcContext c = ctx_with(3, 9);
    c.indeg_j = 5;
    CHECK(evaluate(parse_program("(indeg j)"), c) == 5.0);
    CHECK(evaluate(parse_program("1.0"), c) == 1.0);
    CHECK(evaluate(parse_program("(* (indeg j) 2)"), c) == 10.0);
}

TEST_CASE("evaluate: protected arithmetic")
{
    ArcContext c = ctx_with(7, 2);
    CHECK(evaluate(parse_program("(/ i 0)"), c) == 0.0);
    CHECK(evaluate(parse_program("(log 0)"), c) == 0.0);
    CHECK(evaluate(parse_program("(log -1)"), c) == 0.0);
    CHECK(evaluate(parse_program("(log (- 0 i))"), c) == doctest::Approx(std::log(7.0)));
    CHECK(evaluate(parse_program("(exp 1000)"), c) == doctest::Approx(std::exp(50.0)));
    CHECK(evaluate(parse_program("(exp -1000)"), c) == doctest::Approx(std::exp(-50.0)));
    CHECK(evaluate(parse_program("(pow -8 0.5)"), c) == doctest::Approx(-std::sqrt(8.0)));
    CHECK(evaluate(parse_program("(pow 0 -1)"), c) == 0.0);
    // exp(50)^exp(50) overflows and is coerced to zero.
    CHECK(evaluate(parse_program("(pow (exp 50) (exp 50))"), c) == 0.0);
    CHECK(evaluate(parse_program("(abs -3)"), c) == 3.0);
    CHECK(evaluate(parse_program("(min 2 i)"), c) == 2.0);
    CHECK(evaluate(parse_program("(max 2 i)"), c) == 7.0);
}

TEST_CASE("evaluate: conditionals")
{
    ArcContext c = ctx_with(4, 10);
    CHECK(evaluate(parse_program("(> j i 1 2)"), c) == 1.0);
    CHECK(evaluate(parse_program("(< j i 1 2)"), c) == 2.0);
    CHECK(evaluate(parse_program("(= i 4 1 2)"), c) == 1.0);
    CHECK(evaluate(parse_program("(=0 (- i 4) 5 6)"), c) == 5.0);
    CHECK(evaluate(parse_program("(=0 i 5 6)"), c) == 6.0);
}

TEST_CASE("evaluate: affinity")
{
    CHECK(evaluate(parse_program("(psi 3 1 0.5)"), ctx_with(4, 10)) == 1.0);
    CHECK(evaluate(parse_program("(psi 3 1 0.5)"), ctx_with(4, 11)) == 0.5);
    // Non-integral and negative group counts truncate |g|.
    CHECK(evaluate(parse_program("(psi -3.7 1 0.5)"), ctx_with(4, 10)) == 1.0);
    // Fewer than one group: everybody shares a group.
    CHECK(evaluate(parse_program("(psi 0.2 1 0.5)"), ctx_with(4, 11)) == 1.0);
    CHECK(evaluate(parse_program("(psi 1e300 1 0.5)"), ctx_with(4, 11)) == 0.5);
}

TEST_CASE("parse and print")
{
    auto p = parse_program("(* (indeg j) 2)");
    REQUIRE(p.length() == 3);
    CHECK(p.nodes()[0] == ExprNode::op_node(Op::Mul));
    CHECK(p.nodes()[1] == ExprNode::variable(Var::IndegJ));
    CHECK(p.nodes()[2] == ExprNode::constant(2.0));
    CHECK(print_program(p) == "(* (indeg j) 2)");

    auto psi = parse_program("(psi 3 1 0.5)");
    CHECK(psi.nodes()[0] == ExprNode::op_node(Op::Psi));
    CHECK(psi.length() == 4);

    CHECK(print_program(parse_program("  (+\n  du # comment\n  (outdeg i))")) == "(+ du (outdeg i))");
    CHECK(print_program(parse_program("2.50")) == "2.5");
}

TEST_CASE("parse errors")
{
    CHECK_THROWS_AS(parse_program("(min (indeg i)"), ParseError);
    CHECK_THROWS_AS(parse_program("(min 1 2 3)"), ParseError);
    CHECK_THROWS_AS(parse_program("(foo 1 2)"), ParseError);
    CHECK_THROWS_AS(parse_program("(indeg k)"), ParseError);
    CHECK_THROWS_AS(parse_program("1 2"), ParseError);
    CHECK_THROWS_AS(parse_program(""), ParseError);
    CHECK_THROWS_AS(parse_program(")"), ParseError);
    CHECK_THROWS_AS(parse_program("inf"), ParseError);
    CHECK_THROWS_AS(parse_program("(+ dd 1)", false), ParseError);
    CHECK_THROWS_AS(parse_program("(outdeg j)", false), ParseError);
    CHECK_NOTHROW(parse_program("(+ du (indeg i))", false));

    try {
        parse_program("(+ 1 (bogus 2))");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 6);
    }
}

TEST_CASE("structural validation")
{
    CHECK_THROWS_AS(GeneratorProgram({}, true), StructuralError);
    CHECK_THROWS_AS(GeneratorProgram({ ExprNode::op_node(Op::Add), ExprNode::constant(1) }, true), StructuralError);
    CHECK_THROWS_AS(GeneratorProgram({ ExprNode::constant(1), ExprNode::constant(1) }, true), StructuralError);
    CHECK_THROWS_AS(GeneratorProgram({ ExprNode::variable(Var::Dr) }, false), StructuralError);
    CHECK_THROWS_AS(GeneratorProgram({ ExprNode::constant(NAN) }, true), StructuralError);
}

TEST_CASE("program length")
{
    CHECK(program_length(parse_program("(indeg j)")) == 1);
    CHECK(program_length(parse_program("(* (indeg j) 2)")) == 3);
    CHECK(program_length(parse_program("(> i j (psi 2 1 0) 3)")) == 8);
}

TEST_CASE("random_program: depth bound and coverage")
{
    Rng rng(42);
    TreeGenParams leaf_only { 1, 0.3, true };
    for (int k = 0; k < 1000; ++k)
        CHECK(random_program(leaf_only, rng).length() == 1);

    TreeGenParams defaults;
    std::set<Op> ops;
    std::set<Var> vars;
    bool saw_constant = false;
    for (int k = 0; k < 10000; ++k) {
        auto p = random_program(defaults, rng);
        REQUIRE(p.depth() <= 5);
        for (const auto& n : p.nodes()) {
            if (n.kind == ExprNode::Kind::Operator)
                ops.insert(n.op);
            else if (n.kind == ExprNode::Kind::Variable)
                vars.insert(n.var);
            else
                saw_constant = true;
        }
    }
    CHECK(ops.size() == kOpCount);
    CHECK(vars.size() == kVarCount);
    CHECK(saw_constant);
}

TEST_CASE("random_program: constants follow the mixed integer/real law")
{
    Rng rng(3);
    TreeGenParams leaf_only { 1, 0.3, true };
    int integral = 0;
    int constants = 0;
    for (int k = 0; k < 20000; ++k) {
        auto p = random_program(leaf_only, rng);
        const auto& n = p.nodes()[0];
        if (n.kind != ExprNode::Kind::Constant)
            continue;
        ++constants;
        REQUIRE(n.value >= 0.0);
        REQUIRE(n.value <= 10.0);
        if (n.value == std::floor(n.value))
            ++integral;
    }
    // One constant slot among ten leaf choices.
    CHECK(constants == doctest::Approx(2000).epsilon(0.15));
    CHECK(static_cast<double>(integral) / constants == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("random_program: undirected grammar restriction")
{
    Rng rng(7);
    TreeGenParams params;
    params.directed = false;
    for (int k = 0; k < 10000; ++k) {
        auto p = random_program(params, rng);
        for (const auto& n : p.nodes())
            if (n.kind == ExprNode::Kind::Variable)
                REQUIRE_FALSE(is_directed_only(n.var));
    }
}

TEST_CASE("round trip: parse(print(p)) == p")
{
    Rng rng(11);
    TreeGenParams params;
    for (int k = 0; k < 10000; ++k) {
        params.directed = (k % 2) == 0;
        auto p = random_program(params, rng);
        REQUIRE(parse_program(print_program(p), params.directed) == p);
    }
}

TEST_CASE("mutate")
{
    Rng rng(5);
    TreeGenParams params;

    SUBCASE("single leaf is replaced wholesale")
    {
        auto leaf = GeneratorProgram::constant(3.0);
        for (int k = 0; k < 200; ++k) {
            auto child = mutate(leaf, params, rng);
            CHECK(child.length() >= 1);
        }
        CHECK(leaf == GeneratorProgram::constant(3.0));
    }

    SUBCASE("fuzz: results are well formed and keep the mode")
    {
        auto p = parse_program("(+ (indeg j) (* i 2))");
        const auto original = p;
        auto q = p;
        for (int k = 0; k < 10000; ++k) {
            q = mutate((k % 50) == 0 ? p : q, params, rng);
            REQUIRE_NOTHROW(validate(q.nodes(), true));
            REQUIRE(q.length() >= 1);
        }
        CHECK(p == original);

        auto u = parse_program("(+ (indeg j) du)", false);
        for (int k = 0; k < 2000; ++k) {
            u = mutate(u, params, rng);
            REQUIRE_FALSE(u.directed());
            REQUIRE_NOTHROW(validate(u.nodes(), false));
        }
    }

    SUBCASE("deterministic for a fixed seed")
    {
        auto p = parse_program("(max (indeg i) (psi 3 j 1))");
        Rng a(99);
        Rng b(99);
        for (int k = 0; k < 100; ++k)
            REQUIRE(mutate(p, params, a) == mutate(p, params, b));
    }
}

TEST_CASE("closure: random programs on random contexts stay finite")
{
    Rng rng(2024);
    TreeGenParams params;
    for (int k = 0; k < 10000; ++k) {
        params.directed = (k % 4) != 0;
        auto p = random_program(params, rng);
        for (int c = 0; c < 5; ++c) {
            auto ctx = random_context(rng, params.directed);
            double w = 0.0;
            REQUIRE_NOTHROW(w = evaluate(p, ctx));
            REQUIRE(std::isfinite(w));
        }
    }
}

TEST_CASE("mode safety: undirected programs never read directed fields")
{
    ArcContext ctx;
    ctx.directed = false;
    CHECK_THROWS_AS((void)ctx.get(Var::Dd), StructuralError);
    Rng rng(8);
    TreeGenParams params;
    params.directed = false;
    for (int k = 0; k < 2000; ++k) {
        auto p = random_program(params, rng);
        auto c = random_context(rng, false);
        REQUIRE_NOTHROW(evaluate(p, c));
    }
}

TEST_CASE("variable mask")
{
    auto p = parse_program("(+ du (indeg j))");
    CHECK(p.variables().has(Var::Du));
    CHECK(p.variables().has(Var::IndegJ));
    CHECK_FALSE(p.variables().has(Var::Dd));
    CHECK(p.variables().any_distance());
    CHECK_FALSE(parse_program("(* i 2)").variables().any_distance());
}
