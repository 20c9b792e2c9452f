#include "doctest.h"

#include "mbtg/frontend.hpp"

#include "fixtures.hpp"

using namespace mbtg;

TEST_CASE("corpus model parses, binds, and validates cleanly") {
    const Model& m = fixtures::corpus();
    CHECK(m.name == "turn_indicator");
    CHECK(m.machines.size() == 2);
    CHECK(m.variables.size() == 10);
    CHECK(m.requirements.size() == 9);
    CHECK(validate(m).empty());

    int inputs = 0, outputs = 0;
    for (const VariableDecl& v : m.variables) {
        if (v.kind == VarKind::Input) ++inputs;
        if (v.kind == VarKind::Output) ++outputs;
    }
    CHECK(inputs == 3);
    CHECK(outputs == 2);
}

TEST_CASE("corpus basic states and transition structure") {
    const Model& m = fixtures::corpus();
    int basic = 0;
    for (const ControlState& s : m.states)
        if (s.is_basic()) ++basic;
    CHECK(basic == 6);  // EMER_OFF, EMER_ACTIVE, TURN_IND_OVERRIDE, Idle, ON, OFF

    int do_transitions = 0;
    for (const Transition& t : m.transitions)
        if (t.is_do) ++do_transitions;
    CHECK(do_transitions == 2);
    CHECK(m.transitions.size() == 11);
}

TEST_CASE("state_index resolves paths and flags ambiguity") {
    const Model& m = fixtures::corpus();
    CHECK(m.state_index("EMER_OFF") >= 0);
    CHECK(m.state_index("FLASH_CTRL.EMER_ON.EMER_ACTIVE") ==
          m.state_index("EMER_ACTIVE"));
    CHECK(m.state_index("NOPE") == -1);

    Model two = parse_model(R"(model two {
      in a : bool init 0
      machine M1 { state S initial { } }
      machine M2 { state S initial { } }
    })", "two.mbt");
    CHECK(two.state_index("S") == -2);  // ambiguous short name
    CHECK(two.state_index("M1.S") >= 0);
}

TEST_CASE("pretty_print round-trips the corpus") {
    const Model& m = fixtures::corpus();
    std::string once = pretty_print(m);
    Model again = parse_model(once, "roundtrip.mbt");
    CHECK(pretty_print(again) == once);
    CHECK(validate(again).empty());
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_model("model broken {", "b.mbt"), ParseError);
    CHECK_THROWS_AS(parse_model(R"(model m {
      in a : bool init 0
      machine M { state S initial { on a -> T } }
    })", "b.mbt"), ParseError);  // unknown target state
    // satisfies link to a nonexistent transition
    CHECK_THROWS_AS(parse_model(R"(model m {
      in a : bool init 0
      machine M { state S initial { } state T { } }
      req R-1 "x" satisfies T -> S
    })", "b.mbt"), ParseError);
}

TEST_CASE("validate reports out-of-domain initial values") {
    Model m = parse_model(R"(model m {
      in a : int 0..3 init 7
      machine M { state S initial { } }
    })", "v.mbt");
    CHECK(!validate(m).empty());
}

TEST_CASE("trace log parsing") {
    const Model& m = fixtures::corpus();
    TraceLog log = parse_trace_log(
        "# comment\n"
        "t=0 EmerFlash=1\n"
        "t=10 FlashLeft=1 FlashRight=1\n",
        m);
    REQUIRE(log.records.size() == 3);
    CHECK(log.records[0].t == 0);
    CHECK(log.records[1].var == "FlashLeft");
    CHECK(log.records[2].t == 10);

    // decreasing timestamps rejected
    CHECK_THROWS_AS(parse_trace_log("t=5 EmerFlash=1\nt=4 EmerFlash=0\n", m), ParseError);
    // internal variables never appear in observable logs
    CHECK_THROWS_AS(parse_trace_log("t=0 Left=1\n", m), ParseError);
    CHECK_THROWS_AS(parse_trace_log("t=0 Bogus=1\n", m), ParseError);
}

TEST_CASE("trace log print/parse round-trip") {
    const Model& m = fixtures::corpus();
    TraceLog log = parse_trace_log("t=0 EmerFlash=1\nt=340 FlashLeft=0\n", m);
    std::string text = print_trace_log(log);
    TraceLog again = parse_trace_log(text, m);
    CHECK(print_trace_log(again) == text);
}

TEST_CASE("ltl parsing binds identifiers against the model") {
    const Model& m = fixtures::corpus();
    LtlFormula f = parse_ltl("F (OFF && elapsed(OFF) >= 320)", m);
    CHECK(to_string(f) == to_string(parse_ltl(to_string(f), m)));
    CHECK_THROWS_AS(parse_ltl("F (NoSuchThing == 1)", m), ParseError);
}
