#include "doctest.h"

#include <random>

#include "mbtg/frontend.hpp"
#include "mbtg/semantics.hpp"

#include "fixtures.hpp"

using namespace mbtg;

namespace {

Value var_of(const Model& m, const Valuation& v, const char* name) {
    return v.slots[static_cast<size_t>(m.var_slot[static_cast<size_t>(m.var_index(name))])];
}

bool in_state(const Model& m, const Valuation& v, const char* path) {
    return eval_expr(parse_state_formula(path, m), m, v) != 0;
}

}  // namespace

TEST_CASE("initial valuation matches the declarations") {
    const Model& m = fixtures::corpus();
    Valuation v = initial_valuation(m);
    CHECK(v.time() == 0);
    CHECK(var_of(m, v, "Voltage") == 100);
    CHECK(var_of(m, v, "FlashLeft") == 0);
    CHECK(in_state(m, v, "EMER_OFF"));
    CHECK(in_state(m, v, "Idle"));
}

TEST_CASE("stimulated inputs become visible one step before machines react") {
    const Model& m = fixtures::corpus();
    Valuation v0 = initial_valuation(m);

    Stimulus s;
    s.time = 0;
    s.inputs[m.var_index("EmerFlash")] = 1;
    StepResult r1 = step(m, v0, s);
    // the input is written, but the guard was evaluated on the pre state
    CHECK(var_of(m, r1.post, "EmerFlash") == 1);
    CHECK(in_state(m, r1.post, "EMER_OFF"));
    CHECK(var_of(m, r1.post, "Left") == 0);

    // one zero-delay step later FLASH_CTRL reacts
    StepResult r2 = step(m, r1.post, Stimulus{0, {}});
    CHECK(in_state(m, r2.post, "EMER_ACTIVE"));
    CHECK(var_of(m, r2.post, "Left") == 1);
    CHECK(var_of(m, r2.post, "Right") == 1);
}

TEST_CASE("step rejects bad stimuli") {
    const Model& m = fixtures::corpus();
    Valuation v0 = initial_valuation(m);
    Stimulus bad;
    bad.time = 0;
    bad.inputs[m.var_index("Voltage")] = 101;  // above the domain
    CHECK_THROWS_AS(step(m, v0, bad), std::invalid_argument);

    StepResult r = step(m, v0, Stimulus{10, {}});
    CHECK_THROWS_AS(step(m, r.post, Stimulus{5, {}}), std::invalid_argument);  // time decrease
}

TEST_CASE("reactive run: emergency flashing cycle timeline") {
    // Frozen end-to-end timeline: EmerFlash=1 at t=0, observed to 1000 ms.
    // Lamps on at t=0 (after the two reaction steps), off at 340, on again at
    // 660, off at 1000.
    const Model& m = fixtures::corpus();
    Stimulus s;
    s.time = 0;
    s.inputs[m.var_index("EmerFlash")] = 1;
    ReactiveRun rr = run_reactive(m, {s}, 1000);

    REQUIRE(rr.trace.size() == 10);
    const Value expect_t[10] = {0, 0, 0, 0, 340, 340, 660, 660, 1000, 1000};
    const Value expect_fl[10] = {0, 0, 0, 1, 1, 0, 0, 1, 1, 0};
    for (size_t i = 0; i < 10; ++i) {
        CHECK(rr.trace[i].time() == expect_t[i]);
        CHECK(var_of(m, rr.trace[i], "FlashLeft") == expect_fl[i]);
        CHECK(var_of(m, rr.trace[i], "FlashRight") == expect_fl[i]);
    }
    CHECK(rr.stimuli.size() == rr.trace.size() - 1);
    CHECK(rr.fired.size() == rr.stimuli.size());
}

TEST_CASE("reactive run replay is idempotent") {
    const Model& m = fixtures::corpus();
    Stimulus s;
    s.time = 0;
    s.inputs[m.var_index("EmerFlash")] = 1;
    ReactiveRun once = run_reactive(m, {s}, 1000);
    ReactiveRun twice = run_reactive(m, once.stimuli, 1000);
    CHECK(once.trace == twice.trace);
}

TEST_CASE("transition relation agrees with the interpreter") {
    const Model& m = fixtures::tiny();
    TransitionRelation rel = build_relation(m);
    std::mt19937 gen(42);
    std::uniform_int_distribution<int> abit(0, 1), bval(0, 3), dt(0, 2);

    Valuation cur = initial_valuation(m);
    for (int i = 0; i < 300; ++i) {
        Stimulus s;
        s.time = cur.time() + dt(gen);
        s.inputs[m.var_index("a")] = abit(gen);
        s.inputs[m.var_index("b")] = bval(gen);
        StepResult r = step(m, cur, s);
        CHECK(rel.holds(cur, r.post));

        // flipping an owned output without a firing transition leaves the relation
        Valuation wrong = r.post;
        size_t yslot = static_cast<size_t>(m.var_slot[static_cast<size_t>(m.var_index("y"))]);
        wrong.slots[yslot] = 1 - wrong.slots[yslot];
        CHECK(!rel.holds(cur, wrong));
        cur = r.post;
    }
}

TEST_CASE("same-depth enabled transitions raise AmbiguityError") {
    Model m = parse_model(R"(model amb {
      in a : bool init 0
      out y : int 0..2 init 0
      machine M {
        state S initial {
          on a / y := 1 -> T
          on a / y := 2 -> T
        }
        state T { }
      }
    })", "amb.mbt");
    Valuation v0 = initial_valuation(m);
    Stimulus s;
    s.time = 0;
    s.inputs[m.var_index("a")] = 1;
    StepResult r = step(m, v0, s);  // 'a' not yet visible to guards: no tie yet
    CHECK_THROWS_AS(step(m, r.post, Stimulus{0, {}}), AmbiguityError);
}

TEST_CASE("interval_reach bounds and rules out goals") {
    const Model& m = fixtures::corpus();
    // true initially
    std::optional<int> d0 = interval_reach(m, parse_state_formula("Voltage == 100", m));
    REQUIRE(d0.has_value());
    CHECK(*d0 == 0);
    // outside every domain: unreachable at any depth
    CHECK(!interval_reach(m, parse_state_formula("Voltage > 100", m)).has_value());
    CHECK(!interval_reach(m, parse_state_formula("FlashCtr > 3", m)).has_value());
    // reachable but not initial: strictly positive lower bound, and sound
    std::optional<int> d1 = interval_reach(m, parse_state_formula("FlashLeft == 1", m));
    REQUIRE(d1.has_value());
    CHECK(*d1 >= 1);
    CHECK(*d1 <= 3);  // the interpreter reaches it in three steps
}
