// Refutation heuristic: step mechanics, soundness on satisfiable pools,
// trace serialization, determinism, and tamper detection by check_trace.
#include <doctest.h>

#include "mubqe/refuter.hpp"
#include "test_util.hpp"

using namespace mubqe;

namespace {

std::vector<FormulaPtr> parse_pool(const std::vector<std::string>& texts, VarTable& tab) {
  std::vector<FormulaPtr> out;
  for (const std::string& t : texts) out.push_back(parse_formula(t, tab));
  return out;
}

HeuristicConfig quick_config() {
  HeuristicConfig cfg;
  cfg.step_timeout = std::chrono::milliseconds(10000);
  return cfg;
}

}  // namespace

TEST_CASE("an inconsistent pair is refuted and the trace replays") {
  VarTable tab;
  auto initial = parse_pool({"x > 0", "x < 0", "y = 0", "y - 1 = 0"}, tab);
  HeuristicConfig cfg = quick_config();
  cfg.creation_size = 2;
  cfg.elim_size = 1;
  cfg.resolution_period = 100;  // keep this run creation-only
  cfg.max_steps = 60;
  cfg.rng_seed = 7;

  ProofTrace trace = refute_pool(initial, tab, cfg, "four-atom demo pool");
  REQUIRE(trace.status == TraceStatus::Refuted);
  REQUIRE(!trace.records.empty());
  CHECK(trace.records.back().outcome == StepOutcome::Bot);
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i)
    CHECK(trace.records[i].outcome != StepOutcome::Bot);
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    CHECK(trace.records[i].index == i + 1);
    CHECK(trace.records[i].kind == StepKind::Creation);
    CHECK(trace.records[i].chosen.size() == 2);
    CHECK(trace.records[i].elim_names.size() == 1);
    CHECK(trace.records[i].inputs.size() == 2);
  }

  TraceCheck chk = check_trace(trace, Budget::with_timeout(std::chrono::milliseconds(10000)));
  CHECK(chk.ok);
  CHECK(chk.message.empty());
}

TEST_CASE("appended formulas stay inside the surviving variables") {
  VarTable tab;
  auto initial =
      parse_pool({"x + y > 0", "y - x > 0", "z^2 + y^2 = 1", "z - y >= 0", "x + z < 4"}, tab);
  HeuristicConfig cfg = quick_config();
  cfg.creation_size = 2;
  cfg.elim_size = 1;
  cfg.resolution_period = 3;
  cfg.resolution_size = 4;
  cfg.max_steps = 12;
  cfg.rng_seed = 3;

  ProofTrace trace = refute_pool(initial, tab, cfg, "mixed demo pool");
  Pool pool;
  for (const FormulaPtr& f : initial) pool.add(f, Origin::Initial);
  std::size_t appended = 0;
  for (const StepRecord& rec : trace.records) {
    std::set<std::string> span;
    for (std::size_t i : rec.chosen)
      for (VarId v : free_vars(pool.formulas[i])) span.insert(tab.name_of(v));
    for (const std::string& n : rec.elim_names) {
      CHECK(span.count(n));
      span.erase(n);
    }
    std::size_t before = pool.size();
    if (rec.outcome == StepOutcome::NewFormula) {
      FormulaPtr f = parse_formula(rec.formula, tab);
      for (VarId v : free_vars(f)) CHECK(span.count(tab.name_of(v)));
      pool.add(std::move(f), Origin::Created);
      ++appended;
      CHECK(pool.size() == before + 1);
    }
    if (rec.kind == StepKind::Resolution) {
      // resolution quantifies everything the chosen formulas mention
      CHECK(span.empty());
      CHECK(rec.outcome != StepOutcome::NewFormula);
    }
  }
  CHECK(pool.size() == initial.size() + appended);
  CHECK(check_trace(trace, Budget::with_timeout(std::chrono::milliseconds(10000))).ok);
}

TEST_CASE("resolution finds the contradiction the creation steps assembled") {
  VarTable tab;
  auto initial = parse_pool({"x > 0", "x < 0"}, tab);
  Pool pool;
  for (const FormulaPtr& f : initial) pool.add(f, Origin::Initial);
  HeuristicConfig cfg = quick_config();
  cfg.resolution_size = 2;
  SplitMix rng{5};
  StepRecord rec = resolution_step(pool, tab, cfg, rng, internal_backend());
  CHECK(rec.kind == StepKind::Resolution);
  CHECK(rec.chosen == std::vector<std::size_t>{0, 1});
  CHECK(rec.elim_names == std::vector<std::string>{"x"});
  CHECK(rec.outcome == StepOutcome::Bot);
  CHECK(pool.size() == 2);
}

TEST_CASE("independently satisfiable disjoint formulas resolve to top") {
  VarTable tab;
  auto initial = parse_pool({"x^2 = 4", "y > 3", "z + 1 = 0"}, tab);
  Pool pool;
  for (const FormulaPtr& f : initial) pool.add(f, Origin::Initial);
  HeuristicConfig cfg = quick_config();
  cfg.resolution_size = 3;
  SplitMix rng{1};
  StepRecord rec = resolution_step(pool, tab, cfg, rng, internal_backend());
  CHECK(rec.outcome == StepOutcome::Top);
  CHECK(rec.elim_names == std::vector<std::string>{"x", "y", "z"});
  CHECK(pool.size() == 3);
}

TEST_CASE("a creation step appends the eliminated image") {
  VarTable tab;
  auto initial = parse_pool({"x^2 + y^2 = 25", "x*y = 12", "x + y > 0"}, tab);
  HeuristicConfig cfg = quick_config();
  cfg.creation_size = 2;
  cfg.elim_size = 1;
  cfg.max_steps = 1;

  // find a seed whose single step pairs the circle and the hyperbola
  bool exercised = false;
  for (std::uint64_t seed = 1; seed <= 40 && !exercised; ++seed) {
    cfg.rng_seed = seed;
    ProofTrace trace = refute_pool(initial, tab, cfg, "circle-hyperbola pool");
    REQUIRE(trace.records.size() == 1);
    const StepRecord& rec = trace.records.front();
    if (rec.chosen != std::vector<std::size_t>{0, 1}) continue;
    exercised = true;
    REQUIRE(rec.outcome == StepOutcome::NewFormula);
    FormulaPtr got = parse_formula(rec.formula, tab);
    // the survivor satisfies s^4 - 25 s^2 + 144 = 0 regardless of which
    // variable was dropped
    std::set<VarId> fv = free_vars(got);
    REQUIRE(fv.size() == 1);
    std::string survivor = tab.name_of(*fv.begin());
    FormulaPtr want =
        parse_formula(survivor + "^4 - 25*" + survivor + "^2 + 144 = 0", tab);
    FormulaPtr both = f_and(f_implies(got, want), f_implies(want, got));
    QeResult eq = decide(f_forall(*fv.begin(), both), tab, Budget::unbounded());
    REQUIRE(eq.decided());
    CHECK(eq.outcome == QeOutcome::True);

    // the same step under a tiny size cap discards the formula
    HeuristicConfig capped = cfg;
    capped.size_cap = 10;
    ProofTrace small = refute_pool(initial, tab, capped, "circle-hyperbola pool");
    REQUIRE(small.records.size() == 1);
    CHECK(small.records.front().outcome == StepOutcome::Top);
    CHECK(small.records.front().formula.empty());
  }
  CHECK(exercised);
}

TEST_CASE("satisfiable small systems are never refuted") {
  for (unsigned k : {2u, 3u}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      MubSystem sys = generate_system(MubInstance{k, 2, {}});
      HeuristicConfig cfg;
      cfg.elim_size = 2;
      cfg.step_timeout = std::chrono::milliseconds(400);
      cfg.max_steps = 8;
      cfg.rng_seed = seed;
      ProofTrace trace = refute(sys, cfg);
      CHECK(trace.status == TraceStatus::Exhausted);
      for (const StepRecord& rec : trace.records) CHECK(rec.outcome != StepOutcome::Bot);
    }
  }
}

TEST_CASE("identical seeds give byte-identical traces") {
  auto run = [](std::uint64_t seed) {
    VarTable tab;
    auto initial = parse_pool({"x + y > 0", "y - x > 0", "x^2 + y^2 = 25", "x*y = 12"}, tab);
    HeuristicConfig cfg = quick_config();
    cfg.creation_size = 2;
    cfg.elim_size = 1;
    cfg.resolution_period = 4;
    cfg.resolution_size = 4;
    cfg.max_steps = 10;
    cfg.rng_seed = seed;
    return serialize_trace(refute_pool(initial, tab, cfg, "determinism pool"),
                           /*normalized=*/true);
  };
  CHECK(run(11) == run(11));
  CHECK(run(12) == run(12));
  CHECK(run(11) != run(12));
}

TEST_CASE("traces survive a serialization round trip") {
  VarTable tab;
  auto initial = parse_pool({"x > 0", "x < 0", "y = 0"}, tab);
  HeuristicConfig cfg = quick_config();
  cfg.creation_size = 2;
  cfg.elim_size = 1;
  cfg.max_steps = 30;
  cfg.rng_seed = 2;
  ProofTrace trace = refute_pool(initial, tab, cfg, "round-trip pool");

  std::string text = serialize_trace(trace);
  ProofTrace back = parse_trace(text);
  CHECK(serialize_trace(back) == text);
  CHECK(back.status == trace.status);
  CHECK(back.instance == trace.instance);
  CHECK(back.pool_hash == trace.pool_hash);
  CHECK(back.initial == trace.initial);
  REQUIRE(back.records.size() == trace.records.size());
  for (std::size_t i = 0; i < back.records.size(); ++i) {
    CHECK(back.records[i].seed_snapshot == trace.records[i].seed_snapshot);
    CHECK(back.records[i].chosen == trace.records[i].chosen);
    CHECK(back.records[i].elim_names == trace.records[i].elim_names);
    CHECK(back.records[i].outcome == trace.records[i].outcome);
    CHECK(back.records[i].elapsed_ms == trace.records[i].elapsed_ms);
  }
  CHECK(check_trace(back, Budget::with_timeout(std::chrono::milliseconds(10000))).ok);
}

TEST_CASE("malformed trace text is rejected") {
  CHECK_THROWS_AS(parse_trace("not json\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_trace("{\"trace\":\"refutation\"}\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_trace(""), std::invalid_argument);

  VarTable tab;
  auto initial = parse_pool({"x > 0", "x < 0"}, tab);
  HeuristicConfig cfg = quick_config();
  cfg.creation_size = 2;
  cfg.elim_size = 1;
  cfg.max_steps = 10;
  ProofTrace trace = refute_pool(initial, tab, cfg, "tiny");
  std::string good = serialize_trace(trace);

  // status line must agree with the records
  std::string bad = good;
  auto at = bad.find("\"creation_steps\":");
  REQUIRE(at != std::string::npos);
  bad.insert(at + std::string("\"creation_steps\":").size(), "99");
  CHECK_THROWS_AS(parse_trace(bad), std::invalid_argument);
}

TEST_CASE("an empty run yields a checkable empty trace") {
  VarTable tab;
  auto initial = parse_pool({"x = 1"}, tab);
  HeuristicConfig cfg = quick_config();
  cfg.max_steps = 0;
  ProofTrace trace = refute_pool(initial, tab, cfg, "empty run");
  CHECK(trace.status == TraceStatus::Exhausted);
  CHECK(trace.records.empty());
  ProofTrace back = parse_trace(serialize_trace(trace));
  CHECK(check_trace(back, Budget::unbounded()).ok);
}

TEST_CASE("check_trace pinpoints tampering") {
  // built once; subcases each re-enter this body
  static const ProofTrace trace = [] {
    VarTable tab;
    auto initial = parse_pool({"x + y > 0", "y - x > 0", "x^2 + y^2 = 25", "x*y = 12"}, tab);
    HeuristicConfig cfg = quick_config();
    cfg.creation_size = 2;
    cfg.elim_size = 1;
    cfg.resolution_period = 4;
    cfg.resolution_size = 4;
    cfg.max_steps = 12;
    cfg.rng_seed = 11;
    return refute_pool(initial, tab, cfg, "tamper pool");
  }();
  auto budget = [] { return Budget::with_timeout(std::chrono::milliseconds(10000)); };
  static const bool base_ok = check_trace(trace, budget()).ok;
  REQUIRE(base_ok);

  SUBCASE("corrupted pool hash") {
    ProofTrace t = trace;
    t.pool_hash = "fnv1a:0000000000000000";
    TraceCheck chk = check_trace(t, budget());
    CHECK(!chk.ok);
    CHECK(chk.step == 0);
  }
  SUBCASE("corrupted selection") {
    ProofTrace t = trace;
    REQUIRE(!t.records.empty());
    t.records[0].chosen = {0, t.records[0].chosen[1] == 1 ? std::size_t{2} : std::size_t{1}};
    TraceCheck chk = check_trace(t, budget());
    CHECK(!chk.ok);
    CHECK(chk.step == 1);
  }
  SUBCASE("corrupted seed stream") {
    ProofTrace t = trace;
    REQUIRE(t.records.size() >= 2);
    t.records[1].seed_snapshot ^= 1;
    TraceCheck chk = check_trace(t, budget());
    CHECK(!chk.ok);
    CHECK(chk.step == 2);
  }
  SUBCASE("forged appended formula") {
    ProofTrace t = trace;
    std::size_t target = t.records.size();
    for (std::size_t i = 0; i < t.records.size(); ++i)
      if (t.records[i].outcome == StepOutcome::NewFormula) {
        target = i;
        break;
      }
    REQUIRE(target < t.records.size());
    VarTable scratch;
    t.records[target].formula =
        print_formula(parse_formula("y - 137 > 0", scratch), scratch);
    // everything after the forgery is rebuilt on a different pool, so the
    // check must stop at or after the forged step, never pass
    TraceCheck chk = check_trace(t, budget());
    CHECK(!chk.ok);
    CHECK(chk.step >= target + 1);
  }
  SUBCASE("flipped terminal status") {
    ProofTrace t = trace;
    t.status = t.status == TraceStatus::Refuted ? TraceStatus::Exhausted : TraceStatus::Refuted;
    CHECK(!check_trace(t, budget()).ok);
  }
  SUBCASE("records appended after a refutation") {
    VarTable tt;
    auto contradictory = parse_pool({"x > 0", "x < 0"}, tt);
    HeuristicConfig c2 = quick_config();
    c2.creation_size = 2;
    c2.elim_size = 1;
    c2.max_steps = 30;
    ProofTrace t = refute_pool(contradictory, tt, c2, "contradiction");
    REQUIRE(t.status == TraceStatus::Refuted);
    StepRecord extra = t.records.back();
    extra.index = t.records.size() + 1;
    t.records.push_back(extra);
    CHECK(!check_trace(t, budget()).ok);
  }
}

TEST_CASE("refutation traces of mub systems carry the system serialization") {
  MubSystem sys = generate_system(MubInstance{2, 2, {}});
  std::string expected = serialize_mub_system(sys);
  HeuristicConfig cfg;
  cfg.elim_size = 2;
  cfg.step_timeout = std::chrono::milliseconds(800);
  cfg.max_steps = 4;
  ProofTrace trace = refute(sys, cfg);
  CHECK(trace.instance == expected);
  std::size_t nonzero = 0;
  for (const MubEquation& eq : sys.equations)
    if (!eq.lhs.is_zero()) ++nonzero;
  CHECK(trace.initial.size() == nonzero + sys.side_conditions.size());
  ProofTrace back = parse_trace(serialize_trace(trace));
  CHECK(back.instance == expected);
}
