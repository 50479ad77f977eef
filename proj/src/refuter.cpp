#include "mubqe/refuter.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "mubqe/realalg.hpp"
#include "mubqe/unipoly.hpp"

namespace mubqe {
namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string pool_hash_of(const std::string& instance, const std::vector<std::string>& initial) {
  std::uint64_t h = fnv1a(instance + "\n", 14695981039346656037ULL);
  for (const std::string& t : initial) h = fnv1a(t + "\n", h);
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// count indices from [0, n), uniform without replacement, returned ascending
std::vector<std::size_t> draw_indices(SplitMix& rng, std::size_t n, std::size_t count) {
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  for (std::size_t i = 0; i < count; ++i)
    std::swap(all[i], all[i + rng.below(n - i)]);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

// weighted without replacement; a zero total weight would be a caller bug
std::vector<std::size_t> draw_weighted(SplitMix& rng, std::vector<std::uint64_t> weights,
                                       std::size_t count) {
  std::vector<std::size_t> out;
  for (std::size_t round = 0; round < count; ++round) {
    std::uint64_t total = 0;
    for (std::uint64_t w : weights) total += w;
    std::uint64_t r = rng.below(total);
    std::size_t pick = 0;
    while (r >= weights[pick]) {
      r -= weights[pick];
      ++pick;
    }
    out.push_back(pick);
    weights[pick] = 0;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Union of the variable names of the chosen formulas, sorted. Draws run over
// names rather than ids so a replay in a freshly populated table makes the
// same choices.
std::vector<std::string> var_union(const Pool& pool, const std::vector<std::size_t>& chosen,
                                   const VarTable& names) {
  std::set<std::string> u;
  for (std::size_t i : chosen)
    for (VarId v : free_vars(pool.formulas[i])) u.insert(names.name_of(v));
  return {u.begin(), u.end()};
}

Budget step_budget(const HeuristicConfig& cfg, Clock::time_point hard_deadline) {
  Budget b = Budget::with_timeout(cfg.step_timeout);
  if (hard_deadline < b.deadline) b.deadline = hard_deadline;
  return b;
}

struct Classified {
  StepOutcome outcome;
  std::string text;
  FormulaPtr result;  // set for NewFormula
};

Classified classify(const QeResult& q, const HeuristicConfig& cfg, const VarTable& names) {
  switch (q.outcome) {
    case QeOutcome::TimedOut: return {StepOutcome::TimedOut, "", nullptr};
    case QeOutcome::BudgetExceeded: return {StepOutcome::BudgetExceeded, "", nullptr};
    case QeOutcome::True: return {StepOutcome::Top, "", nullptr};
    case QeOutcome::False: return {StepOutcome::Bot, "", nullptr};
    case QeOutcome::Formula: break;
  }
  if (q.formula->kind() == FKind::False) return {StepOutcome::Bot, "", nullptr};
  if (q.formula->kind() == FKind::True) return {StepOutcome::Top, "", nullptr};
  std::string text = print_formula(q.formula, names);
  if (text.size() > cfg.size_cap) return {StepOutcome::Top, "", nullptr};
  return {StepOutcome::NewFormula, std::move(text), q.formula};
}

StepRecord run_step(Pool& pool, VarTable& names, const HeuristicConfig& cfg, SplitMix& rng,
                    const QeBackend& backend, Clock::time_point hard_deadline, StepKind kind) {
  StepRecord rec;
  rec.kind = kind;
  rec.seed_snapshot = rng.state;

  if (kind == StepKind::Creation) {
    std::size_t s = std::min<std::size_t>(cfg.creation_size, pool.size());
    rec.chosen = draw_indices(rng, pool.size(), s);
    std::vector<std::string> u = var_union(pool, rec.chosen, names);
    std::size_t nv = std::min<std::size_t>(cfg.elim_size, u.size());
    for (std::size_t i : draw_indices(rng, u.size(), nv)) rec.elim_names.push_back(u[i]);
  } else {
    std::size_t s = std::min<std::size_t>(cfg.resolution_size, pool.size());
    std::vector<std::uint64_t> weights(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
      weights[i] = pool.origins[i] == Origin::Created ? 2 : 1;
    rec.chosen = draw_weighted(rng, std::move(weights), s);
    rec.elim_names = var_union(pool, rec.chosen, names);
  }

  std::vector<FormulaPtr> selected;
  for (std::size_t i : rec.chosen) {
    selected.push_back(pool.formulas[i]);
    rec.inputs.push_back(print_formula(pool.formulas[i], names));
  }
  std::set<VarId> elim;
  for (const std::string& name : rec.elim_names) elim.insert(names.id_of(name));

  auto t0 = Clock::now();
  QeResult q = backend(f_and_all(selected), elim, names, step_budget(cfg, hard_deadline));
  rec.elapsed_ms = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0).count());

  Classified c = classify(q, cfg, names);
  rec.outcome = c.outcome;
  rec.formula = std::move(c.text);
  if (rec.outcome == StepOutcome::NewFormula) pool.add(std::move(c.result), Origin::Created);
  return rec;
}

}  // namespace

const char* step_kind_name(StepKind k) {
  return k == StepKind::Creation ? "creation" : "resolution";
}

const char* step_outcome_name(StepOutcome o) {
  switch (o) {
    case StepOutcome::NewFormula: return "new-formula";
    case StepOutcome::Bot: return "bot";
    case StepOutcome::Top: return "top";
    case StepOutcome::TimedOut: return "timeout";
    case StepOutcome::BudgetExceeded: return "budget";
  }
  return "?";
}

namespace {

StepKind step_kind_from_name(const std::string& s) {
  if (s == "creation") return StepKind::Creation;
  if (s == "resolution") return StepKind::Resolution;
  throw std::invalid_argument("unknown step kind: " + s);
}

StepOutcome step_outcome_from_name(const std::string& s) {
  if (s == "new-formula") return StepOutcome::NewFormula;
  if (s == "bot") return StepOutcome::Bot;
  if (s == "top") return StepOutcome::Top;
  if (s == "timeout") return StepOutcome::TimedOut;
  if (s == "budget") return StepOutcome::BudgetExceeded;
  throw std::invalid_argument("unknown step outcome: " + s);
}

}  // namespace

std::size_t ProofTrace::creation_steps() const {
  std::size_t n = 0;
  for (const StepRecord& r : records)
    if (r.kind == StepKind::Creation) ++n;
  return n;
}

QeBackend internal_backend() {
  return [](const FormulaPtr& f, const std::set<VarId>& vars, VarTable& names,
            const Budget& budget) { return eliminate(f, vars, names, budget); };
}

StepRecord creation_step(Pool& pool, VarTable& names, const HeuristicConfig& cfg, SplitMix& rng,
                         const QeBackend& backend, Clock::time_point hard_deadline) {
  return run_step(pool, names, cfg, rng, backend, hard_deadline, StepKind::Creation);
}

StepRecord resolution_step(Pool& pool, VarTable& names, const HeuristicConfig& cfg, SplitMix& rng,
                           const QeBackend& backend, Clock::time_point hard_deadline) {
  return run_step(pool, names, cfg, rng, backend, hard_deadline, StepKind::Resolution);
}

ProofTrace refute_pool(const std::vector<FormulaPtr>& initial, VarTable& names,
                       const HeuristicConfig& cfg, const std::string& instance,
                       const QeBackend& backend) {
  ProofTrace trace;
  trace.config = cfg;
  trace.instance = instance;

  Pool pool;
  for (const FormulaPtr& f : initial) {
    pool.add(f, Origin::Initial);
    trace.initial.push_back(print_formula(f, names));
  }
  trace.pool_hash = pool_hash_of(instance, trace.initial);

  SplitMix rng{cfg.rng_seed};
  Clock::time_point hard = cfg.global_timeout.count() > 0 ? Clock::now() + cfg.global_timeout
                                                          : Clock::time_point::max();
  std::size_t index = 0;
  bool refuted = false;
  for (std::size_t step = 1; step <= cfg.max_steps && !refuted; ++step) {
    if (Clock::now() > hard) break;
    StepRecord rec = creation_step(pool, names, cfg, rng, backend, hard);
    rec.index = ++index;
    refuted = rec.outcome == StepOutcome::Bot;
    trace.records.push_back(std::move(rec));
    if (refuted) break;

    if (step % cfg.resolution_period == 0 && pool.size() >= cfg.resolution_size) {
      if (Clock::now() > hard) break;
      StepRecord res = resolution_step(pool, names, cfg, rng, backend, hard);
      res.index = ++index;
      refuted = res.outcome == StepOutcome::Bot;
      trace.records.push_back(std::move(res));
    }
  }
  trace.status = refuted ? TraceStatus::Refuted : TraceStatus::Exhausted;
  return trace;
}

ProofTrace refute(MubSystem& sys, const HeuristicConfig& cfg, const QeBackend& backend) {
  std::vector<FormulaPtr> initial;
  for (const MubEquation& eq : sys.equations) {
    if (eq.lhs.is_zero()) continue;  // trivially true equation
    FormulaPtr a = f_atom(eq.lhs, Rel::Eq);
    if (a->kind() != FKind::True) initial.push_back(std::move(a));
  }
  for (const FormulaPtr& sc : sys.side_conditions) initial.push_back(sc);
  return refute_pool(initial, sys.names, cfg, serialize_mub_system(sys), backend);
}

// --- trace serialization ----------------------------------------------------

namespace {

json config_to_json(const HeuristicConfig& c) {
  return json{{"creation_size", c.creation_size},
              {"elim_size", c.elim_size},
              {"resolution_period", c.resolution_period},
              {"resolution_size", c.resolution_size},
              {"step_timeout_ms", c.step_timeout.count()},
              {"max_steps", c.max_steps},
              {"global_timeout_ms", c.global_timeout.count()},
              {"rng_seed", c.rng_seed},
              {"size_cap", c.size_cap}};
}

HeuristicConfig config_from_json(const json& j) {
  HeuristicConfig c;
  c.creation_size = j.at("creation_size").get<unsigned>();
  c.elim_size = j.at("elim_size").get<unsigned>();
  c.resolution_period = j.at("resolution_period").get<unsigned>();
  c.resolution_size = j.at("resolution_size").get<unsigned>();
  c.step_timeout = std::chrono::milliseconds(j.at("step_timeout_ms").get<std::int64_t>());
  c.max_steps = j.at("max_steps").get<std::size_t>();
  c.global_timeout = std::chrono::milliseconds(j.at("global_timeout_ms").get<std::int64_t>());
  c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  c.size_cap = j.at("size_cap").get<std::size_t>();
  return c;
}

}  // namespace

std::string serialize_trace(const ProofTrace& trace, bool normalized) {
  std::string out;
  json head{{"trace", "refutation"},
            {"version", 1},
            {"instance", trace.instance},
            {"pool_hash", trace.pool_hash},
            {"config", config_to_json(trace.config)},
            {"initial", trace.initial}};
  out += head.dump();
  out += '\n';
  for (const StepRecord& rec : trace.records) {
    json j{{"index", rec.index},
           {"kind", step_kind_name(rec.kind)},
           {"seed", rec.seed_snapshot},
           {"S", rec.chosen},
           {"V", rec.elim_names},
           {"inputs", rec.inputs},
           {"outcome", step_outcome_name(rec.outcome)},
           {"elapsed_ms", normalized ? 0 : rec.elapsed_ms}};
    if (rec.outcome == StepOutcome::NewFormula) j["formula"] = rec.formula;
    out += j.dump();
    out += '\n';
  }
  json tail{{"status", trace.status == TraceStatus::Refuted ? "refuted" : "exhausted"},
            {"creation_steps", trace.creation_steps()}};
  out += tail.dump();
  out += '\n';
  return out;
}

ProofTrace parse_trace(const std::string& text) {
  std::vector<json> lines;
  std::size_t pos = 0;
  try {
    while (pos < text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      std::string line = text.substr(pos, nl - pos);
      pos = nl + 1;
      if (line.empty()) continue;
      lines.push_back(json::parse(line));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed trace: ") + e.what());
  }
  if (lines.size() < 2) throw std::invalid_argument("malformed trace: missing header or status");

  ProofTrace trace;
  try {
    const json& head = lines.front();
    if (head.at("trace").get<std::string>() != "refutation" || head.at("version").get<int>() != 1)
      throw std::invalid_argument("malformed trace: unknown header");
    trace.instance = head.at("instance").get<std::string>();
    trace.pool_hash = head.at("pool_hash").get<std::string>();
    trace.config = config_from_json(head.at("config"));
    trace.initial = head.at("initial").get<std::vector<std::string>>();

    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      const json& j = lines[i];
      StepRecord rec;
      rec.index = j.at("index").get<std::size_t>();
      rec.kind = step_kind_from_name(j.at("kind").get<std::string>());
      rec.seed_snapshot = j.at("seed").get<std::uint64_t>();
      rec.chosen = j.at("S").get<std::vector<std::size_t>>();
      rec.elim_names = j.at("V").get<std::vector<std::string>>();
      rec.inputs = j.at("inputs").get<std::vector<std::string>>();
      rec.outcome = step_outcome_from_name(j.at("outcome").get<std::string>());
      rec.elapsed_ms = j.at("elapsed_ms").get<std::uint64_t>();
      if (rec.outcome == StepOutcome::NewFormula)
        rec.formula = j.at("formula").get<std::string>();
      else if (j.contains("formula"))
        throw std::invalid_argument("malformed trace: formula on a non-appending step");
      trace.records.push_back(std::move(rec));
    }

    const json& tail = lines.back();
    std::string status = tail.at("status").get<std::string>();
    if (status == "refuted")
      trace.status = TraceStatus::Refuted;
    else if (status == "exhausted")
      trace.status = TraceStatus::Exhausted;
    else
      throw std::invalid_argument("malformed trace: unknown status " + status);
    if (tail.at("creation_steps").get<std::size_t>() != trace.creation_steps())
      throw std::invalid_argument("malformed trace: creation step count mismatch");
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed trace: ") + e.what());
  }
  return trace;
}

// --- trace checking ---------------------------------------------------------

namespace {

Rational small_rational(SplitMix& rng) {
  long num = static_cast<long>(rng.below(17)) - 8;
  long den = 1 + static_cast<long>(rng.below(4));
  Rational q(num, den);
  q.canonicalize();
  return q;
}

void collect_atoms(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  switch (f->kind()) {
    case FKind::Atom: out.push_back(f); return;
    case FKind::And:
    case FKind::Or:
    case FKind::Implies:
      collect_atoms(f->left(), out);
      collect_atoms(f->right(), out);
      return;
    case FKind::Not: collect_atoms(f->child(), out); return;
    case FKind::Exists:
    case FKind::Forall: collect_atoms(f->child(), out); return;
    default: return;
  }
}

// Point-sampling equivalence over the union of free variables: plain random
// rational points, plus points on the zero set of single atoms (random
// rationals for all variables but one, then the real roots in that one),
// since random points alone almost never land on an equation.
bool sampled_equivalent(const FormulaPtr& a, const FormulaPtr& b, std::uint64_t seed) {
  std::set<VarId> vs = free_vars(a);
  for (VarId v : free_vars(b)) vs.insert(v);
  std::vector<VarId> vars(vs.begin(), vs.end());
  SplitMix rng{seed ^ 0x5a3c2e1d9b7f5ee3ULL};

  auto agree = [&](const Valuation& val) { return evaluate(a, val) == evaluate(b, val); };

  for (int t = 0; t < 24; ++t) {
    Valuation val;
    for (VarId v : vars) val.emplace(v, RealAlgebraic::from_rational(small_rational(rng)));
    if (!agree(val)) return false;
  }

  std::vector<FormulaPtr> atoms;
  collect_atoms(a, atoms);
  collect_atoms(b, atoms);
  if (atoms.empty() || vars.empty()) return true;
  for (int t = 0; t < 24; ++t) {
    const FormulaPtr& atom = atoms[rng.below(atoms.size())];
    std::vector<VarId> avars(atom->lhs().vars().begin(), atom->lhs().vars().end());
    if (avars.empty()) continue;
    VarId pivot = avars[rng.below(avars.size())];
    Poly p = atom->lhs();
    Valuation val;
    for (VarId v : vars) {
      if (v == pivot) continue;
      Rational r = small_rational(rng);
      val.emplace(v, RealAlgebraic::from_rational(r));
      if (p.mentions(v)) p = p.subst(v, r);
    }
    if (p.is_constant() || p.degree_in(pivot) < 1) continue;
    std::vector<RealAlgebraic> roots = real_roots(UniPoly::from_poly(p, pivot));
    for (std::size_t i = 0; i < roots.size() && i < 4; ++i) {
      Valuation point = val;
      point.emplace(pivot, roots[i]);
      if (!agree(point)) return false;
    }
  }
  return true;
}

// closed biconditional decided by the internal engine; falls back to nothing
// on timeout (caller then samples)
QeOutcome bicond_outcome(const FormulaPtr& a, const FormulaPtr& b, VarTable& names,
                         const Budget& budget) {
  FormulaPtr both = f_and(f_implies(a, b), f_implies(b, a));
  std::set<VarId> free = free_vars(both);
  for (auto it = free.rbegin(); it != free.rend(); ++it) both = f_forall(*it, both);
  return decide(both, names, budget).outcome;
}

TraceCheck fail_at(std::size_t step, std::string message) {
  return TraceCheck{false, step, std::move(message)};
}

}  // namespace

TraceCheck check_trace(const ProofTrace& trace, const Budget& per_step, const QeBackend& backend) {
  VarTable names;
  Pool pool;
  for (const std::string& t : trace.initial) {
    FormulaPtr f;
    try {
      f = parse_formula(t, names);
    } catch (const std::exception& e) {
      return fail_at(0, std::string("initial formula does not parse: ") + e.what());
    }
    if (print_formula(f, names) != t) return fail_at(0, "initial formula not canonical: " + t);
    pool.add(std::move(f), Origin::Initial);
  }
  if (pool_hash_of(trace.instance, trace.initial) != trace.pool_hash)
    return fail_at(0, "pool hash mismatch");

  const HeuristicConfig& cfg = trace.config;
  SplitMix rng{cfg.rng_seed};
  std::size_t creations = 0;
  bool expect_resolution = false;
  bool refuted = false;

  for (std::size_t r = 0; r < trace.records.size(); ++r) {
    const StepRecord& rec = trace.records[r];
    std::size_t at = rec.index;
    if (refuted) return fail_at(at, "records continue after a refutation");
    if (rec.index != r + 1) return fail_at(at, "step index out of sequence");
    if (rec.kind != (expect_resolution ? StepKind::Resolution : StepKind::Creation))
      return fail_at(at, "step kind breaks the schedule");
    if (rec.seed_snapshot != rng.state) return fail_at(at, "seed snapshot breaks the stream");

    // replay the draws
    std::vector<std::size_t> chosen;
    std::vector<std::string> elim_names;
    if (rec.kind == StepKind::Creation) {
      std::size_t s = std::min<std::size_t>(cfg.creation_size, pool.size());
      chosen = draw_indices(rng, pool.size(), s);
      std::vector<std::string> u = var_union(pool, chosen, names);
      std::size_t nv = std::min<std::size_t>(cfg.elim_size, u.size());
      for (std::size_t i : draw_indices(rng, u.size(), nv)) elim_names.push_back(u[i]);
    } else {
      std::size_t s = std::min<std::size_t>(cfg.resolution_size, pool.size());
      std::vector<std::uint64_t> weights(pool.size());
      for (std::size_t i = 0; i < pool.size(); ++i)
        weights[i] = pool.origins[i] == Origin::Created ? 2 : 1;
      chosen = draw_weighted(rng, std::move(weights), s);
      elim_names = var_union(pool, chosen, names);
    }
    if (chosen != rec.chosen) return fail_at(at, "formula selection does not replay");
    if (elim_names != rec.elim_names) return fail_at(at, "variable selection does not replay");
    if (rec.inputs.size() != chosen.size()) return fail_at(at, "input count mismatch");
    for (std::size_t i = 0; i < chosen.size(); ++i)
      if (print_formula(pool.formulas[chosen[i]], names) != rec.inputs[i])
        return fail_at(at, "recorded input differs from the pool");

    if (rec.outcome == StepOutcome::Bot || rec.outcome == StepOutcome::Top ||
        rec.outcome == StepOutcome::NewFormula) {
      std::vector<FormulaPtr> selected;
      for (std::size_t i : chosen) selected.push_back(pool.formulas[i]);
      std::set<VarId> elim;
      for (const std::string& n : elim_names) elim.insert(names.id_of(n));
      QeResult q = backend(f_and_all(selected), elim, names, per_step);

      bool got_false = q.outcome == QeOutcome::False ||
                       (q.outcome == QeOutcome::Formula && q.formula->kind() == FKind::False);
      bool got_true = q.outcome == QeOutcome::True ||
                      (q.outcome == QeOutcome::Formula && q.formula->kind() == FKind::True);

      if (rec.outcome == StepOutcome::Bot) {
        // the load-bearing step: must reproduce outright
        if (!got_false) return fail_at(at, "refutation step does not reproduce");
      } else if (rec.outcome == StepOutcome::Top) {
        if (got_false) return fail_at(at, "discarded step is actually a refutation");
        if (q.outcome == QeOutcome::Formula && !got_true &&
            print_formula(q.formula, names).size() <= cfg.size_cap)
          return fail_at(at, "discarded step reproduces a usable formula");
        // a timeout here leaves the step unverified; it carried no result
      } else {
        if (!q.decided()) return fail_at(at, "appended step does not recompute in budget");
        if (got_false || got_true || q.outcome != QeOutcome::Formula)
          return fail_at(at, "appended step recomputes to a constant");
        FormulaPtr recorded;
        try {
          recorded = parse_formula(rec.formula, names);
        } catch (const std::exception& e) {
          return fail_at(at, std::string("recorded formula does not parse: ") + e.what());
        }
        if (print_formula(recorded, names) != rec.formula)
          return fail_at(at, "recorded formula not canonical");

        std::set<VarId> allowed;
        for (const FormulaPtr& s : selected)
          for (VarId v : free_vars(s)) allowed.insert(v);
        for (VarId v : elim) allowed.erase(v);
        for (VarId v : free_vars(recorded))
          if (!allowed.count(v)) return fail_at(at, "appended formula mentions a removed variable");

        if (!equal(recorded, q.formula)) {
          std::set<VarId> span = free_vars(recorded);
          for (VarId v : free_vars(q.formula)) span.insert(v);
          bool settled = false;
          if (span.size() <= 4) {
            QeOutcome o = bicond_outcome(recorded, q.formula, names, per_step);
            if (o == QeOutcome::False) return fail_at(at, "recorded formula is not equivalent");
            settled = o == QeOutcome::True;
          }
          if (!settled && !sampled_equivalent(recorded, q.formula, rec.seed_snapshot))
            return fail_at(at, "recorded formula fails sampling equivalence");
        }
        pool.add(std::move(recorded), Origin::Created);
      }
    }
    // timed-out and over-budget steps: draws checked, nothing was kept

    if (rec.outcome == StepOutcome::Bot) refuted = true;
    if (rec.kind == StepKind::Creation) {
      ++creations;
      expect_resolution =
          creations % cfg.resolution_period == 0 && pool.size() >= cfg.resolution_size;
    } else {
      expect_resolution = false;
    }
  }

  if (refuted != (trace.status == TraceStatus::Refuted))
    return fail_at(trace.records.empty() ? 0 : trace.records.back().index,
                   "terminal status does not match the records");
  return TraceCheck{};
}

}  // namespace mubqe
