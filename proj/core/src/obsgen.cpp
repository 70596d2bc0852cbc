#include "safari/obsgen.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <thread>

#include <json.hpp>

#include "safari/cnf.hpp"
#include "safari/engine.hpp"
#include "safari/error.hpp"
#include "safari/rng.hpp"
#include "safari/sat.hpp"

namespace safari {

namespace {

struct Candidate {
  Observation alpha;
  std::size_t cardinality;
};

std::vector<Candidate> run_round(const DiagnosticSystem& ds, const CnfFormula& cnf, std::size_t tries,
                                 std::uint64_t seed, std::size_t round) {
  Rng rng = Rng::stream(seed, round);
  std::vector<Literal> in;
  for (const VarId v : ds.inputs()) in.push_back({v, rng.coin()});

  // Nominal outputs: any model of SD with these inputs and every component
  // healthy. Deterministic solve, so the choice is reproducible.
  std::vector<Literal> fixed = in;
  for (const VarId h : ds.comps()) fixed.push_back({h, true});
  Solver solver(cnf);
  const auto model = solver.solve(encode(cnf, fixed));
  if (!model) return {};  // these inputs admit no nominal behaviour
  std::vector<Literal> beta;
  for (const VarId v : ds.outputs()) beta.push_back({v, model->value(cnf.var_of(v))});

  std::vector<Candidate> kept;
  std::size_t best = 0;
  for (std::size_t o = 0; o < beta.size(); ++o) {
    std::vector<Literal> lits = in;
    for (std::size_t t = 0; t < beta.size(); ++t) lits.push_back(t == o ? beta[t].negated() : beta[t]);
    Observation alpha(ds, std::move(lits));
    SafariConfig cfg;
    cfg.optimal_mode = true;
    cfg.tries = tries;
    cfg.seed = rng.next();
    cfg.record_flips = false;
    std::size_t c = 0;
    try {
      c = cardinality(safari(ds, cnf, alpha, cfg).diagnoses.front());
    } catch (const ObservationInconsistent&) {
      continue;
    }
    if (c > best) {
      best = c;
      kept.push_back({std::move(alpha), c});
    }
  }
  return kept;
}

}  // namespace

ObservationSuite make_alphas(const DiagnosticSystem& ds, std::size_t tries, std::size_t rounds, std::uint64_t seed,
                             unsigned jobs) {
  if (ds.inputs().empty() || ds.outputs().empty())
    throw InvalidModel("observation generation needs the observables split into inputs and outputs");
  if (tries == 0) throw std::invalid_argument("number of tries must be at least 1");
  const CnfFormula cnf = to_cnf(ds);

  std::vector<std::vector<Candidate>> per_round(rounds);
  std::vector<std::exception_ptr> errors(rounds);
  auto work = [&](std::size_t r) {
    try {
      per_round[r] = run_round(ds, cnf, tries, seed, r);
    } catch (...) {
      errors[r] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(rounds, 1));
  if (workers <= 1) {
    for (std::size_t r = 0; r < rounds; ++r) work(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < workers; ++j)
      pool.emplace_back([&] {
        for (std::size_t r = next++; r < rounds; r = next++) work(r);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ObservationSuite suite;
  suite.seed = seed;
  suite.rounds = rounds;
  suite.tries = tries;
  for (std::size_t r = 0; r < rounds; ++r)
    for (auto& cand : per_round[r]) {
      const auto same = std::find_if(suite.entries.begin(), suite.entries.end(),
                                     [&](const auto& e) { return e.alpha == cand.alpha; });
      if (same == suite.entries.end())
        suite.entries.push_back({std::move(cand.alpha), cand.cardinality, r});
      else
        same->cardinality = std::max(same->cardinality, cand.cardinality);
    }
  return suite;
}

std::string suite_jsonl(const DiagnosticSystem& ds, const ObservationSuite& suite) {
  std::string out;
  for (const auto& e : suite.entries) {
    nlohmann::ordered_json in = nlohmann::ordered_json::object(), o = nlohmann::ordered_json::object();
    for (const auto& l : e.alpha.literals()) {
      const bool is_input = std::find(ds.inputs().begin(), ds.inputs().end(), l.var) != ds.inputs().end();
      (is_input ? in : o)[ds.symbols().name(l.var)] = l.positive ? 1 : 0;
    }
    nlohmann::ordered_json j;
    j["inputs"] = std::move(in);
    j["outputs"] = std::move(o);
    j["estimated_cardinality"] = e.cardinality;
    j["round"] = e.round;
    j["seed"] = suite.seed;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace safari
