#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "safari/analysis.hpp"
#include "safari/circuits.hpp"
#include "safari/cnf.hpp"
#include "safari/engine.hpp"
#include "safari/error.hpp"
#include "safari/model_io.hpp"
#include "safari/obsgen.hpp"
#include "safari/oracle.hpp"

namespace safari::cli {

namespace {

using Clock = std::chrono::steady_clock;
using json = nlohmann::ordered_json;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("SAFARI_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && end != s) return v;
  }
  return 0;
}

template <typename F>
auto with_path(const std::string& path, F f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// Where the system comes from: exactly one of a model file, a netlist or a
// built-in name.
struct Source {
  std::string model;
  std::string netlist;
  std::string builtin;
  std::string mode = "weak";

  void add_options(CLI::App& app) {
    auto* m = app.add_option("--model", model, "Model file");
    auto* n = app.add_option("--netlist", netlist, "Netlist file (.bench dialect)");
    auto* b = app.add_option("--builtin", builtin, "Built-in system")
                  ->check(CLI::IsMember(builtin_system_names()));
    m->excludes(n)->excludes(b);
    n->excludes(b);
    app.add_option("--mode", mode, "Fault mode for --netlist/--builtin")
        ->check(CLI::IsMember({"weak", "strong", "sa0", "sa1"}));
  }

  std::string describe() const {
    if (!model.empty()) return "model:" + model;
    if (!netlist.empty()) return "netlist:" + netlist + " mode=" + mode;
    return "builtin:" + builtin + " mode=" + mode;
  }

  DiagnosticSystem load() const {
    if (!model.empty()) return with_path(model, [&] { return load_model(model); });
    if (!netlist.empty()) {
      FaultMode fm = FaultMode::Weak;
      if (mode == "sa0") fm = FaultMode::StuckAt0;
      else if (mode == "sa1") fm = FaultMode::StuckAt1;
      else if (mode == "strong") throw InvalidModel("netlists compile to weak, sa0 or sa1 models only");
      return compile(with_path(netlist, [&] { return load_netlist(netlist); }), fm);
    }
    if (builtin.empty()) throw InvalidModel("one of --model, --netlist or --builtin is required");
    try {
      return builtin_system(builtin, *parse_variant(mode));
    } catch (const std::invalid_argument& e) {
      throw InvalidModel(e.what());
    }
  }
};

struct ObsOption {
  std::string text;
  std::string name;

  void add_options(CLI::App& app) {
    auto* t = app.add_option("--obs", text, "Observation: observable names, '!' for negative");
    app.add_option("--obs-name", name, "Built-in observation")
        ->check(CLI::IsMember(builtin_observation_names()))
        ->excludes(t);
  }

  Observation get(const DiagnosticSystem& ds) const {
    if (name.empty()) return parse_observation(ds, text);
    try {
      return builtin_observation(ds, name);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
};

std::vector<std::string> fault_names(const DiagnosticSystem& ds, const HealthAssignment& w) {
  std::vector<std::string> out;
  for (const auto i : w.faults()) out.push_back(ds.symbols().name(ds.comps()[i]));
  return out;
}

// ---------------------------------------------------------------------------

struct DiagnoseCmd {
  Source source;
  ObsOption obs;
  std::size_t retries = 8;
  std::size_t tries = 4;
  std::uint64_t seed = default_seed();
  bool optimal = false;
  std::string start = "random";
  unsigned jobs = 1;
  std::string format = "table";
  bool timing = false;

  void add(CLI::App& app) {
    source.add_options(app);
    obs.add_options(app);
    app.add_option("-M,--retries", retries, "Consecutive failed flips that end a climb");
    app.add_option("-N,--tries", tries, "Number of climbs")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "RNG seed (default: $SAFARI_SEED or 0)");
    app.add_flag("--optimal", optimal, "Use M = |COMPS|");
    app.add_option("--start", start, "Climb start point")->check(CLI::IsMember({"random", "all-faulty"}));
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_flag("--timing", timing, "Report per-phase wall-clock times in ms");
  }

  int run(std::ostream& out) const {
    auto t0 = Clock::now();
    const DiagnosticSystem ds = source.load();
    const Observation alpha = obs.get(ds);
    const double t_load = ms_since(t0);
    t0 = Clock::now();
    const CnfFormula cnf = to_cnf(ds);
    const double t_cnf = ms_since(t0);

    SafariConfig cfg;
    cfg.max_retries = retries;
    cfg.tries = tries;
    cfg.seed = seed;
    cfg.optimal_mode = optimal;
    cfg.start = start == "all-faulty" ? StartPoint::AllFaulty : StartPoint::RandomDiagnosis;
    cfg.jobs = jobs;
    cfg.record_flips = false;
    t0 = Clock::now();
    const SafariResult r = safari(ds, cnf, alpha, cfg);
    const double t_search = ms_since(t0);
    const std::size_t m_eff = optimal ? ds.num_comps() : retries;

    if (format == "json") {
      json j;
      j["source"] = source.describe();
      j["observation"] = print_observation(ds, alpha);
      j["M"] = m_eff;
      j["N"] = tries;
      j["seed"] = seed;
      j["optimal"] = optimal;
      j["start"] = start;
      j["checks"] = r.checks;
      auto arr = json::array();
      for (const auto& w : r.diagnoses) arr.push_back({{"cardinality", cardinality(w)}, {"faults", fault_names(ds, w)}});
      j["diagnoses"] = std::move(arr);
      if (timing) j["time_ms"] = {{"load", t_load}, {"cnf", t_cnf}, {"search", t_search}};
      out << j.dump(2) << '\n';
    } else if (format == "csv") {
      out << "cardinality,faults\n";
      for (const auto& w : r.diagnoses) {
        out << cardinality(w) << ',';
        const auto names = fault_names(ds, w);
        for (std::size_t k = 0; k < names.size(); ++k) out << (k ? " " : "") << names[k];
        out << '\n';
      }
    } else {
      out << "# " << source.describe() << " M=" << m_eff << " N=" << tries << " seed=" << seed
          << (optimal ? " optimal" : "") << " start=" << start << '\n';
      out << "# observation: " << print_observation(ds, alpha) << '\n';
      out << "# " << r.diagnoses.size() << " diagnoses, " << r.checks << " consistency checks\n";
      if (timing) {
        out << std::fixed << std::setprecision(3) << "# time_ms load=" << t_load << " cnf=" << t_cnf
            << " search=" << t_search << '\n';
        out << std::defaultfloat;
      }
      out << "card  faults\n";
      for (const auto& w : r.diagnoses) out << std::setw(4) << cardinality(w) << "  " << print_faults(ds, w) << '\n';
    }
    return kOk;
  }
};

struct OracleCmd {
  Source source;
  ObsOption obs;
  std::size_t limit = kCensusLimit;
  bool list = false;
  unsigned jobs = 1;

  void add(CLI::App& app) {
    source.add_options(app);
    obs.add_options(app);
    app.add_option("--limit", limit, "Refuse systems with more components");
    app.add_flag("--list", list, "Include the minimal diagnoses");
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  }

  int run(std::ostream& out) const {
    const DiagnosticSystem ds = source.load();
    const Observation alpha = obs.get(ds);
    const DiagnosisCensus c = census(ds, alpha, limit, jobs);
    out << census_json(ds, c, list) << '\n';
    return kOk;
  }
};

struct GenobsCmd {
  Source source;
  std::size_t rounds = 10;
  std::size_t tries = 20;
  std::uint64_t seed = default_seed();
  unsigned jobs = 1;

  void add(CLI::App& app) {
    source.add_options(app);
    app.add_option("-K,--rounds", rounds, "Random input vectors");
    app.add_option("-N,--tries", tries, "SAFARI tries per candidate")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "RNG seed (default: $SAFARI_SEED or 0)");
    app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  }

  int run(std::ostream& out) const {
    const DiagnosticSystem ds = source.load();
    out << suite_jsonl(ds, make_alphas(ds, tries, rounds, seed, jobs));
    return kOk;
  }
};

struct AnalyzeCmd {
  std::size_t n = 100;
  std::size_t card = 1;
  std::size_t retries = 1;
  double density = 0.0;

  void add(CLI::App& app) {
    app.add_option("-n,--comps", n, "Number of components")->required();
    app.add_option("-c,--card", card, "Cardinality of the minimal diagnosis")->required();
    app.add_option("-M,--retries", retries, "M")->check(CLI::PositiveNumber);
    app.add_option("-d,--density", density, "Invalid-flip density")->check(CLI::Range(0.0, 0.999999));
  }

  int run(std::ostream& out) const {
    ClimbModel m{n, card, retries, density};
    if (card > n) throw InvalidModel("--card exceeds --comps");
    write_csv(out, climb_pdf(m), "k", "probability");
    return kOk;
  }
};

struct SimulateCmd {
  std::string hist;
  std::size_t tries = 10000;
  std::uint64_t seed = default_seed();

  void add(CLI::App& app) {
    app.add_option("--hist", hist, "CSV of cardinality,count rows")->required();
    app.add_option("--tries", tries, "Simulated SAFARI tries");
    app.add_option("--seed", seed, "RNG seed (default: $SAFARI_SEED or 0)");
  }

  int run(std::ostream& out) const {
    std::ifstream in(hist);
    if (!in) throw ParseError("cannot open '" + hist + "'");
    const auto h = parse_histogram(in);
    CardinalityDistribution d;
    try {
      d = safari_simulate(h, tries, seed);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
    write_csv(out, d, "cardinality", "count");
    return kOk;
  }
};

struct ConvertCmd {
  Source source;
  std::string output;
  bool names = false;

  void add(CLI::App& app) {
    source.add_options(app);
    app.add_option("-o,--out", output, "Output file (default: stdout)");
    app.add_flag("--names", names, "Emit 'c <id> <name>' comment lines");
  }

  int run(std::ostream& out) const {
    const CnfFormula cnf = to_cnf(source.load());
    if (output.empty()) {
      export_dimacs(cnf, out, names);
      return kOk;
    }
    std::ofstream file(output, std::ios::binary);
    if (!file) throw Error("cannot write '" + output + "'");
    export_dimacs(cnf, file, names);
    if (!file) throw Error("write to '" + output + "' failed");
    return kOk;
  }
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model-based diagnosis by greedy stochastic search", "safari"};
  app.require_subcommand(1);

  DiagnoseCmd diagnose;
  OracleCmd oracle;
  GenobsCmd genobs;
  AnalyzeCmd analyze;
  SimulateCmd simulate;
  ConvertCmd convert;
  auto* c_diag = app.add_subcommand("diagnose", "Compute diagnoses with SAFARI");
  auto* c_oracle = app.add_subcommand("oracle", "Exhaustive diagnosis census (JSON)");
  auto* c_genobs = app.add_subcommand("genobs", "Generate observations of graded cardinality (JSON lines)");
  auto* c_analyze = app.add_subcommand("analyze", "Analytic pdf of climb steps (CSV)");
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo model of returned cardinalities (CSV)");
  auto* c_conv = app.add_subcommand("convert", "Write the system's CNF as DIMACS");
  diagnose.add(*c_diag);
  oracle.add(*c_oracle);
  genobs.add(*c_genobs);
  analyze.add(*c_analyze);
  simulate.add(*c_sim);
  convert.add(*c_conv);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (c_diag->parsed()) return diagnose.run(out);
    if (c_oracle->parsed()) return oracle.run(out);
    if (c_genobs->parsed()) return genobs.run(out);
    if (c_analyze->parsed()) return analyze.run(out);
    if (c_sim->parsed()) return simulate.run(out);
    if (c_conv->parsed()) return convert.run(out);
  } catch (const ObservationInconsistent& e) {
    err << "error: " << e.what() << '\n';
    return kObservationInconsistent;
  } catch (const LimitExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kLimitExceeded;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const InvalidModel& e) {
    err << "invalid model: " << e.what() << '\n';
    return kParseError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace safari::cli
