#include "mplv/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mplv/bench.hpp"
#include "mplv/bmc.hpp"
#include "mplv/model_io.hpp"

namespace mplv {

using nlohmann::json;

namespace {

constexpr int kHolds = 0, kViolated = 1, kUndecided = 2, kError = 3;

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Holds: return kHolds;
    case Outcome::Violated: return kViolated;
    case Outcome::Undecided: return kUndecided;
  }
  return kError;
}

std::string names(const AbstractTransitionSystem& ts, const std::vector<int>& ids) {
  std::string s;
  for (int id : ids) s += (s.empty() ? "" : ", ") + ts.state(id).name;
  return "{" + s + "}";
}

std::string point_str(const Point& x, Scale scale) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + format_fixed(x[i], scale);
  return s + ")";
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        dims.push_back(std::stoul(part));
      } else {
        const std::size_t lo = std::stoul(part.substr(0, dash)), hi = std::stoul(part.substr(dash + 1));
        for (std::size_t n = lo; n <= hi; ++n) dims.push_back(n);
      }
    } catch (const std::exception&) {
      throw Error("bad dimension list '" + text + "'");
    }
  }
  return dims;
}

json state_json(const AbstractTransitionSystem& ts, const AbstractState& s, Scale scale) {
  json labels = json::array(), g = json::array();
  for (std::size_t q : s.labels) labels.push_back("p" + std::to_string(q + 1));
  for (std::size_t c : s.dynamics.g) g.push_back(c + 1);
  json succ = json::array();
  for (std::size_t q : ts.successors(ts.position_of(s.id))) succ.push_back(ts.states()[q].name);
  return {{"name", s.name}, {"region", describe(s.region, scale)}, {"labels", labels},
          {"g", g},         {"initial", s.initial},                 {"successors", succ}};
}

void print_abstraction(std::ostream& out, const AbstractTransitionSystem& ts, Scale scale, bool dump_dbms) {
  out << "predicates:\n";
  for (std::size_t q = 0; q < ts.predicates().size(); ++q) {
    out << "  p" << q + 1 << " = " << ts.predicates()[q].to_string(scale) << "\n";
  }
  out << "states:\n";
  for (const auto& s : ts.states()) {
    std::vector<std::string> lab;
    for (std::size_t q : s.labels) lab.push_back("p" + std::to_string(q + 1));
    std::string g;
    for (std::size_t c : s.dynamics.g) g += (g.empty() ? "" : ",") + std::to_string(c + 1);
    out << "  " << s.name << (s.initial ? " [initial]" : "") << ": " << describe(s.region, scale) << "; labels {";
    for (std::size_t k = 0; k < lab.size(); ++k) out << (k ? "," : "") << lab[k];
    out << "}; g = (" << g << ")\n";
    if (dump_dbms) {
      std::istringstream lines(dump(s.region, scale));
      for (std::string line; std::getline(lines, line);) out << "    " << line << "\n";
    }
  }
  out << "edges:\n";
  for (auto [from, to] : ts.edges()) out << "  " << ts.state(from).name << " -> " << ts.state(to).name << "\n";
}

json abstraction_json(const AbstractTransitionSystem& ts, Scale scale) {
  json preds = json::array(), states = json::array(), edges = json::array();
  for (const auto& p : ts.predicates()) {
    preds.push_back({p.i + 1, p.j + 1, format_fixed(p.c, scale), p.non_strict ? 1 : 0});
  }
  for (const auto& s : ts.states()) states.push_back(state_json(ts, s, scale));
  for (auto [from, to] : ts.edges()) edges.push_back({ts.state(from).name, ts.state(to).name});
  return {{"predicates", preds}, {"states", states}, {"edges", edges}};
}

json path_json(const AbstractTransitionSystem& ts, const AbstractPath& path) {
  json ids = json::array();
  for (int id : path.states) ids.push_back(ts.state(id).name);
  json j = {{"kind", path.kind == PathKind::NoLoop ? "no-loop" : "lasso"}, {"states", ids}};
  if (path.kind == PathKind::Lasso) j["loop_start"] = path.loop_start;
  return j;
}

std::optional<Dbm> initial_of(const Model& m) { return m.initial; }

ltl::Formula spec_of(const Model& m, const std::string& flag, Scale scale) {
  const std::string text = !flag.empty() ? flag : m.spec.value_or("");
  if (text.empty()) throw Error("no formula: pass --spec or set \"spec\" in the model file");
  return ltl::parse(text, scale);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification of max-plus linear systems against time-difference LTL formulas", "mplverify"};
  app.require_subcommand(1);

  std::string model_path, spec_text, csv_path, output_path, dims_text = "3-10";
  bool as_json = false, explain = false, dump_dbms = false;
  std::size_t max_iter = 1000, trials = 10, n = 3;
  std::int64_t ticks = 1'000'000;
  std::uint64_t seed = 0;
  RandomConfig rnd;

  auto add_common = [&](CLI::App* sub, bool needs_model) {
    auto* opt = sub->add_option("-m,--model", model_path, "model file (JSON)");
    if (needs_model) opt->required();
    sub->add_option("--scale", ticks, "ticks per unit (power of ten)");
  };

  auto* verify_cmd = app.add_subcommand("verify", "check an LTL formula");
  add_common(verify_cmd, true);
  verify_cmd->add_option("--spec", spec_text, "formula (overrides the model file)");
  verify_cmd->add_flag("--json", as_json, "machine-readable output");
  verify_cmd->add_flag("--explain", explain, "print the abstract path, witness DBMs and a concrete trajectory");
  verify_cmd->add_option("--max-iter", max_iter, "lasso periodicity iteration cap");

  auto* abstract_cmd = app.add_subcommand("abstract", "print the abstract transition system");
  add_common(abstract_cmd, true);
  abstract_cmd->add_option("--spec", spec_text, "add the predicates of this formula");
  abstract_cmd->add_flag("--dump", dump_dbms, "dump the DBM of every state");
  abstract_cmd->add_flag("--json", as_json, "machine-readable output");

  auto* ct_cmd = app.add_subcommand("ct", "eigenvalue, transient, cyclicity and completeness threshold");
  add_common(ct_cmd, true);
  ct_cmd->add_flag("--json", as_json, "machine-readable output");

  auto* direct_cmd = app.add_subcommand("direct", "try the shortcuts that need no abstraction");
  add_common(direct_cmd, true);
  direct_cmd->add_option("--spec", spec_text, "formula (overrides the model file)");
  direct_cmd->add_flag("--json", as_json, "machine-readable output");

  auto* random_cmd = app.add_subcommand("random", "generate a random model");
  random_cmd->add_option("-n,--dim", n, "dimension")->required();
  random_cmd->add_option("--finite", rnd.finite_per_row, "finite entries per row");
  random_cmd->add_option("--lo", rnd.lo, "smallest entry");
  random_cmd->add_option("--hi", rnd.hi, "largest entry");
  random_cmd->add_option("--seed", seed, "random seed");
  random_cmd->add_option("--spec", spec_text, "formula to store in the model");
  random_cmd->add_option("-o,--output", output_path, "output file (stdout if absent)");

  auto* bench_cmd = app.add_subcommand("bench", "benchmark campaigns");
  bench_cmd->require_subcommand(1);
  auto* bench_abs = bench_cmd->add_subcommand("abstraction", "time abstraction construction");
  auto* bench_ctc = bench_cmd->add_subcommand("ct", "compare empirical thresholds with k0 + c");
  for (auto* sub : {bench_abs, bench_ctc}) {
    sub->add_option("--dims", dims_text, "dimensions, e.g. 3-10 or 3,5,7");
    sub->add_option("--trials", trials, "trials per dimension");
    sub->add_option("--finite", rnd.finite_per_row, "finite entries per row");
    sub->add_option("--lo", rnd.lo, "smallest entry");
    sub->add_option("--hi", rnd.hi, "largest entry");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--csv", csv_path, "write CSV here");
  }
  bench_ctc->add_option("--spec", spec_text, "formula")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }

  try {
    const Scale scale{ticks};
    (void)scale.decimals();  // throws unless a power of ten
    const bool seed_given = (random_cmd->parsed() && random_cmd->count("--seed")) ||
                            (bench_abs->parsed() && bench_abs->count("--seed")) ||
                            (bench_ctc->parsed() && bench_ctc->count("--seed"));
    if (!seed_given) seed = default_seed();

    if (verify_cmd->parsed()) {
      const Model m = load_model(model_path, scale);
      const ltl::Formula phi = spec_of(m, spec_text, scale);
      VerifyOptions opts;
      opts.max_iter = max_iter;
      const Verdict v = verify(m.matrix, initial_of(m), phi, opts);
      if (as_json) {
        json j = {{"verdict", to_string(v.outcome)}, {"reason", v.reason},   {"direct", v.direct},
                  {"threshold", v.threshold},        {"bound", v.bound},     {"refinements", v.refinements.size()}};
        if (v.counterexample && v.abstraction) {
          j["counterexample"] = path_json(*v.abstraction, *v.counterexample);
          json w = json::array();
          for (const auto& d : v.witnesses) w.push_back(describe(d, scale));
          j["witnesses"] = w;
        }
        if (v.trace) {
          json pts = json::array();
          for (const auto& p : v.trace->points) {
            json row = json::array();
            for (Ticks t : p) row.push_back(json::parse(format_fixed(t, scale)));
            pts.push_back(row);
          }
          j["trajectory"] = pts;
        }
        out << j.dump(2) << "\n";
      } else {
        out << "verdict: " << to_string(v.outcome) << "\n";
        out << "reason: " << v.reason << "\n";
        if (!v.direct) {
          out << "threshold: " << v.threshold << "\n";
          out << "bound: " << v.bound << "\n";
          out << "refinements: " << v.refinements.size() << "\n";
        }
        if (explain && v.abstraction) {
          const auto& ts = *v.abstraction;
          for (const auto& r : v.refinements) {
            out << "k=" << r.k << ": spurious " << r.path_text << ", pivot " << r.pivot_name << " split into " << names(ts, r.cells) << "\n";
            for (std::size_t t = 0; t < r.witnesses.size(); ++t) {
              out << "  D" << t + 1 << ": " << describe(r.witnesses[t], scale) << "\n";
            }
          }
          if (v.counterexample) {
            out << "counterexample: " << v.counterexample->to_string(ts) << "\n";
            for (std::size_t t = 0; t < v.witnesses.size(); ++t) {
              out << "  D" << t + 1 << ": " << describe(v.witnesses[t], scale) << "\n";
            }
          }
          if (v.trace) {
            out << "trajectory:\n";
            for (std::size_t t = 0; t < v.trace->points.size(); ++t) {
              out << "  x(" << t << ") = " << point_str(v.trace->points[t], scale) << "  "
                  << ts.state(ts.abstract(v.trace->points[t])).name << "\n";
            }
            out << "trajectory violates the formula: "
                << (trace_violates(ts.matrix(), *v.trace, phi) ? "yes" : "no") << "\n";
          }
        }
      }
      return exit_code(v.outcome);
    }

    if (abstract_cmd->parsed()) {
      const Model m = load_model(model_path, scale);
      std::vector<TimeDiff> props;
      if (!spec_text.empty() || m.spec) {
        const ltl::Formula phi = spec_of(m, spec_text, scale);
        ltl::check_indices(phi, m.matrix.dim());
        props = ltl::atoms(phi);
      }
      const auto ts = build_abstraction(m.matrix, props, initial_of(m));
      if (as_json) out << abstraction_json(ts, scale).dump(2) << "\n";
      else print_abstraction(out, ts, scale, dump_dbms);
      return 0;
    }

    if (ct_cmd->parsed()) {
      const Model m = load_model(model_path, scale);
      if (!is_irreducible(m.matrix)) {
        if (as_json) out << json{{"irreducible", false}}.dump(2) << "\n";
        else out << "matrix is reducible; the threshold falls back to |states| + 1\n";
        return 0;
      }
      const SpectralProfile sp = transient_cyclicity(m.matrix);
      const std::string lambda = sp.lambda.to_string(scale);
      if (as_json) {
        out << json{{"irreducible", true}, {"lambda", lambda}, {"k0", sp.transient}, {"c", sp.cyclicity},
                    {"ct", sp.transient + sp.cyclicity}}.dump(2)
            << "\n";
      } else {
        out << "λ=" << lambda << ", k0=" << sp.transient << ", c=" << sp.cyclicity
            << ", CT=" << sp.transient + sp.cyclicity << "\n";
      }
      return 0;
    }

    if (direct_cmd->parsed()) {
      const Model m = load_model(model_path, scale);
      const DirectResult r = direct_check(m.matrix, spec_of(m, spec_text, scale));
      const char* verdict = r.verdict == Tri::True ? "holds" : r.verdict == Tri::False ? "violated" : "unknown";
      if (as_json) {
        out << json{{"verdict", verdict}, {"reason", r.reason}, {"residual", ltl::to_string(r.residual, scale)}}.dump(2)
            << "\n";
      } else {
        out << "verdict: " << verdict << "\n";
        if (!r.reason.empty()) out << "reason: " << r.reason << "\n";
        if (r.verdict == Tri::Unknown) out << "residual: " << ltl::to_string(r.residual, scale) << "\n";
      }
      return r.verdict == Tri::True ? kHolds : r.verdict == Tri::False ? kViolated : kUndecided;
    }

    if (random_cmd->parsed()) {
      Model m;
      m.matrix = random_mpl(n, rnd, seed, scale);
      if (!spec_text.empty()) m.spec = spec_text;
      if (output_path.empty()) out << save_model(m, scale);
      else write_model(output_path, m, scale);
      return 0;
    }

    if (bench_cmd->parsed()) {
      BenchConfig cfg;
      cfg.dims = parse_dims(dims_text);
      cfg.random = rnd;
      cfg.trials = trials;
      cfg.seed = seed;
      std::string csv, table;
      if (bench_abs->parsed()) {
        const auto rep = bench_abstraction(cfg);
        csv = rep.csv();
        table = rep.table();
      } else {
        const auto rep = bench_ct(cfg, spec_text);
        csv = rep.csv();
        table = rep.table();
      }
      out << table;
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) throw Error("cannot write '" + csv_path + "'");
        f << csv;
      } else {
        out << csv;
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace mplv
