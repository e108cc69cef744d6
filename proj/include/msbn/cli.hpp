// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end.  run_command() takes the argument vector and two
// streams so that it can be driven from tests; tools/msbn_cli.cpp wraps it.
//
// Exit codes: 0 success, 1 invalid model (or oracle deviation above
// tolerance), 2 inference error, 3 I/O, parse or usage error.

#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "msbn/compile.hpp"
#include "msbn/engine.hpp"
#include "msbn/format.hpp"
#include "msbn/oracle.hpp"
#include "msbn/random.hpp"
#include "msbn/report.hpp"

namespace msbn {

enum ExitCode : int {
  kExitOk = 0,
  kExitInvalid = 1,
  kExitInference = 2,
  kExitInput = 3,
};

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::kSyntaxError:
    case ErrorKind::kSemanticError:
      return kExitInput;
    case ErrorKind::kImpossibleEvidence:
    case ErrorKind::kNumericUnderflow:
    case ErrorKind::kScopeOverflow:
    case ErrorKind::kStateSpaceTooLarge:
    case ErrorKind::kNotCalibrated:
    case ErrorKind::kUnknownVariable:
    case ErrorKind::kVariableAbsent:
    case ErrorKind::kInvalidArgument:
      return kExitInference;
    default:
      return kExitInvalid;
  }
}

namespace cli {

struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) throw IoFailure("cannot write '" + path + "'");
}

inline Msbn load(const std::string& path) {
  try {
    return to_msbn(parse_msbn(read_file(path)));
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), e.line(), e.column(), e.message(), path);
  }
}

inline Msbn load_valid(const std::string& path) {
  Msbn m = load(path);
  validate(m);
  return m;
}

inline Evidence load_evidence(const std::string& path, const Msbn& m) {
  if (path.empty()) return {};
  try {
    return parse_evidence(read_file(path), m);
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), e.line(), e.column(), e.message(), path);
  }
}

inline ReportFormat report_format(const std::string& s) {
  return s == "json" ? ReportFormat::kMachine : ReportFormat::kText;
}

struct QueryRequest {
  std::string engine;
  std::vector<std::string> vars;
  std::string subnet;
};

template <class Session>
void collect_posteriors(const Session& session, const Msbn& m, const QueryRequest& q,
                        RunReport& report, std::optional<std::size_t> subnet) {
  for (const std::string& name : q.vars) {
    const VarId v = m.universe.id(name);
    Posterior p;
    if constexpr (requires { session.posterior_in(v, std::size_t{}); }) {
      p = subnet ? session.posterior_in(v, *subnet) : session.posterior(v);
    } else {
      p = session.posterior(v);
    }
    QueryResult r{name, {}, state_names(m.universe[v]), p.distribution};
    if (subnet) r.subnet = m.subnets[*subnet].id;
    report.posteriors.push_back(std::move(r));
  }
  report.evidence_probability = session.evidence_probability();
  const EngineStats& st = session.stats();
  report.sepset_messages = st.sepset_messages;
  if constexpr (requires { session.submessage(std::size_t{}); }) {
    report.linkage_messages = st.linkage_messages;
  }
  report.peak_cells = st.peak_cells;
}

template <class Arch>
void run_single_jt(const Msbn& m, Evidence e, const QueryRequest& q, RunReport& report,
                   EngineOptions opt) {
  const Msbn merged = merge_subnets(m);
  const LinkedJunctionForest ljf = compile(merged);
  std::vector<Factor> cpts;
  for (const auto& [v, cpt] : merged.subnets[0].cpts) cpts.push_back(cpt);
  for (Finding& f : e.findings) f.subnet.reset();
  JtSession<Arch> s(ljf.structures[ljf.inference[0]].trees[0], merged.universe, cpts, e, opt);
  s.propagate();
  collect_posteriors(s, m, q, report, std::nullopt);
}

template <class Arch>
void run_extended(const Msbn& m, const Evidence& e, const QueryRequest& q, RunReport& report,
                  EngineOptions opt) {
  const LinkedJunctionForest ljf = compile(m);
  std::optional<std::size_t> subnet;
  if (!q.subnet.empty()) subnet = m.subnet_index(q.subnet);
  LjfSession<Arch> s(m, ljf, opt);
  s.enter_evidence(e);
  s.propagate();
  collect_posteriors(s, m, q, report, subnet);
}

inline void run_query(const Msbn& m, const Evidence& e, const QueryRequest& q,
                      RunReport& report, EngineOptions opt) {
  if (!q.subnet.empty() && q.engine.rfind("ext-", 0) != 0) {
    throw Error(ErrorKind::kInvalidArgument, "--subnet needs an extended engine");
  }
  if (q.engine == "ss") return run_single_jt<ShaferShenoy>(m, e, q, report, opt);
  if (q.engine == "lazy") return run_single_jt<Lazy>(m, e, q, report, opt);
  if (q.engine == "ext-ss") return run_extended<ShaferShenoy>(m, e, q, report, opt);
  run_extended<Lazy>(m, e, q, report, opt);
}

// Largest absolute difference between both extended engines and the
// oracle over every variable and state.
inline double oracle_deviation(const Msbn& m, const Evidence& e, double* evidence_probability) {
  const LinkedJunctionForest ljf = compile(m);
  const JointTable joint = joint_enumerate(m, e);
  LjfSession<ShaferShenoy> ss(m, ljf);
  ss.enter_evidence(e);
  ss.propagate();
  LjfSession<Lazy> lz(m, ljf);
  lz.enter_evidence(e);
  lz.propagate();
  double worst = 0.0;
  for (VarId v = 0; v < m.universe.size(); ++v) {
    const OracleAnswer o = oracle_posterior(joint, v);
    const auto a = ss.posterior(v).distribution;
    const auto b = lz.posterior(v).distribution;
    for (std::size_t s = 0; s < o.distribution.size(); ++s) {
      worst = std::max({worst, std::abs(a[s] - o.distribution[s]),
                        std::abs(b[s] - o.distribution[s])});
    }
    if (evidence_probability) *evidence_probability = o.evidence_probability;
  }
  return worst;
}

inline void write_dot_bundle(std::ostream& os, const Msbn& m, const LinkedJunctionForest& ljf) {
  for (std::size_t i = 0; i < m.subnets.size(); ++i) {
    write_dot(os, ljf.fillins.chordal[i], m.universe, m.subnets[i].id + "*");
  }
  for (const auto& [edge, g] : ljf.fillins.directed) {
    write_dot(os, g, m.universe, m.subnets[edge.first].id + "->" + m.subnets[edge.second].id + "*");
  }
  for (std::size_t s = 0; s < ljf.structures.size(); ++s) {
    const Structure& st = ljf.structures[s];
    std::string name = "T " + m.subnets[st.subnet].id;
    if (!st.is_inference()) name += "->" + m.subnets[*st.target].id;
    for (std::size_t t = 0; t < st.trees.size(); ++t) {
      write_dot(os, st.trees[t], m.universe, name + " #" + std::to_string(t));
    }
  }
}

}  // namespace cli

inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  CLI::App app{"Exact inference in multiply sectioned Bayesian networks", "msbn"};
  app.require_subcommand(1);
  std::string file, evidence_file, emit, dot, format = "text", subnet;
  bool want_stats = false, timing = false;
  double tol = 1e-9;
  std::size_t budget = kDefaultCellBudget;
  cli::QueryRequest query;
  std::uint64_t seed = 1;
  RandomMsbnOptions gen;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", file, "MSBN document")->required();
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  };
  CLI::App* validate_cmd = app.add_subcommand("validate", "check a document");
  add_common(validate_cmd);

  CLI::App* compile_cmd = app.add_subcommand("compile", "compile to a linked junction forest");
  add_common(compile_cmd);
  compile_cmd->add_option("--emit", emit, "write the forest ('-' for standard output)");
  compile_cmd->add_flag("--stats", want_stats, "include storage statistics");
  compile_cmd->add_option("--dot", dot, "write graphs and trees in DOT");

  CLI::App* query_cmd = app.add_subcommand("query", "posterior marginals");
  add_common(query_cmd);
  query_cmd->add_option("--engine", query.engine, "engine")
      ->required()
      ->check(CLI::IsMember({"ss", "lazy", "ext-ss", "ext-lazy"}));
  query_cmd->add_option("--evidence", evidence_file, "evidence file");
  query_cmd->add_option("--var", query.vars, "variables to query")->required();
  query_cmd->add_option("--subnet", query.subnet, "read posteriors from this subnet");
  query_cmd->add_option("--budget", budget, "cell budget per factor");
  query_cmd->add_flag("--timing", timing, "report elapsed time");

  CLI::App* oracle_cmd = app.add_subcommand("oracle-check", "compare engines with enumeration");
  add_common(oracle_cmd);
  oracle_cmd->add_option("--evidence", evidence_file, "evidence file");
  oracle_cmd->add_option("--tol", tol, "largest accepted deviation");

  CLI::App* stats_cmd = app.add_subcommand("stats", "storage statistics");
  add_common(stats_cmd);

  CLI::App* gen_cmd = app.add_subcommand("generate", "write a random MSBN document");
  gen_cmd->add_option("--seed", seed, "generator seed")->required();
  gen_cmd->add_option("--min-subnets", gen.min_subnets);
  gen_cmd->add_option("--max-subnets", gen.max_subnets);
  gen_cmd->add_option("--min-vars", gen.min_variables);
  gen_cmd->add_option("--max-vars", gen.max_variables);
  gen_cmd->add_option("--max-card", gen.max_cardinality);
  gen_cmd->add_flag("--labels", gen.state_labels);

  std::vector<const char*> argv{"msbn"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  RunReport report;
  report.input = file;
  const ReportFormat fmt = cli::report_format(format);
  try {
    if (gen_cmd->parsed()) {
      if (gen.min_subnets < 1 || gen.min_subnets > gen.max_subnets ||
          gen.min_variables > gen.max_variables || gen.max_cardinality < 2) {
        err << "error: inconsistent generator bounds\n";
        return kExitInput;
      }
      out << serialize_msbn(to_document(random_msbn(seed, gen)));
      return kExitOk;
    }
    if (validate_cmd->parsed()) {
      report.command = "validate";
      Msbn m = cli::load(file);
      std::string problem;
      try {
        validate(m);
      } catch (const Error& e) {
        problem = e.what();
      }
      if (!problem.empty()) {
        err << problem << (problem.back() == '\n' ? "" : "\n");
        return kExitInvalid;
      }
      out << emit_report(report, fmt);
      return kExitOk;
    }
    const Msbn m = cli::load_valid(file);
    if (compile_cmd->parsed()) {
      report.command = "compile";
      const LinkedJunctionForest ljf = compile(m);
      if (!emit.empty()) cli::write_output(emit, to_text(m, ljf), out);
      if (!dot.empty()) {
        std::ostringstream os;
        cli::write_dot_bundle(os, m, ljf);
        cli::write_output(dot, os.str(), out);
      }
      if (want_stats) report.storage = storage_stats(m, ljf);
      if (emit != "-" && dot != "-") out << emit_report(report, fmt);
      return kExitOk;
    }
    if (stats_cmd->parsed()) {
      report.command = "stats";
      report.storage = storage_stats(m, compile(m));
      out << emit_report(report, fmt);
      return kExitOk;
    }
    const Evidence e = cli::load_evidence(evidence_file, m);
    if (query_cmd->parsed()) {
      report.command = "query";
      report.engine = query.engine;
      const auto start = std::chrono::steady_clock::now();
      EngineOptions opt;
      opt.cell_budget = budget;
      cli::run_query(m, e, query, report, opt);
      if (timing) {
        report.elapsed_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - start)
                                .count();
      }
      out << emit_report(report, fmt);
      return kExitOk;
    }
    report.command = "oracle-check";
    double pe = 0.0;
    report.max_deviation = cli::oracle_deviation(m, e, &pe);
    report.evidence_probability = pe;
    report.tolerance = tol;
    out << emit_report(report, fmt);
    if (!(*report.max_deviation <= tol)) {
      err << "deviation " << *report.max_deviation << " exceeds tolerance " << tol << "\n";
      return kExitInvalid;
    }
    return kExitOk;
  } catch (const cli::IoFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

}  // namespace msbn
