#pragma once

// Command implementations behind the `bbm` executable. Each returns a
// process exit code:
//   0 success, 1 input error, 2 invalid parameters, 3 certification failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbm/auction.hpp"
#include "bbm/certify.hpp"
#include "bbm/generate.hpp"
#include "bbm/graph.hpp"
#include "bbm/io.hpp"
#include "bbm/oracle.hpp"
#include "bbm/scaling.hpp"

namespace bbm {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitBadParameter = 2,
  kExitCertificationFailed = 3,
};

struct RunConfig {
  std::string input;
  std::string format = "bbm";  // bbm | mtx
  std::string bfile;           // capacities for mtx input
  double eps_prime = 0.1;
  bool certify = false;
  std::string oracle = "none";    // none | brute | flow
  std::string baseline = "none";  // none | greedy
  std::string output;             // empty: stdout
  bool quiet = false;
  bool check_invariants = false;
};

struct SolveOutcome {
  int exit_code = kExitOk;
  Json report;
  std::string message;  // diagnostics for stderr
};

inline double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

inline std::optional<std::string> validate(const RunConfig& cfg) {
  if (!(cfg.eps_prime > 0.0 && cfg.eps_prime < 1.0)) {
    return "epsilon' must lie in (0, 1), got " + std::to_string(cfg.eps_prime);
  }
  if (cfg.format != "bbm" && cfg.format != "mtx") return "unknown format '" + cfg.format + "'";
  if (cfg.oracle != "none" && cfg.oracle != "brute" && cfg.oracle != "flow") {
    return "unknown oracle '" + cfg.oracle + "'";
  }
  if (cfg.baseline != "none" && cfg.baseline != "greedy") {
    return "unknown baseline '" + cfg.baseline + "'";
  }
  return std::nullopt;
}

inline BipartiteGraph load_instance(const RunConfig& cfg) {
  const std::string text = read_file(cfg.input);
  if (cfg.format == "mtx") {
    if (cfg.bfile.empty()) return parse_mtx(text);
    const std::string caps = read_file(cfg.bfile);
    return parse_mtx(text, caps);
  }
  return parse_bbm(text);
}

/// preprocess -> auction -> optional certification, oracle and baseline.
inline SolveOutcome solve_graph(const BipartiteGraph& g, const RunConfig& cfg) {
  SolveOutcome out;
  if (auto err = validate(cfg)) {
    out.exit_code = kExitBadParameter;
    out.message = *err;
    return out;
  }
  if (cfg.oracle == "brute" && g.num_edges() > kBruteForceMaxEdges) {
    out.exit_code = kExitBadParameter;
    out.message = "--oracle brute supports at most " + std::to_string(kBruteForceMaxEdges) +
                  " edges; instance has " + std::to_string(g.num_edges());
    return out;
  }

  AuctionOptions opts = AuctionOptions::from_environment();
  opts.check_invariants = opts.check_invariants || cfg.check_invariants;

  const auto start = std::chrono::steady_clock::now();
  const ScaledInstance s = preprocess(g, cfg.eps_prime);
  AuctionResult result;
  try {
    result = run(s, g, opts);
  } catch (const InvariantViolation& err) {
    out.exit_code = kExitCertificationFailed;
    out.message = std::string("invariant violated: ") + err.what();
    return out;
  }
  const double wall_ms = elapsed_ms(start);
  const std::vector<EdgeId> f = result.matching();

  Json& j = out.report;
  j["n_a"] = g.num_bidders();
  j["n_b"] = g.num_objects();
  j["m"] = g.num_edges();
  j["epsilon_prime"] = cfg.eps_prime;
  Json matching = Json::array();
  for (EdgeId e : f) {
    const Edge& ed = g.edge(e);
    matching.push_back({{"i", ed.bidder + 1}, {"j", ed.object + 1}, {"w", ed.weight}});
  }
  j["matching"] = std::move(matching);
  j["weight"] = matching_weight(g, f);
  j["stats"] = {{"pops", result.counters.pops},
                {"bids", result.counters.bids},
                {"outbids", result.counters.outbids},
                {"pruned", s.pruned},
                {"s_min", s.s_min},
                {"s_max", s.s_max},
                {"wall_ms", wall_ms}};

  if (cfg.certify) {
    const CertReport cert = certify(result, s, g);
    Json c;
    c["feasible"] = cert.feasible();
    c["strong_happy"] = cert.strong_happy();
    c["relaxed_cs"] = cert.relaxed_cs.ok();
    c["upper_bound"] = cert.has_upper_bound ? Json(cert.upper_bound) : Json(nullptr);
    c["ratio_lower"] = cert.has_upper_bound ? Json(cert.ratio_lower) : Json(nullptr);
    j["cert"] = std::move(c);
    if (!cert.passed()) {
      out.exit_code = kExitCertificationFailed;
      for (const auto& p : cert.feasibility.problems) out.message += "infeasible: " + p + "\n";
      for (const auto& h : cert.strong.failures) {
        out.message += "bidder " + std::to_string(h.bidder + 1) + ": " + h.reason + "\n";
      }
      for (const auto& v : cert.relaxed_cs.violations) {
        out.message += v.condition + " (" + std::to_string(v.index) + "), residual " +
                       std::to_string(v.residual) + "\n";
      }
    }
  }

  if (cfg.oracle != "none") {
    const OracleResult opt = cfg.oracle == "brute" ? brute_force(g) : flow_exact(g);
    j["oracle"] = {{"method", to_string(opt.method)}, {"weight", opt.weight}};
    const ApproxVerdict v = verify_approximation(f, g, cfg.eps_prime, opt.weight);
    j["approx_ok"] = v.ok;
    if (!v.ok) {
      out.exit_code = kExitCertificationFailed;
      out.message += "weight " + std::to_string(v.weight) + " below required " +
                     std::to_string(v.bound) + "\n";
    }
  }
  if (cfg.baseline == "greedy") {
    const OracleResult base = greedy_half(g);
    j["baseline"] = {{"method", to_string(base.method)}, {"weight", base.weight}};
  }
  return out;
}

inline int emit(const Json& j, const std::string& path, std::ostream& out, std::ostream& err) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text)) {
    err << "error: cannot write '" << path << "'\n";
    return kExitInputError;
  }
  return kExitOk;
}

inline int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (auto bad = validate(cfg)) {
    err << "error: " << *bad << "\n";
    return kExitBadParameter;
  }
  BipartiteGraph g;
  try {
    g = load_instance(cfg);
  } catch (const std::exception& e) {
    err << "error: " << cfg.input << ": " << e.what() << "\n";
    return kExitInputError;
  }
  const SolveOutcome res = solve_graph(g, cfg);
  if (!res.message.empty() && (!cfg.quiet || res.exit_code != kExitOk)) err << res.message;
  if (res.report.is_null()) {
    if (res.message.empty()) err << "error: solve failed\n";
    return res.exit_code;
  }
  if (const int rc = emit(res.report, cfg.output, out, err); rc != kExitOk) return rc;
  return res.exit_code;
}

struct GenRequest {
  GenConfig config;
  std::optional<double> avg_degree;
  std::string output;
};

inline int run_gen(GenRequest req, std::ostream& out, std::ostream& err) {
  if (req.avg_degree) {
    req.config.num_edges = edges_for_average_degree(req.config.num_bidders, *req.avg_degree);
  }
  BipartiteGraph g;
  try {
    g = generate(req.config);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadParameter;
  }
  const std::string text = "c generated seed " + std::to_string(req.config.seed) + "\n" + write_bbm(g);
  if (req.output.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(req.output, std::ios::binary);
  if (!f || !(f << text)) {
    err << "error: cannot write '" << req.output << "'\n";
    return kExitInputError;
  }
  return kExitOk;
}

struct BenchRow {
  std::size_t m = 0;
  std::uint32_t beta = 0;
  int s_min = 0;
  std::uint64_t pops = 0;
  std::uint64_t pop_budget = 0;
  std::uint64_t nonpositive_bids = 0;
  double wall_ms = 0.0;
};

/// Generates a square instance with about `avg_degree` edges per bidder and
/// times preprocess + auction.
inline BenchRow bench_one(std::size_t m, double eps_prime, std::uint64_t seed,
                          std::uint32_t b_max = 4, double avg_degree = 10.0) {
  GenConfig gc;
  const auto side = static_cast<std::size_t>(
      std::max(std::ceil(std::sqrt(static_cast<double>(m))),
               std::ceil(static_cast<double>(m) / avg_degree)));
  gc.num_bidders = gc.num_objects = std::max<std::size_t>(side, 1);
  gc.num_edges = m;
  gc.b_max = b_max;
  gc.seed = seed;
  const BipartiteGraph g = generate(gc);
  const auto start = std::chrono::steady_clock::now();
  const ScaledInstance s = preprocess(g, eps_prime);
  const AuctionResult r = run(s, g);
  BenchRow row;
  row.wall_ms = elapsed_ms(start);
  row.m = m;
  row.beta = g.stats().beta;
  row.s_min = s.s_min;
  row.pops = r.counters.pops;
  row.pop_budget = r.pop_budget;
  row.nonpositive_bids = r.counters.nonpositive_bids;
  return row;
}

struct BenchRequest {
  std::vector<std::size_t> sizes;
  double eps_prime = 0.1;
  std::uint64_t seed = 1;
  std::uint32_t b_max = 4;
  double avg_degree = 10.0;
  std::string output;
};

inline int run_bench(const BenchRequest& req, std::ostream& out, std::ostream& err) {
  if (!(req.eps_prime > 0.0 && req.eps_prime < 1.0)) {
    err << "error: epsilon' must lie in (0, 1)\n";
    return kExitBadParameter;
  }
  std::ofstream file;
  if (!req.output.empty()) {
    file.open(req.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << req.output << "'\n";
      return kExitInputError;
    }
  }
  std::ostream& csv = req.output.empty() ? out : file;
  csv << "m,beta,s_min,pops,wall_ms\n";
  int rc = kExitOk;
  for (std::size_t k = 0; k < req.sizes.size(); ++k) {
    BenchRow row;
    try {
      row = bench_one(req.sizes[k], req.eps_prime, req.seed + k, req.b_max, req.avg_degree);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kExitBadParameter;
    }
    csv << row.m << ',' << row.beta << ',' << row.s_min << ',' << row.pops << ','
        << format_double(std::round(row.wall_ms * 1000.0) / 1000.0) << '\n';
    if (row.pops > row.pop_budget) {
      err << "error: m=" << row.m << " used " << row.pops << " pops, budget " << row.pop_budget
          << "\n";
      rc = kExitCertificationFailed;
    }
  }
  return rc;
}

}  // namespace bbm
