// bbm: approximate max-weight bipartite b-matching by multiplicative auction.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbm/commands.hpp"

namespace {

void add_solve_options(CLI::App* cmd, bbm::RunConfig& cfg) {
  cmd->add_option("input", cfg.input, "instance file")->required();
  cmd->add_option("--format", cfg.format, "bbm | mtx")->capture_default_str();
  cmd->add_option("--bfile", cfg.bfile, "capacities for mtx input, bidders first");
  cmd->add_option("--eps", cfg.eps_prime, "approximation parameter epsilon' in (0,1)")
      ->capture_default_str();
  cmd->add_option("--oracle", cfg.oracle, "none | brute | flow")->capture_default_str();
  cmd->add_option("--baseline", cfg.baseline, "none | greedy")->capture_default_str();
  cmd->add_option("-o,--output", cfg.output, "write JSON here instead of stdout");
  cmd->add_flag("-q,--quiet", cfg.quiet, "suppress diagnostics on success");
  cmd->add_flag("--check-invariants", cfg.check_invariants,
                "assert auction invariants (also BBM_DEBUG_INVARIANTS=1)");
}

std::vector<std::size_t> parse_sizes(const std::string& list) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < list.size()) {
    const std::size_t comma = list.find(',', pos);
    const std::string tok = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!tok.empty()) out.push_back(static_cast<std::size_t>(std::stod(tok)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate maximum weight bipartite b-matching"};
  app.require_subcommand(1);

  bbm::RunConfig solve_cfg;
  auto* solve = app.add_subcommand("solve", "solve an instance and print JSON");
  add_solve_options(solve, solve_cfg);
  solve->add_flag("--certify", solve_cfg.certify, "run the optimality certifier");

  bbm::RunConfig cert_cfg;
  auto* certify = app.add_subcommand("certify", "solve and certify; exit 3 if any check fails");
  add_solve_options(certify, cert_cfg);

  bbm::GenRequest gen_req;
  double avg_degree = 0.0;
  std::string weights = "uniform";
  auto* gen = app.add_subcommand("gen", "write a seeded random .bbm instance");
  gen->add_option("--na", gen_req.config.num_bidders, "bidders")->required();
  gen->add_option("--nb", gen_req.config.num_objects, "objects")->required();
  auto* m_opt = gen->add_option("--m", gen_req.config.num_edges, "edge count");
  auto* d_opt = gen->add_option("--avg-degree", avg_degree, "average bidder degree");
  m_opt->excludes(d_opt);
  gen->add_option("--bmax", gen_req.config.b_max, "capacities uniform in [1, bmax]")
      ->capture_default_str();
  gen->add_option("--weights", weights, "uniform | unit | int")->capture_default_str();
  gen->add_option("--wmax", gen_req.config.max_weight, "largest weight")->capture_default_str();
  gen->add_option("--seed", gen_req.config.seed, "64-bit seed")->capture_default_str();
  gen->add_option("-o,--output", gen_req.output, "write here instead of stdout");

  bbm::BenchRequest bench_req;
  std::string sizes = "10000,100000";
  auto* bench = app.add_subcommand("bench", "runtime scaling table as CSV");
  bench->add_option("--sizes", sizes, "comma separated edge counts")->capture_default_str();
  bench->add_option("--eps", bench_req.eps_prime, "epsilon'")->capture_default_str();
  bench->add_option("--seed", bench_req.seed, "seed of the first instance")->capture_default_str();
  bench->add_option("--bmax", bench_req.b_max, "capacities uniform in [1, bmax]")
      ->capture_default_str();
  bench->add_option("--avg-degree", bench_req.avg_degree, "average bidder degree")
      ->capture_default_str();
  bench->add_option("-o,--output", bench_req.output, "write CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : bbm::kExitBadParameter;
  }

  if (*solve) return bbm::run_solve(solve_cfg, std::cout, std::cerr);
  if (*certify) {
    cert_cfg.certify = true;
    return bbm::run_solve(cert_cfg, std::cout, std::cerr);
  }
  if (*gen) {
    try {
      gen_req.config.weights = bbm::parse_weight_distribution(weights);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: " << e.what() << "\n";
      return bbm::kExitBadParameter;
    }
    if (*d_opt) gen_req.avg_degree = avg_degree;
    return bbm::run_gen(gen_req, std::cout, std::cerr);
  }
  if (*bench) {
    try {
      bench_req.sizes = parse_sizes(sizes);
    } catch (const std::exception&) {
      std::cerr << "error: bad --sizes '" << sizes << "'\n";
      return bbm::kExitBadParameter;
    }
    return bbm::run_bench(bench_req, std::cout, std::cerr);
  }
  return bbm::kExitBadParameter;
}
