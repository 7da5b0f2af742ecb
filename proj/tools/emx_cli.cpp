#include <iostream>

#include <CLI11.hpp>

#include "emx/harness.hpp"

namespace h = emx::harness;

namespace {

void add_run_flags(CLI::App* cmd, h::RunOptions& opts) {
  cmd->add_option("-c,--config", opts.config, "experiment config (JSON)")->required();
  cmd->add_option("-o,--out", opts.out_dir, "output directory (overrides output.dir)");
  cmd->add_option("--seed", opts.seed, "master seed override");
  cmd->add_option("--workers", opts.workers, "OpenMP thread count");
  cmd->add_option("--cap", opts.cap, "decompression / enumeration cap override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMX compression schemes: soundness checks, evaluation, descent and search"};
  app.require_subcommand(1);

  h::RunOptions run;
  auto* verify = app.add_subcommand("verify", "check beta ⊆ eta(sigma(beta)) on the configured subsets");
  add_run_flags(verify, run);
  auto* evaluate = app.add_subcommand("evaluate", "Monte Carlo failure rates of the compression learner");
  add_run_flags(evaluate, run);
  auto* descend = app.add_subcommand("descend", "reduce an m-ary scheme to arity m-1 on the sub-domain Y");
  add_run_flags(descend, run);
  auto* compress = app.add_subcommand("compress", "chain-compress a point set and dump the trace");
  add_run_flags(compress, run);

  h::SearchOptions search_opts;
  auto* search = app.add_subcommand("search", "decide whether a bounded (m+1)->m selection scheme exists on n points");
  search->add_option("--n", search_opts.problem.n, "domain size")->required();
  search->add_option("--m", search_opts.problem.m, "kernel size")->required();
  search->add_option("--budget", search_opts.problem.budget, "max reconstruction size")->required();
  search->add_option("--witness", search_opts.witness, "write sigma/eta tables here on SAT");
  search->add_option("--node-limit", search_opts.node_limit, "backtracking node limit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::kExitUsage;
  }

  if (*verify) return h::cmd_verify(run, std::cout, std::cerr);
  if (*evaluate) return h::cmd_evaluate(run, std::cout, std::cerr);
  if (*descend) return h::cmd_descend(run, std::cout, std::cerr);
  if (*compress) return h::cmd_compress(run, std::cout, std::cerr);
  return h::cmd_search(search_opts, std::cout, std::cerr);
}
