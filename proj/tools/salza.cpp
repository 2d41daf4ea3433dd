#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw salza::Error("cannot write file: " + path);
  out << text;
  if (!out) throw salza::Error("cannot write file: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace salza::cli;

  CLI::App app{"Lempel-Ziv complexity estimates, semi-distances and directed information"};
  app.require_subcommand(1);

  FunctionOptions fopts;
  std::size_t threads = salza::defaultThreadCount();
  std::string out;
  std::optional<std::uint64_t> seed;

  auto addFunctionFlags = [&](CLI::App* cmd) {
    cmd->add_option("--func", fopts.func, "Admissible function: sigmoid, threshold or table:<path>");
    cmd->add_option("--l0", fopts.l0, "Cutoff: 'auto' (from the conditioning context) or a real");
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* nsdCmd = app.add_subcommand("nsd", "Pairwise semi-distance matrix (TSV)");
  std::vector<std::string> files;
  nsdCmd->add_option("files", files, "Input files")->required()->check(CLI::ExistingFile);
  addFunctionFlags(nsdCmd);
  nsdCmd->add_option("--out", out, "Output path (default stdout)");

  auto* clusterCmd = app.add_subcommand("cluster", "Tree from a TSV distance matrix (Newick)");
  std::string matrixPath, method = "nj";
  bool ascii = false;
  clusterCmd->add_option("matrix", matrixPath, "TSV distance matrix")->required();
  clusterCmd->add_option("--method", method, "nj or upgma");
  clusterCmd->add_flag("--ascii", ascii, "Also print an indented rendering");
  clusterCmd->add_option("--out", out, "Output path (default stdout)");

  auto* causalityCmd = app.add_subcommand("causality", "Directed information matrix and thresholded graph");
  std::string kind = "causal", specPath, matrixOut;
  double threshold = salza::kDefaultEdgeThreshold;
  causalityCmd->add_option("files", files, "Input files")->check(CLI::ExistingFile);
  causalityCmd->add_option("--spec", specPath, "Generate the inputs from a DAG spec instead of files");
  causalityCmd->add_option("--kind", kind, "causal or full");
  causalityCmd->add_option("--threshold", threshold, "Edge filter");
  causalityCmd->add_option("--seed", seed, "Override the spec seed");
  causalityCmd->add_option("--matrix", matrixOut, "Also write the matrix as TSV to this path");
  addFunctionFlags(causalityCmd);
  causalityCmd->add_option("--out", out, "DOT output path (default stdout)");

  auto* genCmd = app.add_subcommand("gen", "Generate synthetic strings from a spec file");
  genCmd->require_subcommand(1);
  std::string genSpec;
  for (const char* what : {"markov", "dag"}) {
    auto* sub = genCmd->add_subcommand(what, std::string("Generate ") + what + " strings");
    sub->add_option("spec", genSpec, "Spec file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory")->required();
    sub->add_option("--seed", seed, "Seed offset (markov) or override (dag)");
  }

  auto* factorizeCmd = app.add_subcommand("factorize", "Dump the symbols of a factorization (TSV)");
  std::string target, mode = "all-of-x";
  std::vector<std::string> sources;
  factorizeCmd->add_option("target", target, "File to factorize")->required()->check(CLI::ExistingFile);
  factorizeCmd->add_option("sources", sources, "Conditioning files")->check(CLI::ExistingFile);
  factorizeCmd->add_option("--mode", mode, "past-of-x, all-of-x, past-of-both or past-of-y-all-of-x");
  factorizeCmd->add_option("--out", out, "Output path (default stdout)");

  auto* simulateCmd = app.add_subcommand("simulate", "Poisson symbol-length study (TSV)");
  SimulateOptions sim;
  simulateCmd->add_option("--mu", sim.mu, "Comma-separated Poisson means");
  simulateCmd->add_option("--l0", sim.l0, "Comma-separated cutoffs");
  simulateCmd->add_option("--length", sim.length, "Comma-separated target lengths");
  simulateCmd->add_option("--trials", sim.trials, "Realizations per point")->check(CLI::PositiveNumber);
  simulateCmd->add_option("--seed", sim.seed, "Seed");
  simulateCmd->add_option("--out", out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (nsdCmd->parsed()) {
      emit(cmdNsd(files, fopts, threads), out);
    } else if (clusterCmd->parsed()) {
      emit(cmdCluster(matrixPath, method, ascii), out);
    } else if (causalityCmd->parsed()) {
      if (specPath.empty() == files.empty())
        throw salza::Error("causality needs either input files or --spec");
      const auto set = specPath.empty() ? loadFiles(files) : generateDag(specPath, seed);
      const auto result = cmdCausality(set, kind, threshold, fopts, threads);
      if (!matrixOut.empty()) emit(result.matrix, matrixOut);
      emit(result.dot, out);
    } else if (genCmd->parsed()) {
      const std::string what = genCmd->get_subcommands().front()->get_name();
      emit(cmdGen(what, genSpec, out, seed), "");
    } else if (factorizeCmd->parsed()) {
      emit(cmdFactorize(target, sources, mode), out);
    } else if (simulateCmd->parsed()) {
      emit(cmdSimulate(sim), out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
