#pragma once

// Subcommand implementations behind the `salza` executable. Each command
// renders its whole output into a string so that nothing is written unless
// the command succeeds.

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "salza/salza.hpp"

namespace salza::cli {

struct FunctionOptions {
  std::string func = "sigmoid";  // sigmoid | threshold | table:<path>
  std::string l0 = "auto";       // auto | <real>
};

inline AdmissibleFunction makeFunction(const FunctionOptions& opts) {
  if (opts.func.rfind("table:", 0) == 0) {
    const std::string path = opts.func.substr(6);
    std::ifstream in(path);
    if (!in) throw Error("cannot read file: " + path);
    std::vector<AdmissibleFunction::TableEntry> entries;
    std::string line;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
      ++lineNo;
      const auto hash = line.find('#');
      std::istringstream words(hash == std::string::npos ? line : line.substr(0, hash));
      long long length = 0;
      double value = 0.0;
      if (!(words >> length)) continue;
      if (!(words >> value) || length < 1)
        throw Error(path + ": line " + std::to_string(lineNo) + ": expected '<length> <value>'");
      entries.push_back({static_cast<std::size_t>(length), value});
    }
    return AdmissibleFunction::table(std::move(entries));
  }

  std::optional<double> cutoff;
  if (opts.l0 != "auto") {
    std::size_t used = 0;
    try {
      cutoff = std::stod(opts.l0, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != opts.l0.size()) throw Error("--l0 expects 'auto' or a real, got '" + opts.l0 + "'");
  }
  if (opts.func == "sigmoid") return cutoff ? AdmissibleFunction::sigmoid(*cutoff) : AdmissibleFunction::sigmoid();
  if (opts.func == "threshold")
    return cutoff ? AdmissibleFunction::threshold(*cutoff) : AdmissibleFunction::threshold();
  throw Error("--func expects sigmoid, threshold or table:<path>, got '" + opts.func + "'");
}

/// Reads every file, labeling each by its basename. Repeated basenames get
/// a numeric suffix and a warning.
inline StringSet loadFiles(const std::vector<std::string>& paths) {
  StringSet set;
  std::map<std::string, int> seen;
  for (const auto& path : paths) {
    auto bytes = readFile(path);
    if (bytes.empty()) throw Error("empty input: " + path);
    std::string label = std::filesystem::path(path).filename().string();
    if (int n = ++seen[label]; n > 1) {
      std::string renamed;
      do {
        renamed = label + "_" + std::to_string(n++);
      } while (seen.count(renamed));
      seen[label] = n - 1;
      seen[renamed] = 1;
      warn("duplicate label '" + label + "' renamed to '" + renamed + "'");
      label = renamed;
    }
    set.add(std::move(label), std::move(bytes));
  }
  return set;
}

inline DistanceMatrix nsdMatrix(const StringSet& set, const AdmissibleFunction& f, std::size_t threads) {
  set.validate();
  const std::size_t n = set.size();
  if (n < 2) throw Error("nsd needs at least two files");
  DistanceMatrix m;
  m.labels = set.labels;
  m.d.assign(n, std::vector<double>(n, 0.0));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  parallelFor(pairs.size(), threads, [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    m.d[i][j] = m.d[j][i] = nsd(view(set.items[i]), view(set.items[j]), f);
  });
  return m;
}

inline std::string cmdNsd(const std::vector<std::string>& files, const FunctionOptions& fopts, std::size_t threads) {
  if (files.size() < 2) throw Error("nsd needs at least two files");
  const auto m = nsdMatrix(loadFiles(files), makeFunction(fopts), threads);
  std::ostringstream os;
  writeMatrixTsv(os, m.labels, m.d);
  return os.str();
}

inline std::string cmdCluster(const std::string& matrixPath, const std::string& method, bool ascii) {
  std::ifstream in(matrixPath);
  if (!in) throw Error("cannot read file: " + matrixPath);
  const auto lm = readMatrixTsv(in);
  const DistanceMatrix dm{lm.labels, lm.values};
  Tree tree;
  if (method == "nj")
    tree = neighborJoining(dm);
  else if (method == "upgma")
    tree = upgma(dm);
  else
    throw Error("--method expects nj or upgma, got '" + method + "'");
  std::ostringstream os;
  os << toNewick(tree) << '\n';
  if (ascii) renderAscii(tree, os);
  return os.str();
}

inline DirectedInfoKind parseKind(const std::string& kind) {
  if (kind == "causal") return DirectedInfoKind::Causal;
  if (kind == "full") return DirectedInfoKind::Full;
  throw Error("--kind expects causal or full, got '" + kind + "'");
}

struct CausalityOutput {
  std::string dot;
  std::string matrix;
};

inline CausalityOutput cmdCausality(const StringSet& set, const std::string& kind, double threshold,
                                    const FunctionOptions& fopts, std::size_t threads) {
  if (set.size() < 2) throw Error("causality needs at least two inputs");
  if (!(threshold >= 0.0)) throw Error("--threshold must be nonnegative");
  auto m = directedInfoMatrix(set, parseKind(kind), makeFunction(fopts), threads);
  m.threshold = threshold;
  CausalityOutput out;
  std::ostringstream dot, tsv;
  writeDot(dot, extractDag(m, threshold));
  writeMatrixTsv(tsv, m.labels, m.values);
  out.dot = dot.str();
  out.matrix = tsv.str();
  return out;
}

inline std::vector<ConfigSection> readConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read file: " + path);
  return parseConfig(in);
}

inline StringSet generateDag(const std::string& specPath, std::optional<std::uint64_t> seed) {
  const auto sections = readConfigFile(specPath);
  if (sections.size() != 1) throw Error(specPath + ": a DAG spec file holds exactly one section");
  auto spec = dagSpec(sections.front());
  if (seed) spec.seed = *seed;
  return genDagProcesses(spec);
}

/// Writes each generated string as a raw byte file named by its label and
/// returns the list of written paths, one per line.
inline std::string writeSet(const StringSet& set, const std::string& outDir) {
  std::filesystem::create_directories(outDir);
  std::ostringstream os;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto path = (std::filesystem::path(outDir) / set.labels[i]).string();
    writeFile(path, view(set.items[i]));
    os << path << '\n';
  }
  return os.str();
}

inline std::string cmdGen(const std::string& what, const std::string& specPath, const std::string& outDir,
                          std::optional<std::uint64_t> seed) {
  if (outDir.empty()) throw Error("gen needs --out <directory>");
  StringSet set;
  if (what == "markov") {
    auto jobs = markovJobs(readConfigFile(specPath));
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      if (seed) jobs[k].spec.seed += *seed;
      set.add(jobs[k].label, genMarkov(jobs[k].spec));
    }
    set.validate();
  } else if (what == "dag") {
    set = generateDag(specPath, seed);
  } else {
    throw Error("gen expects markov or dag, got '" + what + "'");
  }
  return writeSet(set, outDir);
}

inline std::string cmdFactorize(const std::string& target, const std::vector<std::string>& sources,
                                const std::string& mode) {
  const auto targetBytes = readFile(target);
  std::vector<ByteString> sourceBytes;
  for (const auto& s : sources) sourceBytes.push_back(readFile(s));
  ConditioningContext ctx{{}, parseMode(mode)};
  for (const auto& b : sourceBytes) ctx.sources.push_back(view(b));
  std::ostringstream os;
  writeSymbolsTsv(os, factorize(view(targetBytes), ctx));
  return os.str();
}

inline std::vector<double> parseRealList(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error(flag + " expects a comma-separated list of reals");
    out.push_back(v);
  }
  if (out.empty()) throw Error(flag + " is empty");
  return out;
}

struct SimulateOptions {
  std::string mu = "4";
  std::string l0 = "2";
  std::string length = "16384";
  std::size_t trials = 200;
  std::uint64_t seed = 0;
};

/// One profile row per (mu, l0, length) combination, all from the same seed.
inline std::string cmdSimulate(const SimulateOptions& opts) {
  const auto mus = parseRealList(opts.mu, "--mu");
  const auto l0s = parseRealList(opts.l0, "--l0");
  const auto lengths = parseRealList(opts.length, "--length");
  std::ostringstream os;
  writeProfileHeader(os);
  for (auto mu : mus)
    for (auto l0 : l0s)
      for (auto len : lengths) {
        if (!(len >= 1.0) || len != std::floor(len)) throw Error("--length expects positive integers");
        LengthSimSpec spec{mu, l0, static_cast<std::size_t>(len), opts.trials, opts.seed};
        writeProfileRow(os, simulateLengthProfile(spec));
      }
  return os.str();
}

}  // namespace salza::cli
