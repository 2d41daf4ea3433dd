#pragma once

// Text formats: labeled TSV matrices, factorization dumps, length-profile
// tables, DOT graphs, and the sectioned key/value files used for generator
// specs. Reals are written with 9 significant digits, lines end with LF.

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "salza/clustering.hpp"
#include "salza/directed_info.hpp"
#include "salza/lz.hpp"
#include "salza/synth.hpp"

namespace salza {

struct LabeledMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};

namespace detail {
inline std::vector<std::string> splitTabs(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto tab = line.find('\t', start);
    cells.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) return cells;
    start = tab + 1;
  }
}

inline std::string chomp(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parseReal(const std::string& cell, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw Error("malformed number '" + cell + "' at " + where);
  }
  if (used != cell.size()) throw Error("malformed number '" + cell + "' at " + where);
  return v;
}
}  // namespace detail

/// Header row "<TAB>label..." followed by one "label<TAB>values..." row per item.
inline void writeMatrixTsv(std::ostream& os, const std::vector<std::string>& labels,
                           const std::vector<std::vector<double>>& values) {
  for (const auto& l : labels) os << '\t' << l;
  os << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << labels[i];
    for (auto v : values[i]) os << '\t' << formatReal(v);
    os << '\n';
  }
}

inline LabeledMatrix readMatrixTsv(std::istream& is) {
  LabeledMatrix m;
  std::string line;
  if (!std::getline(is, line)) throw Error("matrix parse error: missing header row");
  auto header = detail::splitTabs(detail::chomp(line));
  if (header.size() < 2 || !header[0].empty())
    throw Error("matrix parse error: header must start with an empty cell followed by labels");
  m.labels.assign(header.begin() + 1, header.end());
  const std::size_t n = m.labels.size();

  std::size_t row = 0;
  while (std::getline(is, line)) {
    line = detail::chomp(line);
    if (line.empty()) continue;
    ++row;
    auto cells = detail::splitTabs(line);
    if (row > n) throw Error("matrix parse error: extra row " + std::to_string(row));
    if (cells.size() != n + 1)
      throw Error("matrix parse error: row " + std::to_string(row) + " has " + std::to_string(cells.size() - 1) +
                  " columns, expected " + std::to_string(n));
    if (cells[0] != m.labels[row - 1])
      throw Error("matrix parse error: row " + std::to_string(row) + " label '" + cells[0] +
                  "' does not match column label '" + m.labels[row - 1] + "'");
    std::vector<double> values(n);
    for (std::size_t c = 0; c < n; ++c)
      values[c] = detail::parseReal(cells[c + 1], "row " + std::to_string(row) + ", column " + std::to_string(c + 1));
    m.values.push_back(std::move(values));
  }
  if (m.values.size() != n)
    throw Error("matrix parse error: expected " + std::to_string(n) + " rows, found " + std::to_string(m.values.size()));
  return m;
}

/// One line per symbol: pos, length, kind (ref|lit), source (self or index), offset or byte.
inline void writeSymbolsTsv(std::ostream& os, const Factorization& f) {
  os << "pos\tlength\tkind\tsource\tvalue\n";
  std::size_t pos = 0;
  for (const auto& s : f.symbols) {
    os << pos << '\t' << s.length << '\t';
    if (s.isLiteral()) {
      os << "lit\t-\t" << static_cast<unsigned>(s.literal) << '\n';
    } else {
      os << "ref\t";
      if (s.offset.source == kSelfRegion)
        os << "self";
      else
        os << s.offset.source;
      os << '\t' << s.offset.position << '\n';
    }
    pos += s.length;
  }
}

inline void writeProfileHeader(std::ostream& os) {
  os << "mu\tlength\tl0\tZ\tS_threshold\tSZ_threshold\tS_sigmoid\tSZ_sigmoid\n";
}

inline void writeProfileRow(std::ostream& os, const LengthProfile& p) {
  os << formatReal(p.mu) << '\t' << p.length << '\t' << formatReal(p.l0) << '\t' << formatReal(p.size) << '\t'
     << formatReal(p.spreadThreshold) << '\t' << formatReal(p.valueThreshold) << '\t'
     << formatReal(p.spreadSigmoid) << '\t' << formatReal(p.valueSigmoid) << '\n';
}

inline std::string quoteDotId(const std::string& id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

/// penwidth grows linearly with the edge weight, from 1 at zero to 8 at the
/// largest weight in the graph.
inline void writeDot(std::ostream& os, const DirectedGraph& g) {
  double maxWeight = 0.0;
  for (const auto& e : g.edges) maxWeight = std::max(maxWeight, e.weight);
  os << "digraph causality {\n";
  for (const auto& l : g.labels) os << "  " << quoteDotId(l) << ";\n";
  for (const auto& e : g.edges) {
    const double width = maxWeight > 0.0 ? 1.0 + 7.0 * std::max(e.weight, 0.0) / maxWeight : 1.0;
    os << "  " << quoteDotId(g.labels[e.from]) << " -> " << quoteDotId(g.labels[e.to])
       << " [value=" << formatReal(e.weight) << ", label=\"" << formatReal(e.weight)
       << "\", penwidth=" << formatReal(width) << "];\n";
  }
  os << "}\n";
}

/// One "[name]" section of a spec file: "key = value" pairs and matrix
/// blocks opened by "key:" and closed by "end".
struct ConfigSection {
  std::string name;
  std::map<std::string, std::string> values;
  std::map<std::string, Matrix> blocks;

  bool has(const std::string& key) const { return values.count(key) > 0; }

  const std::string& get(const std::string& key) const {
    auto it = values.find(key);
    if (it == values.end()) throw Error("section [" + name + "]: missing key '" + key + "'");
    return it->second;
  }

  double real(const std::string& key, double fallback) const {
    return has(key) ? detail::parseReal(get(key), "section [" + name + "] key '" + key + "'") : fallback;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const auto& s = get(key);
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || s[0] == '-')
      throw Error("section [" + name + "]: key '" + key + "' expects a nonnegative integer, got '" + s + "'");
    return v;
  }
};

inline std::vector<ConfigSection> parseConfig(std::istream& is) {
  std::vector<ConfigSection> sections;
  std::string line;
  std::size_t lineNo = 0;
  std::string openBlock;
  auto where = [&] { return "line " + std::to_string(lineNo); };
  auto current = [&]() -> ConfigSection& {
    if (sections.empty()) sections.push_back({"default", {}, {}});
    return sections.back();
  };

  while (std::getline(is, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    const std::string text = detail::trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty()) continue;

    if (!openBlock.empty()) {
      if (text == "end") {
        openBlock.clear();
        continue;
      }
      std::vector<double> row;
      std::istringstream cells(text);
      std::string cell;
      while (cells >> cell) row.push_back(detail::parseReal(cell, where()));
      current().blocks[openBlock].push_back(std::move(row));
      continue;
    }
    if (text.front() == '[') {
      if (text.back() != ']') throw Error("config parse error at " + where() + ": bad section header");
      sections.push_back({detail::trim(text.substr(1, text.size() - 2)), {}, {}});
      continue;
    }
    if (text.back() == ':') {
      openBlock = detail::trim(text.substr(0, text.size() - 1));
      current().blocks[openBlock].clear();
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw Error("config parse error at " + where() + ": expected 'key = value'");
    current().values[detail::trim(text.substr(0, eq))] = detail::trim(text.substr(eq + 1));
  }
  if (!openBlock.empty()) throw Error("config parse error: block '" + openBlock + "' is missing 'end'");
  return sections;
}

/// A labeled Markov realization request.
struct MarkovJob {
  std::string label;
  MarkovSpec spec;
};

/// Sections describe one transition matrix each: either a "transition:" block
/// or "transition = random <support> <matrix-seed>". "realizations = k" makes
/// k strings labeled <name>_c1..<name>_ck with seeds seed, seed + 1, ...
inline std::vector<MarkovJob> markovJobs(const std::vector<ConfigSection>& sections) {
  std::vector<MarkovJob> jobs;
  for (const auto& s : sections) {
    MarkovSpec spec;
    spec.alphabetSize = s.integer("alphabet", 0);
    spec.length = s.integer("length", 15000);
    spec.seed = s.integer("seed", 0);
    if (s.blocks.count("transition")) {
      spec.transition = s.blocks.at("transition");
      if (spec.alphabetSize == 0) spec.alphabetSize = spec.transition.size();
    } else if (s.has("transition")) {
      std::istringstream words(s.get("transition"));
      std::string kind;
      std::uint64_t support = 0, matrixSeed = 0;
      if (!(words >> kind >> support >> matrixSeed) || kind != "random")
        throw Error("section [" + s.name + "]: transition must be 'random <support> <seed>' or a block");
      spec.transition = randomTransitionMatrix(spec.alphabetSize, support, matrixSeed);
    } else {
      throw Error("section [" + s.name + "]: missing transition matrix");
    }
    spec.validate();
    const auto realizations = s.integer("realizations", 1);
    if (realizations == 0) throw Error("section [" + s.name + "]: realizations must be positive");
    for (std::uint64_t k = 0; k < realizations; ++k) {
      MarkovSpec r = spec;
      r.seed = spec.seed + k;
      jobs.push_back({realizations == 1 ? s.name : s.name + "_c" + std::to_string(k + 1), std::move(r)});
    }
  }
  return jobs;
}

inline DagSpec dagSpec(const ConfigSection& s) {
  DagSpec spec;
  if (!s.blocks.count("connectivity")) throw Error("section [" + s.name + "]: missing connectivity block");
  spec.connectivity = s.blocks.at("connectivity");
  spec.length = s.integer("length", spec.length);
  spec.burnIn = s.integer("burn_in", spec.burnIn);
  spec.copyScale = s.real("copy_scale", spec.copyScale);
  spec.alphabetSize = s.integer("alphabet", spec.alphabetSize);
  spec.seed = s.integer("seed", spec.seed);
  if (s.has("labels")) {
    std::istringstream words(s.get("labels"));
    std::string w;
    while (words >> w) spec.labels.push_back(w);
  }
  spec.validate();
  return spec;
}

}  // namespace salza
