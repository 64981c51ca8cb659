#include "sparsebp/model_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace sparsebp {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InvalidModel("model line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos > start) tokens.push_back(line.substr(start, pos - start));
  }
  return tokens;
}

template <typename T>
T number(std::string_view token, std::size_t line) {
  T value{};
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size()) fail(line, "bad number '" + std::string(token) + "'");
  return value;
}

// "key=value" with the expected key.
template <typename T>
T keyed(std::string_view token, std::string_view key, std::size_t line) {
  if (token.size() <= key.size() + 1 || token.substr(0, key.size()) != key || token[key.size()] != '=')
    fail(line, "expected " + std::string(key) + "=<value>");
  return number<T>(token.substr(key.size() + 1), line);
}

struct PotentialBlock {
  double fbar = 0;
  std::map<Index, std::vector<SparsePotential::Entry>> columns;
};

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MrfModel parse_model(std::string_view text) {
  std::optional<Index> labels, node_count, edge_count;
  std::map<Index, Eigen::VectorXd> unaries;
  struct RawEdge {
    Index a, b;
    long long pot;
    std::size_t line;
  };
  std::vector<RawEdge> raw_edges;
  std::map<long long, PotentialBlock> blocks;
  PotentialBlock* current = nullptr;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto tok = tokenize(line);
    if (tok.empty() || tok[0].front() == '#') continue;

    const std::string_view kind = tok[0];
    if (kind == "MRF") {
      if (labels) fail(line_no, "duplicate header");
      if (tok.size() != 4) fail(line_no, "header needs M=, nodes= and edges=");
      labels = keyed<Index>(tok[1], "M", line_no);
      node_count = keyed<Index>(tok[2], "nodes", line_no);
      edge_count = keyed<Index>(tok[3], "edges", line_no);
      if (*labels < 1 || *node_count < 0 || *edge_count < 0) fail(line_no, "header counts out of range");
      continue;
    }
    if (!labels) fail(line_no, "missing MRF header");
    if (kind == "g") {
      if (static_cast<Index>(tok.size()) != *labels + 2) fail(line_no, "unary line needs M values");
      const auto node = number<Index>(tok[1], line_no);
      if (node < 0 || node >= *node_count) fail(line_no, "node out of range");
      if (unaries.count(node) != 0) fail(line_no, "duplicate unary for node " + std::to_string(node));
      Eigen::VectorXd g(*labels);
      for (Index k = 0; k < *labels; ++k) g[k] = number<double>(tok[static_cast<std::size_t>(k) + 2], line_no);
      unaries.emplace(node, std::move(g));
    } else if (kind == "e") {
      if (tok.size() != 4) fail(line_no, "edge line needs i j potential-id");
      raw_edges.push_back({number<Index>(tok[1], line_no), number<Index>(tok[2], line_no),
                           number<long long>(tok[3], line_no), line_no});
    } else if (kind == "pot") {
      if (tok.size() != 3) fail(line_no, "potential line needs id and fbar=");
      const auto id = number<long long>(tok[1], line_no);
      if (blocks.count(id) != 0) fail(line_no, "duplicate potential id " + std::to_string(id));
      current = &blocks[id];
      current->fbar = keyed<double>(tok[2], "fbar", line_no);
    } else if (kind == "col") {
      if (current == nullptr) fail(line_no, "col line outside a potential block");
      if (tok.size() < 2) fail(line_no, "col line needs a column index");
      const auto xj = number<Index>(tok[1], line_no);
      if (xj < 0 || xj >= *labels) fail(line_no, "column out of range");
      if (current->columns.count(xj) != 0) fail(line_no, "duplicate column " + std::to_string(xj));
      auto& entries = current->columns[xj];
      for (std::size_t k = 2; k < tok.size(); ++k) {
        const auto colon = tok[k].find(':');
        if (colon == std::string_view::npos) fail(line_no, "expected xi:value");
        entries.push_back({number<Index>(tok[k].substr(0, colon), line_no), number<double>(tok[k].substr(colon + 1), line_no)});
      }
    } else {
      fail(line_no, "unknown record '" + std::string(kind) + "'");
    }
  }

  if (!labels) throw InvalidModel("model has no MRF header");
  if (static_cast<Index>(unaries.size()) != *node_count)
    throw InvalidModel("model declares " + std::to_string(*node_count) + " nodes but has " +
                       std::to_string(unaries.size()) + " unary lines");
  if (static_cast<Index>(raw_edges.size()) != *edge_count)
    throw InvalidModel("model declares " + std::to_string(*edge_count) + " edges but has " +
                       std::to_string(raw_edges.size()) + " edge lines");

  std::map<long long, PotentialRef> potentials;
  for (auto& [id, block] : blocks) {
    std::vector<std::vector<SparsePotential::Entry>> columns(static_cast<std::size_t>(*labels));
    for (auto& [xj, entries] : block.columns) columns[static_cast<std::size_t>(xj)] = std::move(entries);
    potentials.emplace(id, PairwisePotential::from_sparse(SparsePotential(*labels, block.fbar, columns)));
  }

  Eigen::MatrixXd unary(*labels, *node_count);
  for (auto& [node, g] : unaries) unary.col(node) = g;
  std::vector<Edge> edges;
  for (const RawEdge& e : raw_edges) {
    auto it = potentials.find(e.pot);
    if (it == potentials.end()) fail(e.line, "unknown potential id " + std::to_string(e.pot));
    edges.push_back({e.a, e.b, it->second});
  }
  return MrfModel(*labels, std::move(unary), std::move(edges));
}

std::string format_model(const MrfModel& model) {
  std::ostringstream out;
  out << "MRF M=" << model.labels() << " nodes=" << model.node_count() << " edges=" << model.edge_count() << "\n";
  for (Index i = 0; i < model.node_count(); ++i) {
    out << "g " << i;
    for (Index k = 0; k < model.labels(); ++k) out << ' ' << real(model.unary()(k, i));
    out << "\n";
  }
  std::map<const PairwisePotential*, Index> ids;
  std::vector<const PairwisePotential*> order;
  for (const Edge& e : model.edges()) {
    auto [it, inserted] = ids.emplace(e.potential.get(), static_cast<Index>(order.size()));
    if (inserted) order.push_back(e.potential.get());
    out << "e " << e.first << ' ' << e.second << ' ' << it->second << "\n";
  }
  for (std::size_t id = 0; id < order.size(); ++id) {
    if (!order[id]->has_sparse()) throw InvalidModel("only sparse potentials can be written");
    const SparsePotential& f = order[id]->sparse(Domain::SumProduct);
    out << "pot " << id << " fbar=" << real(f.fbar()) << "\n";
    for (Index xj = 0; xj < f.labels(); ++xj) {
      auto rows = f.neighbors(xj);
      if (rows.empty()) continue;
      auto vals = f.values(xj);
      out << "col " << xj;
      for (std::size_t k = 0; k < rows.size(); ++k) out << ' ' << rows[k] << ':' << real(vals[k]);
      out << "\n";
    }
  }
  return out.str();
}

MrfModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_model(text);
}

void write_model_file(const std::filesystem::path& path, const MrfModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_model(model);
}

}  // namespace sparsebp
