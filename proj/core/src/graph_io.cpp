#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "gnnlab/error.hpp"
#include "gnnlab/graph.hpp"

namespace gnnlab {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

long parse_int(std::string_view tok, std::size_t line_no, const char* what) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(std::string("expected integer ") + what + ", got '" +
                         std::string(tok) + "'",
                     line_no);
  return value;
}

double parse_double(std::string_view tok, std::size_t line_no) {
  // std::from_chars<double> is available with GCC 11; strtod fallback would
  // depend on the global locale.
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError("expected real number, got '" + std::string(tok) + "'",
                     line_no);
  return value;
}

}  // namespace

std::string format_graph(const Graph& graph) {
  std::ostringstream out;
  out << "nodes " << graph.num_nodes() << " features " << graph.feature_dim()
      << " classes " << graph.num_classes() << "\n";
  for (NodeId i = 0; i < graph.num_nodes(); ++i) {
    out << "node " << i << " " << graph.label(i);
    for (double v : graph.feature_row(i)) out << " " << format_double(v);
    out << "\n";
  }
  for (auto [u, v] : graph.edge_list()) out << "edge " << u << " " << v << "\n";
  for (NodeId i = 0; i < graph.num_nodes(); ++i)
    if (graph.is_train(i)) out << "train " << i << "\n";
  for (NodeId i = 0; i < graph.num_nodes(); ++i)
    if (graph.is_test(i)) out << "test " << i << "\n";
  return out.str();
}

Graph parse_graph(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&](std::vector<std::string_view>& toks,
                       std::string& storage) -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      storage = line;
      toks = split_ws(storage);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string_view> toks;
  std::string storage;
  if (!next_line(toks, storage)) throw ParseError("empty graph file", 1);
  if (toks.size() != 6 || toks[0] != "nodes" || toks[2] != "features" ||
      toks[4] != "classes")
    throw ParseError("expected header 'nodes <n> features <r> classes <K>'",
                     line_no);
  auto n = static_cast<NodeId>(parse_int(toks[1], line_no, "node count"));
  int r = static_cast<int>(parse_int(toks[3], line_no, "feature dim"));
  int k = static_cast<int>(parse_int(toks[5], line_no, "class count"));
  if (n < 1 || r < 1 || k < 1)
    throw ParseError("header counts must be positive", line_no);

  std::vector<double> features(static_cast<std::size_t>(n) * r, 0.0);
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> seen_node(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::set<std::pair<NodeId, NodeId>> edge_set;
  std::vector<std::uint8_t> train(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> test(static_cast<std::size_t>(n), 0);
  bool any_mask = false;

  auto check_id = [&](long id) {
    if (id < 0 || id >= n)
      throw ParseError("node id " + std::to_string(id) + " out of range",
                       line_no);
    return static_cast<NodeId>(id);
  };

  while (next_line(toks, storage)) {
    if (toks[0] == "node") {
      if (toks.size() != static_cast<std::size_t>(3 + r))
        throw ParseError("node line needs id, label and " + std::to_string(r) +
                             " features",
                         line_no);
      NodeId id = check_id(parse_int(toks[1], line_no, "node id"));
      if (seen_node[static_cast<std::size_t>(id)])
        throw ParseError("duplicate node line for id " + std::to_string(id),
                         line_no);
      seen_node[static_cast<std::size_t>(id)] = 1;
      long label = parse_int(toks[2], line_no, "label");
      if (label < 0 || label >= k)
        throw ParseError("label " + std::to_string(label) + " outside [0, " +
                             std::to_string(k) + ")",
                         line_no);
      labels[static_cast<std::size_t>(id)] = static_cast<int>(label);
      for (int f = 0; f < r; ++f)
        features[static_cast<std::size_t>(id) * r + f] =
            parse_double(toks[static_cast<std::size_t>(3 + f)], line_no);
    } else if (toks[0] == "edge") {
      if (toks.size() != 3) throw ParseError("edge line needs two ids", line_no);
      NodeId u = check_id(parse_int(toks[1], line_no, "edge endpoint"));
      NodeId v = check_id(parse_int(toks[2], line_no, "edge endpoint"));
      if (u >= v)
        throw ParseError("edge endpoints must satisfy u < v", line_no);
      if (!edge_set.insert({u, v}).second)
        throw ParseError("duplicate edge " + std::to_string(u) + " " +
                             std::to_string(v),
                         line_no);
      edges.emplace_back(u, v);
    } else if (toks[0] == "train" || toks[0] == "test") {
      if (toks.size() != 2)
        throw ParseError("mask line needs one id", line_no);
      NodeId id = check_id(parse_int(toks[1], line_no, "mask id"));
      any_mask = true;
      (toks[0] == "train" ? train : test)[static_cast<std::size_t>(id)] = 1;
    } else {
      throw ParseError("unknown record '" + std::string(toks[0]) + "'",
                       line_no);
    }
  }

  for (NodeId i = 0; i < n; ++i)
    if (!seen_node[static_cast<std::size_t>(i)])
      throw ParseError("missing node line for id " + std::to_string(i),
                       line_no);
  if (!any_mask) train.assign(static_cast<std::size_t>(n), 1);

  try {
    return Graph(n, r, k, std::move(features), std::move(labels), edges,
                 std::move(train), std::move(test));
  } catch (const InputError& e) {
    throw ParseError(e.what(), line_no);
  }
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open graph file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph(buf.str());
}

void save_graph(const Graph& graph, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write graph file '" + path + "'");
  out << format_graph(graph);
  if (!out) throw InputError("failed writing graph file '" + path + "'");
}

}  // namespace gnnlab
