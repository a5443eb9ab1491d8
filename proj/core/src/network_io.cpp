#include "anybn/network_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "anybn/error.hpp"

namespace anybn {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

struct PendingNode {
  NodeSpec spec;
  bool has_parents = false;
  bool has_cpt = false;
};

}  // namespace

Network read_network(std::istream& in) {
  std::string net_name;
  bool have_header = false;
  std::vector<PendingNode> nodes;
  std::unordered_map<std::string, std::size_t> index;

  // CPT block state.
  std::size_t cpt_node = 0;
  std::size_t rows_left = 0;
  std::size_t row = 0;
  std::size_t cpt_line = 0;

  auto lookup = [&](std::string_view name, std::size_t line) {
    auto it = index.find(std::string(name));
    if (it == index.end()) throw ParseError(line, "unknown node '" + std::string(name) + "'");
    return it->second;
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = tokenize(line);
    if (tok.empty()) continue;

    if (rows_left > 0) {
      auto& spec = nodes[cpt_node].spec;
      if (tok.size() != spec.cardinality) {
        throw ParseError(line_no, "CPT row for '" + spec.name + "' needs " + std::to_string(spec.cardinality) +
                                      " probabilities, found " + std::to_string(tok.size()));
      }
      double sum = 0.0;
      for (auto t : tok) {
        double p;
        if (!parse_number(t, p)) throw ParseError(line_no, "not a number: '" + std::string(t) + "'");
        if (!(p >= 0.0 && p <= 1.0)) throw ParseError(line_no, "probability outside [0, 1]: " + std::string(t));
        spec.cpt.push_back(p);
        sum += p;
      }
      if (std::abs(sum - 1.0) > Network::kRowTolerance) {
        throw ParseError(line_no, "CPT row " + std::to_string(row) + " of '" + spec.name + "' sums to " +
                                      std::to_string(sum));
      }
      ++row;
      --rows_left;
      continue;
    }

    const auto kw = tok[0];
    if (kw == "net") {
      if (have_header) throw ParseError(line_no, "duplicate 'net' line");
      if (tok.size() != 2) throw ParseError(line_no, "expected: net <name>");
      net_name = std::string(tok[1]);
      have_header = true;
    } else if (kw == "node") {
      if (!have_header) throw ParseError(line_no, "'net' line must come first");
      if (tok.size() != 3) throw ParseError(line_no, "expected: node <name> <cardinality>");
      std::size_t k;
      if (!parse_number(tok[2], k) || k < 2) throw ParseError(line_no, "cardinality must be an integer >= 2");
      std::string name(tok[1]);
      if (!index.emplace(name, nodes.size()).second) throw ParseError(line_no, "duplicate node '" + name + "'");
      nodes.push_back({NodeSpec{std::move(name), k, {}, {}}, false, false});
    } else if (kw == "parents") {
      if (tok.size() < 2) throw ParseError(line_no, "expected: parents <node> <parent>...");
      auto& pending = nodes[lookup(tok[1], line_no)];
      if (pending.has_parents) throw ParseError(line_no, "parents of '" + pending.spec.name + "' given twice");
      if (pending.has_cpt) throw ParseError(line_no, "parents of '" + pending.spec.name + "' declared after its CPT");
      for (std::size_t i = 2; i < tok.size(); ++i) pending.spec.parents.emplace_back(lookup(tok[i], line_no));
      pending.has_parents = true;
    } else if (kw == "cpt") {
      if (tok.size() != 2) throw ParseError(line_no, "expected: cpt <node>");
      cpt_node = lookup(tok[1], line_no);
      auto& pending = nodes[cpt_node];
      if (pending.has_cpt) throw ParseError(line_no, "CPT of '" + pending.spec.name + "' given twice");
      double rows = 1.0;
      for (auto p : pending.spec.parents) {
        if (p.index >= nodes.size()) throw ParseError(line_no, "bad parent reference");
        rows *= static_cast<double>(nodes[p.index].spec.cardinality);
      }
      if (rows > 1e7) throw ParseError(line_no, "CPT of '" + pending.spec.name + "' is too large");
      pending.has_cpt = true;
      rows_left = static_cast<std::size_t>(rows);
      row = 0;
      cpt_line = line_no;
    } else {
      throw ParseError(line_no, "unknown keyword '" + std::string(kw) + "'");
    }
  }

  if (rows_left > 0) {
    throw ParseError(cpt_line, "CPT of '" + nodes[cpt_node].spec.name + "' is missing " + std::to_string(rows_left) +
                                   " row(s)");
  }
  if (!have_header) throw ParseError(line_no, "missing 'net' line");
  std::vector<NodeSpec> specs;
  specs.reserve(nodes.size());
  for (auto& pending : nodes) {
    if (!pending.has_cpt) throw ParseError(line_no, "node '" + pending.spec.name + "' has no CPT");
    specs.push_back(std::move(pending.spec));
  }
  try {
    return Network(std::move(net_name), std::move(specs));
  } catch (const InvalidNetwork& e) {
    throw ParseError(line_no, e.what());
  }
}

Network read_network_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open network file '" + path.string() + "'");
  return read_network(in);
}

Network parse_network(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_network(in);
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_network(std::ostream& out, const Network& net) {
  out << "net " << net.name() << '\n';
  for (std::size_t i = 0; i < net.size(); ++i) {
    out << "node " << net.node_name(NodeId{i}) << ' ' << net.cardinality(NodeId{i}) << '\n';
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    const NodeId n{i};
    if (net.parents(n).empty()) continue;
    out << "parents " << net.node_name(n);
    for (auto p : net.parents(n)) out << ' ' << net.node_name(p);
    out << '\n';
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    const NodeId n{i};
    out << "cpt " << net.node_name(n) << '\n';
    for (std::size_t r = 0; r < net.row_count(n); ++r) {
      const auto row = net.cpt_row(n, r);
      for (std::size_t s = 0; s < row.size(); ++s) {
        if (s) out << ' ';
        out << format_double(row[s]);
      }
      out << '\n';
    }
  }
}

std::string format_network(const Network& net) {
  std::ostringstream out;
  write_network(out, net);
  return out.str();
}

void write_network_file(const std::filesystem::path& path, const Network& net) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write network file '" + path.string() + "'");
  write_network(out, net);
}

Evidence parse_evidence(const Network& net, std::string_view text) {
  Evidence ev;
  text = trim(text);
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidEvidence("expected name=state, got '" + std::string(item) + "'");
    const auto name = trim(item.substr(0, eq));
    const auto value = trim(item.substr(eq + 1));
    const auto node = net.find(name);
    if (!node) throw InvalidEvidence("unknown node '" + std::string(name) + "' in evidence");
    State state;
    if (!parse_number(value, state) || state >= net.cardinality(*node)) {
      throw InvalidEvidence("invalid state '" + std::string(value) + "' for node '" + std::string(name) + "'");
    }
    ev.add({*node, state});
  }
  return ev;
}

std::string format_evidence(const Network& net, const Evidence& ev) {
  std::string out;
  for (const auto& obs : ev.observations()) {
    if (!out.empty()) out += ',';
    out += net.node_name(obs.node) + "=" + std::to_string(obs.state);
  }
  return out;
}

}  // namespace anybn
