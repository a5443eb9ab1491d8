#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "anybn/network.hpp"
#include "anybn/trial.hpp"

namespace anybn {

// Line-oriented network text format:
//
//   net <name>
//   node <name> <cardinality>          one per node, in index order
//   parents <node> <parent>...         one per node that has parents
//   cpt <node>                         followed by one line per parent
//   <p_0> <p_1> ... <p_{k-1}>          combination, mixed-radix ascending
//
// '#' starts a comment. Errors are reported as ParseError with the line.

Network read_network(std::istream& in);
Network read_network_file(const std::filesystem::path& path);
Network parse_network(std::string_view text);

/// Probabilities are written in shortest round-trip form, so reading the
/// output back yields a bit-identical network.
void write_network(std::ostream& out, const Network& net);
std::string format_network(const Network& net);
void write_network_file(const std::filesystem::path& path, const Network& net);

/// "name=state, name=state" with state indices; empty text is empty evidence.
/// Throws InvalidEvidence naming the offending token.
Evidence parse_evidence(const Network& net, std::string_view text);
std::string format_evidence(const Network& net, const Evidence& ev);

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

}  // namespace anybn
