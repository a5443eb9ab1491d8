#include "anybn/archive.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "anybn/error.hpp"
#include "anybn/network_io.hpp"

namespace anybn {

Archive::Archive(const Network& net) : net_(&net), conforming_sums_(net) {}

bool Archive::insert(const Trial& trial) {
  auto id = encode_trial(*net_, trial);
  if (index_.contains(id)) return false;
  const double p = joint_probability(*net_, trial);
  return insert(trial, id, p);
}

bool Archive::insert(const Trial& trial, const IdCode& id, double probability) {
  if (!(probability > 0.0)) return false;
  const auto entry = probabilities_.size();
  if (!index_.emplace(id, entry).second) return false;
  ids_.push_back(id);
  probabilities_.push_back(probability);
  states_.insert(states_.end(), trial.states().begin(), trial.states().end());
  total_mass_ += probability;
  if (entry_conforms(entry)) accumulate(entry);
  return true;
}

Trial Archive::trial(std::size_t entry) const {
  const auto n = net_->size();
  return Trial(std::vector<State>(states_.begin() + static_cast<std::ptrdiff_t>(entry * n),
                                  states_.begin() + static_cast<std::ptrdiff_t>((entry + 1) * n)));
}

bool Archive::entry_conforms(std::size_t entry) const {
  const auto* row = states_.data() + entry * net_->size();
  for (const auto& obs : evidence_.observations()) {
    if (row[obs.node.index] != obs.state) return false;
  }
  return true;
}

void Archive::accumulate(std::size_t entry) {
  const auto n = net_->size();
  const auto* row = states_.data() + entry * n;
  const double p = probabilities_[entry];
  evidence_mass_ += p;
  ++conforming_count_;
  for (std::size_t i = 0; i < n; ++i) conforming_sums_.at(NodeId{i}, row[i]) += p;
}

std::size_t Archive::set_evidence(const Evidence& ev) {
  ev.validate(*net_);
  evidence_ = ev;
  evidence_mass_ = 0.0;
  conforming_count_ = 0;
  for (auto& c : conforming_sums_.cells()) c = 0.0;
  for (std::size_t e = 0; e < size(); ++e) {
    if (entry_conforms(e)) accumulate(e);
  }
  return conforming_count_;
}

BeliefTable Archive::posterior() const {
  BeliefTable out = conforming_sums_;
  out.normalize_by(evidence_mass_);
  return out;
}

std::vector<std::size_t> Archive::top_conforming(std::size_t k) const {
  std::vector<std::size_t> hits;
  hits.reserve(conforming_count_);
  for (std::size_t e = 0; e < size(); ++e) {
    if (entry_conforms(e)) hits.push_back(e);
  }
  auto better = [&](std::size_t a, std::size_t b) {
    if (probabilities_[a] != probabilities_[b]) return probabilities_[a] > probabilities_[b];
    return ids_[a] < ids_[b];
  };
  const auto keep = std::min(k, hits.size());
  std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(keep), hits.end(), better);
  hits.resize(keep);
  return hits;
}

void write_snapshot(std::ostream& out, const Archive& archive) {
  out << "archive " << archive.network().name() << ' ' << archive.size() << '\n';
  for (std::size_t e = 0; e < archive.size(); ++e) {
    out << archive.id(e).to_hex() << ' ' << format_double(archive.probability(e)) << '\n';
  }
}

Archive read_snapshot(std::istream& in, const Network& net) {
  Archive archive(net);
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected = 0;
  bool header = false;
  std::size_t entries = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string a, b, c;
    if (!(fields >> a)) continue;
    if (!header) {
      if (a != "archive" || !(fields >> b >> c)) throw ParseError(line_no, "expected: archive <net-name> <count>");
      if (b != net.name()) throw ParseError(line_no, "snapshot belongs to network '" + b + "'");
      auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), expected);
      if (ec != std::errc{} || ptr != c.data() + c.size()) throw ParseError(line_no, "bad entry count");
      header = true;
      continue;
    }
    if (!(fields >> b)) throw ParseError(line_no, "expected: <hex id> <probability>");
    IdCode id;
    Trial trial;
    try {
      id = IdCode::from_hex(a, net.id_bits());
      trial = decode_trial(net, id);
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
    double stored;
    auto [ptr, ec] = std::from_chars(b.data(), b.data() + b.size(), stored);
    if (ec != std::errc{} || ptr != b.data() + b.size()) throw ParseError(line_no, "bad probability '" + b + "'");
    const double p = joint_probability(net, trial);
    if (std::abs(p - stored) > 1e-9 * std::max(p, stored)) {
      throw ParseError(line_no, "stored probability disagrees with the network");
    }
    if (!archive.insert(trial, id, p)) throw ParseError(line_no, "duplicate or zero-probability entry");
    ++entries;
  }
  if (!header) throw ParseError(line_no, "missing archive header");
  if (entries != expected) {
    throw ParseError(line_no, "header promises " + std::to_string(expected) + " entries, found " +
                                  std::to_string(entries));
  }
  return archive;
}

}  // namespace anybn
