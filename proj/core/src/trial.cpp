#include "anybn/trial.hpp"

#include <algorithm>
#include <stdexcept>

#include "anybn/error.hpp"

namespace anybn {

std::uint64_t IdCode::field(std::size_t offset, std::size_t width) const {
  std::uint64_t value = 0;
  for (std::size_t b = 0; b < width; ++b) {
    const auto bit = offset + b;
    value |= ((words_[bit / 64] >> (bit % 64)) & 1ULL) << b;
  }
  return value;
}

void IdCode::set_field(std::size_t offset, std::size_t width, std::uint64_t value) {
  for (std::size_t b = 0; b < width; ++b) {
    const auto bit = offset + b;
    const auto mask = 1ULL << (bit % 64);
    if ((value >> b) & 1ULL) {
      words_[bit / 64] |= mask;
    } else {
      words_[bit / 64] &= ~mask;
    }
  }
}

std::string IdCode::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = std::max<std::size_t>(1, (bits_ + 3) / 4);
  std::string out(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    const std::size_t bit = d * 4;
    if (bit >= words_.size() * 64) break;
    const auto nibble = (words_[bit / 64] >> (bit % 64)) & 0xF;
    out[digits - 1 - d] = kDigits[nibble];
  }
  return out;
}

IdCode IdCode::from_hex(std::string_view hex, std::size_t bits) {
  if (hex.empty()) throw std::invalid_argument("empty id code");
  IdCode code(bits);
  const std::size_t n = hex.size();
  for (std::size_t d = 0; d < n; ++d) {
    const char c = hex[n - 1 - d];
    std::uint64_t nibble;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<std::uint64_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<std::uint64_t>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      nibble = static_cast<std::uint64_t>(c - 'A' + 10);
    } else {
      throw std::invalid_argument("invalid hex digit in id code");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      if (!((nibble >> b) & 1ULL)) continue;
      const std::size_t bit = d * 4 + b;
      if (bit >= bits) throw std::invalid_argument("id code wider than the network layout");
      code.words_[bit / 64] |= 1ULL << (bit % 64);
    }
  }
  return code;
}

std::strong_ordering operator<=>(const IdCode& a, const IdCode& b) {
  if (a.bits_ != b.bits_) return a.bits_ <=> b.bits_;
  for (std::size_t w = a.words_.size(); w-- > 0;) {
    if (a.words_[w] != b.words_[w]) return a.words_[w] <=> b.words_[w];
  }
  return std::strong_ordering::equal;
}

std::size_t IdCodeHash::operator()(const IdCode& code) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ code.bits();
  for (auto w : code.words()) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(h ^ (h >> 32));
}

void validate_trial(const Network& net, const Trial& trial) {
  if (trial.size() != net.size()) {
    throw InvalidTrial("trial has " + std::to_string(trial.size()) + " states, network has " +
                       std::to_string(net.size()) + " nodes");
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (trial.states()[i] >= net.cardinality(NodeId{i})) {
      throw InvalidTrial("state " + std::to_string(trial.states()[i]) + " out of range for node '" +
                         net.node_name(NodeId{i}) + "'");
    }
  }
}

IdCode encode_trial(const Network& net, const Trial& trial) {
  validate_trial(net, trial);
  IdCode code(net.id_bits());
  for (std::size_t i = 0; i < net.size(); ++i) {
    const NodeId n{i};
    code.set_field(net.bit_offset(n), net.bit_width(n), trial[n]);
  }
  return code;
}

Trial decode_trial(const Network& net, const IdCode& code) {
  if (code.bits() != net.id_bits()) {
    throw InvalidTrial("id code has " + std::to_string(code.bits()) + " bits, layout needs " +
                       std::to_string(net.id_bits()));
  }
  Trial trial(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    const NodeId n{i};
    const auto state = code.field(net.bit_offset(n), net.bit_width(n));
    if (state >= net.cardinality(n)) {
      throw InvalidTrial("id code field for node '" + net.node_name(n) + "' holds out-of-range state " +
                         std::to_string(state));
    }
    trial[n] = static_cast<State>(state);
  }
  return trial;
}

Evidence::Evidence(std::vector<Observation> observations) {
  for (const auto& obs : observations) add(obs);
}

void Evidence::add(Observation obs) {
  if (contains(obs.node)) {
    throw InvalidEvidence("node " + std::to_string(obs.node.index) + " observed twice");
  }
  observations_.push_back(obs);
}

std::optional<State> Evidence::state_of(NodeId n) const {
  for (const auto& obs : observations_) {
    if (obs.node == n) return obs.state;
  }
  return std::nullopt;
}

Evidence Evidence::prefix(std::size_t k) const {
  Evidence out;
  out.observations_.assign(observations_.begin(), observations_.begin() + std::min(k, observations_.size()));
  return out;
}

void Evidence::validate(const Network& net) const {
  for (const auto& obs : observations_) {
    if (obs.node.index >= net.size()) {
      throw InvalidEvidence("evidence names node index " + std::to_string(obs.node.index) + " beyond the network");
    }
    if (obs.state >= net.cardinality(obs.node)) {
      throw InvalidEvidence("evidence state " + std::to_string(obs.state) + " out of range for node '" +
                            net.node_name(obs.node) + "'");
    }
  }
}

bool operator==(const Evidence& a, const Evidence& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.observations_.begin(), a.observations_.end(),
                     [&](const Observation& obs) { return b.state_of(obs.node) == obs.state; });
}

bool conforms(const Trial& trial, const Evidence& ev) {
  for (const auto& obs : ev.observations()) {
    if (trial[obs.node] != obs.state) return false;
  }
  return true;
}

}  // namespace anybn
