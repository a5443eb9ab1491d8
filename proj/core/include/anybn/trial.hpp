#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "anybn/network.hpp"

namespace anybn {

/// A complete assignment of one state to every node.
class Trial {
 public:
  Trial() = default;
  explicit Trial(std::size_t node_count) : states_(node_count, 0) {}
  explicit Trial(std::vector<State> states) : states_(std::move(states)) {}

  std::size_t size() const noexcept { return states_.size(); }
  State operator[](NodeId n) const { return states_[n.index]; }
  State& operator[](NodeId n) { return states_[n.index]; }
  std::span<const State> states() const noexcept { return states_; }
  std::span<State> states() noexcept { return states_; }

  friend bool operator==(const Trial&, const Trial&) = default;

 private:
  std::vector<State> states_;
};

/// Canonical packed bit string identifying a trial.
///
/// Bit i of the code is bit (i % 64) of word i / 64. Ordering compares the
/// codes as unsigned integers, which is what "ascending id code" means
/// throughout the library.
class IdCode {
 public:
  IdCode() = default;
  explicit IdCode(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t bits() const noexcept { return bits_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Reads/writes `width` (<= 32) bits starting at `offset`, little-endian.
  std::uint64_t field(std::size_t offset, std::size_t width) const;
  void set_field(std::size_t offset, std::size_t width, std::uint64_t value);

  /// Most-significant nibble first, exactly ceil(bits/4) digits ("0" when bits == 0).
  std::string to_hex() const;
  /// Throws std::invalid_argument on non-hex input or set bits beyond `bits`.
  static IdCode from_hex(std::string_view hex, std::size_t bits);

  friend bool operator==(const IdCode&, const IdCode&) = default;
  friend std::strong_ordering operator<=>(const IdCode& a, const IdCode& b);

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct IdCodeHash {
  std::size_t operator()(const IdCode& code) const noexcept;
};

IdCode encode_trial(const Network& net, const Trial& trial);
/// Throws InvalidTrial when the code length differs from the layout or a
/// field holds a state >= cardinality.
Trial decode_trial(const Network& net, const IdCode& code);

/// Throws InvalidTrial unless trial has one in-range state per node.
void validate_trial(const Network& net, const Trial& trial);

struct Observation {
  NodeId node;
  State state = 0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// Partial assignment over the observed node set E. Keeps insertion order,
/// which the harness uses as the order of sequential observation.
class Evidence {
 public:
  Evidence() = default;
  /// Throws InvalidEvidence on a repeated node.
  explicit Evidence(std::vector<Observation> observations);

  void add(Observation obs);

  bool empty() const noexcept { return observations_.empty(); }
  std::size_t size() const noexcept { return observations_.size(); }
  std::span<const Observation> observations() const noexcept { return observations_; }
  bool contains(NodeId n) const { return state_of(n).has_value(); }
  std::optional<State> state_of(NodeId n) const;

  /// First k observations, in insertion order.
  Evidence prefix(std::size_t k) const;

  /// Throws InvalidEvidence on unknown nodes or out-of-range states.
  void validate(const Network& net) const;

  /// Same node/state set regardless of insertion order.
  friend bool operator==(const Evidence& a, const Evidence& b);

 private:
  std::vector<Observation> observations_;
};

/// True iff the trial agrees with every observation.
bool conforms(const Trial& trial, const Evidence& ev);

}  // namespace anybn
