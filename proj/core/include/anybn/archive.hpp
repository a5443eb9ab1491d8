#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "anybn/belief.hpp"
#include "anybn/network.hpp"
#include "anybn/trial.hpp"

namespace anybn {

/// Deduplicated store of unique trials with their joint probabilities, plus
/// the partial sums behind the archive estimator.
///
/// Entries are kept in insertion order. The evidence cache (conforming mass
/// and per-(node, state) conforming sums) is rebuilt by a full scan on
/// set_evidence and updated incrementally on insert. Zero-probability trials
/// are never stored; they cannot change any partial sum.
///
/// Single writer: concurrent inserts need external serialization. The
/// archive keeps a pointer to its network, which must outlive it.
class Archive {
 public:
  explicit Archive(const Network& net);

  /// True when the trial was new and had positive probability.
  bool insert(const Trial& trial);
  /// Same, with the joint probability already known (skips recomputation).
  bool insert(const Trial& trial, const IdCode& id, double probability);

  /// Rebuilds the evidence cache; returns how many stored trials conform.
  std::size_t set_evidence(const Evidence& ev);
  const Evidence& evidence() const noexcept { return evidence_; }

  /// Conforming sums over evidence mass; undefined when that mass is zero.
  BeliefTable posterior() const;

  double total_mass() const noexcept { return total_mass_; }
  double evidence_mass() const noexcept { return evidence_mass_; }
  std::size_t size() const noexcept { return probabilities_.size(); }
  std::size_t conforming_count() const noexcept { return conforming_count_; }
  const BeliefTable& conforming_sums() const noexcept { return conforming_sums_; }

  bool contains(const IdCode& id) const { return index_.contains(id); }
  const IdCode& id(std::size_t entry) const { return ids_[entry]; }
  double probability(std::size_t entry) const { return probabilities_[entry]; }
  Trial trial(std::size_t entry) const;
  bool entry_conforms(std::size_t entry) const;

  /// Up to k conforming entries by descending probability, ties by ascending id.
  std::vector<std::size_t> top_conforming(std::size_t k) const;

  const Network& network() const noexcept { return *net_; }

 private:
  void accumulate(std::size_t entry);

  const Network* net_;
  std::vector<IdCode> ids_;
  std::vector<double> probabilities_;
  std::vector<State> states_;  // size() * node count, row per entry
  std::unordered_map<IdCode, std::size_t, IdCodeHash> index_;
  double total_mass_ = 0.0;

  Evidence evidence_;
  double evidence_mass_ = 0.0;
  std::size_t conforming_count_ = 0;
  BeliefTable conforming_sums_;
};

inline BeliefTable archive_posterior(const Archive& archive) { return archive.posterior(); }

/// Snapshot format: "archive <net-name> <entry-count>" then one
/// "<hex id> <probability>" line per entry, in insertion order.
void write_snapshot(std::ostream& out, const Archive& archive);

/// Rebuilds an archive for `net`. Entries are re-inserted in file order and
/// their probabilities recomputed; a stored value that disagrees with the
/// network (relative 1e-9) or a foreign net name is a ParseError.
Archive read_snapshot(std::istream& in, const Network& net);

}  // namespace anybn
