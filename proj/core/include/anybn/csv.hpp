#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "anybn/belief.hpp"
#include "anybn/harness.hpp"
#include "anybn/network.hpp"

namespace anybn {

// All writers emit a header row, '.' decimals and shortest round-trip
// numbers; missing optional values are empty fields.

/// phase,trials,rmse_frequency,rmse_archive,mass_total,mass_conditional
void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows);

/// experiment,n_obs,update,method,trials,n_gen,gen_size,rmse_archive,
/// rmse_frequency,mass_archive,mass_cond[,networks]
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows, bool with_count = false);

/// n_obs,fwd_frequency_rmse,ga_fwd_archive_rmse,networks
void write_sequential_csv(std::ostream& out, std::span<const SequentialComparisonRow> rows);

/// node,p0,p1,... padded to the widest node.
void write_belief_csv(std::ostream& out, const Network& net, const BeliefTable& table);

std::string csv_escape(std::string_view field);

}  // namespace anybn
