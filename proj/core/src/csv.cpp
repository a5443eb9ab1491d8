#include "anybn/csv.hpp"

#include <algorithm>
#include <optional>
#include <ostream>

#include "anybn/network_io.hpp"

namespace anybn {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRow> rows) {
  out << "phase,trials,rmse_frequency,rmse_archive,mass_total,mass_conditional\n";
  for (const auto& r : rows) {
    out << r.phase << ',' << r.trials << ',' << opt(r.rmse_frequency) << ',' << opt(r.rmse_archive) << ','
        << format_double(r.mass_total) << ',' << format_double(r.mass_conditional) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows, bool with_count) {
  out << "experiment,n_obs,update,method,trials,n_gen,gen_size,rmse_archive,rmse_frequency,mass_archive,mass_cond";
  if (with_count) out << ",networks";
  out << '\n';
  for (const auto& r : rows) {
    out << csv_escape(r.experiment) << ',' << r.n_obs << ',' << csv_escape(r.update) << ',' << csv_escape(r.method)
        << ',' << r.trials << ',' << r.n_gen << ',' << r.gen_size << ',' << opt(r.rmse_archive) << ','
        << opt(r.rmse_frequency) << ',' << format_double(r.mass_archive) << ',' << format_double(r.mass_cond);
    if (with_count) out << ',' << r.contributing;
    out << '\n';
  }
}

void write_sequential_csv(std::ostream& out, std::span<const SequentialComparisonRow> rows) {
  out << "n_obs,fwd_frequency_rmse,ga_fwd_archive_rmse,networks\n";
  for (const auto& r : rows) {
    out << r.n_obs << ',' << opt(r.forward_frequency) << ',' << opt(r.ga_archive) << ',' << r.contributing << '\n';
  }
}

void write_belief_csv(std::ostream& out, const Network& net, const BeliefTable& table) {
  std::size_t width = 0;
  for (std::size_t i = 0; i < net.size(); ++i) width = std::max(width, net.cardinality(NodeId{i}));
  out << "node";
  for (std::size_t s = 0; s < width; ++s) out << ",p" << s;
  out << '\n';
  for (std::size_t i = 0; i < net.size(); ++i) {
    const NodeId n{i};
    out << csv_escape(net.node_name(n));
    for (std::size_t s = 0; s < width; ++s) {
      out << ',';
      if (table.defined() && s < net.cardinality(n)) out << format_double(table.at(n, static_cast<State>(s)));
    }
    out << '\n';
  }
}

}  // namespace anybn
