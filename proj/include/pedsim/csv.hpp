#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pedsim/measurement.hpp"

namespace pedsim {

// Shortest decimal representation that round-trips the exact double
// (std::to_chars); "nan"/"inf" for non-finite values.
std::string format_double(double v);

// Strict full-field parse; context and line feed the error message.
double parse_double(std::string_view field, std::string_view context, int line);
long long parse_int(std::string_view field, std::string_view context, int line);
std::uint64_t parse_uint64(std::string_view field, std::string_view context,
                           int line);

std::vector<std::string_view> split_csv_line(std::string_view line);

inline constexpr std::string_view kResultsHeader =
    "param_set,width_m,replication,seed,n_pedestrians,completed,total_time_s,"
    "flux_per_s,specific_flux_per_m_s";
inline constexpr std::string_view kSummaryHeader =
    "param_set,width_m,n_reps,mean_total_time_s,std_total_time_s,mean_flux_per_s,"
    "std_flux_per_s,mean_specific_flux_per_m_s,std_specific_flux_per_m_s";
inline constexpr std::string_view kTrajectoryHeader =
    "t_s,ped_id,x_m,y_m,vx_m_s,vy_m_s";
inline constexpr std::string_view kExperimentsHeader =
    "source,width_m,n_participants,total_time_s";

void write_results_csv(std::ostream& os, std::span<const FlowRecord> records);
std::vector<FlowRecord> read_results_csv(std::istream& is);

void write_summary_csv(std::ostream& os, std::span<const AggregateRow> rows);

}  // namespace pedsim
