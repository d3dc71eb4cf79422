#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "igame/quantize.hpp"
#include "igame/types.hpp"
#include "igame/verbalization.hpp"

namespace igame {

/// Standard trajectory file: header t,phi_1..[,u_1..], one row per node,
/// strictly increasing t with constant step (relative tolerance 1e-9).
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

/// Signal file: header t,<prefix>_1..; role is supplied by the caller on read.
void write_signal_csv(const std::filesystem::path& path, const ControlSignal& signal,
                      const std::string& value_prefix);
ControlSignal read_signal_csv(const std::filesystem::path& path, SignalRole role);

/// Word sequences: segment,start_t,end_t,w_1.. (or segment,start_t,end_t,code).
void write_words_csv(const std::filesystem::path& path, const WordSequence& words,
                     const Partition& partition, const TimeGrid& grid);

/// Quantum state snapshot: basis_index,occupations,re,im with occupations
/// rendered as n1|n2|..|nm.
void write_state_csv(const std::filesystem::path& path, const QuantumState& state,
                     const FockSpace& space);

/// Two-column plot data with an arbitrary pair of column names.
void write_series_csv(const std::filesystem::path& path, const std::string& x_name,
                      const std::string& y_name, const std::vector<double>& x,
                      const std::vector<double>& y);

/// Shortest exact decimal rendering used by every CSV writer (%.17g trimmed).
std::string format_double(double value);

}  // namespace igame
