#pragma once

// CSV artifacts. Every real is written with 17 significant digits so that
// reruns of the same configuration are byte-identical.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "memtaxis/diagnostics.hpp"
#include "memtaxis/simulator.hpp"

namespace memtaxis {

std::string fmt_real(double x);
std::string fmt_real(const std::optional<double>& x);  ///< empty when absent

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Header `t,x,u,v`. Keeps every stride-th snapshot.
void write_snapshots(std::ostream& os, const Trajectory& traj, int stride = 1);
/// Header `t,u_probe,v_probe`.
void write_probe(std::ostream& os, const Trajectory& traj);
/// Header `t,n,a_u,a_v`.
void write_spectrum(std::ostream& os, const ModeSpectrum& sp);
/// Single-record verdict file.
void write_verdict(std::ostream& os, const PeriodEstimate& est, int n_c);

/// Opens path for writing, throwing InvalidArgument on failure.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace memtaxis
