#pragma once

#include <string>

#include "relaxflow/diagnostics.hpp"
#include "relaxflow/structure.hpp"

namespace relaxflow {

/// All writers are deterministic: fixed field order, '\n' line endings,
/// numbers printed with %.17g (round-trip exact), no timestamps.  Reruns of
/// the same configuration produce byte-identical files.

std::string format_g17(double x);

/// Column-per-component CSV of a one-dimensional field, one row per cell,
/// first column the cell center.  Only meaningful for dim == 1.
void write_relax_csv(const std::string& path, const RelaxField& f);
void write_ns_csv(const std::string& path, const NSField& f);

/// Snapshot container for any dimension: a short text header (kind, grid,
/// time, physical parameters, field list, number format) terminated by an
/// `end_header` line, followed by one little-endian float64 array per field
/// in linear cell order.
void write_relax_snapshot(const std::string& path, const RelaxField& f,
                          double time, const PhysParams& p);
void write_ns_snapshot(const std::string& path, const NSField& f, double time,
                       const PhysParams& p);

struct RelaxSnapshot {
  RelaxField field;
  double time = 0.0;
  PhysParams params;
};

struct NSSnapshot {
  NSField field;  // closure stresses included
  double time = 0.0;
  PhysParams params;
};

RelaxSnapshot read_relax_snapshot(const std::string& path);
NSSnapshot read_ns_snapshot(const std::string& path);

void write_error_csv(const std::string& path, const ErrorSeries& series);
void write_rate_csv(const std::string& path, const RateFit& fit);
void write_entropy_csv(const std::string& path, const RelaxTrajectory& traj);
void write_structure_csv(const std::string& path, const StructureReport& rep);

}  // namespace relaxflow
