#pragma once

#include <string>
#include <utility>
#include <vector>

#include "levsim/analysis.hpp"
#include "levsim/distribution.hpp"
#include "levsim/fp2d.hpp"
#include "levsim/model.hpp"
#include "levsim/moments.hpp"

namespace levsim {
namespace io {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// '#'-prefixed comment block echoing every parameter at full precision;
// prepended to each output file so results stay reproducible.
std::string format_params(const SystemParams& params);

// '#'-prefixed comment block of extra run facts (seed, dt, grid, ...).
std::string format_kv(const KeyValues& kv);

const char* axis_column(Axis axis);

// Columns: axis name, density, and density_err when present.
void write_distribution_csv(const std::string& path,
                            const Distribution1D& dist,
                            const std::string& provenance);

// Columns: t,x2,p2,xp,x4,n
void write_moment_series_csv(const std::string& path,
                             const std::vector<fp2d::MomentRecord>& records,
                             const std::string& provenance);

// Columns: t,n,x2,p2,xp
void write_moment_trace_csv(const std::string& path,
                            const moments::MomentTrace& trace,
                            const std::string& provenance);

void write_scan_csv(const std::string& path,
                    const std::vector<analysis::ScanRow>& rows,
                    const std::string& provenance);

// Columns: axis name, U
void write_potential_csv(const std::string& path, const PotentialCurve& curve,
                         const std::string& provenance);

// Little-endian binary field dump: u32 nx, u32 np, f64 x_max, f64 p_max,
// f64 time, then nx*np f64 values in row-major (x-major) order.
void write_field_binary(const std::string& path,
                        const fp2d::WignerField& field);
fp2d::WignerField read_field_binary(const std::string& path);

} // namespace io
} // namespace levsim
