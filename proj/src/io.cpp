#include "levsim/io.hpp"

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace levsim {
namespace io {

namespace {

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
    std::ofstream out(path, mode);
    if (!out)
        throw std::runtime_error("io: cannot open '" + path + "' for writing");
    return out;
}

} // namespace

std::string format_params(const SystemParams& p) {
    std::ostringstream s;
    s << "# omega_z = " << num(p.omega_z) << "\n"
      << "# gamma_g = " << num(p.gamma_g) << "\n"
      << "# A_t = " << num(p.A_t) << "\n"
      << "# A_p = " << num(p.A_p) << "\n"
      << "# N_0 = " << num(p.N_0) << "\n"
      << "# gamma_f = " << num(p.gamma_f) << "\n"
      << "# Gamma_f = " << num(p.Gamma_f) << "\n";
    return s.str();
}

std::string format_kv(const KeyValues& kv) {
    std::ostringstream s;
    for (const auto& [k, v] : kv) s << "# " << k << " = " << v << "\n";
    return s.str();
}

const char* axis_column(Axis axis) {
    switch (axis) {
    case Axis::x: return "x";
    case Axis::p: return "p";
    case Axis::epsilon: return "epsilon";
    }
    return "x";
}

void write_distribution_csv(const std::string& path,
                            const Distribution1D& dist,
                            const std::string& provenance) {
    auto out = open_out(path, std::ios::out);
    out << provenance << axis_column(dist.axis) << ",density";
    const bool with_err = !dist.density_err.empty();
    if (with_err) out << ",density_err";
    out << "\n" << std::setprecision(17);
    for (std::size_t i = 0; i < dist.size(); ++i) {
        out << dist.grid[i] << "," << dist.density[i];
        if (with_err) out << "," << dist.density_err[i];
        out << "\n";
    }
}

void write_moment_series_csv(const std::string& path,
                             const std::vector<fp2d::MomentRecord>& records,
                             const std::string& provenance) {
    auto out = open_out(path, std::ios::out);
    out << provenance << "t,x2,p2,xp,x4,n\n" << std::setprecision(17);
    for (const auto& r : records)
        out << r.t << "," << r.mom.m.x2 << "," << r.mom.m.p2 << ","
            << r.mom.m.xp << "," << r.mom.m.x4 << "," << r.mom.n << "\n";
}

void write_moment_trace_csv(const std::string& path,
                            const moments::MomentTrace& trace,
                            const std::string& provenance) {
    auto out = open_out(path, std::ios::out);
    out << provenance << "t,n,x2,p2,xp\n" << std::setprecision(17);
    for (std::size_t i = 0; i < trace.t.size(); ++i) {
        const auto& s = trace.states[i];
        out << trace.t[i] << "," << s.n() << "," << s.x2 << "," << s.p2 << ","
            << s.xp << "\n";
    }
}

void write_scan_csv(const std::string& path,
                    const std::vector<analysis::ScanRow>& rows,
                    const std::string& provenance) {
    auto out = open_out(path, std::ios::out);
    out << provenance
        << "gamma_eff_target,gamma_eff,achievable,gamma_f,Gamma_f,x2_ss,n_ss,"
           "modulation,over_limit,bistable,x_peak,iterations\n"
        << std::setprecision(17);
    for (const auto& r : rows)
        out << r.gamma_eff_target << "," << r.gamma_eff << ","
            << (r.achievable ? 1 : 0) << "," << r.gamma_f << "," << r.Gamma_f
            << "," << r.x2_ss << "," << r.n_ss << "," << r.modulation << ","
            << (r.over_limit ? 1 : 0) << "," << (r.bistable ? 1 : 0) << ","
            << r.x_peak << "," << r.iterations << "\n";
}

void write_potential_csv(const std::string& path, const PotentialCurve& curve,
                         const std::string& provenance) {
    auto out = open_out(path, std::ios::out);
    out << provenance << axis_column(curve.axis) << ",U\n"
        << std::setprecision(17);
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        out << curve.grid[i] << "," << curve.U[i] << "\n";
}

void write_field_binary(const std::string& path,
                        const fp2d::WignerField& field) {
    auto out = open_out(path, std::ios::binary);
    const auto nx = static_cast<std::uint32_t>(field.grid.nx);
    const auto np = static_cast<std::uint32_t>(field.grid.np);
    out.write(reinterpret_cast<const char*>(&nx), sizeof nx);
    out.write(reinterpret_cast<const char*>(&np), sizeof np);
    const double hdr[3] = {field.grid.x_max, field.grid.p_max, field.time};
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw std::runtime_error("io: short write to '" + path + "'");
}

fp2d::WignerField read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("io: cannot open '" + path + "'");
    std::uint32_t nx = 0, np = 0;
    in.read(reinterpret_cast<char*>(&nx), sizeof nx);
    in.read(reinterpret_cast<char*>(&np), sizeof np);
    double hdr[3] = {0, 0, 0};
    in.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    if (!in || nx < 2 || np < 2)
        throw std::runtime_error("io: malformed field file '" + path + "'");
    fp2d::WignerField f;
    f.grid.nx = nx;
    f.grid.np = np;
    f.grid.x_max = hdr[0];
    f.grid.p_max = hdr[1];
    f.grid.dx = 2.0 * hdr[0] / (nx - 1);
    f.grid.dp = 2.0 * hdr[1] / (np - 1);
    f.time = hdr[2];
    f.values.resize(f.grid.size());
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!in) throw std::runtime_error("io: truncated field file '" + path + "'");
    return f;
}

} // namespace io
} // namespace levsim
