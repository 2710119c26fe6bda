#include "levsim/config.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace levsim {
namespace config {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    std::ostringstream msg;
    msg << "config line " << line << ": " << what;
    throw std::invalid_argument(msg.str());
}

} // namespace

SystemParams parse_params_text(const std::string& text) {
    static const char* known[] = {"omega_z", "gamma_g", "A_t",     "A_p",
                                  "N_0",     "gamma_f", "Gamma_f", "chi",
                                  "Phi",     "G"};
    std::map<std::string, double> seen;
    std::map<std::string, std::size_t> seen_line;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) fail(line_no, "unknown key '" + key + "'");
        if (seen.count(key))
            fail(line_no, "duplicate key '" + key + "' (first on line " +
                              std::to_string(seen_line[key]) + ")");
        std::size_t used = 0;
        double num = 0.0;
        try {
            num = std::stod(val, &used);
        } catch (const std::exception&) {
            fail(line_no, "cannot parse number '" + val + "'");
        }
        if (used != val.size())
            fail(line_no, "trailing characters after number '" + val + "'");
        seen[key] = num;
        seen_line[key] = line_no;
    }

    const bool has_triple = seen.count("chi") || seen.count("Phi") || seen.count("G");
    const bool has_pair = seen.count("gamma_f") || seen.count("Gamma_f");
    if (has_triple && has_pair)
        throw std::invalid_argument(
            "config: give either gamma_f/Gamma_f or the chi/Phi/G triple, not both");
    if (has_triple && !(seen.count("chi") && seen.count("Phi") && seen.count("G")))
        throw std::invalid_argument("config: the chi/Phi/G triple is incomplete");
    if (has_pair && !(seen.count("gamma_f") && seen.count("Gamma_f")))
        throw std::invalid_argument(
            "config: give both gamma_f and Gamma_f (or neither for no feedback)");
    for (const char* key : {"omega_z", "gamma_g", "A_t", "A_p", "N_0"})
        if (!seen.count(key))
            throw std::invalid_argument(std::string("config: missing key '") +
                                        key + "'");

    SystemParams p;
    if (seen.count("omega_z")) p.omega_z = seen["omega_z"];
    if (seen.count("gamma_g")) p.gamma_g = seen["gamma_g"];
    if (seen.count("A_t")) p.A_t = seen["A_t"];
    if (seen.count("A_p")) p.A_p = seen["A_p"];
    if (seen.count("N_0")) p.N_0 = seen["N_0"];
    if (seen.count("gamma_f")) p.gamma_f = seen["gamma_f"];
    if (seen.count("Gamma_f")) p.Gamma_f = seen["Gamma_f"];
    if (has_triple) {
        const auto fb = feedback_from_chi_phi_g(seen["chi"], seen["Phi"], seen["G"]);
        p.gamma_f = fb.gamma_f;
        p.Gamma_f = fb.Gamma_f;
    }
    validate(p);
    return p;
}

SystemParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_params_text(buf.str());
}

std::string format_params_text(const SystemParams& p) {
    std::ostringstream s;
    s << std::setprecision(17);
    s << "omega_z = " << p.omega_z << "\n"
      << "gamma_g = " << p.gamma_g << "\n"
      << "A_t = " << p.A_t << "\n"
      << "A_p = " << p.A_p << "\n"
      << "N_0 = " << p.N_0 << "\n"
      << "gamma_f = " << p.gamma_f << "\n"
      << "Gamma_f = " << p.Gamma_f << "\n";
    return s.str();
}

} // namespace config
} // namespace levsim
