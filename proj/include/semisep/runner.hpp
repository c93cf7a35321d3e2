#pragma once

#include "semisep/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace semisep {
namespace cli {

enum class Mode {
    Det,
    JostHalfline,
    TransmissionLine,
    System2x2,
    Floquet,
    WienerHopf,
    OracleCompare,
};

/// Configuration parse failure with the offending line (0 when unknown).
struct ConfigError : std::runtime_error {
    ConfigError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_number(line) {}
    int line_number;
};

/// Flat key = value configuration with repeated-key lists. Complex values use
/// "re+imj" tokens.
struct RunConfig {
    Mode mode = Mode::Det;
    int grid_n = 2000;
    int jobs = 1;
    std::string output;  // empty -> stdout only
    double tolerance_route = 1e-7;
    double tolerance_closed = 1e-5;
    double tolerance_oracle = 1e-3;
    bool oracle = false;
    std::optional<double> truncation;

    // exponential-family kernel coefficients (det / wiener-hopf / oracle-compare)
    std::vector<Complex> alpha_coeff, lambda_coeff, beta_coeff, mu_coeff;
    std::vector<double> tau_list;
    std::vector<Complex> alpha_list;

    // potential description (jost-halfline / transmission-line / system2x2 / floquet)
    std::string potential;  // well | cosine | table
    Complex v0{0.0, 0.0};
    double x0 = 0.0, x1 = 1.0;
    double wavenum = 2.0 * M_PI;
    std::string table_path;
    std::vector<Complex> z_list;

    // floquet
    double omega = 1.0;
    std::vector<double> theta_list;

    static RunConfig parse(std::istream& in);
    static RunConfig parse_file(const std::string& path);
};

struct RunRow {
    std::optional<Complex> z;
    std::optional<Complex> alpha;
    std::optional<double> tau;
    std::optional<double> theta;
    Complex det_a{1, 0}, det_b{1, 0}, det2_a{1, 0}, det2_b{1, 0};
    std::optional<Complex> closed_form;
    double route_discrepancy = 0.0;
    std::optional<Complex> oracle_value;
    double wall_time_ms = 0.0;
    bool flagged = false;
    std::string error;
};

struct RunOutcome {
    int exit_code = 0;  // 0 ok, 2 flagged rows, 1 input/runtime error
    std::vector<RunRow> rows;
    std::string csv;
};

/// Executes the sweep described by the config; writes the CSV to
/// config.output when set and always returns it. Rows appear in input order
/// regardless of worker scheduling.
RunOutcome run(const RunConfig& config);

std::string format_complex(Complex c);
Complex parse_complex(const std::string& token);

inline const char* csv_header() {
    return "mode,z,alpha,tau,theta,det_a,det_b,det2_a,det2_b,closed_form,"
           "route_discrepancy,oracle_value,wall_time_ms";
}

}  // namespace cli
}  // namespace semisep
