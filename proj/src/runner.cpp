#include "semisep/runner.hpp"

#include "semisep/determinants.hpp"
#include "semisep/floquet.hpp"
#include "semisep/log.hpp"
#include "semisep/nystrom.hpp"
#include "semisep/schrodinger.hpp"
#include "semisep/wienerhopf.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace semisep {
namespace cli {

namespace {

const Complex kI(0.0, 1.0);

struct Entry {
    std::string value;
    int line;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& token, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a real number, got '" + token + "'");
    }
}

int parse_int(const std::string& token, int line) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(token, &pos);
        if (pos != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(line, "expected an integer, got '" + token + "'");
    }
}

bool parse_bool(const std::string& token, int line) {
    if (token == "true" || token == "1" || token == "yes" || token == "on") return true;
    if (token == "false" || token == "0" || token == "no" || token == "off") return false;
    throw ConfigError(line, "expected a boolean, got '" + token + "'");
}

Mode parse_mode(const std::string& token, int line) {
    static const std::map<std::string, Mode> names{
        {"det", Mode::Det},
        {"jost-halfline", Mode::JostHalfline},
        {"transmission-line", Mode::TransmissionLine},
        {"system2x2", Mode::System2x2},
        {"floquet", Mode::Floquet},
        {"wiener-hopf", Mode::WienerHopf},
        {"oracle-compare", Mode::OracleCompare},
    };
    const auto it = names.find(token);
    if (it == names.end()) throw ConfigError(line, "unknown mode '" + token + "'");
    return it->second;
}

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Det: return "det";
        case Mode::JostHalfline: return "jost-halfline";
        case Mode::TransmissionLine: return "transmission-line";
        case Mode::System2x2: return "system2x2";
        case Mode::Floquet: return "floquet";
        case Mode::WienerHopf: return "wiener-hopf";
        case Mode::OracleCompare: return "oracle-compare";
    }
    return "?";
}

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

schrodinger::Potential build_potential(const RunConfig& cfg, schrodinger::Side side) {
    if (cfg.potential == "well") {
        if (std::abs(cfg.v0) == 0.0)
            return schrodinger::Potential::zero(side);
        return schrodinger::Potential::square_well(cfg.v0, cfg.x0, cfg.x1, side);
    }
    if (cfg.potential == "cosine") {
        const Complex amp = cfg.v0;
        const double k = cfg.wavenum;
        const double x0 = cfg.x0, x1 = cfg.x1;
        auto fn = [amp, k, x0, x1](double x) {
            return (x > x0 && x < x1) ? amp * std::cos(k * x) : Complex(0, 0);
        };
        const double bound = std::max(std::abs(x0), std::abs(x1));
        return schrodinger::Potential(fn, bound, side, {x0, x1});
    }
    if (cfg.potential == "table") {
        std::ifstream in(cfg.table_path);
        if (!in) throw ConfigError(0, "cannot open potential table '" + cfg.table_path + "'");
        std::vector<double> xs;
        std::vector<Complex> vals;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            std::istringstream row(t);
            double x, re, im = 0.0;
            if (!(row >> x >> re))
                throw ConfigError(lineno, "potential table: expected 'x V-real [V-imag]'");
            row >> im;
            xs.push_back(x);
            vals.emplace_back(re, im);
        }
        return schrodinger::Potential::tabulated(std::move(xs), std::move(vals), side);
    }
    throw ConfigError(0, "unknown potential kind '" + cfg.potential + "'");
}

wienerhopf::RationalSymbolKernel build_symbol_kernel(const RunConfig& cfg, double tau) {
    return wienerhopf::RationalSymbolKernel(cfg.alpha_coeff, cfg.lambda_coeff, cfg.beta_coeff,
                                            cfg.mu_coeff, tau);
}

void fill_from_report(RunRow& row, const DeterminantReport& rep) {
    row.det_a = rep.det_a;
    row.det_b = rep.det_b;
    row.det2_a = rep.det2_a;
    row.det2_b = rep.det2_b;
    row.route_discrepancy = std::max(
        rep.det2_route_discrepancy,
        rep.trace_class_consistent ? rep.route_discrepancy : 0.0);
}

double closeness(Complex a, Complex b) {
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

RunRow compute_row(const RunConfig& cfg, Mode mode, std::size_t index) {
    RunRow row;
    Tolerances tol;
    tol.route = cfg.tolerance_route;
    tol.oracle = cfg.tolerance_oracle;

    switch (mode) {
        case Mode::Det:
        case Mode::OracleCompare: {
            const double tau = cfg.tau_list.front();
            row.alpha = cfg.alpha_list[index];
            row.tau = tau;
            const auto sym = build_symbol_kernel(cfg, tau);
            const auto kern = sym.semiseparable();
            const Grid grid = Grid::trapezoid(0.0, tau, cfg.grid_n);
            const auto rep = fredholm_det(kern, *row.alpha, grid, tol);
            fill_from_report(row, rep);
            row.flagged = rep.flagged;
            if (cfg.oracle || mode == Mode::OracleCompare) {
                const auto disc = discretize(kern, grid, DiagonalRule::Average);
                row.oracle_value = oracle_det2(disc, *row.alpha);
                if (closeness(*row.oracle_value, rep.det2()) > cfg.tolerance_oracle)
                    row.flagged = true;
            }
            break;
        }
        case Mode::WienerHopf: {
            const double tau = cfg.tau_list[index];
            row.tau = tau;
            const auto sym = build_symbol_kernel(cfg, tau);
            const auto roots = wienerhopf::find_roots(sym);
            const auto kern = sym.semiseparable();
            const Grid grid = Grid::trapezoid(0.0, tau, cfg.grid_n);
            const auto rep = fredholm_det2(kern, Complex(1, 0), grid, tol);
            fill_from_report(row, rep);
            const Complex day_b = wienerhopf::day_formula(sym, roots, wienerhopf::DaySide::B);
            const Complex day_a = wienerhopf::day_formula(sym, roots, wienerhopf::DaySide::A);
            row.closed_form = day_b;
            row.flagged = rep.flagged || closeness(day_a, day_b) > 1e-10 ||
                          closeness(rep.det2(), day_b) > cfg.tolerance_closed;
            if (cfg.oracle) {
                const auto disc = discretize(kern, grid, DiagonalRule::Average);
                row.oracle_value = oracle_det2(disc, Complex(1, 0));
                if (closeness(*row.oracle_value, day_b) > cfg.tolerance_oracle)
                    row.flagged = true;
            }
            break;
        }
        case Mode::JostHalfline: {
            row.z = cfg.z_list[index];
            const auto pot = build_potential(cfg, schrodinger::Side::HalfLine);
            const schrodinger::SpectralPoint zp(*row.z);
            const double hi = cfg.truncation.value_or(pot.domain_hi());
            const Grid grid = pot.make_grid(cfg.grid_n, 0.0, hi);
            const auto rep = fredholm_det(schrodinger::build_halfline_kernel(pot, zp),
                                          Complex(1, 0), grid, tol);
            const auto jost = schrodinger::jost_function_halfline(pot, zp, grid, tol);
            fill_from_report(row, rep);
            row.closed_form = jost.value;
            row.flagged = rep.flagged || jost.flagged ||
                          closeness(rep.det(), jost.value) > cfg.tolerance_closed;
            if (cfg.oracle) {
                const auto disc =
                    discretize(schrodinger::build_halfline_kernel(pot, zp), grid);
                row.oracle_value = oracle_det2(disc, Complex(1, 0));
                if (closeness(*row.oracle_value, rep.det2()) > cfg.tolerance_oracle)
                    row.flagged = true;
            }
            break;
        }
        case Mode::TransmissionLine: {
            row.z = cfg.z_list[index];
            const auto pot = build_potential(cfg, schrodinger::Side::FullLine);
            const schrodinger::SpectralPoint zp(*row.z);
            const double hi = cfg.truncation.value_or(pot.domain_hi());
            const Grid grid = pot.make_grid(cfg.grid_n, -hi, hi);
            const auto rep = fredholm_det(schrodinger::build_line_kernel(pot, zp),
                                          Complex(1, 0), grid, tol);
            const auto line = schrodinger::jost_function_line(pot, zp, grid, tol);
            fill_from_report(row, rep);
            row.closed_form = line.wronskian;
            row.flagged = rep.flagged || line.flagged ||
                          closeness(rep.det(), line.wronskian) > cfg.tolerance_closed;
            break;
        }
        case Mode::System2x2: {
            row.z = cfg.z_list[index];
            const auto pot = build_potential(cfg, schrodinger::Side::FullLine);
            const schrodinger::SpectralPoint zp(*row.z);
            const double hi = cfg.truncation.value_or(pot.domain_hi());
            const Grid grid = pot.make_grid(cfg.grid_n, -hi, hi);
            const auto rep = fredholm_det2(schrodinger::build_system_kernel(pot, zp),
                                           Complex(1, 0), grid, tol);
            const auto sys = schrodinger::first_order_system_det2(pot, zp, grid, tol);
            fill_from_report(row, rep);
            row.closed_form = sys.jost_identity_rhs;
            row.flagged = rep.flagged || sys.max_identity_error > cfg.tolerance_closed;
            break;
        }
        case Mode::Floquet: {
            const std::size_t nz = cfg.z_list.size();
            row.z = cfg.z_list[index % nz];
            row.theta = cfg.theta_list[index / nz];
            floquet::PeriodicPotential pot = [&] {
                if (cfg.potential == "cosine")
                    return floquet::PeriodicPotential::cosine(cfg.v0, cfg.wavenum, cfg.omega);
                if (cfg.potential == "well") {
                    if (std::abs(cfg.v0) == 0.0)
                        return floquet::PeriodicPotential::constant(Complex(0, 0), cfg.omega);
                    const Complex depth = cfg.v0;
                    const double a = cfg.x0, b = cfg.x1;
                    return floquet::PeriodicPotential(
                        [depth, a, b](double x) {
                            return (x > a && x < b) ? depth : Complex(0, 0);
                        },
                        cfg.omega, {a, b});
                }
                throw ConfigError(0, "floquet mode supports potential = well | cosine");
            }();
            const floquet::FloquetParams params{*row.theta,
                                                schrodinger::SpectralPoint(*row.z)};
            const Grid grid = pot.make_grid(cfg.grid_n);
            const auto krep = floquet::det_Ktheta(pot, params, grid, tol);
            fill_from_report(row, krep.det_report);
            row.closed_form = krep.delta_monodromy;
            row.flagged = krep.det_report.flagged ||
                          krep.route_spread > cfg.tolerance_closed ||
                          krep.delta_error > cfg.tolerance_closed;
            break;
        }
    }
    return row;
}

std::size_t row_count(const RunConfig& cfg) {
    switch (cfg.mode) {
        case Mode::Det:
        case Mode::OracleCompare: return cfg.alpha_list.size();
        case Mode::WienerHopf: return cfg.tau_list.size();
        case Mode::JostHalfline:
        case Mode::TransmissionLine:
        case Mode::System2x2: return cfg.z_list.size();
        case Mode::Floquet: return cfg.z_list.size() * cfg.theta_list.size();
    }
    return 0;
}

void validate(const RunConfig& cfg) {
    if (cfg.grid_n < 16) throw ConfigError(0, "grid_n must be >= 16");
    if (cfg.jobs < 1) throw ConfigError(0, "jobs must be >= 1");
    switch (cfg.mode) {
        case Mode::Det:
        case Mode::OracleCompare:
            if (cfg.alpha_list.empty()) throw ConfigError(0, "mode needs at least one 'alpha'");
            if (cfg.tau_list.empty()) throw ConfigError(0, "mode needs 'tau'");
            if (cfg.alpha_coeff.empty() && cfg.beta_coeff.empty())
                throw ConfigError(0, "mode needs kernel coefficients");
            break;
        case Mode::WienerHopf:
            if (cfg.tau_list.empty()) throw ConfigError(0, "wiener-hopf needs 'tau'");
            if (cfg.alpha_coeff.empty() && cfg.beta_coeff.empty())
                throw ConfigError(0, "wiener-hopf needs kernel coefficients");
            break;
        case Mode::JostHalfline:
        case Mode::TransmissionLine:
        case Mode::System2x2:
            if (cfg.z_list.empty()) throw ConfigError(0, "mode needs at least one 'z'");
            if (cfg.potential.empty()) throw ConfigError(0, "mode needs 'potential'");
            break;
        case Mode::Floquet:
            if (cfg.z_list.empty()) throw ConfigError(0, "floquet needs at least one 'z'");
            if (cfg.theta_list.empty()) throw ConfigError(0, "floquet needs 'theta'");
            if (cfg.potential.empty()) throw ConfigError(0, "floquet needs 'potential'");
            if (!(cfg.omega > 0.0)) throw ConfigError(0, "omega must be > 0");
            break;
    }
}

}  // namespace

std::string format_complex(Complex c) {
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gj", c.real(), c.imag());
    return buf;
}

Complex parse_complex(const std::string& raw) {
    const std::string t = trim(raw);
    if (t.empty()) throw std::invalid_argument("empty complex token");
    if (t.back() == 'j' || t.back() == 'J') {
        const std::string body = t.substr(0, t.size() - 1);
        // split at the last +/- that is not an exponent sign or leading sign
        for (std::size_t i = body.size(); i-- > 1;) {
            const char c = body[i];
            if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
                const double re = std::stod(body.substr(0, i));
                const std::string im_part = body.substr(i);
                const double im = (im_part == "+" || im_part == "-")
                                      ? (im_part == "+" ? 1.0 : -1.0)
                                      : std::stod(im_part);
                return Complex(re, im);
            }
        }
        // pure imaginary
        if (body.empty() || body == "+") return Complex(0.0, 1.0);
        if (body == "-") return Complex(0.0, -1.0);
        return Complex(0.0, std::stod(body));
    }
    return Complex(std::stod(t), 0.0);
}

RunConfig RunConfig::parse(std::istream& in) {
    RunConfig cfg;
    bool saw_mode = false;
    std::string line;
    int lineno = 0;
    auto as_complex = [](const Entry& e) {
        try {
            return parse_complex(e.value);
        } catch (const std::exception&) {
            throw ConfigError(e.line, "expected complex 're+imj', got '" + e.value + "'");
        }
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        const auto hash = t.find('#');
        if (hash != std::string::npos) t = trim(t.substr(0, hash));
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(lineno, "expected 'key = value', got '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const Entry entry{trim(t.substr(eq + 1)), lineno};
        if (key.empty() || entry.value.empty())
            throw ConfigError(lineno, "empty key or value");

        if (key == "mode") {
            cfg.mode = parse_mode(entry.value, lineno);
            saw_mode = true;
        } else if (key == "grid_n") {
            cfg.grid_n = parse_int(entry.value, lineno);
        } else if (key == "jobs") {
            cfg.jobs = parse_int(entry.value, lineno);
        } else if (key == "output") {
            cfg.output = entry.value;
        } else if (key == "tolerance_route") {
            cfg.tolerance_route = parse_real(entry.value, lineno);
        } else if (key == "tolerance_closed") {
            cfg.tolerance_closed = parse_real(entry.value, lineno);
        } else if (key == "tolerance_oracle") {
            cfg.tolerance_oracle = parse_real(entry.value, lineno);
        } else if (key == "oracle") {
            cfg.oracle = parse_bool(entry.value, lineno);
        } else if (key == "truncation") {
            cfg.truncation = parse_real(entry.value, lineno);
        } else if (key == "alpha_coeff") {
            cfg.alpha_coeff.push_back(as_complex(entry));
        } else if (key == "lambda_coeff") {
            cfg.lambda_coeff.push_back(as_complex(entry));
        } else if (key == "beta_coeff") {
            cfg.beta_coeff.push_back(as_complex(entry));
        } else if (key == "mu_coeff") {
            cfg.mu_coeff.push_back(as_complex(entry));
        } else if (key == "tau") {
            cfg.tau_list.push_back(parse_real(entry.value, lineno));
        } else if (key == "alpha") {
            cfg.alpha_list.push_back(as_complex(entry));
        } else if (key == "potential") {
            cfg.potential = entry.value;
        } else if (key == "v0") {
            cfg.v0 = as_complex(entry);
        } else if (key == "x0") {
            cfg.x0 = parse_real(entry.value, lineno);
        } else if (key == "x1") {
            cfg.x1 = parse_real(entry.value, lineno);
        } else if (key == "wavenum") {
            cfg.wavenum = parse_real(entry.value, lineno);
        } else if (key == "path") {
            cfg.table_path = entry.value;
        } else if (key == "z") {
            cfg.z_list.push_back(as_complex(entry));
        } else if (key == "omega") {
            cfg.omega = parse_real(entry.value, lineno);
        } else if (key == "theta") {
            cfg.theta_list.push_back(parse_real(entry.value, lineno));
        } else {
            throw ConfigError(lineno, "unknown key '" + key + "'");
        }
    }
    if (!saw_mode) throw ConfigError(0, "missing required key 'mode'");
    validate(cfg);
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    return parse(in);
}

RunOutcome run(const RunConfig& cfg) {
    validate(cfg);
    const std::size_t n_rows = row_count(cfg);
    std::vector<RunRow> rows(n_rows);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_rows) return;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                rows[i] = compute_row(cfg, cfg.mode, i);
            } catch (const std::exception& e) {
                rows[i].error = e.what();
            }
            rows[i].wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
        }
    };
    const int pool = std::min<int>(cfg.jobs, static_cast<int>(std::max<std::size_t>(1, n_rows)));
    if (pool <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    std::ostringstream csv;
    csv << csv_header() << "\n";
    bool any_flagged = false, any_error = false;
    for (const auto& row : rows) {
        csv << mode_name(cfg.mode) << ',';
        csv << (row.z ? format_complex(*row.z) : "") << ',';
        csv << (row.alpha ? format_complex(*row.alpha) : "") << ',';
        csv << (row.tau ? fmt_real(*row.tau) : "") << ',';
        csv << (row.theta ? fmt_real(*row.theta) : "") << ',';
        csv << format_complex(row.det_a) << ',' << format_complex(row.det_b) << ','
            << format_complex(row.det2_a) << ',' << format_complex(row.det2_b) << ',';
        csv << (row.closed_form ? format_complex(*row.closed_form) : "") << ',';
        csv << fmt_real(row.route_discrepancy) << ',';
        csv << (row.oracle_value ? format_complex(*row.oracle_value) : "") << ',';
        char tbuf[32];
        std::snprintf(tbuf, sizeof tbuf, "%.3f", row.wall_time_ms);
        csv << tbuf << "\n";
        any_flagged = any_flagged || row.flagged;
        if (!row.error.empty()) {
            any_error = true;
            log_warn("row failed: " + row.error);
        }
    }

    RunOutcome out;
    out.rows = std::move(rows);
    out.csv = csv.str();
    out.exit_code = any_error ? 1 : (any_flagged ? 2 : 0);
    if (!cfg.output.empty()) {
        std::ofstream f(cfg.output, std::ios::binary);
        if (!f) throw ConfigError(0, "cannot open output file '" + cfg.output + "'");
        f << out.csv;
    }
    return out;
}

}  // namespace cli
}  // namespace semisep
