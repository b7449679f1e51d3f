#include "neel/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace neel {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') {
        throw ValidationError(key, "must be a real number, got '" + v + "'");
    }
    return x;
}

int parse_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') {
        throw ValidationError(key, "must be an integer, got '" + v + "'");
    }
    return static_cast<int>(x);
}

}  // namespace

void RunConfig::apply_override(const std::string& key, const std::string& value) {
    if (key == "grid.L") {
        grid.L = parse_double(key, value);
    } else if (key == "grid.N") {
        grid.N = parse_int(key, value);
    } else if (key == "physics.nu") {
        physics.nu = parse_double(key, value);
    } else if (key == "physics.epsilon") {
        physics.epsilon = parse_double(key, value);
    } else if (key == "physics.T") {
        physics.T = parse_double(key, value);
    } else if (key == "physics.forcing") {
        physics.forcing = value;
    } else if (key == "physics.amplitude") {
        physics.amplitude = parse_double(key, value);
    } else if (key == "solver.dt") {
        solver.dt = parse_double(key, value);
    } else if (key == "solver.tol_static") {
        solver.tol_static = parse_double(key, value);
    } else if (key == "solver.tol_orbit") {
        solver.tol_orbit = parse_double(key, value);
    } else if (key == "solver.max_newton") {
        solver.max_newton = parse_int(key, value);
    } else if (key == "solver.krylov_dim") {
        solver.krylov_dim = parse_int(key, value);
    } else if (key == "output.directory") {
        output.directory = value;
    } else if (key == "output.precision") {
        output.precision = parse_int(key, value);
    } else {
        throw ValidationError(key, "unknown key");
    }
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(lineno, "expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(lineno, "empty key");
        try {
            cfg.apply_override(key, value);
        } catch (const ValidationError& e) {
            throw ParseError(lineno, e.what());
        }
    }
    cfg.validate();
    return cfg;
}

std::string RunConfig::dump() const {
    std::ostringstream out;
    out << "grid.L = " << format_double(grid.L) << "\n";
    out << "grid.N = " << grid.N << "\n";
    out << "physics.nu = " << format_double(physics.nu) << "\n";
    out << "physics.epsilon = " << format_double(physics.epsilon) << "\n";
    out << "physics.T = " << format_double(physics.T) << "\n";
    out << "physics.forcing = " << physics.forcing << "\n";
    out << "physics.amplitude = " << format_double(physics.amplitude) << "\n";
    out << "solver.dt = " << format_double(solver.dt) << "\n";
    out << "solver.tol_static = " << format_double(solver.tol_static) << "\n";
    out << "solver.tol_orbit = " << format_double(solver.tol_orbit) << "\n";
    out << "solver.max_newton = " << solver.max_newton << "\n";
    out << "solver.krylov_dim = " << solver.krylov_dim << "\n";
    out << "output.directory = " << output.directory << "\n";
    out << "output.precision = " << output.precision << "\n";
    return out.str();
}

void RunConfig::validate() const {
    if (!(grid.L > 0.0)) throw ValidationError("grid.L", "must be positive");
    if (grid.N < 16 || grid.N % 2 != 0) {
        throw ValidationError("grid.N", "must be even and >= 16");
    }
    if (!(physics.nu > 0.0)) throw ValidationError("physics.nu", "must be positive");
    if (!(physics.T > 0.0)) throw ValidationError("physics.T", "must be positive");
    if (std::abs(physics.epsilon) > 0.1 && !allow_large_epsilon) {
        throw ValidationError("physics.epsilon",
                              "|epsilon| <= 0.1 hard cap (override flag required)");
    }
    if (physics.forcing != "cosine" && physics.forcing != "odd_harmonics") {
        throw ValidationError("physics.forcing", "must be cosine or odd_harmonics");
    }
    if (solver.dt < 0.0) throw ValidationError("solver.dt", "must be >= 0 (0 = automatic)");
    if (!(solver.tol_static > 0.0)) throw ValidationError("solver.tol_static", "must be positive");
    if (!(solver.tol_orbit > 0.0)) throw ValidationError("solver.tol_orbit", "must be positive");
    if (solver.max_newton < 1) throw ValidationError("solver.max_newton", "must be >= 1");
    if (solver.krylov_dim < 2) throw ValidationError("solver.krylov_dim", "must be >= 2");
    if (output.precision < 1 || output.precision > 17) {
        throw ValidationError("output.precision", "must be in 1..17");
    }
}

}  // namespace neel
