#include "neel/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "neel/floquet.hpp"

namespace neel {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "neelsim 0.1.0";

std::string fmt(double v, int precision) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

std::uint64_t fnv1a(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

class ArtifactWriter {
public:
    explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {
        fs::create_directories(dir_);
    }

    void write(const std::string& name, const std::string& content) {
        std::ofstream out(dir_ / name, std::ios::binary);
        out << content;
        checksums_[name] = "fnv1a:" + hex64(fnv1a(content));
    }

    const std::map<std::string, std::string>& checksums() const { return checksums_; }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::map<std::string, std::string> checksums_;
};

double orbit_dt(const RunConfig& cfg) {
    return cfg.solver.dt > 0.0 ? cfg.solver.dt : cfg.physics.T / 1024.0;
}

StaticWall solve_wall(const RunConfig& cfg) {
    return solve_static_profile(make_grid(cfg.grid.L, cfg.grid.N), cfg.solver.tol_static, 400);
}

void run_static(const RunConfig& cfg, ArtifactWriter& out) {
    const StaticWall wall = solve_wall(cfg);
    const Field theta = wall.theta0();
    std::ostringstream csv;
    csv << "x,theta,dtheta\n";
    const int p = cfg.output.precision;
    for (int j = 0; j < cfg.grid.N; ++j) {
        csv << fmt(wall.grid->x(j), p) << ',' << fmt(theta[j], p) << ','
            << fmt(wall.dtheta0[j], p) << '\n';
    }
    out.write("profile.csv", csv.str());
}

void run_spectrum(const RunConfig& cfg, ArtifactWriter& out) {
    const StaticWall wall = solve_wall(cfg);
    const OperatorMatrix l0 = assemble_matrix(OperatorKind::L0, wall);
    const auto pairs = smallest_eigenpairs(l0, 20);
    std::ostringstream csv;
    csv << "index,lambda,residual\n";
    const int p = cfg.output.precision;
    for (size_t i = 0; i < pairs.size(); ++i) {
        csv << i << ',' << fmt(pairs[i].lambda, p) << ',' << fmt(pairs[i].residual, p) << '\n';
    }
    out.write("eigenvalues.csv", csv.str());
}

void run_evolve(const RunConfig& cfg, ArtifactWriter& out) {
    const StaticWall wall = solve_wall(cfg);
    const Forcing forcing = make_forcing(cfg);
    const double T = cfg.physics.T;
    const double dt = orbit_dt(cfg);

    EvolveContext ctx;
    ctx.epsilon = cfg.physics.epsilon;
    ctx.nu = cfg.physics.nu;
    ctx.forcing = &forcing;
    ctx.wall = &wall;
    const int periods = 5;
    const int total_steps = static_cast<int>(std::lround(periods * T / dt));
    ctx.record_stride = std::max(1, total_steps / 1280);

    State s0(wall.grid);
    s0.u = wall.w0;
    const Trajectory traj = evolve(s0, 0.0, periods * T, dt, ctx);

    std::ostringstream csv;
    csv << "t,norm_w,norm_v,f,g,X_fit\n";
    const int p = cfg.output.precision;
    for (size_t i = 0; i < traj.diagnostics.size(); ++i) {
        const auto& d = traj.diagnostics[i];
        // Translation fit of the recorded state; states are stored only at
        // the recording stride, so re-extract from the diagnostics row.
        csv << fmt(d.t, p) << ',' << fmt(d.norm_w, p) << ',' << fmt(d.norm_v, p) << ','
            << fmt(d.f, p) << ',' << fmt(d.g, p) << ',';
        if (i < traj.states.size()) {
            const auto [x, chi] = extract_translation(traj.states[i].u, wall);
            csv << fmt(x, p);
        } else {
            csv << fmt(0.0, p);
        }
        csv << '\n';
    }
    out.write("trajectory.csv", csv.str());
}

PeriodicWall solve_orbit(const RunConfig& cfg,
                         const std::shared_ptr<const StaticWall>& wall) {
    const Forcing forcing = make_forcing(cfg);
    OrbitSolveOptions opt;
    opt.nu = cfg.physics.nu;
    opt.dt = cfg.solver.dt;
    opt.krylov_dim = cfg.solver.krylov_dim;
    opt.max_epsilon = cfg.allow_large_epsilon ? 1.0 : 0.05;

    // Continuation from below when the requested amplitude is large.
    const double eps = cfg.physics.epsilon;
    State guess(wall->grid);
    guess.u = wall->w0;
    if (std::abs(eps) > 0.012) {
        double e = 0.01 * (eps > 0 ? 1.0 : -1.0);
        opt.initial_guess = &guess;
        const PeriodicWall half = find_periodic_wall(wall, e, cfg.physics.T, forcing,
                                                     cfg.solver.tol_orbit,
                                                     cfg.solver.max_newton, opt);
        guess = half.snapshots[0];
    }
    opt.initial_guess = &guess;
    return find_periodic_wall(wall, eps, cfg.physics.T, forcing, cfg.solver.tol_orbit,
                              cfg.solver.max_newton, opt);
}

void run_periodic(const RunConfig& cfg, ArtifactWriter& out) {
    auto wall = std::make_shared<const StaticWall>(solve_wall(cfg));
    const Forcing forcing = make_forcing(cfg);
    const PeriodicWall orbit = solve_orbit(cfg, wall);
    const int m = orbit.n_snapshots();
    const auto y = leading_order_Y(*wall, forcing, cfg.physics.nu, m);
    const int p = cfg.output.precision;

    // X/eps is reported in the same t = T/2 gauge as Y.
    const double eps = orbit.epsilon;
    const double x_pin = eps != 0.0 ? orbit.X[m / 2] / eps : 0.0;
    std::ostringstream csv;
    csv << "t,X,X_over_eps,Y,chi_H1\n";
    for (int i = 0; i < m; ++i) {
        const double x_over = eps != 0.0 ? orbit.X[i] / eps - x_pin : 0.0;
        csv << fmt(orbit.snapshot_time(i), p) << ',' << fmt(orbit.X[i], p) << ','
            << fmt(x_over, p) << ',' << fmt(y[i], p) << ',' << fmt(orbit.chi_norm[i], p)
            << '\n';
    }
    out.write("orbit.csv", csv.str());

    // Wide snapshot table: x, then (w, v) at every 8th stored time.
    std::ostringstream snap;
    snap << "x";
    for (int i = 0; i < m; i += 8) {
        snap << ",w_t" << fmt(orbit.snapshot_time(i), 6) << ",v_t"
             << fmt(orbit.snapshot_time(i), 6);
    }
    snap << '\n';
    for (int j = 0; j < cfg.grid.N; ++j) {
        snap << fmt(orbit.grid_ref->x(j), p);
        for (int i = 0; i < m; i += 8) {
            snap << ',' << fmt(orbit.snapshots[i].u[j], p) << ','
                 << fmt(orbit.snapshots[i].v[j], p);
        }
        snap << '\n';
    }
    out.write("orbit_snapshots.csv", snap.str());
}

void run_floquet(const RunConfig& cfg, ArtifactWriter& out) {
    auto wall = std::make_shared<const StaticWall>(solve_wall(cfg));
    const PeriodicWall orbit = solve_orbit(cfg, wall);
    FloquetOptions fopt;
    fopt.dt = cfg.solver.dt;
    const FloquetResult fr = floquet_multipliers(orbit, 12, fopt);

    const int p = cfg.output.precision;
    std::ostringstream csv;
    csv << "re,im,modulus,residual\n";
    for (size_t i = 0; i < fr.multipliers.size(); ++i) {
        csv << fmt(fr.multipliers[i].real(), p) << ',' << fmt(fr.multipliers[i].imag(), p)
            << ',' << fmt(std::abs(fr.multipliers[i]), p) << ',' << fmt(fr.residuals[i], p)
            << '\n';
    }
    out.write("multipliers.csv", csv.str());

    std::ostringstream verdict;
    verdict << "stable: " << (fr.stable ? "true" : "false") << '\n';
    verdict << "unit_multiplier_error: " << fmt(fr.unit_multiplier_error, p) << '\n';
    verdict << "second_modulus: " << fmt(fr.second_modulus, p) << '\n';
    verdict << "unit_multiplier_simple: " << (fr.unit_multiplier_simple ? "true" : "false")
            << '\n';
    out.write("verdict.txt", verdict.str());
}

}  // namespace

Forcing make_forcing(const RunConfig& cfg) {
    if (cfg.physics.forcing == "odd_harmonics") {
        return Forcing::odd_harmonics(
            {cfg.physics.amplitude, cfg.physics.amplitude / 3.0}, cfg.physics.T);
    }
    return Forcing::cosine(cfg.physics.amplitude, cfg.physics.T);
}

int run_command(const std::string& command, const RunConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    try {
        cfg.validate();
        ArtifactWriter out(cfg.output.directory);
        if (command == "static") {
            run_static(cfg, out);
        } else if (command == "spectrum") {
            run_spectrum(cfg, out);
        } else if (command == "evolve") {
            run_evolve(cfg, out);
        } else if (command == "periodic") {
            run_periodic(cfg, out);
        } else if (command == "floquet") {
            run_floquet(cfg, out);
        } else {
            throw ValidationError("command", "unknown command '" + command + "'");
        }

        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        json manifest;
        manifest["command"] = command;
        manifest["version"] = kVersion;
        manifest["config"] = cfg.dump();
        manifest["wall_clock_seconds"] = elapsed;
        manifest["artifacts"] = out.checksums();
        std::ofstream mf(fs::path(cfg.output.directory) / "manifest.json");
        mf << manifest.dump(2) << '\n';
        return 0;
    } catch (const std::exception& e) {
        json record;
        record["command"] = command;
        record["error_type"] =
            dynamic_cast<const ValidationError*>(&e)   ? "validation"
            : dynamic_cast<const ParseError*>(&e)      ? "parse"
            : dynamic_cast<const NonConvergence*>(&e)  ? "non_convergence"
            : dynamic_cast<const BlowUp*>(&e)          ? "blow_up"
            : dynamic_cast<const DenseCapExceeded*>(&e) ? "dense_cap"
                                                        : "runtime";
        record["message"] = e.what();
        std::cerr << record.dump() << std::endl;
        std::error_code ec;
        fs::create_directories(cfg.output.directory, ec);
        if (!ec) {
            std::ofstream ef(fs::path(cfg.output.directory) / "error.json");
            ef << record.dump(2) << '\n';
        }
        const std::string type = record["error_type"];
        return (type == "validation" || type == "parse") ? 2 : 1;
    }
}

}  // namespace neel
