#pragma once

#include <string>

#include "neel/errors.hpp"

namespace neel {

// Flat-text run configuration: one "section.key = value" per line, '#'
// comments, unknown keys are hard errors. All defaults are embedded here;
// dump() emits every key with round-trip (17 significant digit) precision,
// and parse(dump()) reproduces the struct bit-exactly.
struct RunConfig {
    struct {
        double L = 60.0;
        int N = 4096;
    } grid;
    struct {
        double nu = 0.5;
        double epsilon = 0.01;
        double T = 1.0;
        std::string forcing = "cosine";  // cosine | odd_harmonics
        double amplitude = 1.0;
    } physics;
    struct {
        double dt = 0.0;  // 0: T/1024 rounded to the snapshot spacing
        double tol_static = 1e-8;
        double tol_orbit = 1e-9;
        int max_newton = 12;
        int krylov_dim = 60;
    } solver;
    struct {
        std::string directory = "out";
        int precision = 17;
    } output;

    // Not serialized: raises the |epsilon| <= 0.1 hard cap (CLI flag).
    bool allow_large_epsilon = false;

    static RunConfig parse(const std::string& text);
    std::string dump() const;
    void apply_override(const std::string& key, const std::string& value);
    void validate() const;
};

}  // namespace neel
