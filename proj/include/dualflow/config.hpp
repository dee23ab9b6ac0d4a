#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualflow/geometry.hpp"

namespace dualflow {

enum class Preset { InverseDeSitter, DirectHyperbolic, DualPair, DualityCheck, PropertySuite, ResidualCheck };

const char* to_string(Preset p);
std::optional<Preset> parse_preset(const std::string& name);

/// Flow presets are started with `run`, checking presets with `suite`.
bool is_suite_preset(Preset p);

/// Space the preset's initial data lives in.
SpaceTag initial_space(Preset p);

struct InitialSpec {
    enum class Kind { None, Slice, Perturbed, File } kind = Kind::None;
    double c = 0.0;
    double a = 0.0;
    int m = 0;
    std::string path;
};

struct RunConfig {
    Preset preset = Preset::InverseDeSitter;
    int n = 2;
    int K = 256;
    std::string F = "pm:2";
    InitialSpec initial;
    double t_max = 10.0;
    double eps_stop = 1e-3;
    double c_cfl = 0.2;
    double dt_max = 1e-3;
    double dt = 0.0;  // 0: adaptive only; otherwise min(dt, adaptive)
    std::int64_t record_interval = 1000;
    std::string output = "dualflow_out";
    std::uint64_t seed = 1;
    std::int64_t samples = 10000;
    double t_end = 0.02;  // Lagrangian window of residual_check
};

/// Parses flat "key = value" text ('#' starts a comment). Collects every
/// violation and throws ConfigError with all of them. Relative file paths in
/// "initial = file:..." are resolved against `base_dir` when given.
RunConfig parse_config(const std::string& text, const std::string& base_dir = "");
RunConfig load_config(const std::string& path);

/// Builds the initial surface (already validated by parse_config).
MeridianSurface initial_surface(const RunConfig& config);

}  // namespace dualflow
