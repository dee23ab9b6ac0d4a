#include "dualflow/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "dualflow/curvature.hpp"
#include "dualflow/error.hpp"

namespace dualflow {

namespace {

struct PresetName {
    Preset preset;
    const char* name;
};

constexpr PresetName kPresets[] = {
    {Preset::InverseDeSitter, "inverse_desitter"}, {Preset::DirectHyperbolic, "direct_hyperbolic"},
    {Preset::DualPair, "dual_pair"},               {Preset::DualityCheck, "duality_check"},
    {Preset::PropertySuite, "property_suite"},     {Preset::ResidualCheck, "residual_check"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(const std::string& s, T& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

bool parse_initial(const std::string& value, InitialSpec& spec, std::string& why) {
    const auto colon = value.find(':');
    if (colon == std::string::npos) {
        why = "expected slice:c, perturbed:c,a,m or file:path";
        return false;
    }
    const std::string kind = trim(value.substr(0, colon));
    const std::string rest = trim(value.substr(colon + 1));
    if (kind == "slice") {
        spec.kind = InitialSpec::Kind::Slice;
        if (!parse_number(rest, spec.c)) {
            why = "slice needs one number";
            return false;
        }
        return true;
    }
    if (kind == "perturbed") {
        spec.kind = InitialSpec::Kind::Perturbed;
        const auto parts = split(rest, ',');
        if (parts.size() != 3 || !parse_number(parts[0], spec.c) || !parse_number(parts[1], spec.a) ||
            !parse_number(parts[2], spec.m)) {
            why = "perturbed needs c,a,m with integer m";
            return false;
        }
        if (spec.m < 0) {
            why = "perturbed mode m must be non-negative";
            return false;
        }
        return true;
    }
    if (kind == "file") {
        spec.kind = InitialSpec::Kind::File;
        spec.path = rest;
        if (rest.empty()) {
            why = "file needs a path";
            return false;
        }
        return true;
    }
    why = "unknown initial surface kind '" + kind + "'";
    return false;
}

}  // namespace

const char* to_string(Preset p) {
    for (const auto& e : kPresets)
        if (e.preset == p) return e.name;
    return "unknown";
}

std::optional<Preset> parse_preset(const std::string& name) {
    for (const auto& e : kPresets)
        if (name == e.name) return e.preset;
    return std::nullopt;
}

bool is_suite_preset(Preset p) {
    return p == Preset::DualityCheck || p == Preset::PropertySuite || p == Preset::ResidualCheck;
}

SpaceTag initial_space(Preset p) {
    return (p == Preset::DirectHyperbolic || p == Preset::DualityCheck) ? SpaceTag::Hyperbolic : SpaceTag::DeSitter;
}

MeridianSurface initial_surface(const RunConfig& c) {
    const SpaceTag space = initial_space(c.preset);
    switch (c.initial.kind) {
        case InitialSpec::Kind::Slice: return perturbed_surface(space, c.n, c.K, c.initial.c, 0.0, 0);
        case InitialSpec::Kind::Perturbed:
            return perturbed_surface(space, c.n, c.K, c.initial.c, c.initial.a, c.initial.m);
        case InitialSpec::Kind::File: {
            std::ifstream in(c.initial.path);
            if (!in) throw DomainError("cannot open initial surface file " + c.initial.path);
            return read_snapshot(in, space, c.n);
        }
        case InitialSpec::Kind::None: break;
    }
    throw DomainError("configuration has no initial surface");
}

RunConfig parse_config(const std::string& text, const std::string& base_dir) {
    RunConfig cfg;
    std::vector<std::string> errors;
    std::map<std::string, std::string> seen;
    bool have_preset = false;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + "expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (seen.count(key)) {
            errors.push_back(where + "duplicate key '" + key + "'");
            continue;
        }
        seen[key] = value;
        auto bad = [&](const std::string& what) { errors.push_back(where + key + ": " + what + " ('" + value + "')"); };

        if (key == "preset") {
            if (auto p = parse_preset(value)) {
                cfg.preset = *p;
                have_preset = true;
            } else {
                bad("unknown preset");
            }
        } else if (key == "n") {
            if (!parse_number(value, cfg.n)) bad("expected an integer");
        } else if (key == "K") {
            if (!parse_number(value, cfg.K)) bad("expected an integer");
        } else if (key == "F") {
            cfg.F = value;
        } else if (key == "initial") {
            std::string why;
            if (!parse_initial(value, cfg.initial, why)) bad(why);
        } else if (key == "t_max") {
            if (!parse_number(value, cfg.t_max)) bad("expected a number");
        } else if (key == "eps_stop") {
            if (!parse_number(value, cfg.eps_stop)) bad("expected a number");
        } else if (key == "c_cfl") {
            if (!parse_number(value, cfg.c_cfl)) bad("expected a number");
        } else if (key == "dt_max") {
            if (!parse_number(value, cfg.dt_max)) bad("expected a number");
        } else if (key == "dt") {
            if (!parse_number(value, cfg.dt)) bad("expected a number");
        } else if (key == "record_interval") {
            if (!parse_number(value, cfg.record_interval)) bad("expected an integer");
        } else if (key == "output") {
            cfg.output = value;
            if (value.empty()) bad("expected a directory");
        } else if (key == "seed") {
            if (!parse_number(value, cfg.seed)) bad("expected a non-negative integer");
        } else if (key == "samples") {
            if (!parse_number(value, cfg.samples)) bad("expected an integer");
        } else if (key == "t_end") {
            if (!parse_number(value, cfg.t_end)) bad("expected a number");
        } else {
            errors.push_back(where + "unknown key '" + key + "'");
        }
    }

    if (!have_preset && !seen.count("preset")) errors.push_back("missing key 'preset'");
    if (cfg.n < 2 || cfg.n > kMaxDimension) errors.push_back("n must be in [2, 32]");
    if (cfg.K < 32 || cfg.K % 2 != 0) errors.push_back("K must be even and at least 32");
    bool f_ok = true;
    try {
        parse_curvature_function(cfg.F, std::max(cfg.n, 2));
    } catch (const DomainError&) {
        errors.push_back("F: unknown curvature function '" + cfg.F + "'");
        f_ok = false;
    }
    if (!(cfg.t_max > 0.0)) errors.push_back("t_max must be positive");
    if (!(cfg.eps_stop > 0.0)) errors.push_back("eps_stop must be positive");
    if (!(cfg.c_cfl > 0.0)) errors.push_back("c_cfl must be positive");
    if (!(cfg.dt_max > 0.0)) errors.push_back("dt_max must be positive");
    if (!(cfg.dt >= 0.0)) errors.push_back("dt must be non-negative");
    if (cfg.record_interval < 1) errors.push_back("record_interval must be at least 1");
    if (cfg.samples < 1) errors.push_back("samples must be at least 1");
    if (!(cfg.t_end > 0.0)) errors.push_back("t_end must be positive");

    const bool needs_initial = cfg.preset != Preset::PropertySuite;
    const SpaceTag space = initial_space(cfg.preset);
    if (have_preset && needs_initial) {
        InitialSpec& in_spec = cfg.initial;
        if (in_spec.kind == InitialSpec::Kind::None && !seen.count("initial")) {
            errors.push_back("missing key 'initial'");
        } else if (in_spec.kind == InitialSpec::Kind::Slice || in_spec.kind == InitialSpec::Kind::Perturbed) {
            if (space == SpaceTag::DeSitter && !(in_spec.c < 0.0))
                errors.push_back(std::string("initial: c < 0 required for de Sitter initial data of ") +
                                 to_string(cfg.preset));
            if (space == SpaceTag::Hyperbolic && !(in_spec.c > 0.0))
                errors.push_back(std::string("initial: c > 0 required for hyperbolic initial data of ") +
                                 to_string(cfg.preset));
        } else if (in_spec.kind == InitialSpec::Kind::File && !base_dir.empty() &&
                   std::filesystem::path(in_spec.path).is_relative()) {
            in_spec.path = (std::filesystem::path(base_dir) / in_spec.path).string();
        }
    }

    // geometry validation only makes sense once the scalar fields are sane
    if (errors.empty() && needs_initial) {
        try {
            const MeridianSurface s = initial_surface(cfg);
            if (s.K != cfg.K) errors.push_back("initial: file grid has K = " + std::to_string(s.K) + ", config has K = " + std::to_string(cfg.K));
            if (space == SpaceTag::DeSitter) {
                for (int k = 0; k <= s.K; ++k)
                    if (!(s.u[k] < 0.0)) {
                        errors.push_back("initial: surface leaves N- (u >= 0) at grid index " + std::to_string(k));
                        break;
                    }
            }
            if (f_ok) compute_geometry(s, parse_curvature_function(cfg.F, cfg.n));
        } catch (const GeometryError& e) {
            errors.push_back(std::string("initial: ") + e.what());
        } catch (const DomainError& e) {
            errors.push_back(std::string("initial: ") + e.what());
        }
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read configuration file " + path});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace dualflow
