#pragma once

// Command-line front end. Exit codes: 0 success/pass, 1 verification or
// witness failure, 2 usage error, 3 malformed scheme, 4 unmet dynamics
// prerequisite.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <afrac/afrac.hpp>

namespace afrac::cli {

enum ExitCode : int { ok = 0, failed = 1, usage = 2, malformed = 3, prerequisite = 4 };

struct RunConfig {
    std::string scheme;
    std::size_t depth = 1;
    Tolerances tol;
    bool force_cap = false;
    std::string mode = "forall-exists";
    std::size_t horizon = 64;
    std::optional<double> expect_ratio;
    std::string out;
    std::string subfractal;

    Limits limits() const { return force_cap ? Limits::unlimited() : Limits{}; }
    SeparationMode separation_mode() const {
        return mode == "pairwise" ? SeparationMode::pairwise : SeparationMode::forall_exists;
    }
};

/// Raised for problems that map directly to an exit code.
struct Exit {
    int code;
    std::string message;
};

inline Scheme resolve_scheme(const RunConfig& cfg) {
    for (const auto& name : builtin_names()) {
        if (cfg.scheme == name) {
            return builtin(name);
        }
    }
    std::ifstream in(cfg.scheme, std::ios::binary);
    if (!in) {
        throw Exit{usage, "'" + cfg.scheme + "' is neither a built-in scheme nor a readable file"};
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        // Partition defects are left for the verifier to report as failed conditions.
        return load(buffer.str(), SchemeCheck::structural, cfg.tol);
    } catch (const ParseError& e) {
        throw Exit{malformed, e.what()};
    } catch (const ValidationError& e) {
        throw Exit{malformed, e.what()};
    }
}

/// Writes through a temporary file and a rename so readers never see a partial file.
inline void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw Exit{usage, "cannot write " + tmp.string()};
        }
        f << content;
        if (!f.flush()) {
            throw Exit{usage, "cannot write " + tmp.string()};
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Exit{usage, "cannot write " + path};
    }
}

inline void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
    if (cfg.out.empty()) {
        out << content;
    } else {
        write_atomic(cfg.out, content);
    }
}

inline std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    if (cfg.depth < 2) {
        throw Exit{usage, "verify needs --depth >= 2"};
    }
    const auto scheme = resolve_scheme(cfg);
    VerifyOptions opts;
    opts.tol = cfg.tol;
    opts.limits = cfg.limits();
    opts.mode = cfg.separation_mode();
    opts.expected_ratio = cfg.expect_ratio;
    const auto tree = build_tree(scheme, cfg.depth, opts.limits, opts.tol);
    const auto report = full_verify(tree, opts);
    emit(cfg, to_json(report).dump(2) + "\n", out);
    if (!cfg.out.empty()) {
        for (const auto& c : report.conditions) {
            out << to_string(c.condition) << ": " << (c.pass ? "pass" : "fail") << "\n";
        }
        out << "overall: " << (report.overall ? "pass" : "fail") << "\n";
    }
    return report.overall ? ok : failed;
}

inline int cmd_separation(const RunConfig& cfg, std::ostream& out) {
    const auto scheme = resolve_scheme(cfg);
    VerifyOptions opts;
    opts.tol = cfg.tol;
    opts.limits = cfg.limits();
    const auto tree = build_tree(scheme, cfg.depth, opts.limits, opts.tol);
    const auto result = check_separation(tree, cfg.separation_mode(), opts);
    out << "epsilon0 " << format_real(result.extremal.at("epsilon0").get<double>()) << "\n"
        << "mode " << result.extremal.at("mode").get<std::string>() << "\n"
        << "depth " << result.extremal.at("depth").get<std::size_t>() << "\n"
        << "status " << (result.pass ? "pass" : "fail") << "\n";
    return result.pass ? ok : failed;
}

inline int cmd_dynamics(const RunConfig& cfg, std::ostream& out) {
    const auto scheme = resolve_scheme(cfg);
    DynamicsOptions opts;
    opts.tol = cfg.tol;
    opts.limits = cfg.limits();
    opts.mode = cfg.separation_mode();
    ChaosWitnessReport report;
    try {
        report = chaos_witnesses(scheme, cfg.depth, cfg.horizon, opts);
    } catch (const NoSeparation& e) {
        throw Exit{prerequisite, e.what()};
    }
    emit(cfg, to_json(report).dump(2) + "\n", out);
    if (!cfg.out.empty()) {
        out << "periodic: " << report.periodic.size() << " witnesses, " << (report.periodic_pass() ? "pass" : "fail")
            << "\ntransitivity: " << (report.transitivity.pass ? "pass" : "fail")
            << "\nsensitivity: " << report.sensitivity.size() << " witnesses, "
            << (report.sensitivity_pass() ? "pass" : "fail")
            << "\nli_yorke: " << (report.li_yorke.pass ? "pass" : "fail")
            << "\noverall: " << (report.pass() ? "pass" : "fail") << "\n";
    }
    return report.pass() ? ok : failed;
}

inline int cmd_render(const RunConfig& cfg, std::ostream& out) {
    const auto scheme = resolve_scheme(cfg);
    const auto tree = build_tree(scheme, cfg.depth, cfg.limits(), cfg.tol);
    std::string svg;
    if (cfg.subfractal.empty()) {
        svg = render_construction(tree, cfg.depth);
    } else {
        Address prefix = [&] {
            try {
                return Address::parse(cfg.subfractal, scheme.alphabet());
            } catch (const InvalidAddress& e) {
                throw UnknownAddress(e.what());
            }
        }();
        svg = render_subfractal(tree, prefix, cfg.depth);
    }
    emit(cfg, svg, out);
    return ok;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Finite-depth construction and verification of abstract fractals", "afrac"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string show_name;

    auto* scheme_cmd = app.add_subcommand("scheme", "List or print built-in schemes");
    scheme_cmd->require_subcommand(1);
    auto* list_cmd = scheme_cmd->add_subcommand("list", "List built-in scheme names");
    auto* show_cmd = scheme_cmd->add_subcommand("show", "Print a built-in scheme as JSON");
    show_cmd->add_option("name", show_name, "Built-in scheme name")->required();

    const auto common = [&](CLI::App* sub, bool with_mode) {
        sub->add_option("--scheme", cfg.scheme, "Built-in name or scheme JSON file")->required();
        sub->add_option("--depth", cfg.depth, "Construction depth")->required()->check(CLI::PositiveNumber);
        sub->add_option("--tol-geom", cfg.tol.geom, "Geometric tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--tol-area", cfg.tol.area, "Complement overlap bound (relative)")->check(CLI::PositiveNumber);
        sub->add_option("--tol-sep", cfg.tol.sep, "Smallest admissible separation")->check(CLI::PositiveNumber);
        sub->add_option("--lambda-max", cfg.tol.lambda_max, "Largest admissible diameter decay")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--force-cap", cfg.force_cap, "Lift enumeration and pair caps");
        sub->add_option("--out", cfg.out, "Output file (stdout when omitted)");
        if (with_mode) {
            sub->add_option("--mode", cfg.mode, "Separation mode")
                ->check(CLI::IsMember({"pairwise", "forall-exists"}));
        }
    };

    auto* verify_cmd = app.add_subcommand("verify", "Check the defining conditions and write a JSON report");
    common(verify_cmd, true);
    verify_cmd->add_option("--expect-ratio", cfg.expect_ratio, "Expected kept/complement ratio");

    auto* separation_cmd = app.add_subcommand("separation", "Estimate the separation constant");
    common(separation_cmd, true);

    auto* dynamics_cmd = app.add_subcommand("dynamics", "Generate chaos witnesses for the shift");
    common(dynamics_cmd, true);
    dynamics_cmd->add_option("--horizon", cfg.horizon, "Li-Yorke sampling horizon")->check(CLI::Range(4, 1 << 20));

    auto* render_cmd = app.add_subcommand("render", "Write an SVG of a construction stage");
    common(render_cmd, false);
    render_cmd->add_option("--subfractal", cfg.subfractal, "Kept address prefix to highlight");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : usage;
    }

    try {
        if (scheme_cmd->parsed()) {
            if (list_cmd->parsed()) {
                for (const auto& name : builtin_names()) {
                    out << name << "\n";
                }
                return ok;
            }
            (void)show_cmd;
            try {
                out << dump(builtin(show_name));
            } catch (const UnknownScheme& e) {
                throw Exit{usage, e.what()};
            }
            return ok;
        }
        if (verify_cmd->parsed()) {
            return cmd_verify(cfg, out);
        }
        if (separation_cmd->parsed()) {
            return cmd_separation(cfg, out);
        }
        if (dynamics_cmd->parsed()) {
            return cmd_dynamics(cfg, out);
        }
        if (render_cmd->parsed()) {
            return cmd_render(cfg, out);
        }
    } catch (const Exit& e) {
        err << "afrac: " << e.message << "\n";
        return e.code;
    } catch (const CapExceeded& e) {
        err << "afrac: " << e.what() << " (use --force-cap to lift)\n";
        return usage;
    } catch (const UnknownAddress& e) {
        err << "afrac: " << e.what() << "\n";
        return usage;
    } catch (const DepthOutOfRange& e) {
        err << "afrac: " << e.what() << "\n";
        return usage;
    } catch (const Error& e) {
        err << "afrac: " << e.what() << "\n";
        return usage;
    }
    return usage;
}

}  // namespace afrac::cli
