#pragma once

// Command-line surface over the library. run() parses argv and writes to the
// given streams so the CLI can be driven from tests.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hardy/verify.hpp"

namespace hardy::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInconclusive = 3;

/// Settings shared by the subcommands; precedence is flag > config file > environment > default.
struct Settings {
    double tol = 1e-9;
    int grid = kGridPoints;
    int samples = 50;
    unsigned seed = 12345;
};

/// `key = value` lines; '#' starts a comment and `[section]` headers are ignored.
inline std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int n = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++n;
        if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DomainError(path + ":" + std::to_string(n) + ": expected key = value");
        std::string v = trim(line.substr(eq + 1));
        if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
        kv[trim(line.substr(0, eq))] = v;
    }
    return kv;
}

inline void apply_config(Settings& s, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        try {
            if (k == "tol") {
                s.tol = std::stod(v);
            } else if (k == "grid") {
                s.grid = std::stoi(v);
            } else if (k == "samples") {
                s.samples = std::stoi(v);
            } else if (k == "seed") {
                s.seed = static_cast<unsigned>(std::stoul(v));
            } else {
                throw DomainError("unknown config key '" + k + "'");
            }
        } catch (const std::logic_error& e) {
            if (dynamic_cast<const DomainError*>(&e)) throw;
            throw DomainError("bad value '" + v + "' for config key '" + k + "'");
        }
    }
}

inline Settings resolve_settings(const char* env_tol, const std::string& config_path, std::optional<double> tol_flag,
                                 std::optional<int> grid_flag) {
    Settings s;
    if (env_tol) {
        try {
            s.tol = std::stod(env_tol);
        } catch (const std::logic_error&) {
            throw DomainError(std::string("HARDY_DOMAIN_TOL is not a number: '") + env_tol + "'");
        }
    }
    if (!config_path.empty()) apply_config(s, read_config(config_path));
    if (tol_flag) s.tol = *tol_flag;
    if (grid_flag) s.grid = *grid_flag;
    if (!(s.tol > 0)) throw DomainError("tolerance must be positive");
    return s;
}

/// A function argument; "S(...)" applies the Hardy operator to the inner function.
inline PiecewiseFn parse_fn(const std::string& text) {
    const auto b = text.find_first_not_of(" \t");
    const auto e = text.find_last_not_of(" \t");
    if (b != std::string::npos && text.compare(b, 2, "S(") == 0 && text[e] == ')') {
        // Only strip when the outer parentheses match each other.
        int depth = 0;
        bool outer = true;
        for (std::size_t i = b + 1; i <= e; ++i) {
            if (text[i] == '(') ++depth;
            if (text[i] == ')') --depth;
            if (depth == 0 && i < e) {
                outer = false;
                break;
            }
        }
        if (outer) return hardy_transform(parse_fn(text.substr(b + 2, e - b - 2)));
    }
    return parse(text);
}

inline double parse_real(const std::string& text) {
    const Sum s = parse_expression(text);
    if (s.empty()) return 0.0;
    if (s.size() == 1 && s[0].is_constant()) return s[0].coef;
    throw ParseError("expected a number, got '" + text + "'", 0);
}

inline int status_exit(Membership m) { return m == Membership::Inconclusive ? kExitInconclusive : kExitPass; }

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hardy operator, rearrangements and r.i. norms on (0, inf)", "hardy"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    std::optional<double> tol_flag;
    std::optional<int> grid_flag;
    std::string config_path;
    app.add_option("--tol", tol_flag, "Tolerance for integrals and norms")->check(CLI::PositiveNumber);
    app.add_option("--grid", grid_flag, "Points on the log grid [1e-6, 1e6]")->check(CLI::Range(3, 100000));
    app.add_option("--config", config_path, "key = value file with tol, grid, samples, seed");

    std::string fn, fn_x, space, phi_text, y_text, set_text, generator, check_id, out_file, filter;
    int K = 10;
    bool gamma = false, domain = false, json = false, csv = false;

    auto* eval = app.add_subcommand("eval", "Evaluate FN at X");
    eval->add_option("FN", fn)->required();
    eval->add_option("X", fn_x)->required();

    auto* transform = app.add_subcommand("transform", "Print S FN");
    transform->add_option("FN", fn)->required();

    auto* rearr = app.add_subcommand("rearrange", "Print the decreasing rearrangement of FN");
    rearr->add_option("FN", fn)->required();

    auto* normc = app.add_subcommand("norm", "Norm of FN in SPACE");
    normc->add_option("SPACE", space)->required();
    normc->add_option("FN", fn)->required();

    auto* memb = app.add_subcommand("member", "Membership of FN in SPACE, [S,SPACE] or Gamma_SPACE");
    memb->add_option("SPACE", space)->required();
    memb->add_option("FN", fn)->required();
    auto* gflag = memb->add_flag("--gamma", gamma, "Test S f* in SPACE");
    auto* dflag = memb->add_flag("--domain", domain, "Test S|f| in SPACE");
    gflag->excludes(dflag);

    auto* theta = app.add_subcommand("theta", "theta_phi(Y)");
    theta->add_option("PHI", phi_text)->required();
    theta->add_option("Y", y_text)->required();

    auto* cond = app.add_subcommand("conditions", "theta finiteness, phi-constant and theta-condition for PHI");
    cond->add_option("PHI", phi_text)->required();

    auto* dom = app.add_subcommand("domain", "Weighted-L1 identification of [S, Lambda_PHI]");
    dom->add_option("PHI", phi_text)->required();

    auto* meas = app.add_subcommand("measure", "Norm of nu(SET) = S chi_SET in SPACE");
    meas->add_option("SPACE", space)->required();
    meas->add_option("SET", set_text)->required();

    auto* probe = app.add_subcommand("probe", "Strong-additivity probe over GENERATOR sets");
    probe->add_option("SPACE", space)->required();
    probe->add_option("GENERATOR", generator)->required()->check(CLI::IsMember({"dyadic", "unit", "geometric"}));
    probe->add_option("K", K)->required()->check(CLI::Range(1, 200));

    auto* cons = app.add_subcommand("construct", "Counterexample functions");
    cons->require_subcommand(1);
    std::string alpha_text, p_text, q_text, x_space = "Lp:2", f1_text = "(1+t)^(-1) on (0,inf)";
    auto* falpha = cons->add_subcommand("falpha", "f_alpha = (1-t)^alpha chi(0,1) and its transform");
    falpha->add_option("ALPHA", alpha_text)->required();
    auto* l1linf = cons->add_subcommand("l1linf", "g and f with g in Gamma_{L1+Linf} failing and S f bounded");
    auto* noesri = cons->add_subcommand("noesri", "g in [S,X] outside L1+Linf built from f1 in X");
    noesri->add_option("X", x_space, "Target space");
    noesri->add_option("F1", f1_text, "Positive decreasing f1 in X outside L1");
    noesri->add_option("--K", K, "Number of doubling points")->check(CLI::Range(3, 12));
    auto* lpqw = cons->add_subcommand("lpqwitness", "t^(-1/p) (p + |log t|)^(-1)");
    lpqw->add_option("P", p_text)->required();
    lpqw->add_option("Q", q_text)->required();

    auto* ver = app.add_subcommand("verify", "Run the verification checks");
    auto* jflag = ver->add_flag("--json", json, "JSON report list");
    auto* cflag = ver->add_flag("--csv", csv, "CSV report table");
    jflag->excludes(cflag);
    ver->add_option("--filter", filter, "Check id or id prefix");

    auto* plot = app.add_subcommand("plot-data", "Write the (x, y) series behind a check as CSV");
    plot->add_option("CHECK", check_id)->required();
    plot->add_option("--out", out_file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 prints help and errors itself; map the codes.
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        const Settings s = resolve_settings(std::getenv("HARDY_DOMAIN_TOL"), config_path, tol_flag, grid_flag);
        const VerifyOptions vo{s.tol, s.grid, s.samples, s.seed};

        if (*eval) {
            const double x = parse_real(fn_x);
            if (!(x > 0)) throw DomainError("x must be positive");
            out << fmt12(parse_fn(fn).eval(x)) << "\n";
            return kExitPass;
        }
        if (*transform) {
            out << hardy_transform(parse_fn(fn)).to_string() << "\n";
            return kExitPass;
        }
        if (*rearr) {
            const RearrangedFn r = rearrangement(parse_fn(fn));
            out << r.fn.to_string() << "\n";
            if (!r.exact) {
                for (double x : log_grid(1e-3, 1e3, 7)) out << "f*(" << fmt12(x) << ") = " << fmt12(r.fn.eval(x)) << "\n";
            }
            return kExitPass;
        }
        if (*normc) {
            out << fmt12(norm(parse_space(space), parse_fn(fn), s.tol)) << "\n";
            return kExitPass;
        }
        if (*memb) {
            const auto X = parse_space(space);
            const PiecewiseFn f = parse_fn(fn);
            const Verdict v = gamma ? gamma_member(X, f, s.tol) : domain ? domain_member(X, f, s.tol) : member(X, f, s.tol);
            out << to_string(v.status) << "\n";
            out << "norm: " << fmt12(v.norm) << "\n";
            out << "evidence: " << v.evidence << "\n";
            return status_exit(v.status);
        }
        if (*theta) {
            const double y = parse_real(y_text);
            if (!(y > 0)) throw DomainError("y must be positive");
            out << fmt12(ConcavePhi::parse(phi_text).theta(y)) << "\n";
            return kExitPass;
        }
        if (*cond) {
            const ConcavePhi phi = ConcavePhi::parse(phi_text);
            const ConditionReport tx = check_thetaX(phi, s.grid);
            auto line = [&](const char* name, const ConditionReport& r) {
                out << name << ": " << to_string(r.holds) << " C=" << fmt12(r.best_constant)
                    << " at t=" << fmt12(r.witness) << " (" << r.detail << ")\n";
            };
            line("thetaX", tx);
            bool inconclusive = tx.holds == Condition::Inconclusive;
            if (tx.holds == Condition::Holds) {
                const ConditionReport pc = check_phi_constant(phi, s.grid);
                const ConditionReport tc = check_theta_condition(phi, s.grid);
                line("phi-constant", pc);
                line("theta-condition", tc);
                inconclusive = inconclusive || pc.holds == Condition::Inconclusive ||
                               tc.holds == Condition::Inconclusive;
            } else {
                out << "phi-constant: not applicable (theta infinite)\n";
                out << "theta-condition: not applicable (theta infinite)\n";
            }
            return inconclusive ? kExitInconclusive : kExitPass;
        }
        if (*dom) {
            const DomainIdentification d = identify_domain(ConcavePhi::parse(phi_text));
            out << to_string(d.status) << "\n" << d.description << "\n";
            return d.status == Condition::Inconclusive ? kExitInconclusive : kExitPass;
        }
        if (*meas) {
            const auto X = parse_space(space);
            const BorelSet A = BorelSet::parse(set_text);
            if (!A.in_R()) throw DomainError("set must have finite measure and stay away from 0");
            const NuNorm n = nu_norm(X, A, s.tol);
            out << fmt12(n.value) << "\n";
            if (X.tag == SpaceDescriptor::Tag::LambdaPhi) {
                out << "tail bound: " << fmt12(n.tail_bound) << (n.within_bound ? " (holds)" : " (violated)") << "\n";
                return n.within_bound ? kExitPass : kExitFail;
            }
            return kExitPass;
        }
        if (*probe) {
            const auto X = parse_space(space);
            const ProbeResult pr = strong_additivity_probe(X, generator, K, s.tol);
            for (std::size_t k = 0; k < pr.norms.size(); ++k) {
                out << k + 1 << " " << fmt12(pr.norms[k]);
                if (!pr.tail_bounds.empty()) out << " " << fmt12(pr.tail_bounds[k]);
                out << "\n";
            }
            out << "trend: " << to_string(pr.trend) << "\n";
            return kExitPass;
        }
        if (*cons) {
            if (*falpha) {
                const FAlpha fa = f_alpha(parse_real(alpha_text));
                out << "f = " << fa.f.to_string() << "\n";
                out << "Sf = " << fa.Sf.to_string() << "\n";
            } else if (*l1linf) {
                const L1LinfPair pr = l1linf_pair();
                out << "g = " << pr.g.to_string() << "\n";
                out << "f = " << pr.f.to_string() << "\n";
            } else if (*noesri) {
                const NoesriArtifacts a = noesri_construct(parse_space(x_space), parse_fn(f1_text), K);
                out << "f = " << a.f.to_string() << "\n";
                out << "D = " << fmt12(a.D) << "\n";
                out << "bridge_c = " << fmt12(a.bridge_c) << "\n";
                for (std::size_t k = 0; k < a.t.size(); ++k) {
                    char buf[128];
                    std::snprintf(buf, sizeof buf, "t_%zu = %.12Lg  F = %.12Lg", k + 1, a.t[k], a.Ft[k]);
                    out << buf << "\n";
                }
                out << "g (t < " << fmt12(a.truncation) << ") = " << a.g.to_string() << "\n";
            } else if (*lpqw) {
                out << lpq_witness(parse_real(p_text), parse_real(q_text)).to_string() << "\n";
            }
            return kExitPass;
        }
        if (*ver) {
            if (!filter.empty()) {
                bool any = false;
                for (const auto& c : check_catalog())
                    if (c.id.rfind(filter, 0) == 0) any = true;
                if (!any) throw DomainError("no check matches '" + filter + "'");
            }
            const auto rs = run_verify(vo, filter);
            out << (json ? reports_json(rs) : csv ? reports_csv(rs) : reports_text(rs));
            return exit_code(rs);
        }
        if (*plot) {
            if (!find_check(check_id)) throw DomainError("unknown check id '" + check_id + "'");
            const auto xy = plot_data(check_id, vo);
            std::ofstream f(out_file, std::ios::binary);
            if (!f) throw DomainError("cannot write '" + out_file + "'");
            f << plot_csv(xy);
            out << "wrote " << xy.size() << " points to " << out_file << "\n";
            return kExitPass;
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InconclusiveError& e) {
        err << "inconclusive: " << e.what() << " (best estimate " << fmt12(e.best_estimate()) << ")\n";
        return kExitInconclusive;
    }
    return kExitUsage;
}

}  // namespace hardy::cli
