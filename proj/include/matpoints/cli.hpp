#ifndef MATPOINTS_CLI_HPP
#define MATPOINTS_CLI_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matpoints/characters.hpp"
#include "matpoints/errors.hpp"
#include "matpoints/experiments.hpp"
#include "matpoints/ffield.hpp"
#include "matpoints/matcount.hpp"
#include "matpoints/pointcount.hpp"
#include "matpoints/qseries.hpp"

namespace matpoints::cli {

using nlohmann::json;

namespace detail {

// Fixed-format double printing so identical runs emit identical bytes.
inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string rat_str(const BigRat& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline std::string int_str(const BigInt& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline int exit_code_for(errc c) {
    switch (c) {
        case errc::not_prime:
        case errc::prime_too_small:
        case errc::bad_parameter:
        case errc::singular_curve:
        case errc::parts_sum_mismatch:
        case errc::invalid_argument:
            return 2;
        case errc::field_too_large:
        case errc::work_budget_exceeded:
            return 3;
        default:
            return 1; // verification mismatch or internal invariant failure
    }
}

inline FieldElem parse_element(const FieldCtx& ctx, long long v) {
    if (ctx.r() == 1) return ctx.from_int(v);
    if (v < 0 || static_cast<std::uint64_t>(v) >= ctx.q())
        throw error(errc::invalid_argument,
                    "element index out of range for q=" + std::to_string(ctx.q()));
    return static_cast<FieldElem>(v);
}

// Prime powers from a comma list, factored into (p, r).
inline std::vector<std::pair<std::uint64_t, unsigned>> parse_q_list(const std::string& s) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::uint64_t q = std::stoull(item);
        if (q < 2) throw error(errc::invalid_argument, "bad q value " + item);
        std::uint64_t p = q;
        for (std::uint64_t d = 2; d * d <= q; ++d) {
            if (q % d == 0) {
                p = d;
                break;
            }
        }
        unsigned r = 0;
        std::uint64_t rem = q;
        while (rem % p == 0) {
            rem /= p;
            ++r;
        }
        if (rem != 1)
            throw error(errc::invalid_argument, item + " is not a prime power");
        out.push_back({p, r});
    }
    return out;
}

inline void emit(std::ostream& out, const json& j, const std::string& path) {
    if (path.empty()) {
        out << j.dump(2) << "\n";
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw error(errc::invalid_argument, "cannot open output file " + path);
        f << j.dump(2) << "\n";
    }
}

inline json audit_to_json(const AuditReport& rep) {
    json runs = json::array();
    for (const auto& run : rep.runs) {
        json cells = json::array();
        for (const auto& c : run.cells) {
            json jc{{"n", c.n},
                    {"q", c.q},
                    {"a_index", c.a},
                    {"theorem", int_str(c.theorem_count)},
                    {"zeta", int_str(c.zeta_count)},
                    {"match", c.match}};
            if (c.brute_count) {
                jc["brute"] = int_str(*c.brute_count);
                jc["brute_match"] = c.brute_match;
            }
            if (c.affine_count) jc["affine"] = int_str(*c.affine_count);
            if (c.edge_case) jc["edge_case"] = true;
            cells.push_back(std::move(jc));
        }
        runs.push_back(json{{"convention_flags", run.convention},
                            {"all_match", run.all_match},
                            {"cells", std::move(cells)}});
    }
    return json{{"family", rep.family},
                {"runs", std::move(runs)},
                {"surviving_conventions", rep.surviving_conventions}};
}

inline json moments_to_json(const MomentReport& mr) {
    json moments = json::array();
    for (const auto& m : mr.moments)
        moments.push_back(json{{"m", m.m},
                               {"empirical", fmt_double(m.empirical)},
                               {"reference", fmt_double(m.reference)}});
    return json{{"family", family_name(mr.family)},
                {"p", mr.p},
                {"r", mr.r},
                {"n", mr.n},
                {"moments", std::move(moments)}};
}

inline void write_histogram_csv(const HistogramResult& h, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw error(errc::invalid_argument, "cannot open output file " + path);
    f << "bin_lo,bin_hi,count,empirical_density,reference_density\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i)
        f << fmt_double(h.edges[i]) << "," << fmt_double(h.edges[i + 1]) << "," << h.counts[i]
          << "," << fmt_double(h.empirical_density[i]) << "," << fmt_double(h.reference[i])
          << "\n";
}

} // namespace detail

/// Parse and run one command; returns the process exit code. Never throws.
inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"matpoints: exact matrix point counts on curves and K3 surfaces over F_q"};
    app.require_subcommand(1);

    // common option storage
    std::uint64_t p = 5, ceiling = FieldCtx::kDefaultCeiling, budget = 200000000ull;
    unsigned r = 1, n = 1, n_max = 2, limits_nmax = 8, bins = 60, moment_max = 4, threads = 1;
    long long a_in = 2, x_in = 1;
    double tol = 1e-8, lo = 0.0, hi = 0.0;
    std::string kind = "2f1", method = "theorem", family = "curve";
    std::string convention = "corrected", rconvention = "one-sided", pairing = "shifted";
    std::string q_list, out_path, trace_out, hist_out;
    std::string upper_list, lower_list;

    auto add_field_opts = [&](CLI::App* cmd) {
        cmd->add_option("--p", p, "field characteristic (prime >= 5)")->required();
        cmd->add_option("--r", r, "extension degree")->capture_default_str();
        cmd->add_option("--ceiling", ceiling, "max field size")->capture_default_str();
    };

    CLI::App* field_cmd = app.add_subcommand("field", "construct F_{p^r} and print its data");
    add_field_opts(field_cmd);

    CLI::App* hyper_cmd = app.add_subcommand("hyper", "finite field hypergeometric values");
    add_field_opts(hyper_cmd);
    hyper_cmd->add_option("--kind", kind, "2f1 | 3f2 | greene")->capture_default_str();
    hyper_cmd->add_option("--x", x_in, "argument element")->capture_default_str();
    hyper_cmd->add_option("--tol", tol, "rounding tolerance")->capture_default_str();
    hyper_cmd->add_option("--upper", upper_list, "greene: upper character exponents, comma list");
    hyper_cmd->add_option("--lower", lower_list, "greene: lower character exponents, comma list");

    CLI::App* count_cmd = app.add_subcommand("count", "one matrix point count");
    count_cmd->add_option("family", family, "curve | k3")->required();
    add_field_opts(count_cmd);
    count_cmd->add_option("--a", a_in, "variety parameter")->capture_default_str();
    count_cmd->add_option("--n", n, "matrix size")->capture_default_str();
    count_cmd->add_option("--method", method, "theorem | zeta | brute")->capture_default_str();
    count_cmd->add_option("--convention", convention, "curve sign convention: printed | corrected")
        ->capture_default_str();
    count_cmd->add_option("--r-convention", rconvention, "K3 R constraint: printed | one-sided")
        ->capture_default_str();
    count_cmd->add_option("--pairing", pairing, "K3 Clausen pairing: shifted | direct")
        ->capture_default_str();
    count_cmd->add_option("--budget", budget, "brute-force work budget")->capture_default_str();

    CLI::App* audit_cmd = app.add_subcommand("audit", "reconcile theorem, zeta and brute force");
    audit_cmd->add_option("--family", family, "curve | k3")->required();
    audit_cmd->add_option("--q-list", q_list, "comma list of prime powers")->required();
    audit_cmd->add_option("--n-max", n_max, "largest matrix size")->capture_default_str();
    audit_cmd->add_option("--brute-budget", budget, "0 disables brute-force cells")
        ->capture_default_str();
    audit_cmd->add_option("--out", out_path, "write JSON report here instead of stdout");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Sato-Tate distribution experiment");
    sweep_cmd->add_option("family", family, "legendre | k3")->required();
    sweep_cmd->add_option("--p", p, "field characteristic")->capture_default_str();
    sweep_cmd->add_option("--r", r, "extension degree")->capture_default_str();
    sweep_cmd->add_option("--ceiling", ceiling, "max field size")->capture_default_str();
    sweep_cmd->add_option("--n", n, "matrix size")->capture_default_str();
    sweep_cmd->add_option("--bins", bins, "histogram bins")->capture_default_str();
    sweep_cmd->add_option("--lo", lo, "histogram range low (default per family)");
    sweep_cmd->add_option("--hi", hi, "histogram range high (default per family)");
    sweep_cmd->add_option("--moment-max", moment_max, "highest empirical moment")
        ->capture_default_str();
    sweep_cmd->add_option("--threads", threads, "worker threads")->capture_default_str();
    sweep_cmd->add_option("--pairing", pairing, "K3 Clausen pairing")->capture_default_str();
    sweep_cmd->add_option("--trace-out", trace_out, "write the trace table CSV here");
    sweep_cmd->add_option("--hist-out", hist_out, "write the histogram CSV here");
    sweep_cmd->add_option("--out", out_path, "write the moment JSON here instead of stdout");

    CLI::App* limits_cmd = app.add_subcommand("limits", "q->1 limits vs classical 2F1");
    limits_cmd->add_option("--family", family, "curve | k3")->capture_default_str();
    limits_cmd->add_option("--n-max", limits_nmax, "largest n")->capture_default_str();
    limits_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

    // Flat key=value config file; explicit flags win over config values.
    // Handled by hand: keys are appended as options only when the flag is
    // absent from the command line, then the merged vector is parsed once.
    std::string config_path;
    for (CLI::App* cmd : {field_cmd, hyper_cmd, count_cmd, audit_cmd, sweep_cmd, limits_cmd})
        cmd->add_option("--config", config_path, "key=value file merged under explicit flags");
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
        else
            continue;
        std::ifstream cfg(path);
        if (!cfg) {
            err << "InvalidArguments: cannot open config file " << path << "\n";
            return 2;
        }
        std::string line;
        while (std::getline(cfg, line)) {
            if (line.empty() || line[0] == '#' || line[0] == ';') continue;
            std::size_t eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(0, eq);
            std::string value = line.substr(eq + 1);
            auto trim = [](std::string& s) {
                s.erase(0, s.find_first_not_of(" \t\r"));
                s.erase(s.find_last_not_of(" \t\r") + 1);
            };
            trim(key);
            trim(value);
            if (key.empty()) continue;
            std::string flag = "--" + key;
            bool given = false;
            for (const auto& arg : args)
                if (arg == flag || arg.rfind(flag + "=", 0) == 0) given = true;
            if (!given) {
                args.push_back(flag);
                args.push_back(value);
            }
        }
        break;
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "InvalidArguments: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*field_cmd) {
            FieldCtx ctx = make_field(p, r, ceiling);
            json j{{"p", ctx.p()},
                   {"r", ctx.r()},
                   {"q", ctx.q()},
                   {"modulus", ctx.spec().modulus},
                   {"generator", ctx.generator()}};
            detail::emit(out, j, out_path);
            return 0;
        }

        if (*hyper_cmd) {
            FieldCtx ctx = make_field(p, r, ceiling);
            GreeneContext greene(ctx);
            FieldElem x = detail::parse_element(ctx, x_in);
            if (kind == "2f1" || kind == "3f2") {
                HyperValue v = kind == "2f1" ? greene.ff_2F1(x, tol) : greene.ff_3F2(x, tol);
                json j{{"kind", kind},
                       {"q", ctx.q()},
                       {"x_index", x},
                       {"value", detail::rat_str(v.value)},
                       {"residual", detail::fmt_double(v.residual)}};
                detail::emit(out, j, out_path);
                return 0;
            }
            if (kind == "greene") {
                auto parse_chars = [&](const std::string& s) {
                    std::vector<Character> cs;
                    std::stringstream ss(s);
                    std::string item;
                    while (std::getline(ss, item, ','))
                        if (!item.empty()) cs.push_back(char_of_exponent(ctx, std::stoull(item)));
                    return cs;
                };
                auto value = greene.greene_hyper(parse_chars(upper_list), parse_chars(lower_list), x);
                json j{{"kind", kind},
                       {"q", ctx.q()},
                       {"x_index", x},
                       {"re", detail::fmt_double(value.real())},
                       {"im", detail::fmt_double(value.imag())}};
                detail::emit(out, j, out_path);
                return 0;
            }
            throw error(errc::invalid_argument, "unknown hyper kind " + kind);
        }

        if (*count_cmd) {
            FieldCtx ctx = make_field(p, r, ceiling);
            FieldElem a = detail::parse_element(ctx, a_in);
            MatCountResult res;
            if (family == "curve") {
                PSignConvention conv = convention == "printed" ? PSignConvention::printed
                                                               : PSignConvention::corrected;
                if (method == "theorem") {
                    res = n2_theorem(ctx, a, n, conv);
                } else if (method == "zeta") {
                    auto counts = cl_counts_curve(legendre_trace(ctx, a), n);
                    res = MatCountResult{n, ctx.q(), a, counts[n], "zeta"};
                } else if (method == "brute") {
                    res = brute_force_n2(ctx, a, n, budget);
                } else {
                    throw error(errc::invalid_argument, "unknown method " + method);
                }
            } else if (family == "k3") {
                RConstraintConvention rc = rconvention == "printed"
                                               ? RConstraintConvention::printed
                                               : RConstraintConvention::one_sided;
                ClausenPairing cp =
                    pairing == "direct" ? ClausenPairing::direct : ClausenPairing::shifted;
                if (method == "theorem") {
                    res = n3_theorem(ctx, a, n, rc, cp);
                } else if (method == "zeta") {
                    auto counts = cl_counts_surface(k3_frob(ctx, a, cp), n);
                    res = MatCountResult{n, ctx.q(), a, counts[n], "zeta"};
                } else if (method == "brute") {
                    res = brute_force_n3(ctx, a, n, budget);
                } else {
                    throw error(errc::invalid_argument, "unknown method " + method);
                }
            } else {
                throw error(errc::invalid_argument, "unknown family " + family);
            }
            json j{{"family", family},
                   {"n", res.n},
                   {"q", res.q},
                   {"a_index", res.a},
                   {"method", res.method},
                   {"count", detail::int_str(res.count)}};
            detail::emit(out, j, out_path);
            return 0;
        }

        if (*audit_cmd) {
            AuditOptions opt;
            opt.n_max = n_max;
            opt.fields = detail::parse_q_list(q_list);
            opt.brute_budget = budget;
            AuditReport rep = family == "curve"   ? audit_curve(opt)
                              : family == "k3"    ? audit_k3(opt)
                                                  : throw error(errc::invalid_argument,
                                                                "unknown family " + family);
            detail::emit(out, detail::audit_to_json(rep), out_path);
            return rep.surviving_conventions.empty() && !rep.runs.empty() ? 1 : 0;
        }

        if (*sweep_cmd) {
            Family fam;
            if (family == "legendre")
                fam = Family::legendre;
            else if (family == "k3")
                fam = Family::k3;
            else
                throw error(errc::invalid_argument, "unknown family " + family);
            SweepConfig cfg = default_sweep_config(fam);
            if (sweep_cmd->count("--p")) cfg.p = p;
            cfg.r = r;
            cfg.n = n;
            cfg.bins = bins;
            if (sweep_cmd->count("--lo")) cfg.lo = lo;
            if (sweep_cmd->count("--hi")) cfg.hi = hi;
            cfg.moment_max = moment_max;
            cfg.threads = threads;
            cfg.pairing = pairing == "direct" ? ClausenPairing::direct : ClausenPairing::shifted;
            cfg.field_ceiling = ceiling;

            if (!trace_out.empty()) {
                FieldCtx ctx = make_field(cfg.p, cfg.r, cfg.field_ceiling);
                std::ofstream f(trace_out, std::ios::binary);
                if (!f) throw error(errc::invalid_argument, "cannot open " + trace_out);
                if (fam == Family::legendre) {
                    f << "a_index,trace\n";
                    for (const auto& e : legendre_sweep(ctx, cfg.threads))
                        f << e.a << "," << e.t << "\n";
                } else {
                    f << "a_index,gamma,clausen_trace\n";
                    for (const auto& e : k3_frob_sweep(ctx, cfg.pairing, cfg.threads))
                        f << e.a << "," << e.gamma << "," << e.clausen_t << "\n";
                }
            }

            SweepResult res = run_sweep(cfg, fam);
            if (!hist_out.empty()) detail::write_histogram_csv(res.histogram, hist_out);
            detail::emit(out, detail::moments_to_json(res.moments), out_path);
            return 0;
        }

        if (*limits_cmd) {
            json rows = json::array();
            bool all_match = true;
            if (family == "curve") {
                for (unsigned nn = 1; nn <= limits_nmax; ++nn) {
                    for (unsigned k = 0; k <= nn; ++k) {
                        BigRat printed = p_poly_limit(nn, k, PSignConvention::printed);
                        BigRat corrected = p_poly_limit(nn, k, PSignConvention::corrected);
                        BigRat classical =
                            BigRat(binomial(nn, k)) *
                            classical_2F1(BigRat(static_cast<int>(k) - static_cast<int>(nn), 2),
                                          BigRat(static_cast<int>(k) + 1 - static_cast<int>(nn), 2),
                                          BigRat(k + 1), BigRat(4));
                        if (k % 2 != 0) classical = -classical;
                        bool match = printed == classical;
                        all_match = all_match && match;
                        rows.push_back(json{{"n", nn},
                                            {"k", k},
                                            {"printed_value", detail::rat_str(printed)},
                                            {"corrected_value", detail::rat_str(corrected)},
                                            {"classical_value", detail::rat_str(classical)},
                                            {"match", match}});
                    }
                }
            } else if (family == "k3") {
                for (unsigned nn = 1; nn <= limits_nmax; ++nn) {
                    for (unsigned k = 0; k <= nn; ++k) {
                        for (int gamma : {1, -1}) {
                            BigRat value = q_poly_limit(nn, k, gamma);
                            BigRat classical;
                            if (gamma == 1) {
                                classical =
                                    BigRat(binomial(nn, k)) * big_pow(BigInt(2), nn - k) *
                                    classical_2F1(
                                        BigRat(static_cast<int>(k) - static_cast<int>(nn), 2),
                                        BigRat(static_cast<int>(k) + 1 - static_cast<int>(nn), 2),
                                        BigRat(k + 1), BigRat(1));
                            } else {
                                // The 2F1 argument degenerates at gamma = -1;
                                // use the finite closed form directly.
                                classical = q_poly_classical_limit(nn, k, gamma);
                            }
                            bool match = value == classical;
                            all_match = all_match && match;
                            rows.push_back(json{{"n", nn},
                                                {"k", k},
                                                {"gamma", gamma},
                                                {"value", detail::rat_str(value)},
                                                {"classical_value", detail::rat_str(classical)},
                                                {"match", match}});
                        }
                    }
                }
            } else {
                throw error(errc::invalid_argument, "unknown family " + family);
            }
            detail::emit(out, json{{"family", family}, {"rows", rows}}, out_path);
            return all_match ? 0 : 1;
        }
    } catch (const error& e) {
        err << e.what() << "\n";
        return detail::exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "InternalError: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

} // namespace matpoints::cli

#endif
