// odolab command-line front end.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "odolab/analysis.hpp"
#include "odolab/errors.hpp"
#include "odolab/fock.hpp"
#include "odolab/gallery.hpp"
#include "odolab/operator.hpp"
#include "odolab/symbol.hpp"
#include "odolab/verify.hpp"

using namespace odolab;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitCertificate = 2;
constexpr int kExitVerify = 3;

struct RunConfig {
    std::string command;
    std::vector<std::string> files;
    std::optional<int> n;
    std::optional<int> dim;
    int depth = -1;
    int chain_depth = -1;
    double tol_exact = Tolerance{}.eps_exact;
    double tol_rank = Tolerance{}.eps_rank;
    std::optional<std::size_t> grid;
    std::uint64_t seed = 7;
    std::string format = "json";
    std::string out;
    bool strict_invertibility = false;

    Tolerance tolerance() const {
        Tolerance t;
        t.eps_exact = tol_exact;
        t.eps_rank = tol_rank;
        t.validate();
        return t;
    }

    AnalysisOptions analysis() const {
        AnalysisOptions a;
        a.depth = depth;
        a.chain_depth = chain_depth;
        a.tol = tolerance();
        if (grid) {
            a.invert_grid = *grid;
            a.sup_grid = *grid;
        }
        a.strict_invertibility = strict_invertibility;
        return a;
    }

    ojson to_json(const std::optional<Symbol>& symbol) const {
        const AnalysisOptions a = analysis();
        ojson j;
        j["command"] = command;
        j["files"] = files;
        if (symbol) {
            j["n"] = symbol->n();
            j["dim"] = symbol->dim();
            j["depth"] = a.resolved_depth(symbol->n());
            j["chain_depth"] = a.resolved_chain_depth(*symbol);
        } else if (depth >= 0) {
            j["depth"] = depth;
        }
        j["tol_exact"] = tol_exact;
        j["tol_rank"] = tol_rank;
        j["invert_grid"] = a.invert_grid;
        j["sup_grid"] = a.sup_grid;
        j["seed"] = seed;
        j["cap"] = a.resolved_cap();
        j["format"] = format;
        return j;
    }
};

// Rejects symbols that disagree with --n / --dim and sizes above the cap before any operator is built.
Symbol load_checked(const RunConfig& cfg, const std::string& path) {
    Symbol s = load_symbol(path);
    if (cfg.n && *cfg.n != s.n()) {
        throw InputError(path + ": symbol has n = " + std::to_string(s.n()) + " but --n " + std::to_string(*cfg.n));
    }
    if (cfg.dim && *cfg.dim != s.dim()) {
        throw InputError(path + ": symbol has dim = " + std::to_string(s.dim()) + " but --dim " + std::to_string(*cfg.dim));
    }
    const AnalysisOptions a = cfg.analysis();
    const int depth = a.resolved_depth(s.n());
    BasisIndex(s.n(), depth + s.depth(), s.dim(), a.resolved_cap());
    return s;
}

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw InputError("cannot write " + cfg.out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

void emit_report(const RunConfig& cfg, const std::optional<Symbol>& symbol, ojson result) {
    ojson doc;
    doc["config"] = cfg.to_json(symbol);
    doc["result"] = std::move(result);
    emit(cfg, render(doc, parse_format(cfg.format)));
}

cplx parse_complex(const std::string& s) {
    const auto comma = s.find(',');
    try {
        std::size_t used = 0;
        if (comma == std::string::npos) {
            const double re = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return {re, 0.0};
        }
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const double re = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(s);
        const double im = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(s);
        return {re, im};
    } catch (const std::logic_error&) {
        throw InputError("cannot parse complex number '" + s + "' (expected re or re,im)");
    }
}

int cmd_classify(const RunConfig& cfg, const std::string& dump_path) {
    const Symbol s = load_checked(cfg, cfg.files.at(0));
    const ClassificationReport r = classify(s, cfg.analysis());
    if (!dump_path.empty()) {
        std::ofstream f(dump_path);
        if (!f) throw InputError("cannot write " + dump_path);
        write_dump(f, build_wl(s, r.depth, cfg.analysis().resolved_cap()));
    }
    emit_report(cfg, s, to_json(r));
    return kExitOk;
}

int cmd_symbol(const RunConfig& cfg, bool want_theta, bool want_sup, bool want_inner, bool want_inv) {
    const Symbol s = load_checked(cfg, cfg.files.at(0));
    const bool all = !(want_theta || want_sup || want_inner || want_inv);
    const AnalysisOptions a = cfg.analysis();
    const MatrixPolynomial th = theta(s);
    ojson j;
    j["n"] = s.n();
    j["dim"] = s.dim();
    j["symbol_depth"] = s.depth();
    if (s.tail_bound) j["tail_bound"] = *s.tail_bound;
    j["m_part_max"] = s.m_part_max();
    if (all || want_theta) {
        ojson coeffs = ojson::array();
        for (int r = 0; r <= th.degree(); ++r) coeffs.push_back(ojson{{"r", r}, {"matrix", matrix_to_json(th.coefficient(r))}});
        j["theta"] = std::move(coeffs);
    }
    if (all || want_sup) {
        const SupNormBracket b = sup_norm(th, a.sup_grid);
        j["supnorm"] = ojson{{"lower", b.lower}, {"upper", b.upper}, {"grid", a.sup_grid}};
    }
    if (all || want_inner) {
        const InnerVerdict in = is_inner_exact(th, a.tol.eps_exact);
        j["inner"] = ojson{{"value", in.inner}, {"deviation", in.deviation}, {"theorem", "inner-test"}};
    }
    if (all || want_inv) {
        ojson inv{{"theorem", "invertibility-characterization"}};
        try {
            const InvertibilityVerdict v = is_invertible_hinf(th, a.invert_grid, a.tol);
            inv["value"] = v.invertible;
            inv["zeros_inside"] = v.zeros_inside;
            inv["min_modulus"] = v.min_modulus;
            inv["margin"] = v.margin;
        } catch (const CertificateError& e) {
            if (want_inv) throw;
            inv["value"] = "undecided";
            inv["note"] = e.what();
        }
        j["invertible"] = std::move(inv);
    }
    emit_report(cfg, s, std::move(j));
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, int count, bool inject) {
    VerifyOptions v;
    v.seed = cfg.seed;
    v.random_count = count;
    v.inject_fault = inject;
    v.tol = cfg.tolerance();
    if (cfg.depth >= 0) v.depth = cfg.depth;
    const auto checks = run_verify(suite, v);
    const ojson summary = verify_summary(checks);
    const Format f = parse_format(cfg.format);
    if (f == Format::text) {
        std::ostringstream os;
        for (const CheckResult& c : checks) {
            os << (c.passed ? "PASS " : "FAIL ") << c.suite << " | " << c.name << " | value " << c.value << " | limit "
               << c.threshold << " | " << c.seconds << " s";
            if (!c.detail.empty()) os << " | " << c.detail;
            os << '\n';
        }
        os << (summary["passed"].get<bool>() ? "PASS" : "FAIL") << ": " << summary["failed"].get<std::size_t>() << " of "
           << checks.size() << " checks failed in " << summary["seconds"].get<double>() << " s\n";
        emit(cfg, os.str());
    } else {
        emit_report(cfg, std::nullopt, summary);
    }
    for (const CheckResult& c : checks) {
        if (!c.passed) std::cerr << "FAIL " << c.suite << ": " << c.name << " value " << c.value << " " << c.detail << '\n';
    }
    return summary["passed"].get<bool>() ? kExitOk : kExitVerify;
}

int cmd_gallery_list(const RunConfig& cfg) {
    if (parse_format(cfg.format) == Format::json) {
        ojson j = ojson::array();
        for (const auto& name : gallery_names()) j.push_back(ojson{{"name", name}, {"usage", gallery_usage(name)}});
        emit(cfg, j.dump(2));
        return kExitOk;
    }
    std::ostringstream os;
    for (const auto& name : gallery_names()) os << gallery_usage(name) << '\n';
    emit(cfg, os.str());
    return kExitOk;
}

int cmd_gallery_build(const RunConfig& cfg, const std::string& name, const std::vector<std::string>& params) {
    ojson p = ojson::object();
    for (const std::string& kv : params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw InputError("gallery parameter '" + kv + "' is not key=value");
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        try {
            p[key] = ojson::parse(value);
        } catch (const nlohmann::json::parse_error&) {
            throw InputError("gallery parameter " + key + ": value '" + value + "' is not JSON");
        }
    }
    const GalleryEntry e = gallery_build(name, p);
    if (cfg.n && *cfg.n != e.symbol.n()) throw InputError("gallery entry has n = " + std::to_string(e.symbol.n()));
    if (cfg.dim && *cfg.dim != e.symbol.dim()) throw InputError("gallery entry has dim = " + std::to_string(e.symbol.dim()));
    emit(cfg, symbol_to_json(e.symbol));
    return kExitOk;
}

int cmd_dump(const RunConfig& cfg, bool adjoint) {
    const Symbol s = load_checked(cfg, cfg.files.at(0));
    const AnalysisOptions a = cfg.analysis();
    const int depth = a.resolved_depth(s.n());
    const FockOperator op = adjoint ? build_wl_adjoint(s, depth + s.depth(), a.resolved_cap())
                                    : build_wl(s, depth, a.resolved_cap());
    std::ostringstream os;
    write_dump(os, op);
    emit(cfg, os.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"odometer maps W_L on truncated Fock spaces"};
    app.require_subcommand(1);
    RunConfig cfg;

    const auto common = [&cfg](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "expected alphabet size (checked against the symbol)")->check(CLI::PositiveNumber);
        sub->add_option("--dim", cfg.dim, "expected coefficient dimension (checked against the symbol)")->check(CLI::PositiveNumber);
        sub->add_option("--depth", cfg.depth, "Fock depth D (default 64 for n = 1, else 6)")->check(CLI::NonNegativeNumber);
        sub->add_option("--chain-depth", cfg.chain_depth, "degree cut for chain-sector computations")->check(CLI::NonNegativeNumber);
        sub->add_option("--tol-exact", cfg.tol_exact, "tolerance for exact identities");
        sub->add_option("--tol-rank", cfg.tol_rank, "relative rank cutoff");
        sub->add_option("--grid", cfg.grid, "circle grid for winding and sup-norm")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "seed for random property sweeps");
        sub->add_option("--format", cfg.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--out", cfg.out, "write the report to a file instead of stdout");
    };

    std::string dump_path;
    auto* classify_cmd = app.add_subcommand("classify", "classify W_L for a symbol file");
    common(classify_cmd);
    classify_cmd->add_option("symbol", cfg.files, "symbol file")->required()->expected(1);
    classify_cmd->add_flag("--invertibility", cfg.strict_invertibility, "fail (exit 2) instead of reporting undecided invertibility");
    classify_cmd->add_option("--dump", dump_path, "also write the depth-D operator dump here");

    bool want_theta = false, want_sup = false, want_inner = false, want_inv = false;
    auto* symbol_cmd = app.add_subcommand("symbol", "analytic symbol Theta: coefficients, sup norm, inner, invertibility");
    common(symbol_cmd);
    symbol_cmd->add_option("symbol", cfg.files, "symbol file")->required()->expected(1);
    symbol_cmd->add_flag("--theta", want_theta, "print the coefficients L_r");
    symbol_cmd->add_flag("--supnorm", want_sup, "sup-norm bracket on the circle");
    symbol_cmd->add_flag("--inner", want_inner, "algebraic inner test");
    symbol_cmd->add_flag("--invertible", want_inv, "invertibility certificate (exit 2 if undecidable)");

    auto* defect_cmd = app.add_subcommand("defect", "defect space E_L (-) L E");
    common(defect_cmd);
    defect_cmd->add_option("symbol", cfg.files, "symbol file")->required()->expected(1);

    auto* norm_cmd = app.add_subcommand("norm", "norm of the truncation against max(1, ||Theta||)");
    common(norm_cmd);
    norm_cmd->add_option("symbol", cfg.files, "symbol file")->required()->expected(1);

    auto* douglas_cmd = app.add_subcommand("douglas", "factor W_L1 = W_L2 Gamma");
    common(douglas_cmd);
    douglas_cmd->add_option("symbols", cfg.files, "L1 and L2 symbol files")->required()->expected(2);

    std::vector<std::string> lambdas;
    auto* coburn_cmd = app.add_subcommand("coburn", "sigma_min(W_L - lambda) against 1 - |lambda|");
    common(coburn_cmd);
    coburn_cmd->add_option("symbol", cfg.files, "symbol file")->required()->expected(1);
    coburn_cmd->add_option("--lambda", lambdas, "points re or re,im (default 0, 0.3, 0.5e^{i pi/4}, 0.9i)");

    auto* hypo_cmd = app.add_subcommand("hypo", "hyponormality necessary condition and witness sweep");
    common(hypo_cmd);
    hypo_cmd->add_option("symbol", cfg.files, "symbol file")->required()->expected(1);

    std::string suite = "all";
    int count = 50;
    bool inject = false;
    auto* verify_cmd = app.add_subcommand("verify", "run property suites");
    common(verify_cmd);
    verify_cmd->add_option("suite", suite, "all, adjoint, toeplitz, douglas, coburn, wold or gallery");
    verify_cmd->add_option("--count", count, "random symbols per suite")->check(CLI::NonNegativeNumber);
    verify_cmd->add_flag("--inject-fault", inject, "add a mismatched Douglas pair as a negative control");

    auto* gallery_cmd = app.add_subcommand("gallery", "example symbols");
    gallery_cmd->require_subcommand(1);
    auto* list_cmd = gallery_cmd->add_subcommand("list", "list constructors and parameters");
    common(list_cmd);
    std::string gallery_name;
    std::vector<std::string> gallery_params;
    auto* build_cmd = gallery_cmd->add_subcommand("build", "emit a symbol file");
    common(build_cmd);
    build_cmd->add_option("name", gallery_name, "constructor name")->required();
    build_cmd->add_option("params", gallery_params, "key=value with JSON values");

    bool adjoint = false;
    auto* dump_cmd = app.add_subcommand("dump", "sparse dump of W_L (or its adjoint) at depth D");
    common(dump_cmd);
    dump_cmd->add_option("symbol", cfg.files, "symbol file")->required()->expected(1);
    dump_cmd->add_flag("--adjoint", adjoint, "dump the adjoint formula on the codomain truncation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*classify_cmd) {
            cfg.command = "classify";
            return cmd_classify(cfg, dump_path);
        }
        if (*symbol_cmd) {
            cfg.command = "symbol";
            return cmd_symbol(cfg, want_theta, want_sup, want_inner, want_inv);
        }
        if (*defect_cmd) {
            cfg.command = "defect";
            const Symbol s = load_checked(cfg, cfg.files.at(0));
            emit_report(cfg, s, to_json(defect(s, cfg.analysis())));
            return kExitOk;
        }
        if (*norm_cmd) {
            cfg.command = "norm";
            const Symbol s = load_checked(cfg, cfg.files.at(0));
            emit_report(cfg, s, to_json(norm_report(s, cfg.analysis())));
            return kExitOk;
        }
        if (*douglas_cmd) {
            cfg.command = "douglas";
            const Symbol l1 = load_checked(cfg, cfg.files.at(0));
            const Symbol l2 = load_checked(cfg, cfg.files.at(1));
            emit_report(cfg, l1, to_json(douglas_factor(l1, l2, cfg.analysis())));
            return kExitOk;
        }
        if (*coburn_cmd) {
            cfg.command = "coburn";
            const Symbol s = load_checked(cfg, cfg.files.at(0));
            std::vector<cplx> pts;
            for (const auto& l : lambdas) pts.push_back(parse_complex(l));
            if (pts.empty()) pts = default_coburn_lambdas();
            emit_report(cfg, s, to_json(coburn_bound(s, pts, cfg.analysis())));
            return kExitOk;
        }
        if (*hypo_cmd) {
            cfg.command = "hypo";
            const Symbol s = load_checked(cfg, cfg.files.at(0));
            emit_report(cfg, s, to_json(hyponormality_probe(s, cfg.analysis())));
            return kExitOk;
        }
        if (*verify_cmd) {
            cfg.command = "verify";
            return cmd_verify(cfg, suite, count, inject);
        }
        if (*list_cmd) {
            cfg.command = "gallery list";
            return cmd_gallery_list(cfg);
        }
        if (*build_cmd) {
            cfg.command = "gallery build";
            return cmd_gallery_build(cfg, gallery_name, gallery_params);
        }
        if (*dump_cmd) {
            cfg.command = "dump";
            return cmd_dump(cfg, adjoint);
        }
    } catch (const RangeNotContained& e) {
        std::cerr << "error: " << e.what() << " (residual " << e.residual() << ")\n";
        return kExitCertificate;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << " (raise ODOLAB_CAP to allow it)\n";
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCertificate;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
