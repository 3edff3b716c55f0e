#include "odolab/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "odolab/errors.hpp"
#include "odolab/operator.hpp"

namespace odolab {

using ojson = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

// Runs `body`, which fills in the outcome; exceptions become failures.
CheckResult timed(const std::string& suite, const std::string& name, double threshold,
                  const std::function<void(CheckResult&)>& body) {
    CheckResult c;
    c.suite = suite;
    c.name = name;
    c.threshold = threshold;
    const auto start = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.passed = false;
        c.detail = e.what();
    }
    c.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return c;
}

void within(CheckResult& c, double value) {
    c.value = value;
    c.passed = std::isfinite(value) && value <= c.threshold;
}

double sparse_max_abs(const SparseCMatrix& m) {
    double best = 0.0;
    for (Eigen::Index j = 0; j < m.outerSize(); ++j) {
        for (SparseCMatrix::InnerIterator it(m, j); it; ++it) best = std::max(best, std::abs(it.value()));
    }
    return best;
}

AnalysisOptions analysis_options(const VerifyOptions& o) {
    AnalysisOptions a;
    a.tol = o.tol;
    return a;
}

std::vector<CheckResult> suite_adjoint(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    for (const SymbolCase& sc : verification_cases(o)) {
        out.push_back(timed("adjoint", sc.label, 1e-12, [&](CheckResult& c) {
            const FockOperator w = build_wl(sc.symbol, sc.depth);
            const FockOperator a = build_wl_adjoint(sc.symbol, sc.depth + sc.symbol.depth());
            // compress the adjoint formula to the depth-D rows
            std::vector<Eigen::Triplet<cplx>> t;
            for (Eigen::Index j = 0; j < a.matrix.outerSize(); ++j) {
                for (SparseCMatrix::InnerIterator it(a.matrix, j); it; ++it) {
                    if (it.row() < w.matrix.cols()) t.emplace_back(it.row(), it.col(), it.value());
                }
            }
            SparseCMatrix compressed(w.matrix.cols(), a.matrix.cols());
            compressed.setFromTriplets(t.begin(), t.end());
            const SparseCMatrix wt = w.matrix.adjoint();
            within(c, sparse_max_abs(compressed - wt));
        }));
    }
    return out;
}

std::vector<CheckResult> suite_toeplitz(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    for (const SymbolCase& sc : verification_cases(o)) {
        out.push_back(timed("toeplitz", sc.label, 1e-12, [&](CheckResult& c) {
            const CMatrix got = transported_w22(build_wl(sc.symbol, sc.depth));
            const CMatrix want = toeplitz_truncation(theta(sc.symbol), static_cast<std::size_t>(sc.depth + sc.symbol.depth() + 1));
            if (got.rows() != want.rows() || got.cols() > want.cols()) {
                throw NumericalFailure("toeplitz: shape mismatch");
            }
            within(c, max_abs(got - want.leftCols(got.cols())));
        }));
    }
    return out;
}

std::vector<CheckResult> suite_douglas(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    AnalysisOptions a = analysis_options(o);
    a.depth = o.depth;
    for (const GalleryEntry& e : standard_gallery()) {
        out.push_back(timed("douglas", "self/" + e.name, 1e-12, [&](CheckResult& c) {
            const DouglasResult r = douglas_factor(e.symbol, e.symbol, a);
            within(c, std::max(max_abs(r.c - CMatrix::Identity(e.symbol.dim(), e.symbol.dim())), r.gamma_deviation));
            c.passed = c.passed && r.gamma_verified;
        }));
    }

    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> g;
    CMatrix coeff(2, 2);
    for (Eigen::Index i = 0; i < 2; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) coeff(i, j) = cplx{g(rng), g(rng)};
    Symbol l1(2, 2);
    for (int s = 1; s <= 2; ++s)
        for (int q = 1; q <= 2; ++q) l1.add(Word{1}, s, q, coeff(s - 1, q - 1));
    const Symbol shift = shift_symbol(1, 2, 2);

    out.push_back(timed("douglas", "round-trip e1(x)A over shift", 1e-12, [&](CheckResult& c) {
        const DouglasResult r = douglas_factor(l1, shift, a);
        within(c, std::max({max_abs(r.c - coeff), r.residual, r.gamma_deviation}));
        c.passed = c.passed && r.gamma_verified && r.theta_checked && r.theta_verified;
        std::ostringstream d;
        d << "theta deviation " << r.theta_deviation;
        c.detail = d.str();
    }));

    out.push_back(timed("douglas", "negative control vacuum over shift", 0.0, [&](CheckResult& c) {
        try {
            douglas_factor(vacuum_symbol(CMatrix::Identity(2, 2), 2), shift, a);
            c.detail = "factorization unexpectedly succeeded";
        } catch (const RangeNotContained& e) {
            c.passed = true;
            c.value = e.residual();
            c.detail = "RangeNotContained as expected";
        }
    }));

    if (o.inject_fault) {
        out.push_back(timed("douglas", "injected mismatched pair vacuum over shift", 1e-12, [&](CheckResult& c) {
            try {
                const DouglasResult r = douglas_factor(vacuum_symbol(CMatrix::Identity(2, 2), 2), shift, a);
                within(c, r.residual);
            } catch (const RangeNotContained& e) {
                c.value = e.residual();
                std::ostringstream d;
                d << "range not contained, residual " << e.residual();
                c.detail = d.str();
            }
        }));
    }
    return out;
}

std::vector<GalleryEntry> isometric_gallery(const Tolerance& tol) {
    std::vector<GalleryEntry> out;
    for (GalleryEntry& e : standard_gallery()) {
        if (symbol_is_isometric(e.symbol, tol)) out.push_back(std::move(e));
    }
    return out;
}

std::vector<CheckResult> suite_coburn(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    const AnalysisOptions a = analysis_options(o);
    for (const GalleryEntry& e : isometric_gallery(o.tol)) {
        const auto start = Clock::now();
        CoburnResult r;
        try {
            r = coburn_bound(e.symbol, default_coburn_lambdas(), a);
        } catch (const std::exception& ex) {
            out.push_back(timed("coburn", e.name, 1e-10, [&](CheckResult& c) { c.detail = ex.what(); }));
            continue;
        }
        const double per = std::chrono::duration<double>(Clock::now() - start).count() / static_cast<double>(r.points.size());
        for (const CoburnPoint& p : r.points) {
            CheckResult c;
            c.suite = "coburn";
            std::ostringstream name;
            name << e.name << " lambda=(" << p.lambda.real() << "," << p.lambda.imag() << ")";
            c.name = name.str();
            c.threshold = 1e-10;
            c.value = p.bound - p.sigma_min;
            c.passed = p.holds;
            c.seconds = per;
            std::ostringstream d;
            d << "sigma_min " << p.sigma_min << " at depth " << r.depth;
            c.detail = d.str();
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<CheckResult> suite_wold(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    const AnalysisOptions a = analysis_options(o);
    for (const GalleryEntry& e : isometric_gallery(o.tol)) {
        out.push_back(timed("wold", e.name, 0.0, [&](CheckResult& c) {
            const WoldResult w = wold_multiplicity(e.symbol, a);
            const FredholmResult f = fredholm_index(e.symbol, a);
            c.value = std::abs(static_cast<double>(w.mult_wl) - static_cast<double>(w.mult_mtheta)) +
                      std::abs(f.index + static_cast<double>(w.mult_wl));
            c.passed = c.value == 0.0 && f.stable;
            std::ostringstream d;
            d << "mult_WL " << w.mult_wl << ", mult_MTheta " << w.mult_mtheta << ", index " << f.index;
            c.detail = d.str();
        }));
    }
    for (const SymbolCase& sc : verification_cases(o)) {
        out.push_back(timed("wold", "defect methods " + sc.label, 0.0, [&](CheckResult& c) {
            AnalysisOptions local = a;
            local.chain_depth = sc.depth;
            const DefectBasis d = defect(sc.symbol, local);
            c.value = std::abs(static_cast<double>(d.defect_basis.cols()) - static_cast<double>(d.kernel_basis.cols()));
            c.passed = c.value == 0.0;
        }));
    }
    return out;
}

std::vector<CheckResult> suite_gallery(const VerifyOptions& o) {
    std::vector<CheckResult> out;
    for (const GalleryEntry& e : standard_gallery()) {
        for (CheckResult& c : check_expectations(e, o.tol)) out.push_back(std::move(c));
    }
    return out;
}

cplx json_complex(const ojson& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
    throw InputError("expected a number or [re, im]");
}

std::string label_for(const GalleryEntry& e) {
    std::string s = e.name;
    if (!e.params.empty()) s += " " + e.params.dump();
    return s;
}

}  // namespace

std::vector<SymbolCase> random_cases(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> nd(1, 3), dd(1, 2), kd(0, 2), depth(1, 5), entries(1, 6);
    std::normal_distribution<double> g;
    std::vector<SymbolCase> out;
    for (int i = 0; i < count; ++i) {
        const int n = nd(rng), d = dd(rng), k = kd(rng);
        Symbol s(n, d);
        const BasisIndex basis(n, k, d);
        for (int e = entries(rng); e > 0; --e) {
            const auto idx = std::uniform_int_distribution<std::size_t>(0, basis.size() - 1)(rng);
            const int q = std::uniform_int_distribution<int>(1, d)(rng);
            const cplx v{g(rng), g(rng)};
            if (s.coefficient(basis.word_of(idx), basis.slot_of(idx), q) == cplx{}) {
                s.add(basis.word_of(idx), basis.slot_of(idx), q, v);
            }
        }
        out.push_back({"random#" + std::to_string(i), std::move(s), depth(rng)});
    }
    return out;
}

std::vector<SymbolCase> verification_cases(const VerifyOptions& options) {
    std::vector<SymbolCase> out;
    for (GalleryEntry& e : standard_gallery()) out.push_back({label_for(e), std::move(e.symbol), options.depth});
    for (SymbolCase& c : random_cases(options.seed, options.random_count)) out.push_back(std::move(c));
    return out;
}

std::vector<std::string> verify_suites() { return {"adjoint", "toeplitz", "douglas", "coburn", "wold", "gallery"}; }

std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& options) {
    options.tol.validate();
    if (options.depth < 0 || options.random_count < 0) throw InputError("verify: depth and count must be >= 0");
    using Runner = std::vector<CheckResult> (*)(const VerifyOptions&);
    const std::vector<std::pair<std::string, Runner>> runners = {
        {"adjoint", suite_adjoint}, {"toeplitz", suite_toeplitz}, {"douglas", suite_douglas},
        {"coburn", suite_coburn},   {"wold", suite_wold},         {"gallery", suite_gallery},
    };
    std::vector<CheckResult> out;
    bool known = false;
    for (const auto& [name, run] : runners) {
        if (suite != "all" && suite != name) continue;
        known = true;
        for (CheckResult& c : run(options)) out.push_back(std::move(c));
    }
    if (!known) throw InputError("verify: unknown suite '" + suite + "'");
    return out;
}

std::vector<CheckResult> check_expectations(const GalleryEntry& entry, const Tolerance& tol) {
    std::vector<CheckResult> out;
    AnalysisOptions a;
    a.tol = tol;
    std::optional<ClassificationReport> report;
    const auto rep = [&]() -> const ClassificationReport& {
        if (!report) report = classify(entry.symbol, a);
        return *report;
    };
    std::optional<HypoResult> hypo;
    const auto hyp = [&]() -> const HypoResult& {
        if (!hypo) hypo = hyponormality_probe(entry.symbol, a);
        return *hypo;
    };
    const std::string label = label_for(entry);

    for (const auto& [key, want] : entry.expected.items()) {
        const std::string name = label + " " + key;
        const auto verdict = [&](const Verdict& v) {
            return timed("gallery", name, 0.0, [&](CheckResult& c) {
                c.passed = v.decided && v.value == want.get<bool>();
                c.value = v.deviation;
                c.detail = std::string("got ") + (v.decided ? (v.value ? "true" : "false") : "undecided");
            });
        };
        const auto number = [&](double threshold, const std::function<double()>& got) {
            return timed("gallery", name, threshold, [&](CheckResult& c) {
                const double g = got();
                within(c, std::abs(g - want.get<double>()));
                std::ostringstream d;
                d.precision(17);
                d << "got " << g;
                c.detail = d.str();
            });
        };
        if (key == "isometric") {
            out.push_back(verdict(rep().isometric));
        } else if (key == "unitary") {
            out.push_back(verdict(rep().unitary));
        } else if (key == "invertible") {
            out.push_back(verdict(rep().invertible));
        } else if (key == "theta_inner") {
            out.push_back(verdict(rep().theta_inner));
        } else if (key == "defect_dim") {
            out.push_back(number(0.0, [&] { return static_cast<double>(rep().defect_dim); }));
        } else if (key == "fredholm_index") {
            out.push_back(number(0.0, [&] {
                if (!rep().fredholm_index) throw NumericalFailure("no fredholm index in report");
                return static_cast<double>(*rep().fredholm_index);
            }));
        } else if (key == "sigma_min_L") {
            out.push_back(number(1e-10, [&] { return rep().sigma_min_l; }));
        } else if (key == "norm_Lh1_sq") {
            out.push_back(number(1e-12, [&] { return entry.symbol.as_matrix().col(0).squaredNorm(); }));
        } else if (key == "hypo_gap") {
            out.push_back(number(1e-10, [&] { return hyp().gap; }));
        } else if (key == "hyponormal_necessary") {
            out.push_back(timed("gallery", name, 0.0, [&](CheckResult& c) {
                c.passed = hyp().necessary_condition == want.get<bool>();
                c.value = hyp().sigma_min_l;
            }));
        } else if (key == "c0") {
            out.push_back(timed("gallery", name, 1e-12, [&](CheckResult& c) {
                const cplx g = theta(entry.symbol).coefficient(0)(0, 0);
                within(c, std::abs(g - json_complex(want)));
            }));
        } else if (key == "inner_within_tail") {
            out.push_back(timed("gallery", name, 0.0, [&](CheckResult& c) {
                if (!entry.tail_bound) throw InputError("inner_within_tail needs a tail bound");
                // floor at accumulated roundoff once the tail drops below it
                c.threshold = 10.0 * *entry.tail_bound + 1e-14;
                within(c, is_inner_exact(theta(entry.symbol), tol.eps_exact).deviation);
                c.passed = c.passed == want.get<bool>();
            }));
        } else if (key == "supnorm") {
            out.push_back(timed("gallery", name, 1e-9, [&](CheckResult& c) {
                const SupNormBracket b = rep().theta_supnorm_bracket;
                const double v = want.get<double>();
                within(c, std::max({0.0, b.lower - v, v - b.upper}));
                std::ostringstream d;
                d << "bracket [" << b.lower << ", " << b.upper << "]";
                c.detail = d.str();
            }));
        } else {
            out.push_back(timed("gallery", name, 0.0, [&](CheckResult& c) { c.detail = "unknown expectation key"; }));
        }
    }
    return out;
}

ojson to_json(const CheckResult& c) {
    ojson j;
    j["suite"] = c.suite;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["value"] = c.value;
    j["threshold"] = c.threshold;
    j["seconds"] = c.seconds;
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

ojson verify_summary(const std::vector<CheckResult>& checks) {
    ojson j;
    std::size_t failed = 0;
    double seconds = 0.0;
    ojson list = ojson::array();
    for (const CheckResult& c : checks) {
        failed += c.passed ? 0 : 1;
        seconds += c.seconds;
        list.push_back(to_json(c));
    }
    j["passed"] = failed == 0;
    j["checks"] = checks.size();
    j["failed"] = failed;
    j["seconds"] = seconds;
    j["results"] = std::move(list);
    return j;
}

}  // namespace odolab
