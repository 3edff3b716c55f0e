#include "odolab/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "odolab/errors.hpp"

namespace odolab {

using ojson = nlohmann::ordered_json;

namespace {

ojson complex_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return ojson::array({z.real(), z.imag()});
}

ojson matrix_json(const CMatrix& m) {
    ojson rows = ojson::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

cplx parse_complex(const ojson& v, const std::string& what) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw InputError("gallery: " + what + " must be a number or [re, im]");
}

CMatrix parse_matrix(const ojson& v, const std::string& what) {
    if (!v.is_array() || v.empty()) throw InputError("gallery: " + what + " must be a non-empty array of rows");
    const std::size_t rows = v.size();
    if (!v[0].is_array()) throw InputError("gallery: " + what + " must be an array of rows");
    const std::size_t cols = v[0].size();
    CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].size() != cols) throw InputError("gallery: " + what + " rows differ in length");
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_complex(v[i][j], what);
        }
    }
    return m;
}

int parse_int(const ojson& v, const std::string& what) {
    if (!v.is_number_integer()) throw InputError("gallery: " + what + " must be an integer");
    return v.get<int>();
}

void add_diagonal(Symbol& symbol, const Word& w, cplx value) {
    if (value == cplx{}) return;
    for (int s = 1; s <= symbol.dim(); ++s) symbol.add(w, s, s, value);
}

void require_n(int n) {
    if (n < 1) throw InputError("gallery: n must be >= 1");
}

void require_d(int d) {
    if (d < 1) throw InputError("gallery: d must be >= 1");
}

bool is_unitary(const CMatrix& u) {
    if (u.rows() != u.cols()) return false;
    const CMatrix id = CMatrix::Identity(u.rows(), u.cols());
    return max_abs(u.adjoint() * u - id) <= 1e-12;
}

}  // namespace

Symbol shift_symbol(int k, int n, int d) {
    if (k < 1) throw PreconditionError("shift_symbol: k must be >= 1");
    require_n(n);
    require_d(d);
    Symbol symbol(n, d);
    add_diagonal(symbol, Word::repeated(1, static_cast<std::size_t>(k)), 1.0);
    return symbol;
}

Symbol vacuum_symbol(const CMatrix& u, int n) {
    require_n(n);
    if (u.rows() != u.cols() || u.rows() < 1) throw InputError("vacuum_symbol: U must be square and non-empty");
    Symbol symbol(n, static_cast<int>(u.rows()));
    for (Eigen::Index s = 0; s < u.rows(); ++s) {
        for (Eigen::Index q = 0; q < u.cols(); ++q) {
            if (u(s, q) != cplx{}) symbol.add(Word{}, static_cast<int>(s) + 1, static_cast<int>(q) + 1, u(s, q));
        }
    }
    return symbol;
}

Symbol diagonal_symbol(int d, int n) {
    require_n(n);
    require_d(d);
    Symbol symbol(n, d);
    for (int p = 1; p <= d; ++p) symbol.add(Word::repeated(1, static_cast<std::size_t>(p - 1)), p, p, 1.0);
    return symbol;
}

std::vector<cplx> blaschke_coefficients(const std::vector<cplx>& zeros, int degree) {
    if (degree < 0) throw InputError("blaschke: degree must be >= 0");
    std::vector<cplx> b(static_cast<std::size_t>(degree) + 1, cplx{});
    b[0] = 1.0;
    for (const cplx a : zeros) {
        if (!(std::abs(a) < 1.0)) throw PreconditionError("blaschke: zeros must lie in the open unit disk");
        // g = f (z - a) / (1 - conj(a) z): h = (z - a) f, then g_r = h_r + conj(a) g_{r-1}.
        std::vector<cplx> g(b.size());
        for (std::size_t r = 0; r < b.size(); ++r) {
            const cplx h = -a * b[r] + (r > 0 ? b[r - 1] : cplx{});
            g[r] = h + (r > 0 ? std::conj(a) * g[r - 1] : cplx{});
        }
        b = std::move(g);
    }
    return b;
}

GalleryEntry blaschke_symbol(const std::vector<cplx>& zeros, int R, int n, int d) {
    require_n(n);
    require_d(d);
    if (R < 1) throw InputError("blaschke: R must be >= 1");
    double rho = 0.0;
    for (const cplx a : zeros) rho = std::max(rho, std::abs(a));

    // Extend the series far enough that the remaining terms are negligible and
    // take the larger of the envelope rho^R and the computed tail.
    const int extra = rho > 0.0 ? static_cast<int>(std::min(1e5, std::ceil(100.0 / -std::log(rho)))) + 50 * static_cast<int>(zeros.size()) : 0;
    const std::vector<cplx> b = blaschke_coefficients(zeros, R + extra);
    double tail_sq = 0.0;
    for (std::size_t r = static_cast<std::size_t>(R) + 1; r < b.size(); ++r) tail_sq += std::norm(b[r]);
    const double tail = std::max(std::pow(rho, R), std::sqrt(tail_sq));

    Symbol symbol(n, d);
    for (int r = 0; r <= R; ++r) add_diagonal(symbol, Word::repeated(1, static_cast<std::size_t>(r)), b[static_cast<std::size_t>(r)]);
    symbol.tail_bound = tail;

    ojson zs = ojson::array();
    for (const cplx a : zeros) zs.push_back(complex_json(a));
    GalleryEntry e{"blaschke", ojson{{"zeros", zs}, {"R", R}, {"n", n}, {"d", d}}, symbol, ojson::object(), tail};
    e.expected["c0"] = b[0].real();
    if (b[0].imag() != 0.0) e.expected["c0"] = complex_json(b[0]);
    e.expected["inner_within_tail"] = true;
    e.expected["unitary"] = false;
    if (tail <= 1e-12) {
        e.expected["isometric"] = true;
        e.expected["defect_dim"] = static_cast<int>(zeros.size()) * d;
        e.expected["fredholm_index"] = -static_cast<int>(zeros.size()) * d;
    }
    return e;
}

GalleryEntry moebius_symbol(cplx a, int R, int n, int d) {
    GalleryEntry e = blaschke_symbol({a}, R, n, d);
    e.name = "moebius";
    e.params = ojson{{"a", complex_json(a)}, {"R", R}, {"n", n}, {"d", d}};
    return e;
}

double golden_omega() {
    return (1.0 - std::sqrt(5.0)) / 2.0;
}

GalleryEntry golden_symbol(int R, int n, int d) {
    GalleryEntry e = moebius_symbol(golden_omega(), R, n, d);
    e.name = "golden";
    e.params = ojson{{"R", R}, {"n", n}, {"d", d}};
    e.expected["c0"] = std::sqrt(2.0 / (std::sqrt(5.0) + 3.0));
    return e;
}

GalleryEntry resolvent_shift_symbol(int d, int R, int n) {
    require_n(n);
    if (d < 2) throw PreconditionError("resolvent_shift_symbol: d must be >= 2");
    if (R < 0) throw InputError("resolvent_shift_symbol: R must be >= 0");
    Symbol symbol(n, d);
    for (int r = 0; r <= R; ++r) {
        for (int q = 1; q + r <= d; ++q) {
            symbol.add(Word::repeated(1, static_cast<std::size_t>(r)), q + r, q, std::ldexp(1.0, -(r + 1)));
        }
    }
    const double tail = std::ldexp(1.0, -(R + 1)) / std::sqrt(3.0);
    symbol.tail_bound = tail;

    double lh1 = 0.0;
    for (int r = 0; r <= std::min(R, d - 1); ++r) lh1 += std::ldexp(1.0, -2 * (r + 1));

    GalleryEntry e{"resolvent", ojson{{"d", d}, {"R", R}, {"n", n}}, symbol, ojson::object(), tail};
    e.expected["isometric"] = false;
    e.expected["unitary"] = false;
    e.expected["theta_inner"] = false;
    e.expected["norm_Lh1_sq"] = lh1;
    e.expected["sigma_min_L"] = 0.5;
    e.expected["hyponormal_necessary"] = false;
    return e;
}

GalleryEntry projection_symbol(const CMatrix& p, int n) {
    require_n(n);
    if (p.rows() != p.cols() || p.rows() < 1) throw NotAProjection("projection_symbol: P must be square and non-empty");
    if (max_abs(p * p - p) > 1e-10 || max_abs(p - p.adjoint()) > 1e-10) {
        throw NotAProjection("projection_symbol: P is not an orthogonal projection");
    }
    const int d = static_cast<int>(p.rows());
    const CMatrix q = CMatrix::Identity(d, d) - p;
    Symbol symbol(n, d);
    for (int s = 0; s < d; ++s) {
        for (int t = 0; t < d; ++t) {
            if (q(s, t) != cplx{}) symbol.add(Word{}, s + 1, t + 1, q(s, t));
            if (p(s, t) != cplx{}) symbol.add(Word{1}, s + 1, t + 1, p(s, t));
        }
    }
    const int rank = static_cast<int>(std::lround(p.trace().real()));
    GalleryEntry e{"projection", ojson{{"P", matrix_json(p)}, {"n", n}}, symbol, ojson::object(), std::nullopt};
    e.expected["isometric"] = true;
    e.expected["unitary"] = rank == 0;
    e.expected["defect_dim"] = rank;
    e.expected["fredholm_index"] = -rank;
    return e;
}

GalleryEntry constant_plus_shift(cplx a, int n, int d) {
    require_n(n);
    require_d(d);
    if (!(std::abs(a) > 0.0 && std::abs(a) < 1.0)) {
        throw PreconditionError("constant_plus_shift: need 0 < |a| < 1");
    }
    Symbol symbol(n, d);
    add_diagonal(symbol, Word{}, 1.0);
    add_diagonal(symbol, Word{1}, a);
    GalleryEntry e{"constant_plus_shift", ojson{{"a", complex_json(a)}, {"n", n}, {"d", d}}, symbol, ojson::object(), std::nullopt};
    e.expected["invertible"] = true;
    e.expected["isometric"] = false;
    e.expected["unitary"] = false;
    e.expected["norm_Lh1_sq"] = 1.0 + std::norm(a);
    return e;
}

GalleryEntry hypo_counterexample(int n) {
    if (n < 2) throw PreconditionError("hypo_counterexample: n must be >= 2");
    Symbol symbol(n, 1);
    symbol.add(Word{}, 1, 1, 1.0);
    symbol.add(Word{1}, 1, 1, 1.0);
    GalleryEntry e{"hypo", ojson{{"n", n}}, symbol, ojson::object(), std::nullopt};
    e.expected["isometric"] = false;
    e.expected["sigma_min_L"] = std::sqrt(2.0);
    e.expected["hyponormal_necessary"] = true;
    e.expected["hypo_gap"] = 1.0;
    e.expected["supnorm"] = 2.0;
    return e;
}

std::vector<std::string> gallery_names() {
    return {"shift",      "vacuum",     "diagonal",           "blaschke", "moebius",
            "golden",     "resolvent",  "projection",         "constant_plus_shift", "hypo"};
}

std::string gallery_usage(const std::string& name) {
    if (name == "shift") return "shift k=1 n=2 d=1";
    if (name == "vacuum") return "vacuum U=<identity of size d> d=2 n=2";
    if (name == "diagonal") return "diagonal d=3 n=2";
    if (name == "blaschke") return "blaschke zeros=[0.5] R=40 n=1 d=1";
    if (name == "moebius") return "moebius a=0.5 R=40 n=1 d=1";
    if (name == "golden") return "golden R=40 n=1 d=1";
    if (name == "resolvent") return "resolvent d=4 R=12 n=2";
    if (name == "projection") return "projection P=[[1,0,0],[0,1,0],[0,0,0]] n=2";
    if (name == "constant_plus_shift") return "constant_plus_shift a=0.5 n=2 d=1";
    if (name == "hypo") return "hypo n=2";
    throw InputError("gallery: unknown entry '" + name + "'");
}

namespace {

class Params {
public:
    Params(const std::string& name, const ojson& params, std::set<std::string> allowed) : name_(name), p_(params) {
        if (!p_.is_object()) throw InputError("gallery: parameters must be an object");
        for (const auto& [key, value] : p_.items()) {
            if (allowed.count(key) == 0) throw InputError("gallery: " + name + " has no parameter '" + key + "'");
        }
    }

    int integer(const std::string& key, int fallback) const {
        return p_.contains(key) ? parse_int(p_[key], key) : fallback;
    }
    cplx complex(const std::string& key, cplx fallback) const {
        return p_.contains(key) ? parse_complex(p_[key], key) : fallback;
    }
    bool has(const std::string& key) const { return p_.contains(key); }
    const ojson& raw(const std::string& key) const { return p_[key]; }

private:
    std::string name_;
    const ojson& p_;
};

}  // namespace

GalleryEntry gallery_build(const std::string& name, const ojson& params) {
    if (name == "shift") {
        const Params p(name, params, {"k", "n", "d"});
        const int k = p.integer("k", 1);
        const int n = p.integer("n", 2);
        const int d = p.integer("d", 1);
        GalleryEntry e{name, ojson{{"k", k}, {"n", n}, {"d", d}}, shift_symbol(k, n, d), ojson::object(), std::nullopt};
        e.expected["isometric"] = true;
        e.expected["unitary"] = false;
        e.expected["theta_inner"] = true;
        e.expected["invertible"] = false;
        e.expected["defect_dim"] = k * d;
        e.expected["fredholm_index"] = -k * d;
        e.expected["sigma_min_L"] = 1.0;
        return e;
    }
    if (name == "vacuum") {
        const Params p(name, params, {"U", "d", "n"});
        const int n = p.integer("n", 2);
        CMatrix u;
        if (p.has("U")) {
            u = parse_matrix(p.raw("U"), "U");
            if (p.has("d") && p.integer("d", 0) != u.rows()) throw InputError("gallery: d disagrees with U");
        } else {
            const int d = p.integer("d", 2);
            require_d(d);
            u = CMatrix::Identity(d, d);
        }
        GalleryEntry e{name, ojson{{"U", matrix_json(u)}, {"n", n}}, vacuum_symbol(u, n), ojson::object(), std::nullopt};
        const bool unitary = is_unitary(u);
        e.expected["unitary"] = unitary;
        e.expected["isometric"] = unitary;
        if (unitary) {
            e.expected["defect_dim"] = 0;
            e.expected["fredholm_index"] = 0;
            e.expected["invertible"] = true;
        }
        return e;
    }
    if (name == "diagonal") {
        const Params p(name, params, {"d", "n"});
        const int d = p.integer("d", 3);
        const int n = p.integer("n", 2);
        GalleryEntry e{name, ojson{{"d", d}, {"n", n}}, diagonal_symbol(d, n), ojson::object(), std::nullopt};
        e.expected["isometric"] = true;
        e.expected["theta_inner"] = true;
        e.expected["unitary"] = d == 1;
        e.expected["defect_dim"] = d * (d - 1) / 2;
        e.expected["fredholm_index"] = -d * (d - 1) / 2;
        return e;
    }
    if (name == "blaschke") {
        const Params p(name, params, {"zeros", "R", "n", "d"});
        std::vector<cplx> zeros{0.5};
        if (p.has("zeros")) {
            const ojson& z = p.raw("zeros");
            if (!z.is_array()) throw InputError("gallery: zeros must be an array");
            zeros.clear();
            for (const auto& v : z) zeros.push_back(parse_complex(v, "zeros"));
        }
        return blaschke_symbol(zeros, p.integer("R", 40), p.integer("n", 1), p.integer("d", 1));
    }
    if (name == "moebius") {
        const Params p(name, params, {"a", "R", "n", "d"});
        return moebius_symbol(p.complex("a", 0.5), p.integer("R", 40), p.integer("n", 1), p.integer("d", 1));
    }
    if (name == "golden") {
        const Params p(name, params, {"R", "n", "d"});
        return golden_symbol(p.integer("R", 40), p.integer("n", 1), p.integer("d", 1));
    }
    if (name == "resolvent") {
        const Params p(name, params, {"d", "R", "n"});
        return resolvent_shift_symbol(p.integer("d", 4), p.integer("R", 12), p.integer("n", 2));
    }
    if (name == "projection") {
        const Params p(name, params, {"P", "n"});
        CMatrix proj = CMatrix::Zero(3, 3);
        proj(0, 0) = 1.0;
        proj(1, 1) = 1.0;
        if (p.has("P")) proj = parse_matrix(p.raw("P"), "P");
        return projection_symbol(proj, p.integer("n", 2));
    }
    if (name == "constant_plus_shift") {
        const Params p(name, params, {"a", "n", "d"});
        return constant_plus_shift(p.complex("a", 0.5), p.integer("n", 2), p.integer("d", 1));
    }
    if (name == "hypo") {
        const Params p(name, params, {"n"});
        return hypo_counterexample(p.integer("n", 2));
    }
    throw InputError("gallery: unknown entry '" + name + "'");
}

std::vector<GalleryEntry> standard_gallery() {
    std::vector<GalleryEntry> out;
    out.push_back(gallery_build("shift", {{"k", 1}, {"n", 2}, {"d", 2}}));
    out.push_back(gallery_build("shift", {{"k", 2}, {"n", 2}, {"d", 1}}));
    out.push_back(gallery_build("shift", {{"k", 3}, {"n", 1}, {"d", 2}}));
    out.push_back(gallery_build("vacuum", {{"d", 2}, {"n", 2}}));
    out.push_back(gallery_build("vacuum", {{"U", {{1, 0}, {0, ojson::array({0, 1})}}}, {"n", 3}}));
    out.push_back(gallery_build("vacuum", {{"U", {{0.5, 0}, {0, 1}}}, {"n", 2}}));
    out.push_back(gallery_build("diagonal", {{"d", 3}, {"n", 2}}));
    out.push_back(gallery_build("golden", {{"R", 40}, {"n", 1}, {"d", 1}}));
    out.push_back(gallery_build("golden", {{"R", 60}, {"n", 1}, {"d", 1}}));
    out.push_back(gallery_build("blaschke", {{"zeros", {0.5, ojson::array({0.0, -0.3})}}, {"R", 60}, {"n", 1}, {"d", 2}}));
    out.push_back(gallery_build("resolvent", {{"d", 4}, {"R", 3}, {"n", 2}}));
    out.push_back(gallery_build("projection", {{"n", 2}}));
    out.push_back(gallery_build("constant_plus_shift", {{"a", 0.5}, {"n", 2}, {"d", 1}}));
    out.push_back(gallery_build("hypo", {{"n", 2}}));
    return out;
}

}  // namespace odolab
