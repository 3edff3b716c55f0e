#include "odolab/symbol.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "odolab/errors.hpp"

namespace odolab {

using json = nlohmann::json;

Symbol::Symbol(int n, int dim) : n_(n), dim_(dim) {
    if (n < 1 || dim < 1) throw InputError("symbol: need n >= 1 and dim >= 1");
}

void Symbol::add(const Word& word, int s, int q, cplx value) {
    validate_word(word, n_);
    if (s < 1 || s > dim_ || q < 1 || q > dim_) {
        std::ostringstream msg;
        msg << "symbol: slot pair (" << s << ", " << q << ") outside 1.." << dim_;
        throw InputError(msg.str());
    }
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
        throw InputError("symbol: non-finite coefficient at " + word.str());
    }
    Key key{word, s, q};
    if (entries_.count(key) != 0) {
        std::ostringstream msg;
        msg << "symbol: duplicate entry (word " << word.str() << ", s " << s << ", q " << q << ")";
        throw InputError(msg.str());
    }
    entries_.emplace(std::move(key), value);
    by_row_[{word, s}].emplace_back(q, value);
    depth_ = std::max(depth_, static_cast<int>(word.size()));
}

cplx Symbol::coefficient(const Word& word, int s, int q) const {
    const auto it = entries_.find(Key{word, s, q});
    return it == entries_.end() ? cplx{} : it->second;
}

CVector Symbol::adjoint_column(const Word& word, int s) const {
    CVector out = CVector::Zero(dim_);
    const auto it = by_row_.find({word, s});
    if (it == by_row_.end()) return out;
    for (const auto& [q, c] : it->second) out(q - 1) += std::conj(c);
    return out;
}

CMatrix Symbol::as_matrix(const BasisIndex& basis) const {
    if (basis.n() != n_ || basis.dim() != dim_ || basis.depth() < depth_) {
        throw PreconditionError("symbol: basis does not cover the symbol support");
    }
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(basis.size()), dim_);
    for (const auto& [key, c] : entries_) {
        m(static_cast<Eigen::Index>(basis.index_of(key.word, key.s)), key.q - 1) += c;
    }
    return m;
}

CMatrix Symbol::as_matrix() const {
    return as_matrix(BasisIndex(n_, depth_, dim_));
}

Symbol Symbol::chain_part() const {
    Symbol out(n_, dim_);
    for (const auto& [key, c] : entries_) {
        if (classify_word(key.word, n_).is_ones_chain) out.add(key.word, key.s, key.q, c);
    }
    out.tail_bound = tail_bound;
    return out;
}

Symbol Symbol::m_part() const {
    Symbol out(n_, dim_);
    for (const auto& [key, c] : entries_) {
        if (!classify_word(key.word, n_).is_ones_chain) out.add(key.word, key.s, key.q, c);
    }
    return out;
}

double Symbol::m_part_max() const {
    double m = 0.0;
    for (const auto& [key, c] : entries_) {
        if (!classify_word(key.word, n_).is_ones_chain) m = std::max(m, std::abs(c));
    }
    return m;
}

CMatrix MatrixPolynomial::coefficient(int r) const {
    if (r >= 0 && r < static_cast<int>(coefficients.size())) return coefficients[static_cast<std::size_t>(r)];
    return CMatrix::Zero(dim(), dim());
}

CMatrix MatrixPolynomial::evaluate(cplx z) const {
    CMatrix acc = CMatrix::Zero(dim(), dim());
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
    return acc;
}

CMatrix coefficient_operator(const Symbol& symbol, int r) {
    if (r < 0) throw PreconditionError("coefficient_operator: r must be >= 0");
    CMatrix out = CMatrix::Zero(symbol.dim(), symbol.dim());
    if (r > symbol.depth()) return out;
    const Word chain = Word::repeated(1, static_cast<std::size_t>(r));
    for (int s = 1; s <= symbol.dim(); ++s) {
        for (int q = 1; q <= symbol.dim(); ++q) out(s - 1, q - 1) = symbol.coefficient(chain, s, q);
    }
    return out;
}

MatrixPolynomial theta(const Symbol& symbol) {
    MatrixPolynomial p;
    p.coefficients.reserve(static_cast<std::size_t>(symbol.depth()) + 1);
    for (int r = 0; r <= symbol.depth(); ++r) p.coefficients.push_back(coefficient_operator(symbol, r));
    return p;
}

CVector symbol_adjoint_apply(const Symbol& symbol, const BasisIndex& basis, const CVector& v) {
    if (basis.n() != symbol.n() || basis.dim() != symbol.dim()) {
        throw PreconditionError("symbol_adjoint_apply: basis does not match the symbol");
    }
    if (v.size() != static_cast<Eigen::Index>(basis.size())) {
        throw PreconditionError("symbol_adjoint_apply: vector length does not match the basis");
    }
    CVector out = CVector::Zero(symbol.dim());
    for (const auto& [key, c] : symbol.entries()) {
        if (!basis.contains(key.word)) continue;
        out(key.q - 1) += std::conj(c) * v(static_cast<Eigen::Index>(basis.index_of(key.word, key.s)));
    }
    return out;
}

InnerVerdict is_inner_exact(const MatrixPolynomial& theta, double tolerance) {
    const int k = theta.degree();
    const Eigen::Index d = theta.dim();
    InnerVerdict v;
    for (int j = 0; j <= k; ++j) {
        CMatrix a = CMatrix::Zero(d, d);
        for (int r = 0; r + j <= k; ++r) {
            a += theta.coefficients[static_cast<std::size_t>(r)].adjoint() *
                 theta.coefficients[static_cast<std::size_t>(r + j)];
        }
        if (j == 0) a -= CMatrix::Identity(d, d);
        v.deviation = std::max(v.deviation, max_abs(a));
    }
    v.inner = v.deviation <= tolerance;
    return v;
}

std::vector<cplx> determinant_coefficients(const MatrixPolynomial& theta) {
    const auto d = static_cast<std::size_t>(theta.dim());
    const std::size_t nodes = d * static_cast<std::size_t>(std::max(theta.degree(), 0)) + 1;
    std::vector<cplx> values(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nodes));
        values[j] = theta.evaluate(z).determinant();
    }
    std::vector<cplx> coeffs(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        cplx acc{};
        for (std::size_t j = 0; j < nodes; ++j) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % nodes) /
                                 static_cast<double>(nodes);
            acc += values[j] * std::polar(1.0, angle);
        }
        coeffs[k] = acc / static_cast<double>(nodes);
    }
    return coeffs;
}

InvertibilityVerdict is_invertible_hinf(const MatrixPolynomial& theta, std::size_t grid,
                                        const Tolerance& tol) {
    const std::vector<cplx> det = determinant_coefficients(theta);
    double bound = 0.0;
    for (const auto& c : theta.coefficients) {
        const Eigen::VectorXd s = singular_values(c);
        if (s.size() > 0) bound += s(0);
    }
    const double scale = std::max(1.0, std::pow(bound, static_cast<double>(theta.dim())));
    double largest = 0.0;
    for (const auto& c : det) largest = std::max(largest, std::abs(c));
    if (largest <= tol.eps_exact * scale) {
        throw IdenticallySingular("det Theta vanishes identically; Theta is nowhere invertible");
    }
    const WindingCertificate cert = winding_certificate(det, grid);
    InvertibilityVerdict v;
    v.zeros_inside = cert.winding;
    v.min_modulus = cert.min_modulus;
    v.margin = cert.margin;
    v.invertible = cert.winding == 0;
    return v;
}

SupNormBracket sup_norm(const MatrixPolynomial& theta, std::size_t grid) {
    if (grid < 64) throw PreconditionError("sup_norm: grid must have at least 64 points");
    SupNormBracket b;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const CMatrix value = theta.evaluate(std::polar(1.0, step * static_cast<double>(j)));
        const double top = value.size() == 1 ? std::abs(value(0, 0)) : singular_values(value)(0);
        b.lower = std::max(b.lower, top);
    }
    double slack = 0.0;
    for (int r = 1; r <= theta.degree(); ++r) {
        const Eigen::VectorXd s = singular_values(theta.coefficients[static_cast<std::size_t>(r)]);
        if (s.size() > 0) slack += r * s(0);
    }
    b.upper = b.lower + slack * step;
    return b;
}

namespace {

int require_int(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_number_integer()) {
        throw InputError(std::string("symbol file: field '") + field + "' must be an integer");
    }
    return j.at(field).get<int>();
}

double require_number(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_number()) {
        throw InputError(std::string("symbol file: field '") + field + "' must be a number");
    }
    return j.at(field).get<double>();
}

}  // namespace

Symbol symbol_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("symbol file: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("symbol file: top level must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "n" && key != "dim" && key != "entries" && key != "tail_bound") {
            throw InputError("symbol file: unknown field '" + key + "'");
        }
    }
    const int n = require_int(doc, "n");
    const int dim = require_int(doc, "dim");
    if (n < 1 || dim < 1) throw InputError("symbol file: n and dim must be >= 1");
    if (!doc.contains("entries") || !doc.at("entries").is_array()) {
        throw InputError("symbol file: 'entries' must be an array");
    }
    Symbol symbol(n, dim);
    for (const json& e : doc.at("entries")) {
        if (!e.is_object()) throw InputError("symbol file: each entry must be an object");
        for (const auto& [key, value] : e.items()) {
            if (key != "word" && key != "s" && key != "q" && key != "re" && key != "im") {
                throw InputError("symbol file: unknown entry field '" + key + "'");
            }
        }
        if (!e.contains("word") || !e.at("word").is_array()) {
            throw InputError("symbol file: entry 'word' must be an array of integers");
        }
        std::vector<int> letters;
        for (const json& l : e.at("word")) {
            if (!l.is_number_integer()) throw InputError("symbol file: word letters must be integers");
            letters.push_back(l.get<int>());
        }
        symbol.add(Word(std::move(letters)), require_int(e, "s"), require_int(e, "q"),
                   cplx{require_number(e, "re"), require_number(e, "im")});
    }
    if (doc.contains("tail_bound")) {
        const double t = require_number(doc, "tail_bound");
        if (!(t >= 0.0)) throw InputError("symbol file: tail_bound must be >= 0");
        symbol.tail_bound = t;
    }
    return symbol;
}

std::string symbol_to_json(const Symbol& symbol) {
    json doc;
    doc["n"] = symbol.n();
    doc["dim"] = symbol.dim();
    json entries = json::array();
    for (const auto& [key, c] : symbol.entries()) {
        entries.push_back({{"word", key.word.letters()}, {"s", key.s}, {"q", key.q},
                           {"re", c.real()}, {"im", c.imag()}});
    }
    doc["entries"] = std::move(entries);
    if (symbol.tail_bound) doc["tail_bound"] = *symbol.tail_bound;
    return doc.dump(2) + "\n";
}

Symbol load_symbol(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open symbol file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return symbol_from_json(buf.str());
}

}  // namespace odolab
