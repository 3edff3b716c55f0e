#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "odolab/numerics.hpp"
#include "odolab/operator.hpp"
#include "odolab/symbol.hpp"

namespace odolab {

/// A yes/no verdict with the deviation that decided it and the result it instantiates.
struct Verdict {
    bool value = false;
    bool decided = true;  // false when a certificate could not be produced
    double deviation = 0.0;
    std::string theorem;
    std::string note;
};

struct Witness {
    std::string label;
    double value = 0.0;
};

struct AnalysisOptions {
    int depth = -1;        // Fock depth D; -1 picks 64 for n = 1 and 6 otherwise
    int chain_depth = -1;  // degree cut for chain-sector computations; -1 picks max(D, 2K + 16)
    std::size_t invert_grid = 8192;
    std::size_t sup_grid = 4096;
    std::size_t dense_cap = 1500;  // largest column count handed to a dense SVD
    bool strict_invertibility = false;  // rethrow BoundaryZeroSuspected instead of reporting undecided
    std::size_t cap = 0;  // basis cap; 0 uses default_basis_cap()
    Tolerance tol;

    int resolved_depth(int n) const;
    int resolved_chain_depth(const Symbol& symbol) const;
    std::size_t resolved_cap() const;
};

/// P_M L = 0 and Theta inner, both within eps_exact.
bool symbol_is_isometric(const Symbol& symbol, const Tolerance& tol = {});

/// Defect space E_L (-) L E inside the 1-chain sector of degree <= chain_depth,
/// in Hardy coordinates (degree-major, slot fastest).
struct DefectBasis {
    int chain_depth = 0;
    CMatrix el_basis;      // orthonormal basis of E_L within the sector
    CMatrix defect_basis;  // orthonormal basis of E_L (-) L E, method (a)
    CMatrix kernel_basis;  // kernel of f -> (L* S_1^{*p} f)_p, method (b)
    std::size_t rank_l = 0;  // rank of the chain part of L as a map E -> sector
    std::size_t dim() const { return static_cast<std::size_t>(defect_basis.cols()); }
};

/// Both defect constructions; throws MethodDisagreement if their dimensions differ.
DefectBasis defect(const Symbol& symbol, const AnalysisOptions& options = {});

struct FredholmResult {
    bool stable = false;  // defect dimension agrees at chain depths A - 1 and A
    int index = 0;
    std::size_t defect_dim = 0;
    std::size_t defect_dim_previous = 0;
};

/// -dim(E_L (-) L E). Throws NotIsometric unless classify would call L isometric.
FredholmResult fredholm_index(const Symbol& symbol, const AnalysisOptions& options = {});

struct WoldResult {
    std::size_t mult_wl = 0;
    std::size_t mult_mtheta = 0;
    int toeplitz_size = 0;    // blocks in the truncated Toeplitz matrix
    int low_degree_cut = 0;   // kernel vectors counted only in degrees <= this
};

/// Multiplicity of the shift part two ways. Throws NotIsometric and MethodDisagreement.
WoldResult wold_multiplicity(const Symbol& symbol, const AnalysisOptions& options = {});

struct NormReport {
    double sigma_max = 0.0;  // largest singular value of the exact rectangular truncation
    std::size_t iterations = 0;
    bool applicable = false;  // P_M L = 0
    double formula_value = 0.0;  // max(1, grid maximum of ||Theta||)
    double formula_upper = 0.0;  // max(1, certified upper bound)
    SupNormBracket bracket;
    double symbol_norm = 0.0;  // ||L||
    int depth = 0;
};

NormReport norm_report(const Symbol& symbol, const AnalysisOptions& options = {});

struct DouglasResult {
    CMatrix c;
    double residual = 0.0;
    bool gamma_verified = false;
    double gamma_deviation = 0.0;
    bool theta_checked = false;
    bool theta_verified = false;
    double theta_deviation = 0.0;
    int depth = 0;
};

/// Solves L1 = L2 C and lifts it to W_{L1} = W_{L2} Gamma. Throws RangeNotContained.
DouglasResult douglas_factor(const Symbol& l1, const Symbol& l2, const AnalysisOptions& options = {});

/// Gamma = I on N plus e_n^p (x) eta -> e_n^p (x) C eta on the n-chain, at the given depth.
SparseCMatrix douglas_gamma(int n, int depth, const CMatrix& c, std::size_t cap);

struct CoburnPoint {
    cplx lambda;
    double sigma_min = 0.0;
    double bound = 0.0;  // 1 - |lambda|
    bool holds = false;
};

struct CoburnResult {
    int depth = 0;
    std::vector<CoburnPoint> points;
};

std::vector<cplx> default_coburn_lambdas();

/// sigma_min(W_L - lambda iota) on the depth-D truncation. Throws NotIsometric.
CoburnResult coburn_bound(const Symbol& symbol, const std::vector<cplx>& lambdas,
                          const AnalysisOptions& options = {});

struct HypoResult {
    double sigma_min_l = 0.0;
    bool necessary_condition = false;
    bool has_witness = false;
    Word witness_word;
    int witness_slot = 0;
    double gap = 0.0;  // max over basis vectors of ||W* x||^2 - ||W x||^2
    double adjoint_norm_sq = 0.0;
    double forward_norm_sq = 0.0;
    int depth = 0;
};

/// Necessary condition sigma_min(L) >= 1 and a basis-vector witness sweep. Requires n >= 2.
HypoResult hyponormality_probe(const Symbol& symbol, const AnalysisOptions& options = {});

struct ChainProbe {
    std::vector<double> expected;  // per slot
    double max_deviation = 0.0;
    int degrees = 0;  // chain degrees probed: 0..degrees-1
};

/// ||W_12 (e_n^p (x) h_q)|| against ||P_M L h_q|| for p <= D.
ChainProbe w12_probe(const Symbol& symbol, const AnalysisOptions& options = {});

/// n = 1 only: ||W_L (e_1^p (x) h_q)|| against ||L h_q|| for p <= D - K.
ChainProbe compactness_probe(const Symbol& symbol, const AnalysisOptions& options = {});

struct ClassificationReport {
    int n = 0;
    int dim = 0;
    int symbol_depth = 0;
    int depth = 0;
    int chain_depth = 0;
    std::optional<double> tail_bound;

    Verdict isometric;
    Verdict unitary;
    Verdict invertible;
    Verdict theta_inner;
    double m_part_max = 0.0;
    std::optional<int> winding;

    std::size_t defect_dim = 0;
    std::size_t el_dim = 0;
    std::size_t rank_l = 0;
    std::size_t kernel_dim = 0;
    std::optional<std::size_t> fock_kernel_dim;  // ker W_L* on a small Fock truncation
    int fock_kernel_depth = -1;

    std::optional<int> fredholm_index;
    bool fredholm_stable = false;
    Verdict fredholm;
    Verdict essentially_normal;
    std::optional<std::size_t> self_commutator_rank;

    std::optional<std::size_t> mult_wl;
    std::optional<std::size_t> mult_mtheta;

    std::optional<double> norm_wl_truncated;
    SupNormBracket theta_supnorm_bracket;
    double sigma_min_l = 0.0;
    double sigma_max_l = 0.0;

    std::vector<Witness> witnesses;
    std::vector<std::string> notes;
};

ClassificationReport classify(const Symbol& symbol, const AnalysisOptions& options = {});

nlohmann::ordered_json to_json(const Verdict& v);
nlohmann::ordered_json to_json(const ClassificationReport& r);
nlohmann::ordered_json to_json(const DefectBasis& d);
nlohmann::ordered_json to_json(const FredholmResult& f);
nlohmann::ordered_json to_json(const WoldResult& w);
nlohmann::ordered_json to_json(const NormReport& r);
nlohmann::ordered_json to_json(const DouglasResult& r);
nlohmann::ordered_json to_json(const CoburnResult& r);
nlohmann::ordered_json to_json(const HypoResult& r);
nlohmann::ordered_json to_json(const ChainProbe& r);
nlohmann::ordered_json complex_to_json(cplx z);
nlohmann::ordered_json matrix_to_json(const CMatrix& m);

enum class Format { json, csv, text };

Format parse_format(const std::string& s);

/// JSON is pretty-printed; csv and text flatten scalar leaves to dotted keys.
std::string render(const nlohmann::ordered_json& doc, Format format);

}  // namespace odolab
