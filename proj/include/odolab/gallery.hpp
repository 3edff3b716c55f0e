#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "odolab/numerics.hpp"
#include "odolab/symbol.hpp"

namespace odolab {

/// A named example symbol with its parameters and the values it is known to produce.
///
/// `expected` uses a fixed vocabulary understood by check_expectations():
/// isometric, unitary, invertible (bool), defect_dim, fredholm_index (int),
/// sigma_min_L, c0, norm_Lh1_sq (float), theta_inner (bool).
struct GalleryEntry {
    std::string name;
    nlohmann::ordered_json params;
    Symbol symbol;
    nlohmann::ordered_json expected;
    std::optional<double> tail_bound;
};

/// L eta = e_1^k (x) eta.
Symbol shift_symbol(int k, int n, int d);

/// L eta = Omega (x) U eta.
Symbol vacuum_symbol(const CMatrix& u, int n);

/// L h_p = e_1^{p-1} (x) h_p for slots p = 1..d.
Symbol diagonal_symbol(int d, int n);

/// Taylor coefficients b_0..b_degree of prod_j (z - a_j) / (1 - conj(a_j) z).
std::vector<cplx> blaschke_coefficients(const std::vector<cplx>& zeros, int degree);

/// Blaschke product truncated at degree R, acting diagonally on C^d.
GalleryEntry blaschke_symbol(const std::vector<cplx>& zeros, int R, int n, int d);
GalleryEntry moebius_symbol(cplx a, int R, int n, int d);

/// Moebius symbol at a = (1 - sqrt 5) / 2.
GalleryEntry golden_symbol(int R, int n, int d);
double golden_omega();

/// L eta = sum_{r <= R} 2^{-(r+1)} e_1^r (x) S^r eta with S the forward shift on C^d.
GalleryEntry resolvent_shift_symbol(int d, int R, int n);

/// L eta = Omega (x) (I - P) eta + e_1 (x) P eta. Throws NotAProjection.
GalleryEntry projection_symbol(const CMatrix& p, int n);

/// L eta = Omega (x) eta + a e_1 (x) eta, 0 < |a| < 1.
GalleryEntry constant_plus_shift(cplx a, int n, int d);

/// Scalar L = Omega + e_1, n >= 2.
GalleryEntry hypo_counterexample(int n);

/// Names accepted by gallery_build, in listing order.
std::vector<std::string> gallery_names();

/// One-line description of each named constructor and its parameters.
std::string gallery_usage(const std::string& name);

/// Builds a named entry. Missing parameters take documented defaults; unknown
/// parameter names raise InputError. Complex values are numbers or [re, im];
/// matrices are arrays of rows.
GalleryEntry gallery_build(const std::string& name, const nlohmann::ordered_json& params = nlohmann::ordered_json::object());

/// The fixed example set used by the verification suites.
std::vector<GalleryEntry> standard_gallery();

}  // namespace odolab
