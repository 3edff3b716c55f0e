#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "odolab/analysis.hpp"
#include "odolab/gallery.hpp"

namespace odolab {

struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double value = 0.0;      // measured deviation or quantity
    double threshold = 0.0;  // pass limit for `value`
    double seconds = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 7;
    int random_count = 50;
    int depth = 5;              // Fock depth for the operator-level suites
    bool inject_fault = false;  // adds a mismatched Douglas pair claimed to factor
    Tolerance tol;
};

/// A symbol with the Fock depth it is exercised at.
struct SymbolCase {
    std::string label;
    Symbol symbol;
    int depth = 0;
};

/// Random symbols with n in {1,2,3}, d in {1,2}, K <= 2, depth <= 5.
std::vector<SymbolCase> random_cases(std::uint64_t seed, int count);

/// Standard gallery at `depth` followed by the random cases.
std::vector<SymbolCase> verification_cases(const VerifyOptions& options);

/// adjoint, toeplitz, douglas, coburn, wold, gallery.
std::vector<std::string> verify_suites();

/// Runs one suite or "all". Throws InputError on an unknown name.
std::vector<CheckResult> run_verify(const std::string& suite, const VerifyOptions& options = {});

/// Compares every key of entry.expected against freshly computed values.
std::vector<CheckResult> check_expectations(const GalleryEntry& entry, const Tolerance& tol = {});

nlohmann::ordered_json to_json(const CheckResult& c);
nlohmann::ordered_json verify_summary(const std::vector<CheckResult>& checks);

}  // namespace odolab
