#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace odolab {

/// A word over the alphabet {1, ..., n}; the empty word is the vacuum.
/// Letters are 1-based everywhere in the public interface.
class Word {
public:
    Word() = default;
    explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<int> letters) : letters_(letters) {}

    /// letter^count, e.g. repeated(1, 3) = [1,1,1].
    static Word repeated(int letter, std::size_t count);

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    int operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<int>& letters() const { return letters_; }

    /// Concatenation, this word first.
    Word then(const Word& tail) const;

    std::string str() const;

    friend bool operator==(const Word&, const Word&) = default;
    friend std::strong_ordering operator<=>(const Word& a, const Word& b);

private:
    std::vector<int> letters_;
};

/// Throws InputError unless every letter lies in 1..n.
void validate_word(const Word& w, int n);

/// Membership of a word in the index sets used by the block decomposition.
struct WordClass {
    bool in_m0 = false;          // some letter differs from 1
    bool in_n0 = false;          // some letter differs from n
    bool is_ones_chain = false;  // word = 1^p (the vacuum included)
    bool is_ns_chain = false;    // word = n^p (the vacuum included)
};

WordClass classify_word(const Word& w, int n);

/// Odometer increment: the first letter below n is raised by one and every
/// earlier letter (all equal to n) resets to 1. Throws AllNsWord on n^m.
Word successor(const Word& w, int n);

/// Inverse of successor: the first letter above 1 is lowered by one and every
/// earlier letter (all equal to 1) becomes n. Throws OnesChainWord on 1^m.
Word predecessor(const Word& w, int n);

/// Unique split gamma = 1^count . tail with tail empty or starting with a letter != 1.
struct LeadingOnes {
    std::size_t count = 0;
    Word tail;

    /// 1^(count - m) . tail for 0 <= m <= count.
    Word reduced(std::size_t m) const;
};

LeadingOnes leading_ones(const Word& w);

/// Basis cap used when none is given: ODOLAB_CAP from the environment, else 200000.
std::size_t default_basis_cap();

/// Flat indexing of the truncated basis {e_mu (x) h_s : |mu| <= depth, 1 <= s <= dim}.
///
/// Words are ordered by length and then lexicographically; the slot index runs
/// fastest. Truncating to a smaller depth therefore keeps a prefix of the index
/// range, so depth compressions are leading submatrices.
class BasisIndex {
public:
    BasisIndex(int n, int depth, int dim, std::size_t cap = default_basis_cap());

    int n() const { return n_; }
    int depth() const { return depth_; }
    int dim() const { return dim_; }

    std::size_t word_count() const { return word_offset(static_cast<std::size_t>(depth_) + 1); }
    std::size_t size() const { return word_count() * static_cast<std::size_t>(dim_); }

    /// Number of words of length < len.
    std::size_t word_offset(std::size_t len) const;

    std::size_t word_index(const Word& w) const;
    Word word_at(std::size_t word_index) const;

    /// Flat index of (word, slot), slot 1-based.
    std::size_t index_of(const Word& w, int slot) const;
    Word word_of(std::size_t flat) const { return word_at(flat / static_cast<std::size_t>(dim_)); }
    int slot_of(std::size_t flat) const { return static_cast<int>(flat % static_cast<std::size_t>(dim_)) + 1; }

    bool contains(const Word& w) const { return w.size() <= static_cast<std::size_t>(depth_); }

    friend bool operator==(const BasisIndex& a, const BasisIndex& b) {
        return a.n_ == b.n_ && a.depth_ == b.depth_ && a.dim_ == b.dim_;
    }

private:
    int n_;
    int depth_;
    int dim_;
};

/// Builds a BasisIndex, throwing CapExceeded when the basis would exceed `cap`.
BasisIndex enumerate_basis(int n, int depth, int dim, std::size_t cap = default_basis_cap());

}  // namespace odolab
