#include "odolab/fock.hpp"

#include <cstdlib>
#include <limits>
#include <sstream>

#include "odolab/errors.hpp"

namespace odolab {

Word Word::repeated(int letter, std::size_t count) {
    return Word(std::vector<int>(count, letter));
}

Word Word::then(const Word& tail) const {
    std::vector<int> out = letters_;
    out.insert(out.end(), tail.letters_.begin(), tail.letters_.end());
    return Word(std::move(out));
}

std::string Word::str() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) os << ',';
        os << letters_[i];
    }
    os << ']';
    return os.str();
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return a.letters_ <=> b.letters_;
}

void validate_word(const Word& w, int n) {
    for (int letter : w.letters()) {
        if (letter < 1 || letter > n) {
            std::ostringstream msg;
            msg << "word " << w.str() << " has a letter outside 1.." << n;
            throw InputError(msg.str());
        }
    }
}

WordClass classify_word(const Word& w, int n) {
    WordClass c;
    bool all_ones = true;
    bool all_ns = true;
    for (int letter : w.letters()) {
        all_ones = all_ones && letter == 1;
        all_ns = all_ns && letter == n;
    }
    c.is_ones_chain = all_ones;
    c.is_ns_chain = all_ns;
    c.in_m0 = !w.empty() && !all_ones;
    c.in_n0 = !w.empty() && !all_ns;
    return c;
}

Word successor(const Word& w, int n) {
    std::vector<int> out = w.letters();
    for (auto& letter : out) {
        if (letter != n) {
            ++letter;
            return Word(std::move(out));
        }
        letter = 1;
    }
    throw AllNsWord("successor: " + w.str() + " has no letter below n");
}

Word predecessor(const Word& w, int n) {
    std::vector<int> out = w.letters();
    for (auto& letter : out) {
        if (letter != 1) {
            --letter;
            return Word(std::move(out));
        }
        letter = n;
    }
    throw OnesChainWord("predecessor: " + w.str() + " has no letter above 1");
}

Word LeadingOnes::reduced(std::size_t m) const {
    if (m > count) throw PreconditionError("LeadingOnes::reduced: m exceeds the leading-ones count");
    return Word::repeated(1, count - m).then(tail);
}

LeadingOnes leading_ones(const Word& w) {
    std::size_t p = 0;
    while (p < w.size() && w[p] == 1) ++p;
    LeadingOnes out;
    out.count = p;
    out.tail = Word(std::vector<int>(w.letters().begin() + static_cast<std::ptrdiff_t>(p), w.letters().end()));
    return out;
}

std::size_t default_basis_cap() {
    if (const char* env = std::getenv("ODOLAB_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw InputError(std::string("ODOLAB_CAP is not a positive integer: ") + env);
    }
    return 200000;
}

namespace {

// Number of words of length < len, saturating at SIZE_MAX.
std::size_t saturating_offset(int n, std::size_t len) {
    constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
    std::size_t total = 0;
    std::size_t power = 1;
    for (std::size_t m = 0; m < len; ++m) {
        if (total > kMax - power) return kMax;
        total += power;
        if (m + 1 < len) {
            if (power > kMax / static_cast<std::size_t>(n)) return kMax;
            power *= static_cast<std::size_t>(n);
        }
    }
    return total;
}

}  // namespace

BasisIndex::BasisIndex(int n, int depth, int dim, std::size_t cap) : n_(n), depth_(depth), dim_(dim) {
    if (n < 1 || depth < 0 || dim < 1) {
        throw InputError("basis: need n >= 1, depth >= 0 and dim >= 1");
    }
    const std::size_t words = saturating_offset(n, static_cast<std::size_t>(depth) + 1);
    const std::size_t d = static_cast<std::size_t>(dim);
    if (words == std::numeric_limits<std::size_t>::max() || words > cap / d || words * d > cap) {
        std::ostringstream msg;
        msg << "basis for n=" << n << ", depth=" << depth << ", dim=" << dim
            << " exceeds the size cap " << cap;
        throw CapExceeded(msg.str());
    }
}

std::size_t BasisIndex::word_offset(std::size_t len) const {
    return saturating_offset(n_, len);
}

std::size_t BasisIndex::word_index(const Word& w) const {
    if (!contains(w)) throw PreconditionError("basis: word " + w.str() + " is deeper than the basis");
    std::size_t rank = 0;
    for (int letter : w.letters()) {
        if (letter < 1 || letter > n_) throw InputError("basis: invalid letter in " + w.str());
        rank = rank * static_cast<std::size_t>(n_) + static_cast<std::size_t>(letter - 1);
    }
    return word_offset(w.size()) + rank;
}

Word BasisIndex::word_at(std::size_t index) const {
    if (index >= word_count()) throw PreconditionError("basis: word index out of range");
    std::size_t len = 0;
    while (word_offset(len + 1) <= index) ++len;
    std::size_t rank = index - word_offset(len);
    std::vector<int> letters(len);
    for (std::size_t i = len; i-- > 0;) {
        letters[i] = static_cast<int>(rank % static_cast<std::size_t>(n_)) + 1;
        rank /= static_cast<std::size_t>(n_);
    }
    return Word(std::move(letters));
}

std::size_t BasisIndex::index_of(const Word& w, int slot) const {
    if (slot < 1 || slot > dim_) throw PreconditionError("basis: slot out of range");
    return word_index(w) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(slot - 1);
}

BasisIndex enumerate_basis(int n, int depth, int dim, std::size_t cap) {
    return BasisIndex(n, depth, dim, cap);
}

}  // namespace odolab
