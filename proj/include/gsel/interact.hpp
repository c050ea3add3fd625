#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gsel/dataset.hpp"

namespace gsel::expand {

// Maps each expanded column to the multiset of base columns whose product
// it is. Entries are sorted 0-based index tuples in graded lexicographic
// order: all of degree 1 first, then degree 2, and so on.
struct MonomialTable {
    std::vector<std::vector<std::size_t>> monomials;
};

namespace detail {

inline std::string uint128_to_string(unsigned __int128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

}  // namespace detail

// Number of product columns of degree 1..ord over k base columns, which is
// C(k + ord, ord) - 1. Throws once the count stops being representable,
// with the count (exact where possible) in the message.
inline unsigned long long expansion_count(std::size_t k, std::size_t ord) {
    if (k == 0 || ord == 0)
        throw std::domain_error("need at least one column and degree 1");
    const auto lim = ~static_cast<unsigned __int128>(0);
    unsigned __int128 total = 0;
    unsigned __int128 cur = 1;  // C(k + d - 1, d), starting at d = 0
    long double approx_total = 0.0L;
    long double approx_cur = 1.0L;
    bool exact = true;
    for (std::size_t d = 1; d <= ord; ++d) {
        const auto f = static_cast<unsigned __int128>(k) + d - 1;
        approx_cur *= (static_cast<long double>(k) + d - 1) /
                      static_cast<long double>(d);
        approx_total += approx_cur;
        if (exact && cur > lim / f) exact = false;
        if (exact) {
            cur = cur * f / d;
            if (total > lim - cur)
                exact = false;
            else
                total += cur;
        }
    }
    if (!exact || total > std::numeric_limits<unsigned long long>::max()) {
        std::ostringstream os;
        if (exact) {
            os << detail::uint128_to_string(total);
        } else {
            os.precision(6);
            os << "about " << approx_total;
        }
        throw std::length_error("interaction expansion would need " +
                                os.str() + " columns");
    }
    return static_cast<unsigned long long>(total);
}

// One-paragraph summary of an expansion's size. The count excludes the
// degree-0 monomial, which the intercept already covers; the tally that
// includes it is stated alongside since column counts are often quoted
// that way.
inline std::string expansion_report(std::size_t k, std::size_t ord) {
    const unsigned long long count = expansion_count(k, ord);
    std::ostringstream os;
    os << "expansion of " << k << " base columns up to degree " << ord
       << ": " << count << " product columns (" << count + 1
       << " including the constant monomial)";
    return os.str();
}

// Expands X to all monomial columns of total degree 1..ord, values being
// elementwise products of base columns. Column order is graded
// lexicographic; the first k columns are the base columns themselves.
inline std::pair<engine::Matrix, MonomialTable> gen_interactions(
    const engine::Matrix& x, std::size_t ord) {
    engine::validate(x);
    const std::size_t n = x.n;
    const std::size_t k = x.k;
    const unsigned long long count = expansion_count(k, ord);
    const auto cap = std::numeric_limits<std::size_t>::max();
    if (count > cap / sizeof(double) / (n > 0 ? n : 1))
        throw std::length_error("interaction expansion would need " +
                                std::to_string(count) + " columns");

    engine::Matrix out(n, static_cast<std::size_t>(count));
    MonomialTable table;
    table.monomials.reserve(static_cast<std::size_t>(count));

    for (std::size_t j = 0; j < k; ++j) {
        std::copy(x.col(j), x.col(j) + n, out.col(j));
        table.monomials.push_back({j});
    }

    // Degree d columns extend each degree d-1 monomial by every base index
    // not smaller than its last one; walking predecessors in order keeps
    // the output graded lexicographic.
    std::size_t prev_start = 0;
    std::size_t prev_count = k;
    for (std::size_t d = 2; d <= ord; ++d) {
        std::size_t write = prev_start + prev_count;
        const std::size_t start = write;
        for (std::size_t c = prev_start; c < start; ++c) {
            const std::size_t last = table.monomials[c].back();
            const double* prev_col = out.col(c);
            for (std::size_t j = last; j < k; ++j) {
                double* dst = out.col(write);
                const double* base = x.col(j);
                for (std::size_t i = 0; i < n; ++i)
                    dst[i] = prev_col[i] * base[i];
                std::vector<std::size_t> mono = table.monomials[c];
                mono.push_back(j);
                table.monomials.push_back(std::move(mono));
                ++write;
            }
        }
        prev_start = start;
        prev_count = write - start;
    }
    return {std::move(out), std::move(table)};
}

inline const std::vector<std::size_t>& decode(const MonomialTable& table,
                                              std::size_t column) {
    if (column >= table.monomials.size())
        throw std::domain_error("expanded column index out of range");
    return table.monomials[column];
}

}  // namespace gsel::expand
