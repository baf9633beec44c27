#ifndef TAUSPECTRA_MULTI_INDEX_HPP
#define TAUSPECTRA_MULTI_INDEX_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tauspectra/common.hpp"

namespace tauspectra {

/// Lexicographically ordered multi-index range {1..n_1} x ... x {1..n_d},
/// with the last axis varying fastest.
struct multi_index_space {
    std::vector<int> dims;

    multi_index_space() = default;
    explicit multi_index_space(std::vector<int> d) : dims(std::move(d)) {
        for (int n : dims)
            if (n < 1) throw invalid_argument_error("multi_index_space: dims must be >= 1");
    }

    int rank() const { return static_cast<int>(dims.size()); }

    std::size_t size() const {
        std::size_t n = 1;
        for (int d : dims) n *= static_cast<std::size_t>(d);
        return n;
    }

    /// stride of axis r in the flat layout (stride of the last axis is 1)
    std::size_t stride(int r) const {
        std::size_t s = 1;
        for (int a = r + 1; a < rank(); ++a) s *= static_cast<std::size_t>(dims[static_cast<std::size_t>(a)]);
        return s;
    }
};

/// Flat position of a 1-based multi-index.
inline std::size_t lex_linearize(const multi_index_space& space, const std::vector<int>& idx) {
    if (idx.size() != space.dims.size())
        throw invalid_argument_error("lex_linearize: index rank mismatch");
    std::size_t pos = 0;
    for (std::size_t r = 0; r < idx.size(); ++r) {
        if (idx[r] < 1 || idx[r] > space.dims[r])
            throw invalid_argument_error("lex_linearize: index out of range on axis " +
                                         std::to_string(r + 1));
        pos = pos * static_cast<std::size_t>(space.dims[r]) + static_cast<std::size_t>(idx[r] - 1);
    }
    return pos;
}

/// Inverse of lex_linearize.
inline std::vector<int> lex_delinearize(const multi_index_space& space, std::size_t pos) {
    if (pos >= space.size()) throw invalid_argument_error("lex_delinearize: position out of range");
    std::vector<int> idx(space.dims.size());
    for (std::size_t r = space.dims.size(); r-- > 0;) {
        const std::size_t n = static_cast<std::size_t>(space.dims[r]);
        idx[r] = static_cast<int>(pos % n) + 1;
        pos /= n;
    }
    return idx;
}

} // namespace tauspectra

#endif // TAUSPECTRA_MULTI_INDEX_HPP
