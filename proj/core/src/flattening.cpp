#include "kyt/flattening.hpp"

#include "kyt/error.hpp"

#include <algorithm>
#include <string>

namespace kyt {

namespace {

// Sorted insert of a missing element; the caller guarantees absence.
std::vector<int> subset_with(const std::vector<int>& s, int element) {
    std::vector<int> out;
    out.reserve(s.size() + 1);
    auto it = s.begin();
    while (it != s.end() && *it < element) out.push_back(*it++);
    out.push_back(element);
    out.insert(out.end(), it, s.end());
    return out;
}

void check_pq(int p, int q) {
    if (p < 0 || p + 1 > q) {
        throw InvalidInput("need 0 <= p <= p+1 <= q, got p=" + std::to_string(p) +
                           " q=" + std::to_string(q));
    }
}

} // namespace

Index FlatteningMatrix::row_index(std::uint64_t subset_rank, int coord) const {
    return static_cast<Index>(subset_rank) * row_coord_dim + (coord - 1);
}

Index FlatteningMatrix::col_index(std::uint64_t subset_rank, int coord) const {
    return static_cast<Index>(subset_rank) * col_coord_dim + (coord - 1);
}

std::pair<std::vector<int>, int> FlatteningMatrix::row_label(Index row) const {
    return {row_subsets.unrank(static_cast<std::uint64_t>(row / row_coord_dim)),
            static_cast<int>(row % row_coord_dim) + 1};
}

std::pair<std::vector<int>, int> FlatteningMatrix::col_label(Index col) const {
    return {col_subsets.unrank(static_cast<std::uint64_t>(col / col_coord_dim)),
            static_cast<int>(col % col_coord_dim) + 1};
}

MatrixXd component_matrix(const VectorXd& a, int p, int q) {
    check_pq(p, q);
    if (a.size() < q) {
        throw InvalidInput("component_matrix: vector has length " +
                           std::to_string(a.size()) + " < q=" + std::to_string(q));
    }
    const SubsetIndexer rows(q, p);
    const SubsetIndexer cols(q, p + 1);
    MatrixXd m = MatrixXd::Zero(static_cast<Index>(rows.count()),
                                static_cast<Index>(cols.count()));
    for (std::uint64_t rs = 0; rs < rows.count(); ++rs) {
        const std::vector<int> s = rows.unrank(rs);
        for (int i = 1; i <= q; ++i) {
            if (std::binary_search(s.begin(), s.end(), i)) continue;
            const std::vector<int> u = subset_with(s, i);
            const std::uint64_t cu = cols.rank(u);
            m(static_cast<Index>(rs), static_cast<Index>(cu)) =
                koszul_sign(u, i) * a(i - 1);
        }
    }
    return m;
}

FlatteningMatrix koszul_flattening(const Tensor3& t, int p, int q, FlatteningMode mode) {
    check_pq(p, q);
    if (q > t.n1()) {
        throw InvalidInput("koszul_flattening: q=" + std::to_string(q) +
                           " exceeds n1=" + std::to_string(t.n1()));
    }
    const bool swapped = (mode == FlatteningMode::swapped);
    const int row_size = swapped ? q - p - 1 : p;
    const int row_coord = swapped ? t.n3() : t.n2();
    const int col_coord = swapped ? t.n2() : t.n3();

    FlatteningMatrix out{MatrixXd(), SubsetIndexer(q, row_size),
                         SubsetIndexer(q, row_size + 1), row_coord, col_coord,
                         p, q, mode};
    out.matrix = MatrixXd::Zero(
        static_cast<Index>(out.row_subsets.count()) * row_coord,
        static_cast<Index>(out.col_subsets.count()) * col_coord);

    // One (S, U=S+{i}) pair fills one row_coord x col_coord block with the
    // signed mode-1 slice i (transposed in swapped mode).
    for (std::uint64_t rs = 0; rs < out.row_subsets.count(); ++rs) {
        const std::vector<int> s = out.row_subsets.unrank(rs);
        for (int i = 1; i <= q; ++i) {
            if (std::binary_search(s.begin(), s.end(), i)) continue;
            const std::vector<int> u = subset_with(s, i);
            const std::uint64_t cu = out.col_subsets.rank(u);
            const double sign = koszul_sign(u, i);
            auto block = out.matrix.block(static_cast<Index>(rs) * row_coord,
                                          static_cast<Index>(cu) * col_coord,
                                          row_coord, col_coord);
            if (!swapped) {
                for (int j = 1; j <= row_coord; ++j)
                    for (int k = 1; k <= col_coord; ++k)
                        block(j - 1, k - 1) = sign * t(i, j, k);
            } else {
                for (int k = 1; k <= row_coord; ++k)
                    for (int j = 1; j <= col_coord; ++j)
                        block(k - 1, j - 1) = sign * t(i, j, k);
            }
        }
    }
    return out;
}

MatrixXd trivial_flattening(std::span<const int> dims, std::span<const double> data,
                            const std::vector<int>& row_modes) {
    const int order = static_cast<int>(dims.size());
    if (order < 2) throw InvalidInput("trivial_flattening: tensor order must be >= 2");
    std::size_t total = 1;
    for (int d : dims) {
        if (d < 1) throw InvalidInput("trivial_flattening: dims must be positive");
        total *= static_cast<std::size_t>(d);
    }
    if (data.size() != total) {
        throw InvalidInput("trivial_flattening: data length does not match dims");
    }

    std::vector<bool> in_rows(order, false);
    for (int m : row_modes) {
        if (m < 1 || m > order) {
            throw InvalidInput("trivial_flattening: mode " + std::to_string(m) +
                               " out of range");
        }
        if (in_rows[m - 1]) throw InvalidInput("trivial_flattening: repeated mode");
        in_rows[m - 1] = true;
    }
    const int row_count_modes = static_cast<int>(row_modes.size());
    if (row_count_modes == 0 || row_count_modes == order) {
        throw InvalidInput("trivial_flattening: row modes must be a nonempty proper subset");
    }

    // Row/col strides for the lexicographic multi-index orders (ascending
    // mode lists, first mode slowest).
    std::vector<std::size_t> row_stride(order, 0), col_stride(order, 0);
    std::size_t rows = 1, cols = 1;
    for (int m = order; m >= 1; --m) {
        if (in_rows[m - 1]) {
            row_stride[m - 1] = rows;
            rows *= static_cast<std::size_t>(dims[m - 1]);
        } else {
            col_stride[m - 1] = cols;
            cols *= static_cast<std::size_t>(dims[m - 1]);
        }
    }

    MatrixXd out = MatrixXd::Zero(static_cast<Index>(rows), static_cast<Index>(cols));
    std::vector<int> idx(order, 0); // 0-based multi-index, row-major scan
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t row = 0, col = 0;
        for (int m = 0; m < order; ++m) {
            if (in_rows[m]) row += row_stride[m] * idx[m];
            else col += col_stride[m] * idx[m];
        }
        out(static_cast<Index>(row), static_cast<Index>(col)) = data[flat];
        for (int m = order - 1; m >= 0; --m) {
            if (++idx[m] < dims[m]) break;
            idx[m] = 0;
        }
    }
    return out;
}

MatrixXd trivial_flattening(const Tensor3& t, const std::vector<int>& row_modes) {
    const auto d = t.dims();
    return trivial_flattening(std::span<const int>(d.data(), 3),
                              std::span<const double>(t.data()), row_modes);
}

int balanced_p(int q, int n2, int n3) {
    if (q < 1) throw InvalidInput("balanced_p: q must be >= 1");
    if (n2 < 1 || n3 < 1) throw InvalidInput("balanced_p: dims must be positive");
    return static_cast<int>((static_cast<long long>(q) * n3) / (n2 + n3));
}

std::pair<std::vector<int>, std::uint64_t> trivial_rank_threshold(std::span<const int> dims) {
    const int order = static_cast<int>(dims.size());
    if (order < 2) throw InvalidInput("trivial_rank_threshold: order must be >= 2");
    std::vector<int> best;
    std::uint64_t best_value = 0;
    for (unsigned mask = 1; mask + 1 < (1u << order); ++mask) {
        std::uint64_t rows = 1, cols = 1;
        std::vector<int> modes;
        for (int m = 0; m < order; ++m) {
            if (mask & (1u << m)) {
                rows *= static_cast<std::uint64_t>(dims[m]);
                modes.push_back(m + 1);
            } else {
                cols *= static_cast<std::uint64_t>(dims[m]);
            }
        }
        const std::uint64_t value = std::min(rows, cols);
        if (value > best_value) {
            best_value = value;
            best = modes;
        }
    }
    return {best, best_value};
}

} // namespace kyt
