#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "blockprox/errors.hpp"

namespace blockprox {

struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/// Column-sliceable m x n matrix. Storage is either dense column-major or
/// compressed sparse column; all products over contiguous column ranges cost
/// O(nnz of the touched columns).
class ColMatrix {
public:
    ColMatrix() = default;

    /// values in column-major order, size rows*cols.
    static ColMatrix dense(std::size_t rows, std::size_t cols, std::vector<double> values);

    static ColMatrix from_triplets(std::size_t rows, std::size_t cols,
                                   const std::vector<Triplet>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const;
    bool is_sparse() const { return sparse_; }

    /// y += A[:, c0:c1] * v where v has length c1-c0.
    void add_block_times(std::size_t c0, std::size_t c1, std::span<const double> v,
                         std::span<double> y) const;

    /// out = A[:, c0:c1]^T * r.
    void block_transpose_times(std::size_t c0, std::size_t c1, std::span<const double> r,
                               std::span<double> out) const;

    /// A x (full product, same code path as the block version).
    std::vector<double> apply(std::span<const double> x) const;

    /// A^T r.
    std::vector<double> apply_transpose(std::span<const double> r) const;

    /// Column-major dense copy of the entries.
    std::vector<double> to_dense() const;

    double col_sum(std::size_t j) const;
    double col_sq_sum(std::size_t j) const;

    void write_matrix_market(std::ostream& os) const;
    static ColMatrix read_matrix_market(std::istream& is);

private:
    void validate_entries() const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    bool sparse_ = false;
    // dense storage (column-major), used when !sparse_
    std::vector<double> dense_;
    // CSC storage, used when sparse_
    std::vector<std::size_t> col_ptr_;
    std::vector<std::size_t> row_idx_;
    std::vector<double> values_;
};

/// One value per line.
void write_vector(std::ostream& os, std::span<const double> v);
std::vector<double> read_vector(std::istream& is);

void save_matrix_market(const std::string& path, const ColMatrix& A);
ColMatrix load_matrix_market(const std::string& path);
void save_vector(const std::string& path, std::span<const double> v);
std::vector<double> load_vector(const std::string& path);

}  // namespace blockprox
