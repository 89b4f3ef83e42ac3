#include "blockprox/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace blockprox {

namespace {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

ColMatrix ColMatrix::dense(std::size_t rows, std::size_t cols, std::vector<double> values) {
    if (rows == 0 || cols == 0) {
        throw ConfigError("matrix dimensions must be positive");
    }
    if (values.size() != rows * cols) {
        throw ConfigError("dense matrix storage size mismatch");
    }
    ColMatrix A;
    A.rows_ = rows;
    A.cols_ = cols;
    A.sparse_ = false;
    A.dense_ = std::move(values);
    A.validate_entries();
    return A;
}

ColMatrix ColMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   const std::vector<Triplet>& entries) {
    if (rows == 0 || cols == 0) {
        throw ConfigError("matrix dimensions must be positive");
    }
    ColMatrix A;
    A.rows_ = rows;
    A.cols_ = cols;
    A.sparse_ = true;
    A.col_ptr_.assign(cols + 1, 0);
    for (const auto& t : entries) {
        if (t.row >= rows || t.col >= cols) {
            throw ConfigError("triplet index out of range");
        }
        ++A.col_ptr_[t.col + 1];
    }
    for (std::size_t j = 0; j < cols; ++j) {
        A.col_ptr_[j + 1] += A.col_ptr_[j];
    }
    A.row_idx_.resize(entries.size());
    A.values_.resize(entries.size());
    std::vector<std::size_t> cursor(A.col_ptr_.begin(), A.col_ptr_.end() - 1);
    for (const auto& t : entries) {
        std::size_t p = cursor[t.col]++;
        A.row_idx_[p] = t.row;
        A.values_[p] = t.value;
    }
    // sort rows within each column so iteration order is canonical
    for (std::size_t j = 0; j < cols; ++j) {
        std::size_t lo = A.col_ptr_[j], hi = A.col_ptr_[j + 1];
        std::vector<std::pair<std::size_t, double>> col;
        col.reserve(hi - lo);
        for (std::size_t p = lo; p < hi; ++p) {
            col.emplace_back(A.row_idx_[p], A.values_[p]);
        }
        std::sort(col.begin(), col.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t k = 0; k < col.size(); ++k) {
            A.row_idx_[lo + k] = col[k].first;
            A.values_[lo + k] = col[k].second;
        }
    }
    A.validate_entries();
    return A;
}

void ColMatrix::validate_entries() const {
    const auto& vals = sparse_ ? values_ : dense_;
    for (double v : vals) {
        if (!std::isfinite(v)) {
            throw ConfigError("matrix contains a nonfinite entry");
        }
    }
}

std::size_t ColMatrix::nnz() const {
    if (sparse_) return values_.size();
    std::size_t count = 0;
    for (double v : dense_) {
        if (v != 0.0) ++count;
    }
    return count;
}

void ColMatrix::add_block_times(std::size_t c0, std::size_t c1, std::span<const double> v,
                                std::span<double> y) const {
    assert(c1 <= cols_ && c0 <= c1);
    assert(v.size() == c1 - c0);
    assert(y.size() == rows_);
    if (sparse_) {
        for (std::size_t j = c0; j < c1; ++j) {
            const double vj = v[j - c0];
            if (vj == 0.0) continue;
            for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
                y[row_idx_[p]] += values_[p] * vj;
            }
        }
    } else {
        for (std::size_t j = c0; j < c1; ++j) {
            const double vj = v[j - c0];
            if (vj == 0.0) continue;
            const double* col = dense_.data() + j * rows_;
            for (std::size_t i = 0; i < rows_; ++i) {
                y[i] += col[i] * vj;
            }
        }
    }
}

void ColMatrix::block_transpose_times(std::size_t c0, std::size_t c1, std::span<const double> r,
                                      std::span<double> out) const {
    assert(c1 <= cols_ && c0 <= c1);
    assert(r.size() == rows_);
    assert(out.size() == c1 - c0);
    if (sparse_) {
        for (std::size_t j = c0; j < c1; ++j) {
            double acc = 0.0;
            for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
                acc += values_[p] * r[row_idx_[p]];
            }
            out[j - c0] = acc;
        }
    } else {
        for (std::size_t j = c0; j < c1; ++j) {
            const double* col = dense_.data() + j * rows_;
            double acc = 0.0;
            for (std::size_t i = 0; i < rows_; ++i) {
                acc += col[i] * r[i];
            }
            out[j - c0] = acc;
        }
    }
}

std::vector<double> ColMatrix::apply(std::span<const double> x) const {
    std::vector<double> y(rows_, 0.0);
    add_block_times(0, cols_, x, y);
    return y;
}

std::vector<double> ColMatrix::apply_transpose(std::span<const double> r) const {
    std::vector<double> out(cols_, 0.0);
    block_transpose_times(0, cols_, r, out);
    return out;
}

std::vector<double> ColMatrix::to_dense() const {
    if (!sparse_) return dense_;
    std::vector<double> out(rows_ * cols_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) {
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
            out[j * rows_ + row_idx_[p]] = values_[p];
        }
    }
    return out;
}

double ColMatrix::col_sum(std::size_t j) const {
    double acc = 0.0;
    if (sparse_) {
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) acc += values_[p];
    } else {
        const double* col = dense_.data() + j * rows_;
        for (std::size_t i = 0; i < rows_; ++i) acc += col[i];
    }
    return acc;
}

double ColMatrix::col_sq_sum(std::size_t j) const {
    double acc = 0.0;
    if (sparse_) {
        for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p)
            acc += values_[p] * values_[p];
    } else {
        const double* col = dense_.data() + j * rows_;
        for (std::size_t i = 0; i < rows_; ++i) acc += col[i] * col[i];
    }
    return acc;
}

void ColMatrix::write_matrix_market(std::ostream& os) const {
    if (sparse_) {
        os << "%%MatrixMarket matrix coordinate real general\n";
        os << rows_ << ' ' << cols_ << ' ' << values_.size() << '\n';
        for (std::size_t j = 0; j < cols_; ++j) {
            for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) {
                os << (row_idx_[p] + 1) << ' ' << (j + 1) << ' ' << format_double(values_[p])
                   << '\n';
            }
        }
    } else {
        os << "%%MatrixMarket matrix array real general\n";
        os << rows_ << ' ' << cols_ << '\n';
        for (double v : dense_) {
            os << format_double(v) << '\n';
        }
    }
}

ColMatrix ColMatrix::read_matrix_market(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) {
        throw IoError("empty MatrixMarket stream");
    }
    const bool coordinate = header.find("coordinate") != std::string::npos;
    const bool array = header.find("array") != std::string::npos;
    if (header.rfind("%%MatrixMarket", 0) != 0 || (!coordinate && !array) ||
        header.find("real") == std::string::npos) {
        throw IoError("unsupported MatrixMarket header: " + header);
    }
    std::string line;
    // skip comment lines
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream sizes(line);
    std::size_t m = 0, n = 0;
    if (coordinate) {
        std::size_t nnz = 0;
        if (!(sizes >> m >> n >> nnz)) {
            throw IoError("bad MatrixMarket size line");
        }
        std::vector<Triplet> entries;
        entries.reserve(nnz);
        for (std::size_t k = 0; k < nnz; ++k) {
            std::size_t i = 0, j = 0;
            double v = 0.0;
            if (!(is >> i >> j >> v)) {
                throw IoError("truncated MatrixMarket coordinate data");
            }
            if (i == 0 || j == 0) {
                throw IoError("MatrixMarket indices are 1-based");
            }
            entries.push_back({i - 1, j - 1, v});
        }
        return from_triplets(m, n, entries);
    }
    if (!(sizes >> m >> n)) {
        throw IoError("bad MatrixMarket size line");
    }
    std::vector<double> vals(m * n);
    for (auto& v : vals) {
        if (!(is >> v)) {
            throw IoError("truncated MatrixMarket array data");
        }
    }
    return dense(m, n, std::move(vals));
}

void write_vector(std::ostream& os, std::span<const double> v) {
    for (double x : v) {
        os << format_double(x) << '\n';
    }
}

std::vector<double> read_vector(std::istream& is) {
    std::vector<double> v;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '%' || line[0] == '#') continue;
        v.push_back(std::stod(line));
    }
    return v;
}

void save_matrix_market(const std::string& path, const ColMatrix& A) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    A.write_matrix_market(os);
}

ColMatrix load_matrix_market(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return ColMatrix::read_matrix_market(is);
}

void save_vector(const std::string& path, std::span<const double> v) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_vector(os, v);
}

std::vector<double> load_vector(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open " + path);
    return read_vector(is);
}

}  // namespace blockprox
