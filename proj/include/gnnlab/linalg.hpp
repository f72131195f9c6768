#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace gnnlab {

// Dense and sparse eigensolves are O(n^3); anything larger is rejected.
inline constexpr std::size_t kDenseEigCap = 512;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Iterative routine ran out of its budget; carries the last estimate.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double last_estimate)
        : std::runtime_error(what), estimate(last_estimate) {}
    double estimate;
};

/// Row-major f64 matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

    DenseMatrix transposed() const;
    double frobenius_norm() const;
    bool all_finite() const;

    bool operator==(const DenseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// CSR sparse matrix. Column indices are strictly increasing within a row.
struct SparseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> offsets;  // size rows+1, offsets.back() == nnz
    std::vector<std::size_t> indices;
    std::vector<double> values;

    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                      std::vector<std::tuple<std::size_t, std::size_t, double>> triplets);
    std::size_t nnz() const { return values.size(); }
    DenseMatrix to_dense() const;
    SparseMatrix transposed() const;
    void validate() const;
};

/// Counter-based splittable generator: equal (seed, stream) gives an equal
/// sample sequence; distinct streams are independent.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t next_u64();
    double next_uniform();  // [0, 1)
    double next_gaussian();

    /// Independent child stream; the derived id mixes in `substream`.
    RngStream split(std::uint64_t substream) const;

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_ = 0;
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& d);

struct EighResult {
    std::vector<double> eigenvalues;  // ascending
    DenseMatrix eigenvectors;         // columns match eigenvalues
};

/// Cyclic Jacobi eigensolver for symmetric matrices (sweep cap 100).
EighResult jacobi_eigh(const DenseMatrix& m, double tol = 1e-12);

/// Eigenvalues of a general real square matrix via Hessenberg reduction
/// followed by shifted (Francis double-shift) QR iteration.
std::vector<std::complex<double>> general_eig(const DenseMatrix& m);

/// Largest singular value by power iteration on m^T m.
double top_singular_value(const DenseMatrix& m, double tol = 1e-10,
                          std::size_t iter_cap = 10000);

DenseMatrix sample_gaussian(RngStream& rng, std::size_t rows, std::size_t cols,
                            double mean, double std);
DenseMatrix sample_uniform(RngStream& rng, std::size_t rows, std::size_t cols,
                           double lo, double hi);

}  // namespace gnnlab
