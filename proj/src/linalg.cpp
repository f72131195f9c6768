#include "gnnlab/linalg.hpp"

#include <algorithm>
#include <cblas.h>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <tuple>

namespace gnnlab {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("DenseMatrix: data length " + std::to_string(data_.size()) +
                             " != rows*cols " + std::to_string(rows_ * cols_));
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double DenseMatrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

bool DenseMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

SparseMatrix SparseMatrix::from_triplets(
    std::size_t rows, std::size_t cols,
    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets) {
    for (const auto& [r, c, v] : triplets) {
        (void)v;
        if (r >= rows || c >= cols)
            throw DimensionError("SparseMatrix: triplet index out of range");
    }
    std::sort(triplets.begin(), triplets.end(),
              [](const auto& a, const auto& b) {
                  return std::tie(std::get<0>(a), std::get<1>(a)) <
                         std::tie(std::get<0>(b), std::get<1>(b));
              });
    SparseMatrix s;
    s.rows = rows;
    s.cols = cols;
    s.offsets.assign(rows + 1, 0);
    for (std::size_t k = 0; k < triplets.size(); ++k) {
        const auto& [r, c, v] = triplets[k];
        // merge duplicates by summation
        if (!s.values.empty() && k > 0 && std::get<0>(triplets[k - 1]) == r &&
            std::get<1>(triplets[k - 1]) == c) {
            s.values.back() += v;
        } else {
            s.indices.push_back(c);
            s.values.push_back(v);
            s.offsets[r + 1] = s.values.size();
        }
        s.offsets[r + 1] = s.values.size();
    }
    for (std::size_t r = 0; r < rows; ++r)
        s.offsets[r + 1] = std::max(s.offsets[r + 1], s.offsets[r]);
    return s;
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix d(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k)
            d(r, indices[k]) = values[k];
    return d;
}

SparseMatrix SparseMatrix::transposed() const {
    std::vector<std::tuple<std::size_t, std::size_t, double>> trip;
    trip.reserve(nnz());
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k)
            trip.emplace_back(indices[k], r, values[k]);
    return from_triplets(cols, rows, std::move(trip));
}

void SparseMatrix::validate() const {
    if (offsets.size() != rows + 1 || offsets.back() != nnz())
        throw DimensionError("SparseMatrix: inconsistent offsets");
    for (std::size_t r = 0; r < rows; ++r) {
        if (offsets[r] > offsets[r + 1])
            throw DimensionError("SparseMatrix: offsets not monotone");
        for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
            if (indices[k] >= cols)
                throw DimensionError("SparseMatrix: column index out of range");
            if (k > offsets[r] && indices[k] <= indices[k - 1])
                throw DimensionError("SparseMatrix: column indices not strictly increasing");
        }
    }
}

namespace {

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
    state_ = mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                   (stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

std::uint64_t RngStream::next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
}

double RngStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller; u1 in (0,1] keeps the log finite
    double u1 = 1.0 - next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

RngStream RngStream::split(std::uint64_t substream) const {
    return RngStream(seed_, mix64(stream_ ^ (substream + 0x632be59bd9b4e019ULL)));
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows())
        throw DimensionError("matmul: " + std::to_string(a.cols()) + " != " +
                             std::to_string(b.rows()));
    DenseMatrix c(a.rows(), b.cols());
    if (a.rows() == 0 || b.cols() == 0 || a.cols() == 0) return c;
    cblas_dgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans,
                static_cast<int>(a.rows()), static_cast<int>(b.cols()),
                static_cast<int>(a.cols()), 1.0, a.data(),
                static_cast<int>(a.cols()), b.data(), static_cast<int>(b.cols()),
                0.0, c.data(), static_cast<int>(c.cols()));
    return c;
}

DenseMatrix spmm(const SparseMatrix& s, const DenseMatrix& d) {
    if (s.cols != d.rows())
        throw DimensionError("spmm: " + std::to_string(s.cols) + " != " +
                             std::to_string(d.rows()));
    DenseMatrix out(s.rows, d.cols());
    const std::size_t w = d.cols();
    for (std::size_t r = 0; r < s.rows; ++r) {
        double* orow = out.data() + r * w;
        for (std::size_t k = s.offsets[r]; k < s.offsets[r + 1]; ++k) {
            const double v = s.values[k];
            const double* drow = d.data() + s.indices[k] * w;
            for (std::size_t j = 0; j < w; ++j) orow[j] += v * drow[j];
        }
    }
    return out;
}

EighResult jacobi_eigh(const DenseMatrix& m, double tol) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw DimensionError("jacobi_eigh: matrix not square");
    if (n > kDenseEigCap)
        throw DimensionError("jacobi_eigh: size exceeds dense-eig cap " +
                             std::to_string(kDenseEigCap));
    const double norm = m.frobenius_norm();
    const double sym_tol = 1e-10 * std::max(1.0, norm);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > sym_tol)
                throw std::invalid_argument("jacobi_eigh: matrix not symmetric");

    DenseMatrix a = m;
    DenseMatrix v = DenseMatrix::identity(n);
    const std::size_t sweep_cap = 100;

    auto offdiag = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
        return std::sqrt(s);
    };

    const double target = std::max(tol * norm, DBL_MIN);
    std::size_t sweep = 0;
    while (offdiag() > target) {
        if (sweep++ >= sweep_cap)
            throw ConvergenceError("jacobi_eigh: no convergence after " +
                                       std::to_string(sweep_cap) +
                                       " sweeps, residual " + std::to_string(offdiag()),
                                   offdiag());
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= DBL_MIN) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EighResult res;
    res.eigenvalues.resize(n);
    res.eigenvectors = DenseMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        res.eigenvalues[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) res.eigenvectors(i, j) = v(i, order[j]);
    }
    return res;
}

namespace {

// Similarity reduction to upper Hessenberg form by stabilized elimination.
void hessenberg_reduce(DenseMatrix& a) {
    const std::size_t n = a.rows();
    for (std::size_t m = 1; m + 1 < n; ++m) {
        std::size_t piv = m;
        double x = 0.0;
        for (std::size_t i = m; i < n; ++i) {
            if (std::abs(a(i, m - 1)) > std::abs(x)) {
                x = a(i, m - 1);
                piv = i;
            }
        }
        if (piv != m) {
            for (std::size_t j = m - 1; j < n; ++j) std::swap(a(piv, j), a(m, j));
            for (std::size_t j = 0; j < n; ++j) std::swap(a(j, piv), a(j, m));
        }
        if (x == 0.0) continue;
        for (std::size_t i = m + 1; i < n; ++i) {
            double y = a(i, m - 1);
            if (y == 0.0) continue;
            y /= x;
            a(i, m - 1) = 0.0;
            for (std::size_t j = m; j < n; ++j) a(i, j) -= y * a(m, j);
            for (std::size_t j = 0; j < n; ++j) a(j, m) += y * a(j, i);
        }
    }
    // clear entries below the first subdiagonal
    for (std::size_t i = 2; i < n; ++i)
        for (std::size_t j = 0; j + 1 < i; ++j) a(i, j) = 0.0;
}

double sign_of(double a, double b) { return b >= 0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
std::vector<std::complex<double>> hessenberg_qr(DenseMatrix& a, std::size_t total_cap) {
    const long n = static_cast<long>(a.rows());
    std::vector<std::complex<double>> eig(n);
    double anorm = 0.0;
    for (long i = 0; i < n; ++i)
        for (long j = std::max(i - 1, 0L); j < n; ++j) anorm += std::abs(a(i, j));
    if (anorm == 0.0) return eig;  // zero matrix

    std::size_t total_its = 0;
    long nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        long its = 0;
        long l;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) <= DBL_EPSILON * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 0) l = 0;
            double x = a(nn, nn);
            if (l == nn) {
                eig[nn--] = {x + t, 0.0};
            } else {
                double y = a(nn - 1, nn - 1);
                double w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        eig[nn - 1] = eig[nn] = {x + z, 0.0};
                        if (z != 0.0) eig[nn] = {x - w / z, 0.0};
                    } else {
                        eig[nn] = {x + p, z};
                        eig[nn - 1] = std::conj(eig[nn]);
                    }
                    nn -= 2;
                } else {
                    if (its == 30 || ++total_its > total_cap)
                        throw ConvergenceError(
                            "general_eig: QR iteration cap reached", a(nn, nn));
                    if (its == 10 || its == 20) {
                        t += x;
                        for (long i = 0; i <= nn; ++i) a(i, i) -= x;
                        double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    long m;
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
                    for (m = nn - 2; m >= l; --m) {
                        z = a(m, m);
                        double rr = x - z;
                        double ss = y - z;
                        p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - rr - ss;
                        r = a(m + 2, m + 1);
                        double sc = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= sc;
                        q /= sc;
                        r /= sc;
                        if (m == l) break;
                        double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        double v = std::abs(z) * (std::abs(p) + std::abs(a(m - 1, m - 1)) +
                                                  std::abs(a(m + 1, m + 1)));
                        if (u <= DBL_EPSILON * v) break;
                    }
                    for (long i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = 0.0;
                        if (i != m + 2) a(i, i - 3) = 0.0;
                    }
                    for (long k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = (k != nn - 1) ? a(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) a(k, k - 1) = -a(k, k - 1);
                        } else {
                            a(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        double yy = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (long j = k; j <= nn; ++j) {
                            double pp = a(k, j) + q * a(k + 1, j);
                            if (k != nn - 1) {
                                pp += r * a(k + 2, j);
                                a(k + 2, j) -= pp * z;
                            }
                            a(k + 1, j) -= pp * yy;
                            a(k, j) -= pp * x;
                        }
                        long mmin = (nn < k + 3) ? nn : k + 3;
                        for (long i = l; i <= mmin; ++i) {
                            double pp = x * a(i, k) + yy * a(i, k + 1);
                            if (k != nn - 1) {
                                pp += z * a(i, k + 2);
                                a(i, k + 2) -= pp * r;
                            }
                            a(i, k + 1) -= pp * q;
                            a(i, k) -= pp;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return eig;
}

}  // namespace

std::vector<std::complex<double>> general_eig(const DenseMatrix& m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw DimensionError("general_eig: matrix not square");
    if (n > kDenseEigCap)
        throw DimensionError("general_eig: size exceeds dense-eig cap " +
                             std::to_string(kDenseEigCap));
    if (n == 0) return {};
    DenseMatrix a = m;
    hessenberg_reduce(a);
    return hessenberg_qr(a, 50 * n);
}

double top_singular_value(const DenseMatrix& m, double tol, std::size_t iter_cap) {
    if (m.rows() == 0 || m.cols() == 0)
        throw DimensionError("top_singular_value: empty matrix");
    RngStream rng(0x5eed, 0x515e);  // fixed start vector; deterministic result
    std::vector<double> v(m.cols());
    for (double& x : v) x = rng.next_gaussian();

    auto normalize = [](std::vector<double>& x) {
        double s = 0.0;
        for (double e : x) s += e * e;
        s = std::sqrt(s);
        if (s > 0) {
            for (double& e : x) e /= s;
        }
        return s;
    };
    normalize(v);

    std::vector<double> mv(m.rows()), mtmv(m.cols());
    double sigma = 0.0;
    for (std::size_t it = 0; it < iter_cap; ++it) {
        // mv = M v ; mtmv = M^T mv
        for (std::size_t i = 0; i < m.rows(); ++i) {
            double s = 0.0;
            const double* row = m.data() + i * m.cols();
            for (std::size_t j = 0; j < m.cols(); ++j) s += row[j] * v[j];
            mv[i] = s;
        }
        std::fill(mtmv.begin(), mtmv.end(), 0.0);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            const double* row = m.data() + i * m.cols();
            for (std::size_t j = 0; j < m.cols(); ++j) mtmv[j] += row[j] * mv[i];
        }
        double sigma_new = 0.0;
        for (double e : mv) sigma_new += e * e;
        sigma_new = std::sqrt(sigma_new);
        v = mtmv;
        if (normalize(v) == 0.0) return 0.0;  // m^T m v vanished: zero matrix direction
        if (it > 0 && std::abs(sigma_new - sigma) <= tol * std::max(sigma_new, DBL_MIN)) {
            return sigma_new;
        }
        sigma = sigma_new;
    }
    throw ConvergenceError("top_singular_value: iteration cap " +
                               std::to_string(iter_cap) + " reached, estimate " +
                               std::to_string(sigma),
                           sigma);
}

DenseMatrix sample_gaussian(RngStream& rng, std::size_t rows, std::size_t cols,
                            double mean, double std) {
    if (std < 0) throw std::invalid_argument("sample_gaussian: std < 0");
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        m.data()[i] = mean + std * rng.next_gaussian();
    return m;
}

DenseMatrix sample_uniform(RngStream& rng, std::size_t rows, std::size_t cols,
                           double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("sample_uniform: lo > hi");
    DenseMatrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        m.data()[i] = lo + (hi - lo) * rng.next_uniform();
    return m;
}

}  // namespace gnnlab
