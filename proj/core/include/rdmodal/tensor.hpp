#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rdmodal {

using Complex = std::complex<double>;

/// Column-major dense complex matrix. Columns are atoms / fibers throughout
/// the library.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Product of a list of dimension sizes (1 for an empty list).
std::size_t product(std::span<const std::size_t> sizes) noexcept;

/// Dense R-way complex array.
///
/// Dimensions are indexed from 0. Element (m_0, ..., m_{R-1}) is stored at
/// flat index sum_r m_r * prod_{k>r} M_k, so the last index varies fastest.
/// This is the same ordering as the sample vector used by the Cramer-Rao
/// machinery, which lets `vec()` feed it directly.
class ComplexTensor {
public:
    ComplexTensor() = default;

    /// Zero tensor of the given shape.
    explicit ComplexTensor(std::vector<std::size_t> sizes);

    /// Throws std::invalid_argument if data.size() != prod(sizes).
    ComplexTensor(std::vector<std::size_t> sizes, std::vector<Complex> data);

    std::size_t order() const noexcept { return sizes_.size(); }
    const std::vector<std::size_t>& sizes() const noexcept { return sizes_; }
    std::size_t size(std::size_t dim) const { return sizes_.at(dim); }
    std::size_t numel() const noexcept { return data_.size(); }

    std::span<const Complex> data() const noexcept { return data_; }
    std::span<Complex> data() noexcept { return data_; }

    Complex& operator[](std::size_t flat) noexcept { return data_[flat]; }
    const Complex& operator[](std::size_t flat) const noexcept { return data_[flat]; }

    Complex& at(std::span<const std::size_t> index) { return data_[flat_index(index)]; }
    const Complex& at(std::span<const std::size_t> index) const { return data_[flat_index(index)]; }

    std::size_t flat_index(std::span<const std::size_t> index) const;
    std::vector<std::size_t> multi_index(std::size_t flat) const;

    ComplexTensor& operator+=(const ComplexTensor& other);
    ComplexTensor& operator-=(const ComplexTensor& other);
    ComplexTensor& operator*=(Complex scale) noexcept;

    friend ComplexTensor operator+(ComplexTensor lhs, const ComplexTensor& rhs) { return lhs += rhs; }
    friend ComplexTensor operator-(ComplexTensor lhs, const ComplexTensor& rhs) { return lhs -= rhs; }
    friend ComplexTensor operator*(Complex scale, ComplexTensor t) { return t *= scale; }

    bool operator==(const ComplexTensor&) const = default;

private:
    void require_same_shape(const ComplexTensor& other) const;

    std::vector<std::size_t> sizes_;
    std::vector<Complex> data_;
};

/// Dimension-`dim` matricization: M_dim x prod_{k != dim} M_k. Among the
/// remaining dimensions the smallest index varies fastest along the columns,
/// which makes Y_(r) = A_r diag(c) (A_R (.) ... (.) A_{r+1} (.) A_{r-1} (.) ... (.) A_1)^T
/// hold for a CP tensor.
ComplexMatrix unfold(const ComplexTensor& t, std::size_t dim);

/// Inverse of unfold() for a target shape.
ComplexTensor fold(const ComplexMatrix& m, std::size_t dim, std::vector<std::size_t> sizes);

/// Contraction of index `dim` of `t` with the second index of `u` (K x M_dim).
ComplexTensor contract_mode(const ComplexTensor& t, std::size_t dim, const ComplexMatrix& u);

/// c * v_0 o v_1 o ... o v_{R-1}
ComplexTensor rank1(Complex c, std::span<const ComplexVector> vectors);

/// Kronecker product of two vectors; the second factor's index varies fastest.
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// Column-wise Kronecker product.
ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b);

double frob_norm(const ComplexTensor& t) noexcept;

/// Flattened samples in storage order.
ComplexVector vec(const ComplexTensor& t);

/// Reorders dimensions: dimension k of the result is dimension perm[k] of `t`.
ComplexTensor permute_dims(const ComplexTensor& t, std::span<const std::size_t> perm);

/// Inverse permutation of a permutation vector. Throws on invalid input.
std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm);

}  // namespace rdmodal
