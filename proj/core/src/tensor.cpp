#include "rdmodal/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rdmodal {

namespace {

void require_valid_sizes(const std::vector<std::size_t>& sizes)
{
    if (sizes.empty())
        throw std::invalid_argument("tensor must have at least one dimension");
    for (std::size_t s : sizes)
        if (s == 0)
            throw std::invalid_argument("tensor dimensions must be positive");
}

void require_dim(const ComplexTensor& t, std::size_t dim)
{
    if (dim >= t.order())
        throw std::out_of_range("dimension " + std::to_string(dim) + " out of range for order-" +
                                std::to_string(t.order()) + " tensor");
}

// Column stride of each dimension in the dimension-`dim` unfolding.
std::vector<std::size_t> unfold_strides(const std::vector<std::size_t>& sizes, std::size_t dim)
{
    std::vector<std::size_t> stride(sizes.size(), 0);
    std::size_t s = 1;
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (k == dim)
            continue;
        stride[k] = s;
        s *= sizes[k];
    }
    return stride;
}

// Advances a last-fastest multi-index; returns false past the end.
bool increment(std::vector<std::size_t>& idx, const std::vector<std::size_t>& sizes)
{
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < sizes[k])
            return true;
        idx[k] = 0;
    }
    return false;
}

}  // namespace

std::size_t product(std::span<const std::size_t> sizes) noexcept
{
    return std::accumulate(sizes.begin(), sizes.end(), std::size_t{1}, std::multiplies<>());
}

ComplexTensor::ComplexTensor(std::vector<std::size_t> sizes) : sizes_(std::move(sizes))
{
    require_valid_sizes(sizes_);
    data_.assign(product(sizes_), Complex{});
}

ComplexTensor::ComplexTensor(std::vector<std::size_t> sizes, std::vector<Complex> data)
    : sizes_(std::move(sizes)), data_(std::move(data))
{
    require_valid_sizes(sizes_);
    if (data_.size() != product(sizes_))
        throw std::invalid_argument("tensor data length does not match its shape");
}

std::size_t ComplexTensor::flat_index(std::span<const std::size_t> index) const
{
    if (index.size() != sizes_.size())
        throw std::invalid_argument("index rank does not match tensor order");
    std::size_t flat = 0;
    for (std::size_t r = 0; r < sizes_.size(); ++r) {
        if (index[r] >= sizes_[r])
            throw std::out_of_range("tensor index out of range");
        flat = flat * sizes_[r] + index[r];
    }
    return flat;
}

std::vector<std::size_t> ComplexTensor::multi_index(std::size_t flat) const
{
    if (flat >= data_.size())
        throw std::out_of_range("flat index out of range");
    std::vector<std::size_t> idx(sizes_.size());
    for (std::size_t r = sizes_.size(); r-- > 0;) {
        idx[r] = flat % sizes_[r];
        flat /= sizes_[r];
    }
    return idx;
}

void ComplexTensor::require_same_shape(const ComplexTensor& other) const
{
    if (sizes_ != other.sizes_)
        throw std::invalid_argument("tensor shapes differ");
}

ComplexTensor& ComplexTensor::operator+=(const ComplexTensor& other)
{
    require_same_shape(other);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

ComplexTensor& ComplexTensor::operator-=(const ComplexTensor& other)
{
    require_same_shape(other);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

ComplexTensor& ComplexTensor::operator*=(Complex scale) noexcept
{
    for (auto& v : data_)
        v *= scale;
    return *this;
}

ComplexMatrix unfold(const ComplexTensor& t, std::size_t dim)
{
    require_dim(t, dim);
    const auto& sizes = t.sizes();
    const std::size_t rows = sizes[dim];
    const std::size_t cols = t.numel() / rows;
    const auto stride = unfold_strides(sizes, dim);

    ComplexMatrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::vector<std::size_t> idx(sizes.size(), 0);
    std::size_t flat = 0;
    do {
        std::size_t col = 0;
        for (std::size_t k = 0; k < idx.size(); ++k)
            col += idx[k] * stride[k];
        out(static_cast<Eigen::Index>(idx[dim]), static_cast<Eigen::Index>(col)) = t[flat++];
    } while (increment(idx, sizes));
    return out;
}

ComplexTensor fold(const ComplexMatrix& m, std::size_t dim, std::vector<std::size_t> sizes)
{
    ComplexTensor out(std::move(sizes));
    require_dim(out, dim);
    const auto& shape = out.sizes();
    if (static_cast<std::size_t>(m.rows()) != shape[dim] ||
        static_cast<std::size_t>(m.cols()) * shape[dim] != out.numel())
        throw std::invalid_argument("matrix shape does not match the folded tensor shape");

    const auto stride = unfold_strides(shape, dim);
    std::vector<std::size_t> idx(shape.size(), 0);
    std::size_t flat = 0;
    do {
        std::size_t col = 0;
        for (std::size_t k = 0; k < idx.size(); ++k)
            col += idx[k] * stride[k];
        out[flat++] = m(static_cast<Eigen::Index>(idx[dim]), static_cast<Eigen::Index>(col));
    } while (increment(idx, shape));
    return out;
}

ComplexTensor contract_mode(const ComplexTensor& t, std::size_t dim, const ComplexMatrix& u)
{
    require_dim(t, dim);
    if (static_cast<std::size_t>(u.cols()) != t.size(dim))
        throw std::invalid_argument("contract_mode: matrix has " + std::to_string(u.cols()) +
                                    " columns, tensor dimension has " + std::to_string(t.size(dim)));
    auto sizes = t.sizes();
    sizes[dim] = static_cast<std::size_t>(u.rows());
    const ComplexMatrix product_matrix = u * unfold(t, dim);
    return fold(product_matrix, dim, std::move(sizes));
}

ComplexTensor rank1(Complex c, std::span<const ComplexVector> vectors)
{
    std::vector<std::size_t> sizes;
    sizes.reserve(vectors.size());
    for (const auto& v : vectors)
        sizes.push_back(static_cast<std::size_t>(v.size()));
    ComplexTensor out(sizes);

    // Build by repeated outer products; the last factor is innermost.
    std::vector<Complex> acc{c};
    for (const auto& v : vectors) {
        std::vector<Complex> next;
        next.reserve(acc.size() * static_cast<std::size_t>(v.size()));
        for (const Complex& a : acc)
            for (Eigen::Index m = 0; m < v.size(); ++m)
                next.push_back(a * v[m]);
        acc = std::move(next);
    }
    std::copy(acc.begin(), acc.end(), out.data().begin());
    return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b)
{
    ComplexVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a[i] * b;
    return out;
}

ComplexMatrix khatri_rao(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.cols())
        throw std::invalid_argument("khatri_rao: column counts differ");
    ComplexMatrix out(a.rows() * b.rows(), a.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.col(j) = kron(a.col(j), b.col(j));
    return out;
}

double frob_norm(const ComplexTensor& t) noexcept
{
    double s = 0.0;
    for (const Complex& v : t.data())
        s += std::norm(v);
    return std::sqrt(s);
}

ComplexVector vec(const ComplexTensor& t)
{
    ComplexVector out(static_cast<Eigen::Index>(t.numel()));
    for (std::size_t i = 0; i < t.numel(); ++i)
        out[static_cast<Eigen::Index>(i)] = t[i];
    return out;
}

std::vector<std::size_t> inverse_permutation(std::span<const std::size_t> perm)
{
    std::vector<std::size_t> inv(perm.size(), perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
        if (perm[k] >= perm.size() || inv[perm[k]] != perm.size())
            throw std::invalid_argument("not a permutation");
        inv[perm[k]] = k;
    }
    return inv;
}

ComplexTensor permute_dims(const ComplexTensor& t, std::span<const std::size_t> perm)
{
    if (perm.size() != t.order())
        throw std::invalid_argument("permutation length does not match tensor order");
    inverse_permutation(perm);  // validates

    std::vector<std::size_t> sizes(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k)
        sizes[k] = t.size(perm[k]);
    ComplexTensor out(sizes);

    std::vector<std::size_t> src(t.order(), 0);
    std::vector<std::size_t> dst(t.order(), 0);
    std::size_t flat = 0;
    do {
        for (std::size_t k = 0; k < perm.size(); ++k)
            dst[k] = src[perm[k]];
        out.at(dst) = t[flat++];
    } while (increment(src, t.sizes()));
    return out;
}

}  // namespace rdmodal
