#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace magnus {

using cplx = std::complex<double>;

/// Library error carrying a short machine-readable code.
class Error : public std::runtime_error {
public:
    explicit Error(std::string code, const std::string& detail = {});
    [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Dense square complex matrix, row-major.
class Matrix {
public:
    /// n x n zero matrix.
    explicit Matrix(std::size_t n);
    Matrix(std::size_t n, std::vector<cplx> entries);
    Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

    [[nodiscard]] static Matrix identity(std::size_t n);
    [[nodiscard]] static Matrix zero(std::size_t n) { return Matrix(n); }
    [[nodiscard]] static Matrix diag(const std::vector<cplx>& d);

    [[nodiscard]] std::size_t dim() const noexcept { return n_; }
    [[nodiscard]] cplx& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    [[nodiscard]] const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    [[nodiscard]] const std::vector<cplx>& entries() const noexcept { return a_; }
    [[nodiscard]] std::vector<cplx>& entries() noexcept { return a_; }

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(cplx s);

    [[nodiscard]] Matrix adjoint() const;
    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] cplx trace() const;
    [[nodiscard]] bool is_finite() const;

private:
    std::size_t n_;
    std::vector<cplx> a_;
};

[[nodiscard]] Matrix operator+(Matrix a, const Matrix& b);
[[nodiscard]] Matrix operator-(Matrix a, const Matrix& b);
[[nodiscard]] Matrix operator-(Matrix a);
[[nodiscard]] Matrix operator*(const Matrix& a, const Matrix& b);
[[nodiscard]] Matrix operator*(Matrix a, cplx s);
[[nodiscard]] Matrix operator*(cplx s, Matrix a);
[[nodiscard]] Matrix operator*(Matrix a, double s);
[[nodiscard]] Matrix operator*(double s, Matrix a);

/// Pauli matrices sigma_1..sigma_3.
[[nodiscard]] Matrix pauli(int k);

/// Lie-algebra membership used for structure checks.
struct StructureTag {
    enum class Kind { none, skew_hermitian, skew_symmetric, traceless, j_orthogonal, hamiltonian };

    Kind kind = Kind::none;
    /// Set for j_orthogonal (invertible) and hamiltonian (canonical symplectic form).
    std::optional<Matrix> J;

    [[nodiscard]] static StructureTag j_orthogonal(Matrix J);
    [[nodiscard]] static StructureTag hamiltonian(std::size_t n);
};

[[nodiscard]] const char* to_string(StructureTag::Kind k);

}  // namespace magnus
