#include "magnuskit/matrix.hpp"

#include "magnuskit/linalg.hpp"

#include <cmath>

namespace magnus {

Error::Error(std::string code, const std::string& detail)
    : std::runtime_error(detail.empty() ? code : code + ": " + detail), code_(std::move(code)) {}

Matrix::Matrix(std::size_t n) : n_(n), a_(n * n) {
    if (n == 0) throw Error("invalid-dimension", "matrix dimension must be >= 1");
}

Matrix::Matrix(std::size_t n, std::vector<cplx> entries) : n_(n), a_(std::move(entries)) {
    if (n == 0) throw Error("invalid-dimension", "matrix dimension must be >= 1");
    if (a_.size() != n * n) throw Error("invalid-dimension", "entry count is not n*n");
    if (!is_finite()) throw Error("non-finite-entry");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows) : n_(rows.size()) {
    if (n_ == 0) throw Error("invalid-dimension", "matrix dimension must be >= 1");
    a_.reserve(n_ * n_);
    for (const auto& r : rows) {
        if (r.size() != n_) throw Error("invalid-dimension", "matrix must be square");
        a_.insert(a_.end(), r.begin(), r.end());
    }
    if (!is_finite()) throw Error("non-finite-entry");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diag(const std::vector<cplx>& d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

static void check_same(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw Error("dimension-mismatch");
}

Matrix& Matrix::operator+=(const Matrix& o) {
    check_same(*this, o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    check_same(*this, o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
}

Matrix& Matrix::operator*=(cplx s) {
    for (auto& x : a_) x *= s;
    return *this;
}

Matrix Matrix::adjoint() const {
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

cplx Matrix::trace() const {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
}

bool Matrix::is_finite() const {
    for (const auto& x : a_)
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
    return true;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator-(Matrix a) { return a *= -1.0; }
Matrix operator*(Matrix a, cplx s) { return a *= s; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    check_same(a, b);
    const std::size_t n = a.dim();
    Matrix r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (std::size_t j = 0; j < n; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

Matrix pauli(int k) {
    const cplx i(0.0, 1.0);
    switch (k) {
        case 1: return Matrix{{0.0, 1.0}, {1.0, 0.0}};
        case 2: return Matrix{{0.0, -i}, {i, 0.0}};
        case 3: return Matrix{{1.0, 0.0}, {0.0, -1.0}};
        default: throw Error("invalid-argument", "pauli index must be 1, 2 or 3");
    }
}

StructureTag StructureTag::j_orthogonal(Matrix J) {
    const std::size_t n = J.dim();
    const double scale = frobenius_norm(J);
    if (scale == 0.0 || std::abs(determinant(J)) <= 1e-14 * std::pow(scale, static_cast<double>(n)))
        throw Error("singular-j", "J must be invertible");
    StructureTag t;
    t.kind = Kind::j_orthogonal;
    t.J = std::move(J);
    return t;
}

StructureTag StructureTag::hamiltonian(std::size_t n) {
    if (n % 2 != 0) throw Error("invalid-dimension", "hamiltonian structure needs even dimension");
    Matrix J(n);
    const std::size_t m = n / 2;
    for (std::size_t i = 0; i < m; ++i) {
        J(i, m + i) = 1.0;
        J(m + i, i) = -1.0;
    }
    StructureTag t;
    t.kind = Kind::hamiltonian;
    t.J = std::move(J);
    return t;
}

const char* to_string(StructureTag::Kind k) {
    switch (k) {
        case StructureTag::Kind::none: return "none";
        case StructureTag::Kind::skew_hermitian: return "skew-hermitian";
        case StructureTag::Kind::skew_symmetric: return "skew-symmetric";
        case StructureTag::Kind::traceless: return "traceless";
        case StructureTag::Kind::j_orthogonal: return "j-orthogonal";
        case StructureTag::Kind::hamiltonian: return "hamiltonian";
    }
    return "unknown";
}

}  // namespace magnus
