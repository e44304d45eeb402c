#include "magnuskit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace magnus {

namespace {

constexpr double kUlp = std::numeric_limits<double>::epsilon();

// In-place LU with partial pivoting; returns false on a numerically singular pivot.
bool lu_factor(std::vector<cplx>& a, std::size_t n, std::vector<std::size_t>& piv, double& sign) {
    double fro = 0.0;
    for (const auto& x : a) fro += std::norm(x);
    fro = std::sqrt(fro);
    const double thresh = static_cast<double>(n) * kUlp * fro;
    piv.resize(n);
    sign = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(a[i * n + k]);
            if (v > best) {
                best = v;
                p = i;
            }
        }
        piv[k] = p;
        if (best <= thresh || best == 0.0) return false;
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
            sign = -sign;
        }
        const cplx inv = 1.0 / a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            cplx& lik = a[i * n + k];
            if (lik == cplx(0.0)) continue;
            lik *= inv;
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= lik * a[k * n + j];
        }
    }
    return true;
}

Matrix pade_poly(const Matrix& b, const Matrix& b2, int m) {
    const std::size_t n = b.dim();
    Matrix pm2 = Matrix::identity(n);
    Matrix pm1 = 2.0 * Matrix::identity(n) + b;
    for (int k = 2; k <= m; ++k) {
        Matrix pk = static_cast<double>(2 * (2 * k - 1)) * pm1 + b2 * pm2;
        pm2 = std::move(pm1);
        pm1 = std::move(pk);
    }
    return pm1;
}

// 4-term Taylor series of sinh(z)/z for tiny |z|.
cplx sinhc(cplx z) {
    if (std::abs(z) < 1e-4) {
        const cplx z2 = z * z;
        return 1.0 + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0;
    }
    return std::sinh(z) / z;
}

}  // namespace

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (const auto& x : a.entries()) s += std::norm(x);
    return std::sqrt(s);
}

double norm1(const Matrix& a) {
    const std::size_t n = a.dim();
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (const auto& x : a.entries()) m = std::max(m, std::abs(x));
    return m;
}

double spectral_norm(const Matrix& a, double tol) {
    const std::size_t n = a.dim();
    const double fro = frobenius_norm(a);
    if (fro == 0.0) return 0.0;

    std::vector<cplx> v(n), u(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = cplx(1.0 + 0.1 * i, 0.01 * (i * i % 7));
    double prev = -1.0, sig2 = 0.0;
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        double vn = 0.0;
        for (const auto& x : v) vn += std::norm(x);
        vn = std::sqrt(vn);
        if (vn == 0.0) break;
        for (auto& x : v) x /= vn;
        for (std::size_t i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
            u[i] = s;
        }
        sig2 = 0.0;
        for (const auto& x : u) sig2 += std::norm(x);
        if (prev >= 0.0 && std::abs(sig2 - prev) < tol * sig2) {
            converged = true;
            break;
        }
        prev = sig2;
        for (std::size_t j = 0; j < n; ++j) {
            cplx s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::conj(a(i, j)) * u[i];
            v[j] = s;
        }
    }
    const double sigma = std::min(std::sqrt(sig2), fro);
    if (!converged || fro > std::sqrt(static_cast<double>(n)) * sigma * (1.0 + tol)) return fro;
    return sigma;
}

cplx determinant(const Matrix& a) {
    std::vector<cplx> lu = a.entries();
    std::vector<std::size_t> piv;
    double sign = 1.0;
    const std::size_t n = a.dim();
    // Exact singularity still has a determinant; fall back to a threshold-free factorization.
    if (!lu_factor(lu, n, piv, sign)) {
        lu = a.entries();
        cplx det = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::abs(lu[i * n + k]) > std::abs(lu[p * n + k])) p = i;
            if (lu[p * n + k] == cplx(0.0)) return 0.0;
            if (p != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[p * n + j]);
                det = -det;
            }
            det *= lu[k * n + k];
            for (std::size_t i = k + 1; i < n; ++i) {
                const cplx l = lu[i * n + k] / lu[k * n + k];
                for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= l * lu[k * n + j];
            }
        }
        return det;
    }
    cplx det = sign;
    for (std::size_t k = 0; k < n; ++k) det *= lu[k * n + k];
    return det;
}

void solve_linear_inplace(std::vector<cplx> a, std::size_t n, std::vector<cplx>& b, std::size_t m) {
    if (a.size() != n * n || b.size() != n * m) throw Error("dimension-mismatch");
    std::vector<std::size_t> piv;
    double sign = 1.0;
    if (!lu_factor(a, n, piv, sign)) throw Error("singular-system");
    for (std::size_t k = 0; k < n; ++k)
        if (piv[k] != k)
            for (std::size_t j = 0; j < m; ++j) std::swap(b[k * m + j], b[piv[k] * m + j]);
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t k = 0; k < i; ++k) {
            const cplx l = a[i * n + k];
            if (l == cplx(0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) b[i * m + j] -= l * b[k * m + j];
        }
    for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t k = ii + 1; k < n; ++k) {
            const cplx u = a[ii * n + k];
            if (u == cplx(0.0)) continue;
            for (std::size_t j = 0; j < m; ++j) b[ii * m + j] -= u * b[k * m + j];
        }
        const cplx inv = 1.0 / a[ii * n + ii];
        for (std::size_t j = 0; j < m; ++j) b[ii * m + j] *= inv;
    }
}

Matrix solve_linear(const Matrix& a, const Matrix& b) {
    if (a.dim() != b.dim()) throw Error("dimension-mismatch");
    std::vector<cplx> x = b.entries();
    solve_linear_inplace(a.entries(), a.dim(), x, b.dim());
    return Matrix(a.dim(), std::move(x));
}

Matrix expm(const Matrix& a) {
    constexpr int m = 6;
    const std::size_t n = a.dim();
    const double nrm = norm1(a);
    int squarings = 0;
    if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    const Matrix x = a * std::ldexp(1.0, -squarings);

    double c[m + 1];
    c[0] = 1.0;
    for (int j = 1; j <= m; ++j) c[j] = c[j - 1] * (m - j + 1) / (j * (2.0 * m - j + 1));

    const Matrix I = Matrix::identity(n);
    const Matrix x2 = x * x;
    const Matrix x4 = x2 * x2;
    const Matrix x6 = x4 * x2;
    const Matrix u = x * (c[1] * I + c[3] * x2 + c[5] * x4);
    const Matrix v = c[0] * I + c[2] * x2 + c[4] * x4 + c[6] * x6;
    Matrix r = solve_linear(v - u, v + u);
    for (int k = 0; k < squarings; ++k) r = r * r;
    return r;
}

Matrix closed_form_exp(ClosedForm form, const Matrix& a) {
    if (a.dim() != 2) throw Error("structure-violation", "closed-form exponential needs a 2x2 matrix");
    const double scale = std::max(1.0, max_abs(a));
    if (std::abs(a.trace()) > 1e-12 * scale) throw Error("structure-violation", "matrix is not traceless");

    if (form == ClosedForm::sl2) {
        for (const auto& x : a.entries())
            if (std::abs(x.imag()) > 1e-12 * scale) throw Error("structure-violation", "sl2 needs a real matrix");
        const double p = a(0, 0).real(), q = a(0, 1).real(), r = a(1, 0).real();
        const cplx eta = std::sqrt(cplx(p * p + q * r, 0.0));
        const double ch = std::cosh(eta).real();
        const double sc = sinhc(eta).real();
        return Matrix{{ch + sc * p, sc * q}, {sc * r, ch - sc * p}};
    }

    if (skew_hermitian_defect(a) > 1e-12 * scale)
        throw Error("structure-violation", "su2 needs a skew-Hermitian matrix");
    // A = i(a . sigma)
    const double a3 = a(0, 0).imag();
    const double a1 = a(0, 1).imag();
    const double a2 = a(0, 1).real();
    const double an = std::sqrt(a1 * a1 + a2 * a2 + a3 * a3);
    const double sc = sinhc(cplx(0.0, an)).real();  // sin(|a|)/|a|
    Matrix r = sc * a;
    r(0, 0) += std::cos(an);
    r(1, 1) += std::cos(an);
    return r;
}

Matrix pade_lie_map(const Matrix& b, int m) {
    if (m < 1) throw Error("invalid-argument", "pade_lie_map needs m >= 1");
    const Matrix b2 = b * b;
    const Matrix num = pade_poly(b, b2, m);
    const Matrix den = pade_poly(-b, b2, m);
    try {
        return solve_linear(den, num);
    } catch (const Error& e) {
        if (e.code() == "singular-system") throw Error("pade-denominator-singular");
        throw;
    }
}

double unitarity_defect(const Matrix& y) {
    return frobenius_norm(y.adjoint() * y - Matrix::identity(y.dim()));
}

double j_orthogonality_defect(const Matrix& y, const Matrix& j) {
    return frobenius_norm(y.transpose() * j * y - j);
}

double skew_hermitian_defect(const Matrix& a) { return frobenius_norm(a + a.adjoint()); }

double skew_symmetric_defect(const Matrix& a) { return frobenius_norm(a + a.transpose()); }

double group_defect(const Matrix& y, const StructureTag& tag) {
    switch (tag.kind) {
        case StructureTag::Kind::skew_hermitian:
        case StructureTag::Kind::skew_symmetric: return unitarity_defect(y);
        case StructureTag::Kind::j_orthogonal:
        case StructureTag::Kind::hamiltonian: return j_orthogonality_defect(y, *tag.J);
        case StructureTag::Kind::traceless: return std::abs(determinant(y) - 1.0);
        case StructureTag::Kind::none: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace magnus
