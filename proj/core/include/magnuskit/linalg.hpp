#pragma once

#include "magnuskit/matrix.hpp"

#include <vector>

namespace magnus {

[[nodiscard]] Matrix commutator(const Matrix& a, const Matrix& b);

[[nodiscard]] double frobenius_norm(const Matrix& a);
/// Max column sum.
[[nodiscard]] double norm1(const Matrix& a);
[[nodiscard]] double max_abs(const Matrix& a);
[[nodiscard]] double spectral_norm(const Matrix& a, double tol = 1e-12);

[[nodiscard]] cplx determinant(const Matrix& a);

/// Solves AX = B by LU with partial pivoting.
[[nodiscard]] Matrix solve_linear(const Matrix& a, const Matrix& b);

/// Rectangular variant: A is n x n, B is n x m (both row-major); B is overwritten with X.
void solve_linear_inplace(std::vector<cplx> a, std::size_t n, std::vector<cplx>& b, std::size_t m);

/// Scaling and squaring with the diagonal (6,6) Pade approximant.
[[nodiscard]] Matrix expm(const Matrix& a);

enum class ClosedForm { sl2, su2 };
[[nodiscard]] Matrix closed_form_exp(ClosedForm form, const Matrix& a);

/// psi_{2m}(B) = P_m(B) P_m(-B)^{-1}; m = 1 is the Cayley transform.
[[nodiscard]] Matrix pade_lie_map(const Matrix& b, int m);

/// ||A^H A - I||_F, ||A^T J A - J||_F and friends.
[[nodiscard]] double unitarity_defect(const Matrix& y);
[[nodiscard]] double j_orthogonality_defect(const Matrix& y, const Matrix& j);
[[nodiscard]] double skew_hermitian_defect(const Matrix& a);
[[nodiscard]] double skew_symmetric_defect(const Matrix& a);

/// Group defect of Y for the algebra tag: unitarity for skew tags, J-orthogonality for J tags,
/// |det - 1| for traceless. Returns NaN for Kind::none.
[[nodiscard]] double group_defect(const Matrix& y, const StructureTag& tag);

}  // namespace magnus
