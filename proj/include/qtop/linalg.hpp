// Exact sparse linear algebra over Q(zeta_{4r}): canonical sparse matrices,
// Gaussian elimination with deterministic pivoting, nullspaces, inverses,
// minimal polynomials, and small polynomial utilities over the field.

#ifndef QTOP_LINALG_HPP
#define QTOP_LINALG_HPP

#include <optional>
#include <utility>
#include <vector>

#include "qtop/cyclo.hpp"

namespace qtop {

// Sparse matrix in canonical form: entries sorted by (row, col), no zeros.
class ExactMatrix {
   public:
    struct Entry {
        long r, c;
        CycloNum v;
    };

    ExactMatrix() : rows_(0), cols_(0) {}
    ExactMatrix(long rows, long cols) : rows_(rows), cols_(cols) {}

    static ExactMatrix identity(const FieldCtx* ctx, long n);

    long rows() const { return rows_; }
    long cols() const { return cols_; }
    const std::vector<Entry>& entries() const { return e_; }
    long nnz() const { return static_cast<long>(e_.size()); }

    // Builder interface: add then finalize (sorts, merges, drops zeros).
    void add(long r, long c, CycloNum v);
    void finalize();

    bool is_zero() const { return e_.empty(); }
    bool operator==(const ExactMatrix& o) const;
    bool operator!=(const ExactMatrix& o) const { return !(*this == o); }

    CycloNum at(const FieldCtx* ctx, long r, long c) const;

    ExactMatrix operator+(const ExactMatrix& o) const;
    ExactMatrix operator-(const ExactMatrix& o) const;
    ExactMatrix operator*(const ExactMatrix& o) const;  // matrix product
    ExactMatrix scaled(const CycloNum& s) const;
    ExactMatrix transpose() const;
    ExactMatrix kron(const ExactMatrix& o) const;  // left-major flattening
    ExactMatrix pow(const FieldCtx* ctx, long e) const;

    CycloNum trace(const FieldCtx* ctx) const;

    // Rows as spans into the sorted entry list.
    std::vector<std::pair<size_t, size_t>> row_spans() const;

   private:
    long rows_, cols_;
    std::vector<Entry> e_;
    bool finalized_ = true;
};

struct RrefResult {
    // Reduced rows in echelon form (sparse, sorted by leading column).
    std::vector<std::vector<std::pair<long, CycloNum>>> rows;
    std::vector<long> pivot_cols;
    long rank = 0;
};

// Row reduction with deterministic pivoting (first nonzero in row-major order).
RrefResult rref(const ExactMatrix& m, const FieldCtx* ctx);

long rank(const ExactMatrix& m, const FieldCtx* ctx);

// Deterministic reduced basis of the right nullspace, one column per free var,
// ordered by increasing free-variable index.
std::vector<std::vector<CycloNum>> nullspace(const ExactMatrix& m, const FieldCtx* ctx);

// Inverse of a square matrix; Error("MATH") mentioning the rank if singular.
ExactMatrix inverse(const ExactMatrix& m, const FieldCtx* ctx);

// One solution of m x = b, or nullopt if inconsistent.
std::optional<std::vector<CycloNum>> solve(const ExactMatrix& m,
                                           const std::vector<CycloNum>& b,
                                           const FieldCtx* ctx);

// Monic polynomials over the field, ascending coefficients.
struct FieldPoly {
    std::vector<CycloNum> coeffs;
    long degree() const { return static_cast<long>(coeffs.size()) - 1; }
    std::string to_string() const;
};

FieldPoly min_poly(const ExactMatrix& m, const FieldCtx* ctx);
FieldPoly poly_derivative(const FieldPoly& p, const FieldCtx* ctx);
FieldPoly poly_gcd(FieldPoly a, FieldPoly b, const FieldCtx* ctx);  // monic gcd
// Evaluate p at the matrix m (Horner).
ExactMatrix poly_eval_matrix(const FieldPoly& p, const ExactMatrix& m, const FieldCtx* ctx);

// Express target in terms of a fixed list of basis vectors (used for hom-space
// coordinates). Caches the echelon form of the basis across calls.
class CoordSolver {
   public:
    CoordSolver(std::vector<std::vector<CycloNum>> basis, const FieldCtx* ctx);
    // Coordinates of t in the basis; Error("MATH") if t is outside the span.
    std::vector<CycloNum> coords(const std::vector<CycloNum>& t) const;

   private:
    const FieldCtx* ctx_;
    long dim_ = 0, k_ = 0;
    // Echelon rows of [basis | e_i] bookkeeping.
    std::vector<std::vector<CycloNum>> red_rows_;   // reduced basis vectors
    std::vector<std::vector<CycloNum>> red_combo_;  // expression in original basis
    std::vector<long> pivots_;
};

}  // namespace qtop

#endif
