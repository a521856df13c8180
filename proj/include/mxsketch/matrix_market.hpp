#pragma once

#include <cctype>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "mxsketch/linalg.hpp"
#include "mxsketch/types.hpp"

namespace mxsketch {

struct MtxStats {
    Index rows = 0;
    Index cols = 0;
    Index nnz = 0;               // nonzeros of the materialized matrix
    double density = 0.0;        // nnz / (rows * cols)
    std::optional<Index> rank;   // numerical rank, skipped for large inputs
};

template <class Real = double>
struct MtxFileT {
    MatX<Real> matrix;
    MtxStats stats;
};

using MtxFile = MtxFileT<double>;

namespace detail {

inline std::string lower(std::string s) {
    for (char& c : s) c = char(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] inline void mtx_fail(const std::string& path, Index line, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace detail

// Coordinate-format Matrix Market reader for dense use. Accepts real
// general and real symmetric matrices, one-based indices, % comments.
// Pattern and complex fields are rejected explicitly. Stats include the
// density convention nnz / (rows * cols) on the materialized matrix; the
// numerical rank is computed when the matrix has at most 10^6 entries.
template <class Real = double>
MtxFileT<Real> load_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_matrix_market: cannot open " + path);

    std::string line;
    Index lineno = 0;
    if (!std::getline(in, line)) detail::mtx_fail(path, 1, "empty file");
    ++lineno;
    std::istringstream hdr(line);
    std::string banner, object, format, field, symmetry;
    hdr >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket") detail::mtx_fail(path, lineno, "missing MatrixMarket banner");
    object = detail::lower(object);
    format = detail::lower(format);
    field = detail::lower(field);
    symmetry = detail::lower(symmetry);
    if (object != "matrix") detail::mtx_fail(path, lineno, "unsupported object '" + object + "'");
    if (format != "coordinate")
        detail::mtx_fail(path, lineno, "unsupported format '" + format + "' (coordinate only)");
    if (field == "pattern" || field == "complex")
        detail::mtx_fail(path, lineno, "unsupported field '" + field + "' (real only)");
    if (field != "real" && field != "integer")
        detail::mtx_fail(path, lineno, "unsupported field '" + field + "'");
    if (symmetry != "general" && symmetry != "symmetric")
        detail::mtx_fail(path, lineno, "unsupported symmetry '" + symmetry + "'");
    const bool symmetric = symmetry == "symmetric";

    Index rows = 0, cols = 0;
    long long entries = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream sz(line);
        if (!(sz >> rows >> cols >> entries))
            detail::mtx_fail(path, lineno, "malformed size line");
        break;
    }
    if (entries < 0) detail::mtx_fail(path, lineno, "missing size line");
    if (rows < 1 || cols < 1) detail::mtx_fail(path, lineno, "dimensions must be positive");
    if (symmetric && rows != cols)
        detail::mtx_fail(path, lineno, "symmetric matrix must be square");

    MtxFileT<Real> out;
    out.matrix = MatX<Real>::Zero(rows, cols);
    long long seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream es(line);
        Index i = 0, j = 0;
        double v = 0.0;
        if (!(es >> i >> j >> v)) detail::mtx_fail(path, lineno, "malformed entry");
        if (i < 1 || i > rows || j < 1 || j > cols)
            detail::mtx_fail(path, lineno, "index out of range");
        out.matrix(i - 1, j - 1) = Real(v);
        if (symmetric) out.matrix(j - 1, i - 1) = Real(v);
        ++seen;
    }
    if (seen != entries)
        detail::mtx_fail(path, lineno,
                         "entry count mismatch: header says " + std::to_string(entries) +
                             ", found " + std::to_string(seen));

    out.stats.rows = rows;
    out.stats.cols = cols;
    out.stats.nnz = (out.matrix.array() != Real(0)).count();
    out.stats.density = double(out.stats.nnz) / (double(rows) * double(cols));
    if (rows * cols <= 1000000) out.stats.rank = numerical_rank(out.matrix);
    return out;
}

// Dense matrix writer, coordinate real general, column-major entry order,
// full round-trip precision.
template <class Real>
void save_matrix_market(const std::string& path, const MatX<Real>& m) {
    if (m.rows() < 1 || m.cols() < 1)
        throw std::invalid_argument("save_matrix_market: matrix must be nonempty");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_matrix_market: cannot open " + path);
    out.precision(std::numeric_limits<Real>::max_digits10);
    const Index nnz = (m.array() != Real(0)).count();
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << " " << m.cols() << " " << nnz << "\n";
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != Real(0)) out << (i + 1) << " " << (j + 1) << " " << m(i, j) << "\n";
    if (!out) throw std::runtime_error("save_matrix_market: write failed for " + path);
}

}  // namespace mxsketch
