#include "cpir/linalg.hpp"

#include <utility>

namespace cpir {

namespace {

// Shared elimination core. Ops adapters provide the field interface for
// uint8_t and ExtElem entries so both matrix types go through one
// deterministic pivot rule: first nonzero entry, scanning left to right,
// top to bottom.
struct BaseOps {
    const BaseField& f;
    using Elem = uint8_t;
    Elem zero() const { return 0; }
    Elem one_elem() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    Elem add(Elem a, Elem b) const { return f.add(a, b); }
    Elem mul(Elem a, Elem b) const { return f.mul(a, b); }
    Elem inv(Elem a) const { return f.inv(a); }
};

struct ExtOps {
    const ExtField& f;
    using Elem = ExtElem;
    Elem zero() const { return f.zero(); }
    Elem one_elem() const { return f.one(); }
    bool is_zero(const Elem& a) const { return f.is_zero(a); }
    Elem add(const Elem& a, const Elem& b) const { return f.add(a, b); }
    Elem mul(const Elem& a, const Elem& b) const { return f.mul(a, b); }
    Elem inv(const Elem& a) const { return f.inv(a); }
};

template <class Ops>
struct Grid {
    uint32_t rows;
    uint32_t cols;
    std::vector<typename Ops::Elem> a;

    typename Ops::Elem& at(uint32_t r, uint32_t c) {
        return a[static_cast<size_t>(r) * cols + c];
    }
};

// Reduced row echelon form in place. Returns the pivot column of each
// pivot row, in order.
template <class Ops>
std::vector<uint32_t> rref(const Ops& ops, Grid<Ops>& g) {
    std::vector<uint32_t> pivots;
    uint32_t row = 0;
    for (uint32_t col = 0; col < g.cols && row < g.rows; ++col) {
        uint32_t pivot = row;
        while (pivot < g.rows && ops.is_zero(g.at(pivot, col))) ++pivot;
        if (pivot == g.rows) continue;
        if (pivot != row)
            for (uint32_t c = 0; c < g.cols; ++c) std::swap(g.at(row, c), g.at(pivot, c));
        auto scale = ops.inv(g.at(row, col));
        for (uint32_t c = col; c < g.cols; ++c) g.at(row, c) = ops.mul(scale, g.at(row, c));
        for (uint32_t r = 0; r < g.rows; ++r) {
            if (r == row || ops.is_zero(g.at(r, col))) continue;
            auto factor = g.at(r, col);
            for (uint32_t c = col; c < g.cols; ++c)
                g.at(r, c) = ops.add(g.at(r, c), ops.mul(factor, g.at(row, c)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class Ops, class Mat>
Grid<Ops> to_grid(const Ops&, const Mat& m) {
    return Grid<Ops>{m.rows, m.cols, m.a};
}

template <class Ops>
uint32_t rank_impl(const Ops& ops, Grid<Ops> g) {
    return static_cast<uint32_t>(rref(ops, g).size());
}

template <class Ops, class Mat>
Mat inverse_impl(const Ops& ops, const Mat& m, Mat out) {
    if (m.rows != m.cols) throw DimensionMismatch("inverse requires a square matrix");
    uint32_t n = m.rows;
    Grid<Ops> g{n, 2 * n, std::vector<typename Ops::Elem>(static_cast<size_t>(n) * 2 * n, ops.zero())};
    for (uint32_t r = 0; r < n; ++r) {
        for (uint32_t c = 0; c < n; ++c) g.at(r, c) = m.a[static_cast<size_t>(r) * n + c];
        g.at(r, n + r) = ops.one_elem();
    }
    auto pivots = rref(ops, g);
    if (pivots.size() != n || pivots.back() != n - 1)
        throw Singular("matrix is singular");
    for (uint32_t r = 0; r < n; ++r)
        for (uint32_t c = 0; c < n; ++c) out.a[static_cast<size_t>(r) * n + c] = g.at(r, n + c);
    return out;
}

template <class Ops, class Mat>
Mat kernel_impl(const Ops& ops, const Mat& m, Mat out) {
    Grid<Ops> g = to_grid(ops, m);
    auto pivots = rref(ops, g);
    uint32_t r = static_cast<uint32_t>(pivots.size());
    uint32_t dim = m.cols - r;
    // out must arrive sized dim x m.cols, zero-filled
    std::vector<bool> is_pivot(m.cols, false);
    for (uint32_t p : pivots) is_pivot[p] = true;
    uint32_t row = 0;
    for (uint32_t free_col = 0; free_col < m.cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        out.a[static_cast<size_t>(row) * m.cols + free_col] = ops.one_elem();
        for (uint32_t pr = 0; pr < r; ++pr) {
            // char-2 fields: negation is identity
            out.a[static_cast<size_t>(row) * m.cols + pivots[pr]] = g.at(pr, free_col);
        }
        ++row;
    }
    (void)dim;
    return out;
}

} // namespace

MatBase transpose(const MatBase& m) {
    MatBase t(m.cols, m.rows);
    for (uint32_t r = 0; r < m.rows; ++r)
        for (uint32_t c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
    return t;
}

MatExt transpose(const MatExt& m) {
    MatExt t;
    t.rows = m.cols;
    t.cols = m.rows;
    t.a.resize(m.a.size());
    for (uint32_t r = 0; r < m.rows; ++r)
        for (uint32_t c = 0; c < m.cols; ++c) t.at(c, r) = m.at(r, c);
    return t;
}

MatBase add(const BaseField& f, const MatBase& x, const MatBase& y) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw DimensionMismatch("matrix addition shape mismatch");
    MatBase out = x;
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] = f.add(out.a[i], y.a[i]);
    return out;
}

MatExt add(const ExtField& f, const MatExt& x, const MatExt& y) {
    if (x.rows != y.rows || x.cols != y.cols)
        throw DimensionMismatch("matrix addition shape mismatch");
    MatExt out = x;
    for (size_t i = 0; i < out.a.size(); ++i) out.a[i] = f.add(out.a[i], y.a[i]);
    return out;
}

MatBase matmul(const BaseField& f, const MatBase& x, const MatBase& y) {
    if (x.cols != y.rows) throw DimensionMismatch("matrix product shape mismatch");
    MatBase out(x.rows, y.cols);
    for (uint32_t r = 0; r < x.rows; ++r)
        for (uint32_t t = 0; t < x.cols; ++t) {
            uint8_t xv = x.at(r, t);
            if (xv == 0) continue;
            for (uint32_t c = 0; c < y.cols; ++c)
                out.at(r, c) = f.add(out.at(r, c), f.mul(xv, y.at(t, c)));
        }
    return out;
}

MatExt matmul(const ExtField& f, const MatExt& x, const MatExt& y) {
    if (x.cols != y.rows) throw DimensionMismatch("matrix product shape mismatch");
    MatExt out(x.rows, y.cols, f);
    for (uint32_t r = 0; r < x.rows; ++r)
        for (uint32_t t = 0; t < x.cols; ++t) {
            const ExtElem& xv = x.at(r, t);
            if (f.is_zero(xv)) continue;
            for (uint32_t c = 0; c < y.cols; ++c)
                out.at(r, c) = f.add(out.at(r, c), f.mul(xv, y.at(t, c)));
        }
    return out;
}

MatExt mixed_mul(const BaseField& base, uint32_t ext_degree, const MatBase& x,
                 const MatExt& q) {
    if (x.cols != q.rows) throw DimensionMismatch("mixed product shape mismatch");
    MatExt out = MatExt::zeros(x.rows, q.cols, ext_degree);
    for (uint32_t r = 0; r < x.rows; ++r)
        for (uint32_t t = 0; t < x.cols; ++t) {
            uint8_t xv = x.at(r, t);
            if (xv == 0) continue;
            for (uint32_t c = 0; c < q.cols; ++c) {
                ExtElem& acc = out.at(r, c);
                const ExtElem& src = q.at(t, c);
                for (uint32_t j = 0; j < ext_degree; ++j)
                    acc.coeffs[j] ^= base.mul(src.coeffs[j], xv);
            }
        }
    return out;
}

uint32_t rank(const BaseField& f, const MatBase& m) {
    BaseOps ops{f};
    return rank_impl(ops, to_grid(ops, m));
}

uint32_t rank(const ExtField& f, const MatExt& m) {
    ExtOps ops{f};
    return rank_impl(ops, to_grid(ops, m));
}

MatBase inverse(const BaseField& f, const MatBase& m) {
    BaseOps ops{f};
    return inverse_impl(ops, m, MatBase(m.rows, m.cols));
}

MatExt inverse(const ExtField& f, const MatExt& m) {
    ExtOps ops{f};
    return inverse_impl(ops, m, MatExt(m.rows, m.cols, f));
}

MatBase right_kernel(const BaseField& f, const MatBase& m) {
    BaseOps ops{f};
    uint32_t dim = m.cols - rank(f, m);
    return kernel_impl(ops, m, MatBase(dim, m.cols));
}

MatExt right_kernel(const ExtField& f, const MatExt& m) {
    ExtOps ops{f};
    uint32_t dim = m.cols - rank(f, m);
    return kernel_impl(ops, m, MatExt(dim, m.cols, f));
}

std::vector<uint8_t> solve_left(const BaseField& f, const MatBase& m,
                                std::span<const uint8_t> y) {
    if (m.rows != m.cols) throw DimensionMismatch("solve requires a square matrix");
    if (y.size() != m.cols) throw DimensionMismatch("solve right-hand side length mismatch");
    // x * m = y  <=>  m^T x^T = y^T; invert and multiply
    MatBase inv = inverse(f, m);
    std::vector<uint8_t> x(m.rows, 0);
    for (uint32_t c = 0; c < m.rows; ++c) {
        uint8_t acc = 0;
        for (uint32_t t = 0; t < m.cols; ++t) acc = f.add(acc, f.mul(y[t], inv.at(t, c)));
        x[c] = acc;
    }
    return x;
}

MatBase expand_rows(const ExtField& f, const MatExt& m) {
    uint32_t s = f.extension_degree();
    MatBase out(m.rows * s, m.cols);
    for (uint32_t r = 0; r < m.rows; ++r)
        for (uint32_t c = 0; c < m.cols; ++c)
            for (uint32_t j = 0; j < s; ++j) out.at(r * s + j, c) = m.at(r, c).coeffs[j];
    return out;
}

MatBase expand_cols(const ExtField& f, const MatExt& m) {
    uint32_t s = f.extension_degree();
    MatBase out(m.rows, m.cols * s);
    for (uint32_t r = 0; r < m.rows; ++r)
        for (uint32_t c = 0; c < m.cols; ++c)
            for (uint32_t j = 0; j < s; ++j) out.at(r, c * s + j) = m.at(r, c).coeffs[j];
    return out;
}

uint32_t rank_over_base(const ExtField& f, const MatExt& m) {
    return rank(f.base(), expand_cols(f, m));
}

} // namespace cpir
