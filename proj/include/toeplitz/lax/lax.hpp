#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toeplitz/errors.hpp"
#include "toeplitz/exact/rat.hpp"
#include "toeplitz/report.hpp"

namespace toeplitz {

enum class LaxKind { L1, L2 };

// Generic: sites outside the window are unknown; touching one raises
// WindowTooSmall, so windowed results are always exact restatements of the
// bi-infinite ones.
enum class Boundary { Generic, Zero, SemiInfinite };

template <class R>
class LatticeWindow {
public:
    LatticeWindow(int k_min, int k_max, bool self_dual, Boundary b, R zero, R one)
        : k_min_(k_min), k_max_(k_max), self_dual_(self_dual), boundary_(b), zero_(std::move(zero)),
          one_(std::move(one)), x_(std::size_t(k_max - k_min + 1), zero_), y_(x_) {
        if (k_min > k_max) throw std::invalid_argument("LatticeWindow: k_min > k_max");
    }

    int k_min() const { return k_min_; }
    int k_max() const { return k_max_; }
    bool self_dual() const { return self_dual_; }
    Boundary boundary() const { return boundary_; }
    const R& zero() const { return zero_; }
    const R& one() const { return one_; }
    bool inside(int k) const { return k >= k_min_ && k <= k_max_; }

    void set_x(int k, R v) {
        check(k);
        x_[std::size_t(k - k_min_)] = std::move(v);
    }
    void set_y(int k, R v) {
        check(k);
        if (self_dual_) throw std::logic_error("self-dual window: y is tied to x");
        y_[std::size_t(k - k_min_)] = std::move(v);
    }
    const R& x(int k) const { return inside(k) ? x_[std::size_t(k - k_min_)] : outside(k); }
    const R& y(int k) const {
        if (self_dual_) return x(k);
        return inside(k) ? y_[std::size_t(k - k_min_)] : outside(k);
    }
    R v(int k) const { return one_ - x(k) * y(k); }

    // Swaps x and y (the duality σ on windows).
    LatticeWindow sigma() const {
        LatticeWindow w = *this;
        if (!self_dual_) std::swap(w.x_, w.y_);
        return w;
    }

private:
    void check(int k) const {
        if (!inside(k)) throw std::out_of_range("site " + std::to_string(k) + " outside window");
    }
    const R& outside(int k) const {
        switch (boundary_) {
            case Boundary::Zero:
                return zero_;
            case Boundary::SemiInfinite:
                if (k < 0) return zero_;
                if (k == 0) return one_;
                break;
            case Boundary::Generic:
                break;
        }
        throw WindowTooSmall("site " + std::to_string(k) + " is outside the window [" + std::to_string(k_min_) + ", " +
                             std::to_string(k_max_) + "]");
    }

    int k_min_, k_max_;
    bool self_dual_;
    Boundary boundary_;
    R zero_, one_;
    std::vector<R> x_, y_;
};

// Variables x_{k}, y_{k}.
VarId x_var(int k);
VarId y_var(int k);
// Symbolic window over [k_min, k_max] (self-dual: y_k = x_k).
LatticeWindow<MultiPoly> symbolic_window(int k_min, int k_max, bool self_dual);

template <class R>
R lax_entry(const LatticeWindow<R>& w, LaxKind which, int i, int j) {
    if (which == LaxKind::L1) {
        if (j - i > 1) return w.zero();
        R e = -(w.x(i) * w.y(j - 1));
        if (j == i + 1) e = e + w.one();
        return e;
    }
    if (j - i < -1) return w.zero();
    R e = -(w.y(j) * w.x(i - 1));
    if (i == j + 1) e = e + w.one();
    return e;
}

// Row `row` of L^s restricted to columns [c_lo, c_hi].  Only the finitely
// many sites that the bi-infinite entries depend on are touched.
template <class R>
std::vector<R> lax_power_row(const LatticeWindow<R>& w, LaxKind which, int s, int row, int c_lo, int c_hi) {
    // L1 is lower Hessenberg (paths move up by at most one column per
    // factor), L2 upper Hessenberg.
    int lo, hi;
    if (which == LaxKind::L1) {
        lo = c_lo - s;
        hi = row + s;
    } else {
        lo = row - s;
        hi = c_hi + s;
    }
    lo = std::min(lo, c_lo);
    hi = std::max(hi, c_hi);
    std::vector<std::optional<R>> cur(std::size_t(hi - lo + 1));
    if (row >= lo && row <= hi) cur[std::size_t(row - lo)] = w.one();
    for (int step = 0; step < s; ++step) {
        const int left = s - step - 1;  // factors remaining after this one
        std::vector<std::optional<R>> nxt(cur.size());
        for (int m = lo; m <= hi; ++m) {
            const auto& a = cur[std::size_t(m - lo)];
            if (!a) continue;
            int from, to;
            if (which == LaxKind::L1) {
                from = std::max(lo, c_lo - left);
                to = std::min(hi, m + 1);
            } else {
                from = std::max(lo, m - 1);
                to = std::min(hi, c_hi + left);
            }
            for (int c = from; c <= to; ++c) {
                R term = *a * lax_entry(w, which, m, c);
                auto& slot = nxt[std::size_t(c - lo)];
                if (slot) *slot = *slot + term;
                else slot = std::move(term);
            }
        }
        cur = std::move(nxt);
    }
    std::vector<R> out;
    for (int c = c_lo; c <= c_hi; ++c) {
        const auto& e = cur[std::size_t(c - lo)];
        out.push_back(e ? *e : w.zero());
    }
    return out;
}

template <class R>
R matrix_power_entry(const LatticeWindow<R>& w, LaxKind which, int s, int i, int j) {
    if (s < 0) throw std::invalid_argument("matrix power must be nonnegative");
    return lax_power_row(w, which, s, i, j, j).front();
}

// Dense block of L over rows/cols [lo, hi].
template <class R>
std::vector<std::vector<R>> build_lax(const LatticeWindow<R>& w, LaxKind which, int lo, int hi) {
    std::vector<std::vector<R>> m;
    for (int i = lo; i <= hi; ++i) {
        std::vector<R> row;
        for (int j = lo; j <= hi; ++j) row.push_back(lax_entry(w, which, i, j));
        m.push_back(std::move(row));
    }
    return m;
}

// Tr(L_l^{i-1} dL_l/dy_k) and Tr(L_l^{i-1} dL_l/dx_k).
template <class R>
R trace_dy(const LatticeWindow<R>& w, LaxKind which, int i, int k) {
    R acc = w.zero();
    if (which == LaxKind::L1) {
        // dL1/dy_k: column k+1, rows a >= k, entry -x_a.
        auto row = lax_power_row(w, which, i - 1, k + 1, k, k + i);
        for (int a = k; a <= k + i; ++a) acc = acc - row[std::size_t(a - k)] * w.x(a);
    } else {
        // dL2/dy_k: column k, rows a <= k+1, entry -x_{a-1}.
        auto row = lax_power_row(w, which, i - 1, k, k - i + 1, k + 1);
        for (int a = k - i + 1; a <= k + 1; ++a) acc = acc - row[std::size_t(a - (k - i + 1))] * w.x(a - 1);
    }
    return acc;
}

template <class R>
R trace_dx(const LatticeWindow<R>& w, LaxKind which, int i, int k) {
    R acc = w.zero();
    if (which == LaxKind::L1) {
        // dL1/dx_k: row k, columns j <= k+1, entry -y_{j-1}; need (L1^{i-1})_{j,k}.
        for (int j = k - i + 1; j <= k + 1; ++j) acc = acc - matrix_power_entry(w, which, i - 1, j, k) * w.y(j - 1);
    } else {
        // dL2/dx_k: row k+1, columns b >= k, entry -y_b; need (L2^{i-1})_{b,k+1}.
        for (int b = k; b <= k + i; ++b) acc = acc - matrix_power_entry(w, which, i - 1, b, k + 1) * w.y(b);
    }
    return acc;
}

// Window-relative H_i^{(l)} = -(1/i) sum of the edge-free diagonal entries of
// L_l^i.  Throws WindowTooSmall if no row is edge-free.
template <class R>
R hamiltonian(const LatticeWindow<R>& w, LaxKind which, int i) {
    R acc = w.zero();
    int rows = 0;
    for (int k = w.k_min() + i + 1; k + i <= w.k_max(); ++k) {
        acc = acc + matrix_power_entry(w, which, i, k, k);
        ++rows;
    }
    if (rows == 0 && w.boundary() == Boundary::Generic) throw WindowTooSmall("no edge-free diagonal entry");
    return acc * Rational(frac(-1, i));
}

// σ on symbolic expressions: x_k <-> y_k.
MultiPoly sigma_sites(const MultiPoly& p);

// Structure of the diagonal and subdiagonal entries of L1^s (leading and
// trailing terms, support of the remainders), plus the duality with L2.
Report verify_appendix_structure(int s, int k = 0);

}  // namespace toeplitz
