#include <algorithm>

#include "toeplitz/flow/flow.hpp"

namespace toeplitz {

VarId param_a(int k) { return intern("a_{" + std::to_string(k) + "}"); }
VarId param_b(int k) { return intern("b_{" + std::to_string(k) + "}"); }
VarId param_ap() { return intern("a_{+}"); }
VarId param_am() { return intern("a_{-}"); }
VarId param_a0() { return intern("a"); }
VarId eps_var() { return intern("eps", VarKind::Involution); }

MultiRat BalanceSolution::value(VarId p) const {
    auto it = assignment.find(p);
    return it == assignment.end() ? MultiRat::variable(p) : it->second;
}

SiteValues<LSeries> BalanceSolution::sites() const {
    SiteValues<LSeries> s;
    s.x = x;
    s.y = y;
    return s;
}

void BalanceSolution::validate() const {
    for (const auto& [what, expr] : constraints)
        if (expr.substitute(assignment).is_zero())
            throw DegenerateParameters("genericity constraint " + what + " violated");
}

nlohmann::json BalanceSolution::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["mode"] = self_dual() ? "self-dual" : "general";
    j["half_width"] = half_width;
    j["M"] = M;
    auto dump = [](const std::map<int, LSeries>& m) {
        nlohmann::json o = nlohmann::json::object();
        for (const auto& [k, s] : m) o[std::to_string(k)] = s.to_json();
        return o;
    };
    j["x"] = dump(x);
    if (!self_dual()) j["y"] = dump(y);
    auto ps = nlohmann::json::array();
    for (VarId p : params) {
        auto it = assignment.find(p);
        ps.push_back({{"name", p.name()}, {"value", it == assignment.end() ? nullptr : nlohmann::json(it->second.str())}});
    }
    j["parameters"] = ps;
    auto cs = nlohmann::json::array();
    for (const auto& [what, expr] : constraints) cs.push_back({{"nonzero", what}, {"expression", expr.str()}});
    j["constraints"] = cs;
    return j;
}

namespace {

// Laurent coefficients c_start, c_{start+1}, ... (all known ones).
struct Coeffs {
    int start = 0;
    std::vector<MultiRat> c;
    int end() const { return start + int(c.size()); }
    const MultiRat& at(int p) const {
        static const MultiRat zero;
        if (p < start) return zero;
        if (p >= end()) throw std::logic_error("balance coefficient " + std::to_string(p) + " requested before it is known");
        return c[std::size_t(p - start)];
    }
};

class Solver {
public:
    Solver(int n, BalanceMode mode, int W, int M, const std::map<VarId, MultiRat>& assign)
        : sd_(mode == BalanceMode::SelfDual), n_(n), W_(W), M_(M) {
        out_.n = n;
        out_.mode = mode;
        out_.half_width = W;
        out_.M = M;
        out_.assignment = assign;
    }

    BalanceSolution run() {
        if (M_ < 2) throw std::invalid_argument("balance truncation must be at least 2");
        if (W_ < M_ + 2) throw std::invalid_argument("balance half-width must be at least M + 2");
        leading();
        for (int r = 0; r + 1 < M_; ++r) {
            for (int k = lo(); k <= hi(); ++k)
                if (std::abs(k - n_) >= 2 && r + 1 < target(k)) regular_site(k, r);
            pole_block(r);
        }
        for (int k = lo(); k <= hi(); ++k) {
            const Coeffs& cx = x_.at(k);
            out_.x[k] = LSeries::from_coeffs(SeriesVar::T, cx.start, cx.c, cx.end());
            if (!sd_) {
                const Coeffs& cy = y_.at(k);
                out_.y[k] = LSeries::from_coeffs(SeriesVar::T, cy.start, cy.c, cy.end());
            }
        }
        return std::move(out_);
    }

private:
    int lo() const { return n_ - W_; }
    int hi() const { return n_ + W_; }
    // Number of coefficients known at site k once the edge is accounted for.
    int target(int k) const { return std::min(M_, 1 + std::min(k - lo(), hi() - k)); }

    MultiRat param(VarId p) {
        out_.params.push_back(p);
        return out_.value(p);
    }

    Coeffs& X(int k) { return x_[k]; }
    Coeffs& Y(int k) { return sd_ ? x_[k] : y_[k]; }

    MultiRat mul_at(const Coeffs& a, const Coeffs& b, int p) const {
        MultiRat s;
        for (int i = a.start; i <= p - b.start; ++i) {
            const MultiRat& u = a.at(i);
            if (u.is_zero()) continue;
            const MultiRat& w = b.at(p - i);
            if (!w.is_zero()) s += u * w;
        }
        return s;
    }
    MultiRat v_at(int k, int p) {
        MultiRat s = -mul_at(X(k), Y(k), p);
        if (p == 0) s += MultiRat(1);
        return s;
    }
    // [t^p] v_k (z_{k+1} - z_{k-1}) for z = x (which = 0) or y (which = 1).
    MultiRat rhs_at(int k, int p, int which) {
        Coeffs& up = which ? Y(k + 1) : X(k + 1);
        Coeffs& dn = which ? Y(k - 1) : X(k - 1);
        const int vstart = X(k).start + Y(k).start;
        const int dstart = std::min(up.start, dn.start);
        MultiRat s;
        for (int i = vstart; i <= p - dstart; ++i) {
            MultiRat d = up.at(p - i) - dn.at(p - i);
            if (d.is_zero()) continue;
            MultiRat v = v_at(k, i);
            if (!v.is_zero()) s += v * d;
        }
        return s;
    }

    void leading() {
        const MultiRat e = MultiRat::variable(eps_var());
        for (int k = lo(); k <= hi(); ++k) {
            x_[k].start = (k == n_) ? -1 : 0;
            if (!sd_) y_[k].start = x_[k].start;
        }
        if (sd_) {
            out_.params.push_back(eps_var());
            for (int k = lo(); k <= hi(); ++k) {
                if (std::abs(k - n_) >= 2) x_[k].c.push_back(e * param(param_a(k)));
            }
            x_[n_ + 1].c.push_back(-e);
            x_[n_ - 1].c.push_back(e);
            x_[n_].c.push_back(e * MultiRat(frac(-1, 2)));
        } else {
            MultiRat ap1 = param(param_a(n_ + 1)), am1 = param(param_a(n_ - 1));
            out_.constraints.push_back({"a_{n+1} a_{n-1} (a_{n+1} - a_{n-1})", MultiRat::variable(param_a(n_ + 1)) *
                                                                               MultiRat::variable(param_a(n_ - 1)) *
                                                                               (MultiRat::variable(param_a(n_ + 1)) -
                                                                                MultiRat::variable(param_a(n_ - 1)))});
            out_.validate();
            for (int k = lo(); k <= hi(); ++k) {
                if (std::abs(k - n_) < 2) continue;
                x_[k].c.push_back(param(param_a(k)));
                y_[k].c.push_back(param(param_b(k)));
            }
            x_[n_ + 1].c.push_back(ap1);
            y_[n_ + 1].c.push_back(ap1.inverse());
            x_[n_ - 1].c.push_back(am1);
            y_[n_ - 1].c.push_back(am1.inverse());
            x_[n_].c.push_back(ap1 * am1 / (am1 - ap1));
            y_[n_].c.push_back((ap1 - am1).inverse());
        }
        // t^{-2} at site n: -x_n^{(-1)} = [t^{-2}] v_n (x_{n+1} - x_{n-1}).
        for (int which = 0; which < (sd_ ? 1 : 2); ++which) {
            Coeffs& z = which ? Y(n_) : X(n_);
            MultiRat res = -z.at(-1) - rhs_at(n_, -2, which);
            if (!res.is_zero()) throw InconsistentBalance("leading order at the pole: residual " + res.str());
        }
    }

    void regular_site(int k, int r) {
        MultiRat fx = rhs_at(k, r, 0) * MultiRat(frac(1, r + 1));
        MultiRat fy = sd_ ? MultiRat() : rhs_at(k, r, 1) * MultiRat(frac(1, r + 1));
        X(k).c.push_back(std::move(fx));
        if (!sd_) Y(k).c.push_back(std::move(fy));
    }

    // Equations at level r: sites n±1 at t^r, site n at t^{r-1}; unknowns are
    // the coefficients x^{(r+1)} at n±1 and x_n^{(r)} (raw Laurent index).
    void pole_block(int r) {
        const int nz = sd_ ? 1 : 2;
        std::vector<VarId> U;
        auto sym = [&](int site, int which) {
            VarId v = intern("_blk_" + std::to_string(site - n_ + 1) + "_" + std::to_string(which));
            U.push_back(v);
            return MultiRat::variable(v);
        };
        for (int s : {n_ + 1, n_ - 1, n_})
            for (int w = 0; w < nz; ++w) (w ? Y(s) : X(s)).c.push_back(sym(s, w));

        auto equation = [&](int s, int w) {
            Coeffs& z = w ? Y(s) : X(s);
            int p = (s == n_) ? r - 1 : r;
            // [t^p] ż = (p+1) z_{p+1}
            return MultiRat(Rational(p + 1)) * z.at(p + 1) - rhs_at(s, p, w);
        };
        auto linear = [&](const MultiRat& e, std::vector<MultiRat>& row, MultiRat& rhs, const std::vector<VarId>& cols) {
            std::map<VarId, MultiRat> zero;
            for (VarId v : U) zero[v] = MultiRat();
            for (VarId c : cols) row.push_back(e.derivative(c).substitute(zero));
            rhs = -e.substitute(zero);
        };
        auto cols_of = [&](int s) {
            std::vector<VarId> c;
            for (int w = 0; w < nz; ++w) c.push_back(U[std::size_t((s == n_ + 1 ? 0 : s == n_ - 1 ? 1 : 2) * nz + w)]);
            return c;
        };
        auto set = [&](int s, int w, const MultiRat& val) {
            Coeffs& z = w ? Y(s) : X(s);
            z.c.back() = val;
        };

        // Sites n±1 do not see the level-r unknowns of the other sites.
        for (int s : {n_ + 1, n_ - 1}) {
            std::vector<std::vector<MultiRat>> A(static_cast<std::size_t>(nz));
            std::vector<MultiRat> B(static_cast<std::size_t>(nz));
            for (int w = 0; w < nz; ++w) linear(equation(s, w), A[std::size_t(w)], B[std::size_t(w)], cols_of(s));
            out_.blocks[{s, r}] = A;
            if (r > 0) {
                auto sol = solve_small(A, B, s);
                for (int w = 0; w < nz; ++w) set(s, w, sol[std::size_t(w)]);
                continue;
            }
            // r = 0: the block is singular and the system homogeneous.
            const int sign = s > n_ ? 1 : -1;
            for (int w = 0; w < nz; ++w)
                if (!B[std::size_t(w)].is_zero()) throw InconsistentBalance("first order at site n" + std::string(sign > 0 ? "+1" : "-1") + " is not homogeneous");
            VarId ap = sign > 0 ? param_ap() : param_am();
            if (sd_) {
                if (!A[0][0].is_zero()) throw InconsistentBalance("first order at n±1 does not drop rank");
                set(s, 0, MultiRat(4) * MultiRat::variable(eps_var()) * param(ap));
                continue;
            }
            if (!(A[0][0] * A[1][1] - A[0][1] * A[1][0]).is_zero())
                throw InconsistentBalance("first-order block at n±1 is invertible");
            // x^{(1)} = a_{n±1} a_±, y from a row that involves it.
            MultiRat xs = X(s).c.front() * param(ap);
            int row = A[0][1].is_zero() ? 1 : 0;
            if (A[std::size_t(row)][1].is_zero()) throw InconsistentBalance("first-order block at n±1 has no y-coefficient");
            MultiRat ys = -(A[std::size_t(row)][0] * xs) / A[std::size_t(row)][1];
            for (int w = 0; w < 2; ++w)
                if (!(A[std::size_t(w)][0] * xs + A[std::size_t(w)][1] * ys).is_zero())
                    throw InconsistentBalance("first-order relations at n±1 are not proportional");
            set(s, 0, xs);
            set(s, 1, ys);
        }

        std::vector<std::vector<MultiRat>> A(static_cast<std::size_t>(nz));
        std::vector<MultiRat> B(static_cast<std::size_t>(nz));
        for (int w = 0; w < nz; ++w) linear(equation(n_, w), A[std::size_t(w)], B[std::size_t(w)], cols_of(n_));
        out_.blocks[{n_, r}] = A;
        if (sd_ || r > 0) {
            auto sol = solve_small(A, B, n_);
            for (int w = 0; w < nz; ++w) set(n_, w, sol[std::size_t(w)]);
            return;
        }
        // General, r = 0: rank one and consistent; the free direction is a.
        if (!(A[0][0] * A[1][1] - A[0][1] * A[1][0]).is_zero()) throw InconsistentBalance("residue block at n is invertible");
        MultiRat ap1 = X(n_ + 1).c.front(), am1 = X(n_ - 1).c.front();
        MultiRat xs = ap1 * am1 * param(param_a0()) / (am1 - ap1);
        int row = A[0][1].is_zero() ? 1 : 0;
        if (A[std::size_t(row)][1].is_zero()) throw InconsistentBalance("residue block at n has no y-coefficient");
        MultiRat ys = (B[std::size_t(row)] - A[std::size_t(row)][0] * xs) / A[std::size_t(row)][1];
        for (int w = 0; w < 2; ++w)
            if (A[std::size_t(w)][0] * xs + A[std::size_t(w)][1] * ys != B[std::size_t(w)])
                throw InconsistentBalance("residue equations at n are not proportional");
        set(n_, 0, xs);
        set(n_, 1, ys);
    }

    std::vector<MultiRat> solve_small(const std::vector<std::vector<MultiRat>>& A, const std::vector<MultiRat>& B, int s) {
        if (A.size() == 1) {
            if (A[0][0].is_zero()) throw InconsistentBalance("singular block at site " + std::to_string(s));
            return {B[0] / A[0][0]};
        }
        MultiRat det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
        if (det.is_zero()) throw InconsistentBalance("singular block at site " + std::to_string(s));
        return {(B[0] * A[1][1] - A[0][1] * B[1]) / det, (A[0][0] * B[1] - A[1][0] * B[0]) / det};
    }

    bool sd_;
    int n_, W_, M_;
    std::map<int, Coeffs> x_, y_;
    BalanceSolution out_;
};

}  // namespace

BalanceSolution solve_balance(int n, BalanceMode mode, int half_width, int M, const std::map<VarId, MultiRat>& assign) {
    return Solver(n, mode, half_width, M, assign).run();
}

Report check_balance_residual(const BalanceSolution& b) {
    Report rep;
    int bad = 0;
    std::string first;
    for (int k = b.lo() + 1; k < b.hi(); ++k) {
        for (int which = 0; which < (b.self_dual() ? 1 : 2); ++which) {
            const auto& Z = which ? b.y : b.x;
            const auto& Yk = b.self_dual() ? b.x.at(k) : b.y.at(k);
            LSeries v = LSeries::constant(MultiRat(1)) - b.x.at(k) * Yk;
            LSeries res = Z.at(k).differentiate() - v * (Z.at(k + 1) - Z.at(k - 1));
            if (!res.is_zero()) {
                if (!bad++) first = "site " + std::to_string(k) + ": " + res.str();
            }
        }
    }
    rep.add(b.self_dual() ? "P3.1" : "P3.2", "balance satisfies the flow on all known coefficients", bad == 0, first);
    return rep;
}

Report check_parameter_count(const BalanceSolution& b) {
    Report rep;
    // Region where the constant terms are edge-free: the whole window.
    int sites = b.hi() - b.lo() + 1;
    int phase = b.self_dual() ? sites : 2 * sites;
    int free = 0;
    for (VarId p : b.params)
        if (p != eps_var()) ++free;
    rep.add(b.self_dual() ? "P3.1" : "P3.2", "free parameters plus time equal phase variables", free + 1 == phase,
            std::to_string(free) + " + 1 vs " + std::to_string(phase));
    return rep;
}

}  // namespace toeplitz
