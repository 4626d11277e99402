#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "toeplitz/gamma/gamma.hpp"

namespace toeplitz {

// ẋ_k = v_k(x_{k+1} - x_{k-1}), ẏ_k = v_k(y_{k+1} - y_{k-1}), v_k = 1 - x_k y_k.
// Self-dual windows return the same value twice.
template <class R>
std::pair<R, R> flow_rhs(const LatticeWindow<R>& w, int k) {
    R v = w.v(k);
    R fx = v * (w.x(k + 1) - w.x(k - 1));
    if (w.self_dual()) return {fx, fx};
    return {fx, v * (w.y(k + 1) - w.y(k - 1))};
}

enum class BalanceMode { SelfDual, General };

// Balance parameters.  a_{k}, b_{k} are the constant terms at regular sites;
// a_{+}, a_{-} and a enter at first order around the pole; eps is the sign
// (an involution variable).
VarId param_a(int k);
VarId param_b(int k);
VarId param_ap();
VarId param_am();
VarId param_a0();
VarId eps_var();

struct BalanceSolution {
    int n = 0;
    BalanceMode mode = BalanceMode::SelfDual;
    int half_width = 0;
    int M = 0;
    // x_k(t), y_k(t) for k in [n - half_width, n + half_width].  Sites near
    // the edge carry fewer coefficients: everything stored is exact.
    std::map<int, LSeries> x, y;
    // Parameters in the order they were introduced, and the values
    // substituted for them (absent: kept symbolic).
    std::vector<VarId> params;
    std::map<VarId, MultiRat> assignment;
    // Genericity constraints: each expression must stay nonzero.
    std::vector<std::pair<std::string, MultiRat>> constraints;
    // Linear coefficient matrices of the pole block at each order r:
    // key (site, r), rows = equations, columns = unknowns (x then y).
    std::map<std::pair<int, int>, std::vector<std::vector<MultiRat>>> blocks;

    bool self_dual() const { return mode == BalanceMode::SelfDual; }
    int lo() const { return n - half_width; }
    int hi() const { return n + half_width; }
    // Value of a parameter under the assignment.
    MultiRat value(VarId p) const;
    SiteValues<LSeries> sites() const;
    // Re-evaluates the constraints; throws DegenerateParameters.
    void validate() const;
    nlohmann::json to_json() const;
};

// Order-by-order principal balance with the pole at n, x_k known to O(t^M)
// (x_n to O(t^{M-1})).  `assign` substitutes values for parameters as they
// are introduced.
BalanceSolution solve_balance(int n, BalanceMode mode, int half_width, int M,
                              const std::map<VarId, MultiRat>& assign = {});

// Every known coefficient of ẋ_k - v_k(x_{k+1} - x_{k-1}) (and ẏ_k) vanishes.
Report check_balance_residual(const BalanceSolution& b);
// Displayed coefficients of the self-dual balance through t^2, and the
// leading terms of v_k.
Report check_selfdual_display(const BalanceSolution& b);
// Displayed coefficients of the general balance and the block determinants.
Report check_general_display(const BalanceSolution& b);
// Parameter supports of the first coefficients against the dependence table,
// plus the c_{k+2} dependence of z_k^{(2)}.
Report check_dependence_table(const BalanceSolution& b);
// Free parameters + time equals the number of phase variables on the sites
// where the leading term is edge-free.
Report check_parameter_count(const BalanceSolution& b);

// σ on balance parameters: a_k <-> b_k, a_{n±1} -> 1/a_{n±1},
// a_± -> -a_± a_{n±1}/a_{n∓1}, a -> -a - (a_{n+1}a_+ - a_{n-1}a_-)/(a_{n+1} - a_{n-1}).
MultiRat sigma_params(const MultiRat& r, int n);
// Ω in the expansion of w_2 = x_n + x_{n-1} y_n x_{n+1}.
MultiRat omega(int n);
// σ(balance x-series) = balance y-series, σ(Ω), and the constant terms of w_1, w_2.
Report check_sigma_balance(const BalanceSolution& b);

// Γ_k(t), Γ̃_k(t) (with u(t)) for every site whose support lies in the window.
struct GammaSeries {
    std::map<int, LSeries> gamma, gamma_tilde;
};
GammaSeries gamma_series(const RecursionSpec& spec, const BalanceSolution& b);

// Residuals of the differential equations satisfied by Γ_k and Γ̃_k.
Report check_gamma_ode(const RecursionSpec& spec, const BalanceSolution& b);

}  // namespace toeplitz
