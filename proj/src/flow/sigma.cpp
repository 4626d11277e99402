#include "toeplitz/flow/flow.hpp"

namespace toeplitz {

namespace {

std::optional<std::pair<char, int>> parse_param(VarId v) {
    const std::string& s = v.name();
    if (s.size() < 5 || (s[0] != 'a' && s[0] != 'b') || s[1] != '_' || s[2] != '{' || s.back() != '}') return std::nullopt;
    try {
        std::size_t used = 0;
        int k = std::stoi(s.substr(3, s.size() - 4), &used);
        if (used != s.size() - 4) return std::nullopt;
        return std::make_pair(s[0], k);
    } catch (...) {
        return std::nullopt;
    }
}

MultiRat P(VarId v) { return MultiRat::variable(v); }

}  // namespace

MultiRat sigma_params(const MultiRat& r, int n) {
    const MultiRat ap1 = P(param_a(n + 1)), am1 = P(param_a(n - 1));
    const MultiRat ap = P(param_ap()), am = P(param_am());
    std::map<VarId, MultiRat> sub;
    for (VarId v : r.variables()) {
        if (v == param_ap()) {
            sub[v] = -ap * ap1 / am1;
        } else if (v == param_am()) {
            sub[v] = -am * am1 / ap1;
        } else if (v == param_a0()) {
            sub[v] = -P(v) - (ap1 * ap - am1 * am) / (ap1 - am1);
        } else if (auto p = parse_param(v)) {
            if (p->first == 'a' && std::abs(p->second - n) == 1) sub[v] = P(v).inverse();
            else sub[v] = P(p->first == 'a' ? param_b(p->second) : param_a(p->second));
        }
    }
    return r.substitute(sub);
}

MultiRat omega(int n) {
    const MultiRat ap1 = P(param_a(n + 1)), am1 = P(param_a(n - 1));
    const MultiRat a = P(param_a0()), ap = P(param_ap()), am = P(param_am());
    return am1 * ap1 / (ap1 - am1).pow(2) * (am1 * (2 * a - ap) - ap1 * (2 * a - am));
}

Report check_sigma_balance(const BalanceSolution& b) {
    Report rep;
    if (b.self_dual()) return rep;
    if (!b.assignment.empty()) throw std::invalid_argument("sigma check needs the symbolic balance");
    const int n = b.n;
    auto sig = [&](const LSeries& s) { return s.map_coeffs([&](const MultiRat& c) { return sigma_params(c, n); }); };
    int bad = 0;
    std::string first;
    for (int k = b.lo(); k <= b.hi(); ++k) {
        if (!sig(b.x.at(k)).agrees_with(b.y.at(k)) || !sig(b.y.at(k)).agrees_with(b.x.at(k))) {
            if (!bad++) first = "site " + std::to_string(k);
        }
    }
    rep.add("P3.2", "sigma exchanges the x and y balance series", bad == 0, first);

    const MultiRat bm1 = P(param_a(n - 1)).inverse(), bp1 = P(param_a(n + 1)).inverse();
    const MultiRat W = omega(n);
    MultiRat sW = sigma_params(W, n);
    rep.add("P3.2", "sigma(Omega) = Omega b_{n-1} b_{n+1} + a_+ b_{n-1} - a_- b_{n+1}",
            sW == W * bm1 * bp1 + P(param_ap()) * bm1 - P(param_am()) * bp1, sW.str());

    LSeries w1 = b.x.at(n) * b.y.at(n - 1) + b.y.at(n) * b.x.at(n + 1);
    LSeries w2 = b.x.at(n) + b.x.at(n - 1) * b.y.at(n) * b.x.at(n + 1);
    auto c0 = [](const LSeries& s) { return s.valuation() > 0 ? MultiRat() : s.coeff(0); };
    bool regular = w1.valuation() >= 0 && w2.valuation() >= 0;
    rep.add("P3.2", "w_1 and w_2 are regular at the pole", regular);
    if (regular) {
        rep.add("P3.2", "w_1(0) = Omega b_{n-1} - a_-", c0(w1) == W * bm1 - P(param_am()), c0(w1).str());
        rep.add("P3.2", "w_2(0) = Omega", c0(w2) == W, c0(w2).str());
    }
    return rep;
}

}  // namespace toeplitz
