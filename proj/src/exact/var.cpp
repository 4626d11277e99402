#include "toeplitz/exact/var.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace toeplitz {

namespace {

struct Registry {
    std::shared_mutex mu;
    std::unordered_map<std::string, std::uint32_t> by_name;
    std::deque<std::string> names;  // references stay valid across push_back
    std::deque<std::uint32_t> raws;
};

Registry& registry() {
    static Registry r;
    return r;
}

// Splits "x_{-3}" into ("x_", [-3]) style keys; digits after '{' or '_' are
// read as integers so that x_{10} sorts after x_{9}.
struct NameKey {
    std::vector<std::string> text;
    std::vector<long> nums;
};

NameKey make_key(const std::string& s) {
    NameKey k;
    std::string cur;
    for (std::size_t i = 0; i < s.size();) {
        bool sign = (s[i] == '-' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])) &&
                     i > 0 && (s[i - 1] == '{' || s[i - 1] == '_' || s[i - 1] == ','));
        if (std::isdigit(static_cast<unsigned char>(s[i])) || sign) {
            std::size_t j = i + (sign ? 1 : 0);
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            k.text.push_back(cur);
            cur.clear();
            k.nums.push_back(std::stol(s.substr(i, j - i)));
            i = j;
        } else {
            cur.push_back(s[i++]);
        }
    }
    k.text.push_back(cur);
    return k;
}

}  // namespace

const std::string& VarId::name() const {
    auto& r = registry();
    std::shared_lock lock(r.mu);
    return r.names.at(index());
}

VarId intern(std::string_view name, VarKind kind, unsigned jet_order) {
    if (kind == VarKind::Jet && (jet_order == 0 || jet_order > 15))
        throw std::invalid_argument("jet order must be in 1..15");
    if (kind != VarKind::Jet) jet_order = 0;
    std::uint32_t packed_tail = (static_cast<std::uint32_t>(kind) << 24) | (jet_order << 28);
    auto& r = registry();
    std::string key(name);
    {
        std::shared_lock lock(r.mu);
        auto it = r.by_name.find(key);
        if (it != r.by_name.end()) {
            VarId v{r.raws[it->second]};
            if (v.kind() != kind || v.jet_order() != jet_order)
                throw std::invalid_argument("variable '" + key + "' re-interned with a different kind");
            return v;
        }
    }
    std::unique_lock lock(r.mu);
    auto it = r.by_name.find(key);
    if (it != r.by_name.end()) {
        VarId v{r.raws[it->second]};
        if (v.kind() != kind || v.jet_order() != jet_order)
            throw std::invalid_argument("variable '" + key + "' re-interned with a different kind");
        return v;
    }
    auto idx = static_cast<std::uint32_t>(r.names.size());
    if (idx >= (1u << 24)) throw std::length_error("variable registry exhausted");
    r.names.push_back(key);
    r.raws.push_back(idx | packed_tail);
    r.by_name.emplace(key, idx);
    return VarId{idx | packed_tail};
}

std::optional<VarId> lookup(std::string_view name) {
    auto& r = registry();
    std::shared_lock lock(r.mu);
    auto it = r.by_name.find(std::string(name));
    if (it == r.by_name.end()) return std::nullopt;
    return VarId{r.raws[it->second]};
}

std::size_t registry_size() {
    auto& r = registry();
    std::shared_lock lock(r.mu);
    return r.names.size();
}

bool name_less(VarId a, VarId b) {
    if (a == b) return false;
    NameKey ka = make_key(a.name()), kb = make_key(b.name());
    std::size_t n = std::min(ka.text.size(), kb.text.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (ka.text[i] != kb.text[i]) return ka.text[i] < kb.text[i];
        if (i < ka.nums.size() && i < kb.nums.size() && ka.nums[i] != kb.nums[i]) return ka.nums[i] < kb.nums[i];
        if ((i < ka.nums.size()) != (i < kb.nums.size())) return i >= ka.nums.size();
    }
    if (ka.text.size() != kb.text.size()) return ka.text.size() < kb.text.size();
    return a.raw < b.raw;
}

}  // namespace toeplitz
