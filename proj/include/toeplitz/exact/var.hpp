#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace toeplitz {

// Plain: ordinary indeterminate.
// Involution: e^2 = 1 is applied on every product (used for the sign ε).
// Jet: member of a nilpotent group; monomials whose total jet degree reaches
//      the variable's order are dropped.  Jets model "parameter + O(t)"
//      perturbations that are substituted by series without constant term.
enum class VarKind : std::uint8_t { Plain = 0, Involution = 1, Jet = 2 };

// Interned identifier.  Kind and jet order are packed into the id so that
// reduction rules need no registry lookup.
struct VarId {
    std::uint32_t raw = 0;

    std::uint32_t index() const { return raw & 0xFFFFFFu; }
    VarKind kind() const { return static_cast<VarKind>((raw >> 24) & 0xFu); }
    unsigned jet_order() const { return raw >> 28; }
    const std::string& name() const;

    auto operator<=>(const VarId&) const = default;
};

VarId intern(std::string_view name, VarKind kind = VarKind::Plain, unsigned jet_order = 0);
std::optional<VarId> lookup(std::string_view name);
std::size_t registry_size();

// Name-based order used for canonical rendering: family prefix first, then
// integer subscripts numerically.  Independent of interning order.
bool name_less(VarId a, VarId b);

}  // namespace toeplitz

template <>
struct std::hash<toeplitz::VarId> {
    std::size_t operator()(toeplitz::VarId v) const noexcept { return std::hash<std::uint32_t>{}(v.raw); }
};
