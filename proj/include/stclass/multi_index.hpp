#pragma once

#include <array>
#include <cstdint>

namespace stc {

inline constexpr int kJetVars = 4;  ///< number of coordinates
inline constexpr int kJetOrder = 3; ///< highest derivative order carried
inline constexpr int kJetSize = 35; ///< multi-indices with |alpha| <= 3 in 4 vars

/// Exponent vector (a0,a1,a2,a3) of one partial derivative, |alpha| <= 3.
struct MultiIndex {
    std::array<int, 4> e{0, 0, 0, 0};

    constexpr int order() const { return e[0] + e[1] + e[2] + e[3]; }
    constexpr int factorial() const {
        constexpr int f[4] = {1, 1, 2, 6};
        return f[e[0]] * f[e[1]] * f[e[2]] * f[e[3]];
    }
    constexpr bool operator==(const MultiIndex&) const = default;
};

namespace detail {

// Slots ordered by total degree, then by leading axis: slot 0 is the value,
// slots 1..4 are the four first derivatives e0..e3.
constexpr std::array<MultiIndex, kJetSize> make_slot_table() {
    std::array<MultiIndex, kJetSize> out{};
    int n = 0;
    for (int d = 0; d <= kJetOrder; ++d)
        for (int a0 = d; a0 >= 0; --a0)
            for (int a1 = d - a0; a1 >= 0; --a1)
                for (int a2 = d - a0 - a1; a2 >= 0; --a2) {
                    const int a3 = d - a0 - a1 - a2;
                    out[n++] = MultiIndex{{a0, a1, a2, a3}};
                }
    return out;
}

inline constexpr std::array<MultiIndex, kJetSize> kSlots = make_slot_table();

// Perfect lookup keyed on a0 + 4*a1 + 16*a2 + 64*a3; -1 marks |alpha| > 3.
constexpr std::array<int, 256> make_slot_lookup() {
    std::array<int, 256> out{};
    for (auto& v : out) v = -1;
    for (int i = 0; i < kJetSize; ++i) {
        const auto& m = kSlots[i];
        out[static_cast<std::size_t>(m.e[0] + 4 * m.e[1] + 16 * m.e[2] + 64 * m.e[3])] = i;
    }
    return out;
}

inline constexpr std::array<int, 256> kSlotLookup = make_slot_lookup();

constexpr int slot_of(const MultiIndex& m) {
    // the base-4 encoding is only collision-free for exponents 0..3
    for (const int e : m.e)
        if (e < 0 || e > kJetOrder) return -1;
    return kSlotLookup[static_cast<std::size_t>(m.e[0] + 4 * m.e[1] + 16 * m.e[2] + 64 * m.e[3])];
}

// All decompositions dst = a + b with every order <= 3; 165 of them, grouped
// by dst so the truncated Cauchy product and the order-by-order division both
// walk contiguous ranges.
struct ProductTerm {
    std::uint8_t dst, a, b;
};

constexpr int count_product_terms() {
    int n = 0;
    for (int i = 0; i < kJetSize; ++i)
        for (int j = 0; j < kJetSize; ++j)
            if (kSlots[i].order() + kSlots[j].order() <= kJetOrder) ++n;
    return n;
}

inline constexpr int kNumProductTerms = count_product_terms();

constexpr bool splits_to(int dst, int i, int j) {
    for (int v = 0; v < 4; ++v)
        if (kSlots[i].e[v] + kSlots[j].e[v] != kSlots[dst].e[v]) return false;
    return true;
}

constexpr auto make_product_table() {
    std::array<ProductTerm, kNumProductTerms> out{};
    int n = 0;
    for (int dst = 0; dst < kJetSize; ++dst)
        for (int i = 0; i < kJetSize; ++i)
            for (int j = 0; j < kJetSize; ++j)
                if (splits_to(dst, i, j))
                    out[n++] = ProductTerm{static_cast<std::uint8_t>(dst),
                                           static_cast<std::uint8_t>(i),
                                           static_cast<std::uint8_t>(j)};
    return out;
}

inline constexpr auto kProductTable = make_product_table();

// kProductRange[dst] .. kProductRange[dst+1] indexes kProductTable.
constexpr auto make_product_ranges() {
    std::array<int, kJetSize + 1> out{};
    int pos = 0;
    for (int dst = 0; dst < kJetSize; ++dst) {
        out[dst] = pos;
        while (pos < kNumProductTerms && kProductTable[static_cast<std::size_t>(pos)].dst == dst) ++pos;
    }
    out[kJetSize] = pos;
    return out;
}

inline constexpr auto kProductRange = make_product_ranges();

constexpr std::array<int, kJetSize> make_factorial_table() {
    std::array<int, kJetSize> out{};
    for (int i = 0; i < kJetSize; ++i) out[i] = kSlots[i].factorial();
    return out;
}

inline constexpr std::array<int, kJetSize> kSlotFactorial = make_factorial_table();

} // namespace detail

/// Slot index of a multi-index, or -1 when |alpha| > 3.
constexpr int slot_index(const MultiIndex& m) { return detail::slot_of(m); }

/// The multi-index stored at a slot (0 <= slot < kJetSize).
constexpr const MultiIndex& slot_multi_index(int slot) { return detail::kSlots[static_cast<std::size_t>(slot)]; }

/// Slot of the first derivative along `axis` (the unit multi-index).
constexpr int unit_slot(int axis) { return 1 + axis; }

} // namespace stc
