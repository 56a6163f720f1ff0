#ifndef GMATCH_MASK_HPP
#define GMATCH_MASK_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <string>

// Fixed-width bit set over query-vertex positions. One 64-bit word by
// default; build with -DGMATCH_MASK_WORDS=2 for queries up to 128 vertices.

#ifndef GMATCH_MASK_WORDS
#define GMATCH_MASK_WORDS 1
#endif

namespace gmatch {

struct Mask {
    static constexpr unsigned kWords = GMATCH_MASK_WORDS;
    static constexpr unsigned kBits = 64u * kWords;

    std::array<std::uint64_t, kWords> w{};

    static Mask of(unsigned pos) {
        Mask m;
        m.set(pos);
        return m;
    }

    void set(unsigned pos) { w[pos >> 6] |= std::uint64_t{1} << (pos & 63u); }
    void reset(unsigned pos) { w[pos >> 6] &= ~(std::uint64_t{1} << (pos & 63u)); }
    bool test(unsigned pos) const { return (w[pos >> 6] >> (pos & 63u)) & 1u; }

    bool empty() const {
        for (auto x : w)
            if (x) return false;
        return true;
    }

    unsigned count() const {
        unsigned n = 0;
        for (auto x : w) n += static_cast<unsigned>(std::popcount(x));
        return n;
    }

    // Highest set position; -1 when empty.
    int max_pos() const {
        for (int i = kWords - 1; i >= 0; --i)
            if (w[i]) return i * 64 + 63 - std::countl_zero(w[i]);
        return -1;
    }

    Mask& operator|=(const Mask& o) {
        for (unsigned i = 0; i < kWords; ++i) w[i] |= o.w[i];
        return *this;
    }
    Mask& operator&=(const Mask& o) {
        for (unsigned i = 0; i < kWords; ++i) w[i] &= o.w[i];
        return *this;
    }
    friend Mask operator|(Mask a, const Mask& b) { return a |= b; }
    friend Mask operator&(Mask a, const Mask& b) { return a &= b; }
    friend bool operator==(const Mask& a, const Mask& b) { return a.w == b.w; }

    Mask without(unsigned pos) const {
        Mask m = *this;
        m.reset(pos);
        return m;
    }

    // Positions strictly below `pos`.
    Mask below(unsigned pos) const {
        Mask m = *this;
        for (unsigned i = pos >> 6; i < kWords; ++i) {
            if (i == (pos >> 6))
                m.w[i] &= (pos & 63u) ? ((std::uint64_t{1} << (pos & 63u)) - 1) : 0;
            else
                m.w[i] = 0;
        }
        return m;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (unsigned i = 0; i < kWords; ++i) {
            std::uint64_t x = w[i];
            while (x) {
                unsigned b = static_cast<unsigned>(std::countr_zero(x));
                fn(i * 64 + b);
                x &= x - 1;
            }
        }
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for_each([&](unsigned p) {
            if (!first) s += ",";
            s += std::to_string(p);
            first = false;
        });
        return s + "}";
    }
};

} // namespace gmatch

#endif
