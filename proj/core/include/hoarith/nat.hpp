#pragma once

#include <gmpxx.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace hoarith {

/// Arbitrary-precision natural number.
///
/// Values that fit in 64 bits are stored inline; larger values spill to a
/// heap-allocated GMP integer. The representation is canonical: a value is
/// big only when it exceeds UINT64_MAX, so equality never has to compare
/// across representations.
class Nat {
public:
    Nat() noexcept = default;

    template <std::unsigned_integral T>
    Nat(T v) noexcept : small_(static_cast<std::uint64_t>(v)) {}  // NOLINT(implicit)

    template <std::signed_integral T>
    Nat(T v) : small_(checked_nonneg(static_cast<long long>(v))) {}  // NOLINT(implicit)

    explicit Nat(const mpz_class& z);

    Nat(const Nat& other) : small_(other.small_) {
        if (other.big_) copy_big(other);
    }
    Nat(Nat&&) noexcept = default;
    Nat& operator=(const Nat& other);
    Nat& operator=(Nat&&) noexcept = default;
    ~Nat() = default;

    /// Parses a decimal string of digits. Throws std::invalid_argument.
    static Nat parse(std::string_view digits);

    [[nodiscard]] bool is_small() const noexcept { return !big_; }
    [[nodiscard]] bool is_zero() const noexcept { return !big_ && small_ == 0; }
    [[nodiscard]] std::optional<std::uint64_t> to_u64() const noexcept;
    [[nodiscard]] mpz_class to_mpz() const;
    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] std::size_t bit_length() const;
    [[nodiscard]] std::size_t hash() const noexcept;

    Nat& operator+=(const Nat& rhs) {
        std::uint64_t out = 0;
        if (!big_ && !rhs.big_ && !__builtin_add_overflow(small_, rhs.small_, &out)) {
            small_ = out;
            return *this;
        }
        return add_slow(rhs);
    }
    Nat& operator*=(const Nat& rhs) {
        std::uint64_t out = 0;
        if (!big_ && !rhs.big_ && !__builtin_mul_overflow(small_, rhs.small_, &out)) {
            small_ = out;
            return *this;
        }
        return mul_slow(rhs);
    }

    friend Nat operator+(Nat a, const Nat& b) { return a += b; }
    friend Nat operator*(Nat a, const Nat& b) { return a *= b; }
    /// Exact subtraction; throws std::domain_error when a < b.
    friend Nat operator-(const Nat& a, const Nat& b);
    /// Floor division and remainder; throw std::domain_error on zero divisor.
    friend Nat operator/(const Nat& a, const Nat& b);
    friend Nat operator%(const Nat& a, const Nat& b);

    friend bool operator==(const Nat& a, const Nat& b) noexcept {
        if (!a.big_ && !b.big_) return a.small_ == b.small_;
        return compare_slow(a, b) == 0;
    }
    friend std::strong_ordering operator<=>(const Nat& a, const Nat& b) noexcept {
        if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
        const int c = compare_slow(a, b);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Nat& n);

private:
    static std::uint64_t checked_nonneg(long long v);
    void normalize();
    void copy_big(const Nat& other);
    Nat& add_slow(const Nat& rhs);
    Nat& mul_slow(const Nat& rhs);
    static int compare_slow(const Nat& a, const Nat& b) noexcept;

    std::uint64_t small_ = 0;
    std::unique_ptr<mpz_class> big_;
};

/// Truncated subtraction: max(a - b, 0).
Nat monus(const Nat& a, const Nat& b);
/// Floor of the square root.
Nat isqrt(const Nat& a);
Nat gcd(const Nat& a, const Nat& b);
Nat lcm(const Nat& a, const Nat& b);
Nat pow(const Nat& base, std::uint64_t exp);
Nat factorial(std::uint64_t n);

struct NatHash {
    std::size_t operator()(const Nat& n) const noexcept { return n.hash(); }
};

}  // namespace hoarith
