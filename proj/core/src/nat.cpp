#include "hoarith/nat.hpp"

#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hoarith {

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t),
              "GMP ulong fast paths assume a 64-bit unsigned long");

namespace {

mpz_class as_mpz(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }

}  // namespace

std::uint64_t Nat::checked_nonneg(long long v) {
    if (v < 0) throw std::domain_error("Nat: negative value " + std::to_string(v));
    return static_cast<std::uint64_t>(v);
}

Nat::Nat(const mpz_class& z) {
    if (sgn(z) < 0) throw std::domain_error("Nat: negative value");
    big_ = std::make_unique<mpz_class>(z);
    normalize();
}

void Nat::copy_big(const Nat& other) { big_ = std::make_unique<mpz_class>(*other.big_); }

Nat& Nat::operator=(const Nat& other) {
    if (this == &other) return *this;
    small_ = other.small_;
    if (other.big_) {
        if (big_) *big_ = *other.big_;
        else big_ = std::make_unique<mpz_class>(*other.big_);
    } else {
        big_.reset();
    }
    return *this;
}

void Nat::normalize() {
    if (big_ && mpz_fits_ulong_p(big_->get_mpz_t())) {
        small_ = mpz_get_ui(big_->get_mpz_t());
        big_.reset();
    } else if (big_) {
        small_ = 0;
    }
}

Nat Nat::parse(std::string_view digits) {
    if (digits.empty()) throw std::invalid_argument("Nat::parse: empty string");
    for (char ch : digits) {
        if (ch < '0' || ch > '9') {
            throw std::invalid_argument("Nat::parse: not a decimal natural: " + std::string(digits));
        }
    }
    if (digits.size() < 20) {
        std::uint64_t v = 0;
        for (char ch : digits) v = v * 10 + static_cast<std::uint64_t>(ch - '0');
        return Nat(v);
    }
    return Nat(mpz_class(std::string(digits), 10));
}

std::optional<std::uint64_t> Nat::to_u64() const noexcept {
    if (big_) return std::nullopt;
    return small_;
}

mpz_class Nat::to_mpz() const { return big_ ? *big_ : as_mpz(small_); }

std::string Nat::to_string() const { return big_ ? big_->get_str(10) : std::to_string(small_); }

std::size_t Nat::bit_length() const {
    if (big_) return mpz_sizeinbase(big_->get_mpz_t(), 2);
    return small_ == 0 ? 0 : static_cast<std::size_t>(64 - __builtin_clzll(small_));
}

std::size_t Nat::hash() const noexcept {
    if (!big_) return std::hash<std::uint64_t>{}(small_);
    // Mix the limbs; only consistency with operator== matters.
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    const mpz_srcptr z = big_->get_mpz_t();
    for (mp_size_t i = 0; i < static_cast<mp_size_t>(mpz_size(z)); ++i) {
        h ^= std::hash<std::uint64_t>{}(mpz_getlimbn(z, i)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

Nat& Nat::add_slow(const Nat& rhs) {
    mpz_class r = to_mpz() + rhs.to_mpz();
    big_ = std::make_unique<mpz_class>(std::move(r));
    normalize();
    return *this;
}

Nat& Nat::mul_slow(const Nat& rhs) {
    mpz_class r = to_mpz() * rhs.to_mpz();
    big_ = std::make_unique<mpz_class>(std::move(r));
    normalize();
    return *this;
}

Nat operator-(const Nat& a, const Nat& b) {
    if (a < b) throw std::domain_error("Nat: subtraction underflow");
    if (a.is_small()) return Nat(a.small_ - b.small_);
    return Nat(mpz_class(a.to_mpz() - b.to_mpz()));
}

Nat operator/(const Nat& a, const Nat& b) {
    if (b.is_zero()) throw std::domain_error("Nat: division by zero");
    if (a.is_small() && b.is_small()) return Nat(a.small_ / b.small_);
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return Nat(q);
}

Nat operator%(const Nat& a, const Nat& b) {
    if (b.is_zero()) throw std::domain_error("Nat: division by zero");
    if (a.is_small() && b.is_small()) return Nat(a.small_ % b.small_);
    if (b.is_small()) {
        return Nat(static_cast<std::uint64_t>(mpz_fdiv_ui(a.big_->get_mpz_t(), b.small_)));
    }
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return Nat(r);
}

int Nat::compare_slow(const Nat& a, const Nat& b) noexcept {
    if (a.is_small()) return b.is_small() ? (a.small_ > b.small_) - (a.small_ < b.small_) : -1;
    if (b.is_small()) return 1;
    return cmp(*a.big_, *b.big_);
}

std::ostream& operator<<(std::ostream& os, const Nat& n) { return os << n.to_string(); }

Nat monus(const Nat& a, const Nat& b) { return a <= b ? Nat{} : a - b; }

Nat isqrt(const Nat& a) {
    if (auto s = a.to_u64()) {
        // Correct the floating estimate in both directions.
        std::uint64_t r = static_cast<std::uint64_t>(__builtin_sqrtl(static_cast<long double>(*s)));
        while (r > 0 && (r > std::numeric_limits<std::uint32_t>::max() || r * r > *s)) --r;
        while (r + 1 <= std::numeric_limits<std::uint32_t>::max() && (r + 1) * (r + 1) <= *s) ++r;
        return Nat(r);
    }
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), a.to_mpz().get_mpz_t());
    return Nat(r);
}

Nat gcd(const Nat& a, const Nat& b) {
    mpz_class r;
    mpz_gcd(r.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return Nat(r);
}

Nat lcm(const Nat& a, const Nat& b) {
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
    return Nat(r);
}

Nat pow(const Nat& base, std::uint64_t exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.to_mpz().get_mpz_t(), exp);
    return Nat(r);
}

Nat factorial(std::uint64_t n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return Nat(r);
}

}  // namespace hoarith
