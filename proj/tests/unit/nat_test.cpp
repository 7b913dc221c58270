#include "hoarith/nat.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <random>
#include <stdexcept>

using hoarith::Nat;

namespace {

constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();

TEST(Nat, SmallArithmetic) {
    EXPECT_EQ(Nat{2u} + Nat{3u}, Nat{5u});
    EXPECT_EQ(Nat{6u} * Nat{7u}, Nat{42u});
    EXPECT_EQ(Nat{9u} - Nat{4u}, Nat{5u});
    EXPECT_EQ(Nat{17u} / Nat{5u}, Nat{3u});
    EXPECT_EQ(Nat{17u} % Nat{5u}, Nat{2u});
    EXPECT_TRUE(Nat{}.is_zero());
}

TEST(Nat, OverflowSpillsToBigAndBack) {
    const Nat m{kMax};
    const Nat big = m + Nat{1u};
    EXPECT_FALSE(big.is_small());
    EXPECT_EQ(big.to_string(), "18446744073709551616");
    const Nat back = big - Nat{1u};
    EXPECT_TRUE(back.is_small());
    EXPECT_EQ(back, m);
    EXPECT_LT(m, big);
    EXPECT_GT(big, m);
}

TEST(Nat, ProductOverflow) {
    const Nat a{kMax};
    const Nat sq = a * a;
    const mpz_class want = mpz_class(a.to_string()) * mpz_class(a.to_string());
    EXPECT_EQ(sq.to_mpz(), want);
    EXPECT_EQ(sq / a, a);
    EXPECT_TRUE((sq % a).is_zero());
}

TEST(Nat, RandomAgainstMpz) {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 2000; ++k) {
        const std::uint64_t x = rng() >> (rng() % 64);
        const std::uint64_t y = rng() >> (rng() % 64);
        const mpz_class X(std::to_string(x)), Y(std::to_string(y));
        const Nat a{x}, b{y};
        EXPECT_EQ((a + b).to_mpz(), X + Y);
        EXPECT_EQ((a * b).to_mpz(), X * Y);
        EXPECT_EQ(a < b, X < Y);
        EXPECT_EQ(a == b, X == Y);
        if (y != 0) {
            EXPECT_EQ((a / b).to_mpz(), X / Y);
            EXPECT_EQ((a % b).to_mpz(), X % Y);
        }
        EXPECT_EQ(hoarith::monus(a, b).to_mpz(), X > Y ? mpz_class(X - Y) : mpz_class(0));
    }
}

TEST(Nat, Errors) {
    EXPECT_THROW(Nat{3u} - Nat{4u}, std::domain_error);
    EXPECT_THROW(Nat{3u} / Nat{}, std::domain_error);
    EXPECT_THROW(Nat{3u} % Nat{}, std::domain_error);
    EXPECT_THROW(Nat(-1), std::exception);
    EXPECT_THROW(Nat::parse("12a"), std::invalid_argument);
    EXPECT_THROW(Nat::parse(""), std::invalid_argument);
}

TEST(Nat, ParseAndPrint) {
    const std::string digits = "123456789012345678901234567890";
    EXPECT_EQ(Nat::parse(digits).to_string(), digits);
    EXPECT_EQ(Nat::parse("0"), Nat{});
    EXPECT_EQ(Nat::parse("42").to_u64(), 42u);
    EXPECT_FALSE(Nat::parse(digits).to_u64().has_value());
}

TEST(Nat, Helpers) {
    EXPECT_EQ(hoarith::isqrt(Nat{99u}), Nat{9u});
    EXPECT_EQ(hoarith::isqrt(Nat{100u}), Nat{10u});
    EXPECT_EQ(hoarith::gcd(Nat{12u}, Nat{18u}), Nat{6u});
    EXPECT_EQ(hoarith::lcm(Nat{4u}, Nat{6u}), Nat{12u});
    EXPECT_EQ(hoarith::pow(Nat{2u}, 70).to_string(), "1180591620717411303424");
    EXPECT_EQ(hoarith::factorial(20), Nat{2432902008176640000u});
    EXPECT_EQ(hoarith::factorial(0), Nat{1u});
    for (std::uint64_t v = 0; v < 2000; v += 7) {
        const Nat r = hoarith::isqrt(Nat{v});
        EXPECT_LE(r * r, Nat{v});
        EXPECT_GT((r + Nat{1u}) * (r + Nat{1u}), Nat{v});
    }
}

TEST(Nat, HashMatchesEquality) {
    const Nat a = Nat{kMax} + Nat{5u};
    const Nat b = Nat::parse(a.to_string());
    EXPECT_EQ(a.hash(), b.hash());
    EXPECT_EQ(Nat{3u}.hash(), Nat(3).hash());
}

TEST(Nat, CopyAndAssign) {
    const Nat big = Nat{kMax} * Nat{3u};
    Nat c = big;
    EXPECT_EQ(c, big);
    c = Nat{4u};
    EXPECT_TRUE(c.is_small());
    c = big;
    EXPECT_EQ(c, big);
    c += Nat{1u};
    EXPECT_NE(c, big);
}

}  // namespace
